#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "manet/protocols.hpp"
#include "manet/scenario.hpp"
#include "manet/types.hpp"

namespace manet {

enum class Predicate { AllNodes, Geocast };

struct SimConfig {
    std::size_t n = 2;
    double r = 1.0;
    double d = 0.0;
    long alpha = 0;
    long beta = 1;
    double v_max = 1.0;
    /// 0 means "derive": 4 x ub_budget(n, alpha, beta).
    long max_slots = 0;
    std::uint64_t seed = 0;
    ProtocolSpec protocol;
    AdversarySpec adversary;
    Predicate predicate = Predicate::AllNodes;

    /// Throws ParameterError when a basic invariant fails.
    void validate() const;
    /// Slot budget with the default applied.
    long slot_budget() const;
};

/// Source of the dissemination instance.
inline constexpr NodeId kSource = 1;
/// Slot at whose end the source is handed I.
inline constexpr Slot kSourceSlot = 1;

struct SlotRecord {
    Slot slot = 0;
    Snapshot state;                  ///< positions/activity during the slot, flags at its end
    std::vector<NodeId> tx;          ///< ascending
    std::map<NodeId, NodeId> rx;     ///< receiver -> sender
};

struct TraceMeta {
    std::size_t n = 0;
    double r = 1.0;
    double d = 0.0;
    long alpha = 0;
    long beta = 1;
    std::uint64_t seed = 0;
    Slot t1 = kSourceSlot;
    std::vector<NodeId> targets;     ///< frozen at t1
    std::optional<Slot> solved_slot;
};

struct Trace {
    TraceMeta meta;
    std::vector<SlotRecord> slots;   ///< slots[i].slot == i + 1

    Slot last_slot() const noexcept { return static_cast<Slot>(slots.size()); }
    const SlotRecord& at(Slot slot) const;
};

struct MotionViolation {
    enum class Reason { SpeedBound, SharedPosition };
    NodeId node = 0;
    double displacement = 0.0;
    Reason reason = Reason::SpeedBound;
};

/// ok (nullopt) iff every displacement is at most v_max and active positions
/// are pairwise distinct. Reports the lowest offending node id.
std::optional<MotionViolation> validate_motion(std::span<const Point> prev, const WorldState& next,
                                               double v_max);
std::optional<MotionViolation> validate_motion(const WorldState& prev, const WorldState& next,
                                               const SimConfig& cfg);

struct ActivationEvent {
    NodeId node = 0;
    bool up = true;
};

/// Applies boundary activation events. A node going down loses I and its
/// protocol state; coming up it restarts from step 0. `covered` persists.
/// Throws MalformedInput on up-while-active, down-while-inactive, unknown or
/// repeated nodes.
WorldState apply_activation(const WorldState& state, std::span<const ActivationEvent> events);

}  // namespace manet
