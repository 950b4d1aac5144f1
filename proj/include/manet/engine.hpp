#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "manet/adversaries.hpp"
#include "manet/connectivity.hpp"
#include "manet/model.hpp"

namespace manet {

/// Targets of the predicate, frozen at t1. `world_at_t1` must already hold
/// the source's t1 position and activity.
std::vector<NodeId> target_set(const WorldState& world_at_t1, Predicate predicate, double d);

/// True iff every target is covered.
bool is_solved(const WorldState& world, std::span<const NodeId> targets);

struct RunOptions {
    /// Keep the per-slot trace (needed for the audit and for trace output).
    bool record_trace = true;
    /// Audit the recorded trace against cfg.alpha / cfg.beta.
    bool audit = true;
    /// Called after every slot with the record of that slot.
    std::function<void(const SlotRecord&)> on_slot;
};

struct RunResult {
    Trace trace;
    bool solved = false;
    std::optional<Slot> solve_slot;
    std::size_t covered_count = 0;
    std::optional<AuditReport> audit;
    std::uint64_t seed = 0;
    Slot slots = 0;  ///< slots executed
    std::vector<AdversaryLogEntry> adversary_log;
    std::optional<StabilityGeometry> stability_geometry;
    std::optional<GeocastGeometry> geocast_geometry;
};

RunResult run(const SimConfig& cfg, const RunOptions& options = {});
/// Same pipeline with a caller-supplied adversary.
RunResult run(const SimConfig& cfg, Adversary& adversary, const RunOptions& options = {});

}  // namespace manet
