#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "manet/types.hpp"

namespace manet {

enum class AdversaryKind {
    StabilityFair,
    StabilityOblivious,
    StabilityAdaptive,
    GeocastFair,
    GeocastOblivious,
    GeocastAdaptive,
    Static,
    Scripted,
};

std::string_view to_string(AdversaryKind kind);
AdversaryKind adversary_kind_from_string(std::string_view name);

bool is_stability(AdversaryKind kind) noexcept;
bool is_geocast(AdversaryKind kind) noexcept;

struct ScriptEntry {
    Point pos;
    bool active = true;
};

/// Per-slot position/activation table. Row s-1 holds slot s, one entry per node.
struct ScriptTable {
    std::vector<std::vector<ScriptEntry>> slots;
    /// Replay the table cyclically instead of requiring one row per slot.
    bool cyclic = false;

    std::size_t length() const noexcept { return slots.size(); }
    const std::vector<ScriptEntry>& at(Slot slot) const;

    /// Checks every row has exactly n entries.
    void validate(std::size_t n) const;
};

struct AdversarySpec {
    AdversaryKind kind = AdversaryKind::Static;
    /// Size of the informed cluster B' for the stability scenarios.
    std::size_t k = 0;
    /// Monte Carlo rollouts for the adaptive adversaries.
    std::size_t rollouts = 256;
    /// Error parameter used when reporting the fair stability bound.
    double epsilon = 0.25;
    /// Static layout (kind Static).
    std::vector<Point> positions;
    /// Scripted table (kind Scripted).
    std::optional<ScriptTable> script;
};

/// Cyclic two-slot script: a path with hop length 0.9 r on odd slots, node 1
/// at one end. On even slots every even-id node steps 0.5 r sideways, which
/// breaks every link. Needs v_max >= 0.5 r.
ScriptTable alternating_path_script(std::size_t n, double r);

/// Static path with hop length 0.9 r (single-row cyclic table).
ScriptTable static_path_script(std::size_t n, double r);

/// Positions of a straight line of n nodes with the given spacing.
std::vector<Point> line_layout(std::size_t n, double spacing);

}  // namespace manet
