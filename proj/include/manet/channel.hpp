#pragma once

#include <map>
#include <span>
#include <vector>

#include "manet/types.hpp"

namespace manet {

/// Neighbor lists indexed by id - 1, ascending ids, symmetric, no self-edges.
using Adjacency = std::vector<std::vector<NodeId>>;

/// Edge (u, v) iff both are active and at distance at most r.
Adjacency neighbors(const Snapshot& world, double r);
Adjacency neighbors(const WorldState& world, double r);

/// Link test used by the audit without materializing adjacency.
inline bool linked(const Snapshot& s, std::size_t a, std::size_t b, double r) noexcept {
    return a != b && s.active[a] && s.active[b] && distance(s.positions[a], s.positions[b]) <= r;
}

struct SlotOutcome {
    std::vector<NodeId> transmitters;   ///< ascending
    std::map<NodeId, NodeId> receptions; ///< receiver -> sender
};

/// A node receives from v iff it is active, silent, and v is the only
/// transmitter among its neighbors. Collisions and silence look the same.
/// Throws MalformedInput when a transmitter is inactive or unknown.
SlotOutcome resolve_slot(const Snapshot& world, std::span<const NodeId> transmitters, double r);
SlotOutcome resolve_slot(const WorldState& world, std::span<const NodeId> transmitters, double r);

}  // namespace manet
