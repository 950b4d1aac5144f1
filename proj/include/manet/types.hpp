#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "manet/geometry.hpp"

namespace manet {

/// Node identifiers are 1-based; storage vectors are indexed by id - 1.
using NodeId = int;
/// Global slots are 1-based.
using Slot = long;

inline constexpr std::size_t index_of(NodeId id) noexcept { return static_cast<std::size_t>(id - 1); }
inline constexpr NodeId id_of(std::size_t index) noexcept { return static_cast<NodeId>(index + 1); }

/// Local transmit/receive schedule, one character per completed step:
/// 'T' the node transmitted, 'R' it did not.
using History = std::string;

struct NodeState {
    NodeId id = 0;
    Point pos;
    bool active = false;
    bool covered = false;   ///< has ever received I
    bool informed = false;  ///< currently holds I
    std::size_t local_step = 0;
    History history;        ///< length == local_step
};

/// Live per-slot state of the network, including protocol-local histories.
struct WorldState {
    std::vector<NodeState> nodes;

    std::size_t size() const noexcept { return nodes.size(); }
    NodeState& node(NodeId id) { return nodes.at(index_of(id)); }
    const NodeState& node(NodeId id) const { return nodes.at(index_of(id)); }

    static WorldState with_nodes(std::size_t n);
};

/// Compact per-slot record stored in traces (histories are recoverable from
/// the transmit sets and are not copied slot by slot).
struct Snapshot {
    std::vector<Point> positions;
    std::vector<std::uint8_t> active;
    std::vector<std::uint8_t> covered;
    std::vector<std::uint8_t> informed;

    std::size_t size() const noexcept { return positions.size(); }

    static Snapshot of(const WorldState& world);
};

}  // namespace manet
