// Small constructors for hand-built worlds and traces.
#pragma once

#include <string>
#include <vector>

#include "manet/model.hpp"

namespace build {

using manet::NodeId;
using manet::Point;

inline manet::WorldState world(const std::vector<Point>& pos, std::vector<bool> active = {}) {
    auto w = manet::WorldState::with_nodes(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        w.nodes[i].pos = pos[i];
        w.nodes[i].active = active.empty() ? true : static_cast<bool>(active[i]);
    }
    return w;
}

/// One slot of a hand-built trace; flag strings hold one '0'/'1' per node.
struct SlotSpec {
    std::vector<Point> pos;
    std::string active;
    std::string covered;
    std::string informed;
};

inline std::vector<std::uint8_t> bits(const std::string& s) {
    std::vector<std::uint8_t> out;
    for (char c : s) out.push_back(c == '1');
    return out;
}

inline manet::Trace trace(double r, const std::vector<SlotSpec>& slots, std::vector<NodeId> targets = {}) {
    manet::Trace t;
    t.meta.n = slots.front().pos.size();
    t.meta.r = r;
    t.meta.t1 = 1;
    if (targets.empty())
        for (std::size_t i = 0; i < t.meta.n; ++i) targets.push_back(static_cast<NodeId>(i + 1));
    t.meta.targets = targets;
    manet::Slot s = 0;
    for (const auto& spec : slots) {
        manet::SlotRecord rec;
        rec.slot = ++s;
        rec.state.positions = spec.pos;
        rec.state.active = bits(spec.active);
        rec.state.covered = bits(spec.covered);
        rec.state.informed = bits(spec.informed);
        t.slots.push_back(std::move(rec));
    }
    return t;
}

/// Same slot spec repeated `count` times.
inline std::vector<SlotSpec> repeat(const SlotSpec& s, std::size_t count) { return std::vector<SlotSpec>(count, s); }

}  // namespace build
