#include "manet/channel.hpp"

#include <algorithm>
#include <string>

#include "manet/error.hpp"

namespace manet {

Adjacency neighbors(const Snapshot& world, double r) {
    const std::size_t n = world.size();
    Adjacency adj(n);
    for (std::size_t a = 0; a < n; ++a) {
        if (!world.active[a]) continue;
        for (std::size_t b = a + 1; b < n; ++b) {
            if (linked(world, a, b, r)) {
                adj[a].push_back(id_of(b));
                adj[b].push_back(id_of(a));
            }
        }
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

Adjacency neighbors(const WorldState& world, double r) { return neighbors(Snapshot::of(world), r); }

SlotOutcome resolve_slot(const Snapshot& world, std::span<const NodeId> transmitters, double r) {
    const std::size_t n = world.size();
    SlotOutcome out;
    out.transmitters.assign(transmitters.begin(), transmitters.end());
    std::sort(out.transmitters.begin(), out.transmitters.end());
    out.transmitters.erase(std::unique(out.transmitters.begin(), out.transmitters.end()),
                           out.transmitters.end());

    std::vector<std::uint8_t> sending(n, 0);
    for (NodeId v : out.transmitters) {
        if (v < 1 || static_cast<std::size_t>(v) > n)
            throw MalformedInput("transmitter " + std::to_string(v) + " is not a node");
        if (!world.active[index_of(v)])
            throw MalformedInput("transmitter " + std::to_string(v) + " is not active");
        sending[index_of(v)] = 1;
    }

    // Per listener: number of transmitting neighbors and the last one seen.
    std::vector<int> heard(n, 0);
    std::vector<NodeId> from(n, 0);
    for (NodeId v : out.transmitters) {
        const std::size_t a = index_of(v);
        for (std::size_t u = 0; u < n; ++u) {
            if (sending[u] || !linked(world, a, u, r)) continue;
            ++heard[u];
            from[u] = v;
        }
    }
    for (std::size_t u = 0; u < n; ++u)
        if (heard[u] == 1) out.receptions.emplace(id_of(u), from[u]);
    return out;
}

SlotOutcome resolve_slot(const WorldState& world, std::span<const NodeId> transmitters, double r) {
    return resolve_slot(Snapshot::of(world), transmitters, r);
}

}  // namespace manet
