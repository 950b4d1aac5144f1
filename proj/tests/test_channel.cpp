#include <doctest.h>

#include <random>
#include <set>

#include "manet/channel.hpp"
#include "manet/error.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace manet;

namespace {

std::map<NodeId, NodeId> resolve(const WorldState& w, std::vector<NodeId> tx, double r = 1.0) {
    return resolve_slot(w, tx, r).receptions;
}

}  // namespace

TEST_CASE("neighbors: range is inclusive and ignores inactive nodes") {
    const double r = 1.0;
    auto w = build::world({{0, 0}, {r, 0}, {0, r + 1e-6}, {0.5, 0.5}}, {true, true, true, false});
    const Adjacency adj = neighbors(w, r);
    auto has = [&](int a, int b) {
        const auto& row = adj[static_cast<std::size_t>(a - 1)];
        return std::find(row.begin(), row.end(), b) != row.end();
    };
    CHECK(has(1, 2));
    CHECK(has(2, 1));
    CHECK_FALSE(has(1, 3));
    CHECK_FALSE(has(1, 4));
    CHECK_FALSE(has(1, 1));
}

TEST_CASE("resolve_slot examples") {
    const auto clique = build::world({{0, 0}, {0.5, 0}, {0, 0.5}});
    CHECK(resolve(clique, {1}) == std::map<NodeId, NodeId>{{2, 1}, {3, 1}});
    CHECK(resolve(clique, {1, 2}).empty());
    CHECK(resolve(clique, {}).empty());

    const auto path = build::world({{0, 0}, {0.9, 0}, {1.8, 0}});
    CHECK(resolve(path, {1, 3}).empty());
    CHECK(resolve(path, {2}) == std::map<NodeId, NodeId>{{1, 2}, {3, 2}});
}

TEST_CASE("resolve_slot rejects inactive or unknown transmitters") {
    auto w = build::world({{0, 0}, {0.5, 0}}, {true, false});
    CHECK_THROWS_AS(resolve(w, {2}), MalformedInput);
    CHECK_THROWS_AS(resolve(w, {5}), MalformedInput);
}

TEST_CASE("resolve_slot matches the definitional oracle on random worlds") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> coord(0.0, 2.0);
    for (int round = 0; round < 400; ++round) {
        const std::size_t n = 2 + gen() % 6;
        std::vector<Point> pos;
        std::vector<bool> act;
        for (std::size_t i = 0; i < n; ++i) {
            pos.push_back({coord(gen), coord(gen)});
            act.push_back(gen() % 4 != 0);
        }
        const auto w = build::world(pos, act);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<NodeId> tx;
            std::set<NodeId> txs;
            bool legal = true;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1u) {
                    legal = legal && act[i];
                    tx.push_back(static_cast<NodeId>(i + 1));
                    txs.insert(static_cast<NodeId>(i + 1));
                }
            if (!legal) continue;
            const auto got = resolve(w, tx);
            REQUIRE(got == oracle::receptions(pos, act, txs, 1.0));
            const Adjacency adj = neighbors(w, 1.0);
            for (const auto& [recv, sender] : got) {
                const auto& row = adj[static_cast<std::size_t>(recv - 1)];
                CHECK(std::find(row.begin(), row.end(), sender) != row.end());
                CHECK_FALSE(txs.count(recv));
            }
        }
    }
}
