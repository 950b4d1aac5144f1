#include <doctest.h>

#include <random>

#include "manet/connectivity.hpp"
#include "manet/error.hpp"
#include "support/builders.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace manet;
using build::SlotSpec;

namespace {

// Two nodes; node 1 informed from slot 1, node 2 never covered. `linked`
// says per slot whether they are within range.
Trace pair_trace(const std::string& linked) {
    std::vector<SlotSpec> slots;
    for (char c : linked) slots.push_back({{{0, 0}, {c == '1' ? 0.5 : 3.0, 0}}, "11", "10", "10"});
    return build::trace(1.0, slots);
}

}  // namespace

TEST_CASE("links_at") {
    auto t = build::trace(1.0, {{{{0, 0}, {0.5, 0}, {0, 0.5}}, "111", "100", "100"},
                                {{{0, 0}, {0.5, 0}, {0, 0.5}}, "101", "100", "100"},
                                {{{0, 0}, {5, 0}, {0, 5}}, "111", "100", "100"}});
    CHECK(links_at(t, 1).size() == 3);
    CHECK(links_at(t, 2) == std::vector<std::pair<NodeId, NodeId>>{{1, 3}});
    CHECK(links_at(t, 3).empty());
    CHECK_THROWS_AS(links_at(t, 4), MalformedInput);
}

TEST_CASE("online routes need strictly increasing slots") {
    // 1-2 linked at slot 5 only, 2-3 at slot 7 only.
    auto far = std::vector<Point>{{0, 0}, {10, 0}, {20, 0}};
    std::vector<SlotSpec> slots(8, SlotSpec{far, "111", "100", "100"});
    slots[4].pos = {{0, 0}, {0.5, 0}, {20, 0}};
    slots[6].pos = {{0, 0}, {10, 0}, {10.5, 0}};
    auto t = build::trace(1.0, slots);
    CHECK(online_route_exists(t, 1, 2, 5));
    CHECK(online_route_exists(t, 1, 3, 1));
    CHECK(online_route_exists(t, 1, 3, 5));
    CHECK_FALSE(online_route_exists(t, 1, 3, 6));

    // Reversed order: 2-3 at slot 5, 1-2 at slot 7.
    std::vector<SlotSpec> rev(8, SlotSpec{far, "111", "100", "100"});
    rev[4].pos = {{0, 0}, {10, 0}, {10.5, 0}};
    rev[6].pos = {{0, 0}, {0.5, 0}, {20, 0}};
    auto t2 = build::trace(1.0, rev);
    CHECK_FALSE(online_route_exists(t2, 1, 3, 5));
    CHECK(online_route_exists(t2, 3, 1, 5));

    // One hop per slot: a chain present in a single slot is not a route.
    std::vector<SlotSpec> chain(1, SlotSpec{{{0, 0}, {0.9, 0}, {1.8, 0}}, "111", "100", "100"});
    CHECK_FALSE(online_route_exists(build::trace(1.0, chain), 1, 3, 1));
    CHECK_THROWS_AS(online_route_exists(t, 2, 2, 1), MalformedInput);
}

TEST_CASE("audit: static in-range pair passes for any window") {
    const auto t = pair_trace(std::string(30, '1'));
    for (long a = 0; a < 4; ++a)
        for (long b = 1; b < 4; ++b) CHECK(audit_alpha_beta(t, a, b).ok);
}

TEST_CASE("audit: a long separation is reported at its first slot") {
    // linked in slots 1..5, apart 6..12, linked again 13..30
    const auto t = pair_trace("11111" + std::string(7, '0') + std::string(18, '1'));
    const auto rep = audit_alpha_beta(t, 2, 1);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.first_violation_slot);
    CHECK(*rep.first_violation_slot == 6);
    std::optional<Slot> oracle_bad;
    CHECK_FALSE(oracle::audit(t, 2, 1, &oracle_bad));
    CHECK(oracle_bad == rep.first_violation_slot);
    CHECK(audit_alpha_beta(t, 7, 1).ok);
}

TEST_CASE("audit: beta needs consecutive links") {
    const auto t = pair_trace(std::string(20, '1') + "10" + std::string(20, '1'));
    CHECK(audit_alpha_beta(t, 1, 1).ok);
    CHECK(audit_alpha_beta(t, 1, 2).ok);
    CHECK_FALSE(audit_alpha_beta(t, 0, 2).ok);
    CHECK(audit_alpha_beta(t, 0, 2).first_violation_slot == 22);
    const auto alternating = pair_trace("101010101010101010101");
    CHECK(audit_alpha_beta(alternating, 1, 1).ok);
    CHECK_FALSE(audit_alpha_beta(alternating, 1, 2).ok);
    CHECK_FALSE(audit_alpha_beta(alternating, 0, 1).ok);
}

TEST_CASE("audit: solved at t1 is vacuous") {
    auto t = build::trace(1.0, build::repeat({{{0, 0}, {9, 0}}, "11", "11", "11"}, 10));
    CHECK(audit_alpha_beta(t, 0, 1).ok);
    CHECK(solved_slot(t) == 1);
}

TEST_CASE("audit: a covered uncovered-partner ends the beta window early") {
    // p' gets covered in slot 3; it only needs links up to then.
    std::vector<SlotSpec> s = {{{{0, 0}, {0.5, 0}, {9, 0}}, "111", "100", "100"},
                               {{{0, 0}, {0.5, 0}, {9, 0}}, "111", "100", "100"},
                               {{{0, 0}, {0.5, 0}, {9, 0}}, "111", "110", "110"},
                               {{{0, 0}, {5, 0}, {9, 0}}, "111", "110", "110"},
                               {{{0, 0}, {5, 0}, {9, 0}}, "111", "110", "110"}};
    const auto t = build::trace(1.0, s);
    const auto good = witness_slots(t, 5);
    REQUIRE(good[1]);
    CHECK(good[1]->p == 1);
    CHECK(good[1]->p_prime == 2);
}

TEST_CASE("audit agrees with the quantifier sweep on random traces") {
    std::mt19937_64 g(2024);
    for (int i = 0; i < 150; ++i) {
        const std::size_t n = 2 + g() % 5;
        const auto t = gen::random_trace(g, n, 5 + g() % 36, 1.5 + (g() % 3));
        for (long alpha : {0L, 1L, 3L})
            for (long beta : {1L, 2L, 4L}) {
                std::optional<Slot> bad;
                const bool ok = oracle::audit(t, alpha, beta, &bad);
                const auto rep = audit_alpha_beta(t, alpha, beta);
                REQUIRE(rep.ok == ok);
                CHECK(rep.first_violation_slot == bad);
            }
    }
}

TEST_CASE("witnesses for a longer beta remain witnesses for a shorter one") {
    std::mt19937_64 g(7);
    for (int i = 0; i < 60; ++i) {
        const auto t = gen::random_trace(g, 2 + g() % 5, 30, 1.5);
        for (long beta = 2; beta <= 5; ++beta) {
            const auto longer = witness_slots(t, beta);
            for (long shorter = 1; shorter < beta; ++shorter) {
                const auto s = witness_slots(t, shorter);
                for (std::size_t k = 0; k < longer.size(); ++k)
                    if (longer[k]) CHECK(s[k].has_value());
            }
        }
        for (long alpha = 0; alpha < 4; ++alpha)
            if (audit_alpha_beta(t, alpha, 2).ok) CHECK(audit_alpha_beta(t, alpha + 1, 2).ok);
    }
}
