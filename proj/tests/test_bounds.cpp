#include <doctest.h>

#include <cmath>
#include <numbers>

#include "manet/bounds.hpp"
#include "manet/error.hpp"
#include "support/oracles.hpp"

using namespace manet;
using namespace manet::bounds;

namespace {
constexpr double e = std::numbers::e;
}

TEST_CASE("stability_fair_T") {
    CHECK(stability_fair_T(64, 0.25) == doctest::Approx(64.0 / (4 * std::log(64.0))));
    CHECK(stability_fair_T(64, 0.25) == doctest::Approx(3.847).epsilon(1e-3));
    CHECK(stability_fair_T(64, 1 - 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(stability_fair_T(44, 0.25), PreconditionError);
    CHECK_THROWS_AS(stability_fair_T(64, 1.0), PreconditionError);
    CHECK(stability_fair_T_proof_form(64, 0.25) == doctest::Approx(std::log(4.0) * 64 / (2 * std::log(64.0))));
}

TEST_CASE("stability_oblivious_beta_max") {
    CHECK(stability_oblivious_beta_max(100) == doctest::Approx(8.920).epsilon(1e-3));
    CHECK(stability_oblivious_beta_max(21) == doctest::Approx(2.596).epsilon(1e-3));
    CHECK_THROWS_AS(stability_oblivious_beta_max(20), PreconditionError);
}

TEST_CASE("stability_adaptive_params") {
    CHECK(adaptive_xi_const() == doctest::Approx(5.0053).epsilon(1e-4));
    CHECK(adaptive_k_min() == doctest::Approx(std::pow(2 / (1 - 1 / e), adaptive_xi_const() / e)));
    const auto p = stability_adaptive_params(1e4, 10);
    const double xi = 2 / ((1 - 1 / e) * (1 - 1 / e));
    const double delta = 100 * std::pow(1e4, e / xi);
    CHECK(p.delta == doctest::Approx(delta));
    CHECK(p.delta == doctest::Approx(1.488e4).epsilon(1e-3));
    CHECK(p.gamma == doctest::Approx(48.09).epsilon(1e-3));
    CHECK(p.beta_max == doctest::Approx(38.25).epsilon(1e-3));
    CHECK_THROWS_AS(stability_adaptive_params(8, 1), PreconditionError);
}

TEST_CASE("geocast_lb") {
    CHECK(geocast_lb(ProtocolClass::Fair, 100, 4) == doctest::Approx(200 + 10000 / (96 * std::log(50.0))));
    CHECK(geocast_lb(ProtocolClass::Fair, 100, 4) == doctest::Approx(226.63).epsilon(1e-4));
    CHECK(geocast_lb(ProtocolClass::Oblivious, 100, 0) == doctest::Approx(19.59).epsilon(1e-3));
    const double c = e * e * (e + 1) * (e + 1) / (2 * (e - 1) * (e - 1));
    CHECK(geocast_lb(ProtocolClass::Adaptive, 40, 3) == doctest::Approx(60 + c * 1600 / std::log(20.0)));
    CHECK_THROWS_AS(geocast_lb(ProtocolClass::Fair, 24, 1), PreconditionError);
    CHECK_THROWS_AS(geocast_lb(ProtocolClass::Oblivious, 3, 1), PreconditionError);
    CHECK_THROWS_AS(geocast_lb(ProtocolClass::Adaptive, 17, 1), PreconditionError);
}

TEST_CASE("ub_budget") {
    const double S = 4.0 * 64 * 63 / std::log(64.0);
    CHECK(S == doctest::Approx(3877.9).epsilon(1e-4));
    CHECK(ub_budget(64, 1, 1) == doctest::Approx(64 + 2 * S));
    CHECK(ub_budget(64, 1, 1) == doctest::Approx(7819.8).epsilon(1e-4));
    CHECK(ub_budget(64, 0, 3) == doctest::Approx(S));
    CHECK_THROWS_AS(ub_budget(2, 1, 1), PreconditionError);
    CHECK(ub_failure_probability(16) == doctest::Approx(std::exp(-15.0 / 4)));
}

TEST_CASE("chernoff examples") {
    CHECK(chernoff(ChernoffKind::LooseAbove, 1, 6) == 0.015625);
    CHECK(chernoff(ChernoffKind::Below, 62, 0.5) == doctest::Approx(std::exp(-7.75)));
    CHECK_THROWS_AS(chernoff(ChernoffKind::LooseAbove, 1, 5.9), PreconditionError);
    CHECK_THROWS_AS(chernoff(ChernoffKind::TightBelow, 1, 1.0), PreconditionError);
}

TEST_CASE("chernoff dominates exact binomial tails") {
    for (int m = 1; m <= 20; ++m)
        for (int qi = 1; qi <= 9; ++qi) {
            const double q = qi / 10.0, mu = m * q;
            for (double phi : {0.1, 0.25, 0.5, 0.75, 0.9}) {
                const double lower = oracle::binom_cdf(m, (1 - phi) * mu, q);
                CHECK(lower <= chernoff(ChernoffKind::TightBelow, mu, phi) + 1e-12);
                CHECK(lower <= chernoff(ChernoffKind::Below, mu, phi) + 1e-12);
            }
            for (double phi : {0.1, 0.5, 1.0, 2.0, 4.0})
                CHECK(oracle::binom_sf(m, (1 + phi) * mu, q) <= chernoff(ChernoffKind::TightAbove, mu, phi) + 1e-12);
            for (double R = std::ceil(6 * mu); R <= 6 * mu + 8; R += 1)
                CHECK(oracle::binom_sf(m, R, q) <= chernoff(ChernoffKind::LooseAbove, mu, R) + 1e-12);
        }
}

TEST_CASE("elementary exponential inequalities on a grid") {
    for (int i = 0; i < 1000; ++i) {
        const double x = i / 1000.0;
        CHECK(std::exp(-x / (1 - x)) <= 1 - x + 1e-15);
        CHECK(1 - x <= std::exp(-x) + 1e-15);
        if (x <= 0.5) CHECK(std::pow(4.0, -x) <= 1 - x + 1e-15);
    }
}

TEST_CASE("a good step succeeds with probability at least p/2") {
    for (int n = 8; n <= 256; ++n) {
        const double p = std::log(n) / n;
        for (int j = 1; j <= n; ++j) REQUIRE(j * p * std::pow(1 - p, j - 1) >= p / 2);
    }
}

TEST_CASE("Wilson intervals") {
    const auto zero = estimate_probability(0, 100);
    CHECK(zero.point == 0.0);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == doctest::Approx(0.037).epsilon(0.03));
    const auto all = estimate_probability(100, 100);
    CHECK(all.point == 1.0);
    CHECK(all.lower == doctest::Approx(0.963).epsilon(0.002));
    const auto half = estimate_probability(50, 100);
    CHECK(half.point == 0.5);
    CHECK(half.upper - 0.5 == doctest::Approx(0.5 - half.lower));
    CHECK_THROWS_AS(estimate_probability(5, 4), ParameterError);
    CHECK_THROWS_AS(estimate_probability(0, 0), ParameterError);
}

TEST_CASE("bounds grow with n") {
    double prev_ub = 0, prev_geo = 0;
    for (double n = 30; n <= 400; n += 10) {
        CHECK(ub_budget(n, 2, 1) > prev_ub);
        CHECK(geocast_lb(ProtocolClass::Fair, n, 2) > prev_geo);
        prev_ub = ub_budget(n, 2, 1);
        prev_geo = geocast_lb(ProtocolClass::Fair, n, 2);
    }
}

TEST_CASE("named evaluation") {
    auto ok = evaluate("geocast_lb", {{"kind", "fair"}, {"n", "100"}, {"alpha", "4"}});
    CHECK(ok.preconditions_ok);
    CHECK(ok.values.at("value") == doctest::Approx(226.63).epsilon(1e-4));

    auto bad = evaluate("geocast_lb", {{"kind", "fair"}, {"n", "24"}});
    CHECK_FALSE(bad.preconditions_ok);
    CHECK(bad.values.empty());
    CHECK_FALSE(bad.violated.empty());

    auto adaptive = evaluate("stability_adaptive_params", {{"k", "10000"}, {"beta", "10"}});
    CHECK(adaptive.values.at("gamma") == doctest::Approx(48.09).epsilon(1e-3));
    CHECK(evaluate("chernoff", {{"kind", "eq6"}, {"mu", "1"}, {"R", "6"}}).values.at("value") == 0.015625);

    CHECK_THROWS_AS(evaluate("no_such_bound", {}), ParameterError);
    CHECK_THROWS_AS(evaluate("ub_budget", {{"alpha", "1"}}), ParameterError);
}
