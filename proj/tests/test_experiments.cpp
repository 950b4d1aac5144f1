#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "manet/engine.hpp"
#include "manet/error.hpp"
#include "manet/experiments.hpp"

using namespace manet;

namespace {

ExperimentPlan ub_plan(std::vector<std::size_t> ns, std::size_t trials) {
    ExperimentPlan plan;
    plan.base.alpha = 1;
    plan.base.beta = 1;
    plan.base.v_max = 0.5;
    plan.base.seed = 11;
    plan.base.adversary.kind = AdversaryKind::Scripted;
    plan.script_generator = "alternating-path";
    plan.grid = {ns, {1}, {1}, {AdversaryKind::Scripted}};
    plan.trials = trials;
    return plan;
}

std::string csv_of(const std::vector<CellResult>& cells) {
    std::ostringstream os;
    write_csv(os, cells);
    return os.str();
}

}  // namespace

TEST_CASE("plan validation") {
    auto plan = ub_plan({8}, 1);
    plan.trials = 0;
    CHECK_THROWS_AS(plan.validate(), ParameterError);
    plan.trials = 1;
    plan.grid.n.clear();
    CHECK_THROWS_AS(plan.validate(), ParameterError);
}

TEST_CASE("a one-cell one-trial sweep is a single run") {
    const auto plan = ub_plan({10}, 1);
    const auto cells = run_sweep(plan);
    REQUIRE(cells.size() == 1);
    REQUIRE(cells[0].rows.size() == 1);
    auto cfg = cell_config(plan, 10, 1, 1, AdversaryKind::Scripted);
    cfg.seed = trial_seed(plan.base.seed, 0, 0);
    const auto res = run(cfg);
    const auto& row = cells[0].rows[0];
    CHECK(row.seed == cfg.seed);
    CHECK(row.solved == res.solved);
    CHECK(row.solve_slot == res.solve_slot);
    CHECK(row.covered_count == res.covered_count);
    CHECK(row.audit_ok);
    CHECK(row.predicted == doctest::Approx(bounds::ub_budget(10, 1, 1)));
    CHECK(cells[0].valid);
}

TEST_CASE("sweeps are reproducible regardless of threads") {
    const auto plan = ub_plan({8, 12}, 4);
    setenv("TOOL_THREADS", "1", 1);
    const auto one = csv_of(run_sweep(plan));
    setenv("TOOL_THREADS", "3", 1);
    const auto three = csv_of(run_sweep(plan));
    unsetenv("TOOL_THREADS");
    CHECK(one == three);
    CHECK(one.rfind("kind,n,alpha,beta,trial,seed,solved,solve_slot,covered_count,audit_ok,predicted_bound\n", 0) == 0);
}

TEST_CASE("trial seeds differ across cells and trials") {
    CHECK(trial_seed(1, 0, 0) != trial_seed(1, 0, 1));
    CHECK(trial_seed(1, 0, 1) != trial_seed(1, 1, 0));
    CHECK(trial_seed(1, 2, 3) == trial_seed(1, 2, 3));
}

TEST_CASE("a cell whose scenario breaks connectivity is flagged") {
    // nodes 1 and 2 drift apart for good after slot 3
    ExperimentPlan plan;
    plan.base.n = 2;
    plan.base.alpha = 1;
    plan.base.beta = 1;
    plan.base.v_max = 5;
    plan.base.max_slots = 30;
    plan.base.protocol = ProtocolSpec::uniform_schedule(Schedule{{}, {0.0}});
    plan.base.adversary.kind = AdversaryKind::Scripted;
    ScriptTable t;
    for (int s = 0; s < 30; ++s) t.slots.push_back({{{0, 0}, true}, {{s < 3 ? 0.5 : 4.0, 0}, true}});
    plan.base.adversary.script = t;
    plan.grid = {{2}, {1}, {1}, {AdversaryKind::Scripted}};
    plan.trials = 2;
    const auto cells = run_sweep(plan);
    CHECK_FALSE(cells[0].valid);
    CHECK(cells[0].audit_pass_rate == 0.0);
}

TEST_CASE("csv round-trip and summaries") {
    const auto cells = run_sweep(ub_plan({8, 10}, 3));
    std::istringstream in(csv_of(cells));
    const auto rows = read_csv(in);
    CHECK(rows.size() == 6);
    const auto again = summarize(rows);
    REQUIRE(again.size() == 2);
    CHECK(again[0].median_solve == cells[0].median_solve);
    CHECK(again[1].successes == cells[1].successes);
    CHECK(csv_of(again) == csv_of(cells));

    std::istringstream bad("kind,n\n");
    CHECK_THROWS_AS(read_csv(bad), MalformedInput);
}

TEST_CASE("fit_scaling") {
    std::vector<ScalingPoint> exact;
    for (double n : {16.0, 32.0, 64.0, 128.0}) exact.push_back({n, 0, 2 * n * n / std::log(n)});
    const auto fit = fit_scaling(exact, ScalingModel::N2OverLogN);
    CHECK(fit.coefficient == doctest::Approx(2.0));
    CHECK(fit.residual == doctest::Approx(0.0).epsilon(1e-12));

    std::vector<ScalingPoint> linear;
    for (double n : {10.0, 20.0, 30.0}) linear.push_back({n, 3, 3 * n});
    CHECK(fit_scaling(linear, ScalingModel::AlphaN).coefficient == doctest::Approx(1.0));

    std::vector<ScalingPoint> noisy{{10, 1, 11}, {20, 1, 19}, {30, 1, 33}};
    const auto nf = fit_scaling(noisy, ScalingModel::AlphaN);
    const double a = (10 * 11 + 20 * 19 + 30 * 33) / (100.0 + 400 + 900);
    CHECK(nf.coefficient == doctest::Approx(a));
    const double rr = std::pow(11 - 10 * a, 2) + std::pow(19 - 20 * a, 2) + std::pow(33 - 30 * a, 2);
    CHECK(nf.residual == doctest::Approx(std::sqrt(rr / (121.0 + 361 + 1089))));

    std::vector<ScalingPoint> two{{10, 1, 1}, {20, 1, 2}, {20, 1, 3}};
    CHECK_THROWS_AS(fit_scaling(two, ScalingModel::AlphaN), ParameterError);
}

TEST_CASE("predicted bounds follow the scenario") {
    SimConfig cfg;
    cfg.n = 50;
    cfg.alpha = 4;
    cfg.beta = 2;
    cfg.adversary.kind = AdversaryKind::GeocastFair;
    CHECK(predicted_bound(cfg, 1) == doctest::Approx(bounds::geocast_lb(bounds::ProtocolClass::Fair, 50, 4)));
    cfg.adversary.kind = AdversaryKind::Static;
    CHECK(predicted_bound(cfg, 1) == doctest::Approx(bounds::ub_budget(50, 4, 2)));
    cfg.adversary.kind = AdversaryKind::StabilityFair;
    cfg.adversary.k = 45;
    cfg.adversary.epsilon = 0.25;
    CHECK(predicted_bound(cfg, 3) == doctest::Approx(3 * bounds::stability_fair_T(45, 0.25)));
    cfg.adversary.k = 10;
    CHECK(std::isnan(predicted_bound(cfg, 3)));
    cfg.adversary.kind = AdversaryKind::StabilityOblivious;
    CHECK(predicted_bound(cfg, 3) == 6.0);
}

TEST_CASE("plan files") {
    const auto dir = std::filesystem::temp_directory_path() / "manet_plan_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "plan.json");
        f << R"({"base": {"n": 8, "alpha": 1, "beta": 1, "v_max": 0.5,
                 "adversary": {"kind": "scripted", "generator": "alternating-path"}},
                 "grid": {"n": [6, 8]}, "trials": 2, "c": 2})";
    }
    const auto plan = load_plan(dir / "plan.json");
    CHECK(plan.grid.n == std::vector<std::size_t>{6, 8});
    CHECK(plan.grid.kind == std::vector<AdversaryKind>{AdversaryKind::Scripted});
    CHECK(plan.c == 2.0);
    REQUIRE(plan.script_generator);
    CHECK(cell_config(plan, 6, 1, 1, AdversaryKind::Scripted).adversary.script->slots[0].size() == 6);
    CHECK_THROWS_AS(parse_plan(R"({"grid": {}})"), ParameterError);
    CHECK_THROWS_AS(parse_plan(R"({"base": {"n": 4}, "grid": {"gamma": [1]}})"), ParameterError);
    std::filesystem::remove_all(dir);
}
