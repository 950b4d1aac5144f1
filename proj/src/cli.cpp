#include "manet/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "manet/bounds.hpp"
#include "manet/engine.hpp"
#include "manet/error.hpp"
#include "manet/experiments.hpp"
#include "manet/io.hpp"

namespace manet {

using nlohmann::ordered_json;

namespace {

ordered_json optional_slot(const std::optional<Slot>& s) { return s ? ordered_json(*s) : ordered_json(nullptr); }

int cmd_run(const std::string& config, const std::string& trace_out, const std::optional<std::uint64_t>& seed,
            bool require_solved, std::ostream& out, std::ostream& err) {
    SimConfig cfg = load_config(config);
    if (seed) cfg.seed = *seed;
    const RunResult res = run(cfg);
    if (!trace_out.empty()) {
        std::ofstream f(trace_out);
        if (!f) throw ParameterError("cannot write " + trace_out);
        write_trace(f, res.trace);
    }
    const bool audit_ok = res.audit && res.audit->ok;
    ordered_json summary = {{"solved", res.solved},
                            {"solve_slot", optional_slot(res.solve_slot)},
                            {"covered_count", res.covered_count},
                            {"slots", res.slots},
                            {"seed", res.seed},
                            {"audit_ok", audit_ok}};
    out << summary.dump() << '\n';
    if (!audit_ok) {
        err << "audit failed at slot " << res.audit->first_violation_slot.value_or(0) << '\n';
        return kExitDomainFailure;
    }
    if (require_solved && !res.solved) {
        err << "not solved within " << res.slots << " slots\n";
        return kExitDomainFailure;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& plan_path, const std::string& csv_out, std::ostream& out, std::ostream& err) {
    ExperimentPlan plan = load_plan(plan_path);
    if (!csv_out.empty()) plan.out = csv_out;
    if (plan.out.empty()) throw ParameterError("sweep needs --out or an 'out' entry in the plan");
    const auto cells = run_sweep(plan);
    int code = kExitOk;
    ordered_json summary = ordered_json::array();
    for (const auto& c : cells) {
        summary.push_back({{"kind", std::string(to_string(c.kind))},
                           {"n", c.n},
                           {"alpha", c.alpha},
                           {"beta", c.beta},
                           {"success_rate", c.success_rate.point},
                           {"median_solve", c.median_solve ? ordered_json(*c.median_solve) : ordered_json(nullptr)},
                           {"audit_pass_rate", c.audit_pass_rate},
                           {"valid", c.valid}});
        if (!c.valid) {
            err << "cell " << to_string(c.kind) << " n=" << c.n << " alpha=" << c.alpha << " beta=" << c.beta
                << " is invalid" << (c.error.empty() ? std::string(": audit failure") : ": " + c.error) << '\n';
            code = kExitDomainFailure;
        }
    }
    out << summary.dump() << '\n';
    return code;
}

int cmd_audit(const std::string& trace_path, long alpha, long beta, const std::optional<double>& range,
              std::ostream& out, std::ostream& err) {
    std::ifstream in(trace_path);
    if (!in) throw ParameterError("cannot read trace " + trace_path);
    Trace trace = read_trace(in);
    if (range) trace.meta.r = *range;
    const AuditReport rep = audit_alpha_beta(trace, alpha, beta);
    out << ordered_json{{"ok", rep.ok}, {"first_violation_slot", optional_slot(rep.first_violation_slot)}}.dump()
        << '\n';
    if (!rep.ok) {
        err << "(" << alpha << "," << beta << ")-connectivity violated at slot " << *rep.first_violation_slot << '\n';
        return kExitDomainFailure;
    }
    return kExitOk;
}

std::map<std::string, std::string> parse_params(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ParameterError("--params entries are key=value, got '" + item + "'");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

int cmd_bounds(const std::string& kind, const std::string& params, std::ostream& out, std::ostream& err) {
    const auto rep = bounds::evaluate(kind, parse_params(params));
    ordered_json j = {{"name", rep.name}, {"inputs", rep.inputs}, {"preconditions_ok", rep.preconditions_ok}};
    if (rep.preconditions_ok) j["values"] = rep.values;
    else j["violated"] = rep.violated;
    out << j.dump() << '\n';
    if (!rep.preconditions_ok) {
        err << "precondition violated:";
        for (const auto& v : rep.violated) err << ' ' << v << ';';
        err << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

ordered_json fit_json(std::span<const CellResult> cells, ScalingModel model) {
    try {
        const ScalingFit fit = fit_scaling(cells, model);
        return {{"coefficient", fit.coefficient}, {"residual", fit.residual}, {"points", fit.points}};
    } catch (const ParameterError& e) {
        return {{"error", e.what()}};
    }
}

int cmd_report(const std::string& csv_path, std::ostream& out, std::ostream& err) {
    std::ifstream in(csv_path);
    if (!in) throw ParameterError("cannot read " + csv_path);
    const auto rows = read_csv(in);
    const auto cells = summarize(rows);

    ordered_json report;
    ordered_json per_cell = ordered_json::array();
    std::map<AdversaryKind, std::vector<CellResult>> by_kind;
    bool all_valid = true;
    for (const auto& c : cells) {
        per_cell.push_back({{"kind", std::string(to_string(c.kind))},
                            {"n", c.n},
                            {"alpha", c.alpha},
                            {"beta", c.beta},
                            {"trials", c.trials},
                            {"success_rate", c.success_rate.point},
                            {"success_lower", c.success_rate.lower},
                            {"success_upper", c.success_rate.upper},
                            {"mean_solve", c.mean_solve ? ordered_json(*c.mean_solve) : ordered_json(nullptr)},
                            {"median_solve", c.median_solve ? ordered_json(*c.median_solve) : ordered_json(nullptr)},
                            {"predicted_bound", std::isfinite(c.predicted) ? ordered_json(c.predicted) : ordered_json(nullptr)},
                            {"audit_pass_rate", c.audit_pass_rate}});
        by_kind[c.kind].push_back(c);
        all_valid = all_valid && c.valid;
    }
    report["cells"] = per_cell;
    ordered_json fits = ordered_json::object();
    for (const auto& [kind, group] : by_kind) {
        fits[std::string(to_string(kind))] = {{"n2_over_logn", fit_json(group, ScalingModel::N2OverLogN)},
                                              {"alpha_n", fit_json(group, ScalingModel::AlphaN)}};
    }
    report["fits"] = fits;
    out << report.dump() << '\n';
    if (!all_valid) {
        err << "some cells failed the connectivity audit\n";
        return kExitDomainFailure;
    }
    return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Slot-level simulator for information dissemination in mobile ad-hoc networks", "manetsim"};
    app.require_subcommand(1, 1);

    std::string config, trace_out, plan, csv_out, trace_in, kind, params, csv_in;
    std::uint64_t seed = 0;
    bool require_solved = false;
    long alpha = 0, beta = 1;
    double range = 0;

    auto* run_cmd = app.add_subcommand("run", "Run one simulation");
    run_cmd->add_option("--config", config, "Scenario config (JSON)")->required();
    run_cmd->add_option("--out", trace_out, "Trace output (JSON lines)");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Seed override");
    run_cmd->add_flag("--require-solved", require_solved, "Exit 1 when not solved within the budget");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment plan");
    sweep_cmd->add_option("--plan", plan, "Experiment plan (JSON)")->required();
    sweep_cmd->add_option("--out", csv_out, "Results CSV");

    auto* audit_cmd = app.add_subcommand("audit", "Check a trace for (alpha, beta)-connectivity");
    audit_cmd->add_option("--trace", trace_in, "Trace (JSON lines)")->required();
    audit_cmd->add_option("--alpha", alpha, "alpha")->required()->check(CLI::NonNegativeNumber);
    audit_cmd->add_option("--beta", beta, "beta")->required()->check(CLI::PositiveNumber);
    auto* range_opt = audit_cmd->add_option("--range", range, "Override the transmission range r")
                          ->check(CLI::PositiveNumber);

    auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate a closed-form bound");
    bounds_cmd->add_option("--kind", kind, "Bound name")->required();
    bounds_cmd->add_option("--params", params, "Inputs as key=value,...");

    auto* report_cmd = app.add_subcommand("report", "Summarize a results CSV");
    report_cmd->add_option("--in", csv_in, "Results CSV")->required();

    std::vector<const char*> argv{"manetsim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*run_cmd)
            return cmd_run(config, trace_out, *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt,
                           require_solved, out, err);
        if (*sweep_cmd) return cmd_sweep(plan, csv_out, out, err);
        if (*audit_cmd)
            return cmd_audit(trace_in, alpha, beta, *range_opt ? std::optional<double>(range) : std::nullopt, out, err);
        if (*bounds_cmd) return cmd_bounds(kind, params, out, err);
        if (*report_cmd) return cmd_report(csv_in, out, err);
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MalformedInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MotionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainFailure;
    }
    return kExitUsage;
}

}  // namespace manet
