#include "manet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "manet/engine.hpp"
#include "manet/error.hpp"
#include "manet/io.hpp"
#include "manet/rng.hpp"

namespace manet {

using nlohmann::json;

void ExperimentPlan::validate() const {
    std::vector<std::string> bad;
    if (trials < 1) bad.push_back("trials >= 1");
    if (grid.n.empty() || grid.alpha.empty() || grid.beta.empty() || grid.kind.empty())
        bad.push_back("every grid axis must be nonempty");
    if (!(c > 0)) bad.push_back("c > 0");
    if (!bad.empty()) {
        std::string msg = "invalid plan:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw ParameterError(msg);
    }
}

ExperimentPlan parse_plan(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("plan is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("base")) throw ParameterError("plan needs a 'base' config");
    for (const auto& [key, _] : j.items())
        if (key != "base" && key != "grid" && key != "trials" && key != "c" && key != "out")
            throw ParameterError("plan: unknown key '" + key + "'");

    json base = j["base"];
    // a base without n takes the first grid value
    if (base.is_object() && !base.contains("n") && j.contains("grid") && j["grid"].is_object() &&
        j["grid"].contains("n") && j["grid"]["n"].is_array() && !j["grid"]["n"].empty())
        base["n"] = j["grid"]["n"][0];

    ExperimentPlan plan;
    plan.base = parse_config(base.dump(), base_dir);
    if (j["base"].contains("adversary") && j["base"]["adversary"].contains("generator"))
        plan.script_generator = j["base"]["adversary"]["generator"].get<std::string>();
    try {
        plan.trials = j.value("trials", std::size_t{1});
        plan.c = j.value("c", 1.0);
        plan.out = j.value("out", std::string{});
        const json grid = j.value("grid", json::object());
        for (const auto& [key, _] : grid.items())
            if (key != "n" && key != "alpha" && key != "beta" && key != "kind")
                throw ParameterError("plan.grid: unknown axis '" + key + "'");
        plan.grid.n = grid.value("n", std::vector<std::size_t>{plan.base.n});
        plan.grid.alpha = grid.value("alpha", std::vector<long>{plan.base.alpha});
        plan.grid.beta = grid.value("beta", std::vector<long>{plan.base.beta});
        if (grid.contains("kind")) {
            for (const auto& k : grid["kind"]) plan.grid.kind.push_back(adversary_kind_from_string(k.get<std::string>()));
        } else {
            plan.grid.kind = {plan.base.adversary.kind};
        }
    } catch (const json::exception& e) {
        throw ParameterError(std::string("plan has a field of the wrong type: ") + e.what());
    }
    plan.validate();
    return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read plan " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_plan(ss.str(), path.parent_path());
}

SimConfig cell_config(const ExperimentPlan& plan, std::size_t n, long alpha, long beta, AdversaryKind kind) {
    SimConfig cfg = plan.base;
    cfg.n = n;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.adversary.kind = kind;
    if (plan.script_generator) {
        if (*plan.script_generator == "alternating-path") cfg.adversary.script = alternating_path_script(n, cfg.r);
        else if (*plan.script_generator == "static-path") cfg.adversary.script = static_path_script(n, cfg.r);
    }
    if (kind == AdversaryKind::Static && cfg.adversary.positions.size() != n) cfg.adversary.positions.clear();
    return cfg;
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t cell, std::size_t trial) {
    return mix_seed(base, cell, trial);
}

double predicted_bound(const SimConfig& cfg, double c) {
    const double n = static_cast<double>(cfg.n);
    const double alpha = static_cast<double>(cfg.alpha);
    const double beta = static_cast<double>(cfg.beta);
    try {
        switch (cfg.adversary.kind) {
        case AdversaryKind::GeocastFair: return bounds::geocast_lb(bounds::ProtocolClass::Fair, n, alpha);
        case AdversaryKind::GeocastOblivious: return bounds::geocast_lb(bounds::ProtocolClass::Oblivious, n, alpha);
        case AdversaryKind::GeocastAdaptive: return bounds::geocast_lb(bounds::ProtocolClass::Adaptive, n, alpha);
        case AdversaryKind::StabilityFair:
            return c * bounds::stability_fair_T(static_cast<double>(cfg.adversary.k), cfg.adversary.epsilon);
        case AdversaryKind::StabilityOblivious: return c * beta;
        case AdversaryKind::StabilityAdaptive: return beta;
        case AdversaryKind::Static:
        case AdversaryKind::Scripted: return bounds::ub_budget(n, alpha, beta);
        }
    } catch (const ParameterError&) {
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {

std::size_t thread_cap() {
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TOOL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) threads = static_cast<std::size_t>(v);
    }
    return threads;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void finish_cell(CellResult& cell) {
    cell.trials = cell.rows.size();
    cell.successes = 0;
    std::size_t audits = 0;
    std::vector<double> times;
    for (const auto& row : cell.rows) {
        if (row.solved) {
            ++cell.successes;
            times.push_back(static_cast<double>(*row.solve_slot));
        }
        audits += row.audit_ok;
    }
    cell.success_rate = bounds::estimate_probability(static_cast<long>(cell.successes), static_cast<long>(cell.trials));
    cell.audit_pass_rate = cell.trials ? static_cast<double>(audits) / static_cast<double>(cell.trials) : 0.0;
    cell.valid = cell.error.empty() && audits == cell.trials;
    if (!times.empty()) {
        cell.mean_solve = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
        cell.median_solve = median(times);
    }
    if (!cell.rows.empty()) cell.predicted = cell.rows.front().predicted;
}

}  // namespace

std::vector<CellResult> run_sweep(const ExperimentPlan& plan) {
    plan.validate();
    struct Job {
        std::size_t cell;
        std::size_t trial;
    };
    std::vector<CellResult> cells;
    std::vector<SimConfig> configs;
    for (AdversaryKind kind : plan.grid.kind)
        for (std::size_t n : plan.grid.n)
            for (long alpha : plan.grid.alpha)
                for (long beta : plan.grid.beta) {
                    CellResult cell;
                    cell.kind = kind;
                    cell.n = n;
                    cell.alpha = alpha;
                    cell.beta = beta;
                    cell.rows.resize(plan.trials);
                    cells.push_back(std::move(cell));
                    configs.push_back(cell_config(plan, n, alpha, beta, kind));
                }

    std::vector<Job> jobs;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t t = 0; t < plan.trials; ++t) jobs.push_back({c, t});

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            const Job job = jobs[j];
            CellResult& cell = cells[job.cell];
            SimConfig cfg = configs[job.cell];
            cfg.seed = trial_seed(plan.base.seed, job.cell, job.trial);
            TrialRow& row = cell.rows[job.trial];
            row = {cell.kind, cell.n, cell.alpha, cell.beta, job.trial, cfg.seed, false, std::nullopt, 0, false,
                   predicted_bound(cfg, plan.c)};
            try {
                const RunResult res = run(cfg);
                row.solved = res.solved;
                row.solve_slot = res.solve_slot;
                row.covered_count = res.covered_count;
                row.audit_ok = res.audit && res.audit->ok;
            } catch (const Error& e) {
                std::lock_guard lock(error_mutex);
                if (cell.error.empty()) cell.error = e.what();
            }
        }
    };
    const std::size_t threads = std::min(thread_cap(), jobs.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    for (auto& cell : cells) finish_cell(cell);
    if (!plan.out.empty()) {
        std::ofstream out(plan.out);
        if (!out) throw ParameterError("cannot write " + plan.out);
        write_csv(out, cells);
    }
    return cells;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {
constexpr const char* kHeader = "kind,n,alpha,beta,trial,seed,solved,solve_slot,covered_count,audit_ok,predicted_bound";
}

void write_csv(std::ostream& out, std::span<const CellResult> cells) {
    out << kHeader << '\n';
    std::ostringstream num;
    num.precision(10);
    for (const auto& cell : cells) {
        for (const auto& row : cell.rows) {
            num.str({});
            if (std::isfinite(row.predicted)) num << row.predicted;
            out << to_string(row.kind) << ',' << row.n << ',' << row.alpha << ',' << row.beta << ',' << row.trial
                << ',' << row.seed << ',' << (row.solved ? 1 : 0) << ','
                << (row.solve_slot ? std::to_string(*row.solve_slot) : std::string{}) << ',' << row.covered_count
                << ',' << (row.audit_ok ? 1 : 0) << ',' << num.str() << '\n';
        }
    }
}

std::vector<TrialRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw MalformedInput("results CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw MalformedInput("results CSV header must be " + std::string(kHeader));
    std::vector<TrialRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (line.back() == ',') f.emplace_back();
        if (f.size() != 11) throw MalformedInput("results line " + std::to_string(lineno) + ": expected 11 fields");
        try {
            TrialRow row;
            row.kind = adversary_kind_from_string(f[0]);
            row.n = std::stoul(f[1]);
            row.alpha = std::stol(f[2]);
            row.beta = std::stol(f[3]);
            row.trial = std::stoul(f[4]);
            row.seed = std::stoull(f[5]);
            row.solved = f[6] == "1";
            if (!f[7].empty()) row.solve_slot = std::stol(f[7]);
            row.covered_count = std::stoul(f[8]);
            row.audit_ok = f[9] == "1";
            row.predicted = f[10].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[10]);
            if (row.solved != row.solve_slot.has_value()) throw MalformedInput("solved and solve_slot disagree");
            rows.push_back(row);
        } catch (const MalformedInput& e) {
            throw MalformedInput("results line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::exception&) {
            throw MalformedInput("results line " + std::to_string(lineno) + ": unparsable field");
        }
    }
    return rows;
}

std::vector<CellResult> summarize(std::span<const TrialRow> rows) {
    std::vector<CellResult> cells;
    std::map<std::tuple<int, std::size_t, long, long>, std::size_t> index;
    for (const auto& row : rows) {
        const auto key = std::make_tuple(static_cast<int>(row.kind), row.n, row.alpha, row.beta);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, cells.size()).first;
            CellResult cell;
            cell.kind = row.kind;
            cell.n = row.n;
            cell.alpha = row.alpha;
            cell.beta = row.beta;
            cells.push_back(std::move(cell));
        }
        cells[it->second].rows.push_back(row);
    }
    for (auto& cell : cells) finish_cell(cell);
    return cells;
}

// ---------------------------------------------------------------------------
// Scaling fits
// ---------------------------------------------------------------------------

double scaling_basis(ScalingModel model, double n, double alpha) {
    if (model == ScalingModel::N2OverLogN) return n * n / std::log(n);
    return alpha * n;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points, ScalingModel model) {
    std::vector<double> ns;
    for (const auto& p : points) ns.push_back(p.n);
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.size() < 3) throw ParameterError("fit_scaling needs at least 3 distinct n values");

    double fy = 0, ff = 0, yy = 0;
    for (const auto& p : points) {
        const double f = scaling_basis(model, p.n, p.alpha);
        fy += f * p.value;
        ff += f * f;
        yy += p.value * p.value;
    }
    if (!(ff > 0)) throw ParameterError("fit_scaling: the model basis vanishes on every point");
    ScalingFit fit;
    fit.coefficient = fy / ff;
    fit.points = points.size();
    double rr = 0;
    for (const auto& p : points) {
        const double e = p.value - fit.coefficient * scaling_basis(model, p.n, p.alpha);
        rr += e * e;
    }
    fit.residual = yy > 0 ? std::sqrt(rr / yy) : 0.0;
    return fit;
}

ScalingFit fit_scaling(std::span<const CellResult> cells, ScalingModel model) {
    std::vector<ScalingPoint> pts;
    for (const auto& c : cells)
        if (c.median_solve)
            pts.push_back({static_cast<double>(c.n), static_cast<double>(c.alpha), *c.median_solve});
    return fit_scaling(pts, model);
}

}  // namespace manet
