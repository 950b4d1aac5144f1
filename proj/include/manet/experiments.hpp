#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "manet/bounds.hpp"
#include "manet/model.hpp"

namespace manet {

struct SweepGrid {
    std::vector<std::size_t> n;
    std::vector<long> alpha;
    std::vector<long> beta;
    std::vector<AdversaryKind> kind;
};

struct ExperimentPlan {
    SimConfig base;
    SweepGrid grid;
    std::size_t trials = 1;
    /// Repetition factor applied to the stability predictions.
    double c = 1.0;
    /// Regenerates the scripted table per cell ("alternating-path" or "static-path").
    std::optional<std::string> script_generator;
    std::string out;

    /// Throws ParameterError unless trials >= 1 and every grid axis is nonempty.
    void validate() const;
};

ExperimentPlan parse_plan(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentPlan load_plan(const std::filesystem::path& path);

/// Configuration of one grid cell.
SimConfig cell_config(const ExperimentPlan& plan, std::size_t n, long alpha, long beta, AdversaryKind kind);

/// Per-trial seed: mix of the base seed, the cell index and the trial index.
std::uint64_t trial_seed(std::uint64_t base, std::size_t cell, std::size_t trial);

/// Bound the CSV reports next to each measured solve time.
double predicted_bound(const SimConfig& cfg, double c);

struct TrialRow {
    AdversaryKind kind = AdversaryKind::Static;
    std::size_t n = 0;
    long alpha = 0;
    long beta = 1;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    bool solved = false;
    std::optional<Slot> solve_slot;
    std::size_t covered_count = 0;
    bool audit_ok = true;
    double predicted = 0.0;
};

struct CellResult {
    AdversaryKind kind = AdversaryKind::Static;
    std::size_t n = 0;
    long alpha = 0;
    long beta = 1;
    std::size_t trials = 0;
    std::size_t successes = 0;
    bounds::Estimate success_rate;
    std::optional<double> mean_solve;
    std::optional<double> median_solve;
    double predicted = 0.0;
    double audit_pass_rate = 1.0;
    bool valid = true;
    std::string error;  ///< set when the cell could not run
    std::vector<TrialRow> rows;
};

/// Runs every (cell, trial); threads are capped by TOOL_THREADS. Writes the
/// CSV to plan.out when it is nonempty.
std::vector<CellResult> run_sweep(const ExperimentPlan& plan);

void write_csv(std::ostream& out, std::span<const CellResult> cells);
std::vector<TrialRow> read_csv(std::istream& in);
/// Groups rows back into cells (grid order of first appearance).
std::vector<CellResult> summarize(std::span<const TrialRow> rows);

enum class ScalingModel { N2OverLogN, AlphaN };

struct ScalingPoint {
    double n = 0;
    double alpha = 0;
    double value = 0;
};

struct ScalingFit {
    double coefficient = 0.0;
    double residual = 0.0;  ///< ||y - a f|| / ||y||
    std::size_t points = 0;
};

double scaling_basis(ScalingModel model, double n, double alpha);
/// Least-squares a in value ~ a f(n, alpha). Needs at least 3 distinct n.
ScalingFit fit_scaling(std::span<const ScalingPoint> points, ScalingModel model);
/// Fits cell median solve times (cells without a solved trial are skipped).
ScalingFit fit_scaling(std::span<const CellResult> cells, ScalingModel model);

}  // namespace manet
