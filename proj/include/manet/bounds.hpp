#pragma once

#include <map>
#include <string>
#include <vector>

namespace manet::bounds {

// Closed forms of the lower/upper bounds and the concentration facts they use.
// Unsubscripted logarithms are natural; log4 is honoured where written.
// Every evaluator throws PreconditionError outside its stated range.

/// k log4(1/eps) / (4 ln k); needs 45 <= k and 0 < eps < 1.
double stability_fair_T(double k, double epsilon);

/// Alternative form ln(1/eps) k / (2 ln k); the constants differ from the one above.
double stability_fair_T_proof_form(double k, double epsilon);

/// Largest admissible beta for the oblivious stability bound: k / (2 (1 + ln k)); needs k >= e^3.
double stability_oblivious_beta_max(double k);

struct AdaptiveParams {
    double xi_const = 0.0;  ///< 2 / (1 - 1/e)^2
    double delta = 0.0;     ///< beta^2 k^(e / xi_const)
    double gamma = 0.0;     ///< xi_const ln delta
    double beta_max = 0.0;  ///< k / (2 e gamma)
};

/// Constant 2 / (1 - 1/e)^2.
double adaptive_xi_const();
/// Smallest k admitted by the adaptive stability bound: (2 / (1 - 1/e))^(xi/e).
double adaptive_k_min();
/// Needs k > adaptive_k_min() and beta >= 1.
AdaptiveParams stability_adaptive_params(double k, double beta);

enum class ProtocolClass { Fair, Oblivious, Adaptive };

/// alpha n/2 plus the class-specific n^2 / ln(n/2) term.
/// Needs n > 24 (fair), n > 3 (oblivious), n > 17 (adaptive), alpha >= 0.
double geocast_lb(ProtocolClass cls, double n, double alpha);

/// S = 4 n (n - 1) / ln n good steps.
double ub_good_steps(double n);
/// alpha (n + S / beta) + S; needs n > 2 and beta >= 1.
double ub_budget(double n, double alpha, double beta);

/// Probability bound that the fair upper-bound protocol misses the budget: e^{-(n-1)/4}.
double ub_failure_probability(double n);

enum class ChernoffKind {
    TightBelow,  ///< Pr(X <= (1-phi) mu) <= (e^-phi / (1-phi)^(1-phi))^mu, 0 < phi < 1
    Below,       ///< Pr(X <= (1-phi) mu) <= e^(-phi^2 mu / 2), 0 < phi < 1
    TightAbove,  ///< Pr(X >= (1+phi) mu) <= (e^phi / (1+phi)^(1+phi))^mu, phi > 0
    LooseAbove,  ///< Pr(X >= R) <= 2^-R, R >= 6 mu
};

/// Right-hand side of the selected inequality. `phi_or_R` is phi for the
/// first three kinds and R for LooseAbove.
double chernoff(ChernoffKind kind, double mu, double phi_or_R);

struct Estimate {
    double point = 0.0;
    double lower = 0.0;
    double upper = 1.0;
};

/// Point estimate with a 95% Wilson score interval.
Estimate estimate_probability(long successes, long trials);

/// Named evaluation for the CLI and reports.
struct BoundReport {
    std::string name;
    std::map<std::string, std::string> inputs;
    bool preconditions_ok = false;
    std::vector<std::string> violated;
    /// Present iff preconditions_ok; single-valued bounds use key "value".
    std::map<std::string, double> values;
};

/// `name` is one of stability_fair_T, stability_oblivious_beta_max,
/// stability_adaptive_params, geocast_lb, ub_budget, chernoff,
/// uniform_fair_prob. Unknown names or missing inputs throw ParameterError;
/// precondition failures are reported, not thrown.
BoundReport evaluate(const std::string& name, const std::map<std::string, std::string>& inputs);

}  // namespace manet::bounds
