#include "manet/bounds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "manet/error.hpp"
#include "manet/protocols.hpp"

namespace manet::bounds {

namespace {

constexpr double kE = std::numbers::e;

class Preconditions {
public:
    Preconditions& require(bool ok, const std::string& what) {
        if (!ok) violated_.push_back(what);
        return *this;
    }
    void check() const {
        if (!violated_.empty()) throw PreconditionError(violated_);
    }

private:
    std::vector<std::string> violated_;
};

}  // namespace

double stability_fair_T(double k, double epsilon) {
    Preconditions()
        .require(k >= 45, "k >= 45")
        .require(epsilon > 0 && epsilon < 1, "0 < epsilon < 1")
        .check();
    return k * (std::log(1.0 / epsilon) / std::log(4.0)) / (4.0 * std::log(k));
}

double stability_fair_T_proof_form(double k, double epsilon) {
    Preconditions()
        .require(k >= 45, "k >= 45")
        .require(epsilon > 0 && epsilon < 1, "0 < epsilon < 1")
        .check();
    return std::log(1.0 / epsilon) * k / (2.0 * std::log(k));
}

double stability_oblivious_beta_max(double k) {
    Preconditions().require(k >= std::exp(3.0), "k >= e^3").check();
    return k / (2.0 * (1.0 + std::log(k)));
}

double adaptive_xi_const() {
    const double q = 1.0 - 1.0 / kE;
    return 2.0 / (q * q);
}

double adaptive_k_min() {
    return std::pow(2.0 / (1.0 - 1.0 / kE), adaptive_xi_const() / kE);
}

AdaptiveParams stability_adaptive_params(double k, double beta) {
    Preconditions()
        .require(k > adaptive_k_min(), "k > (2/(1-1/e))^(xi/e)")
        .require(beta >= 1, "beta >= 1")
        .check();
    AdaptiveParams out;
    out.xi_const = adaptive_xi_const();
    out.delta = beta * beta * std::pow(k, kE / out.xi_const);
    out.gamma = out.xi_const * std::log(out.delta);
    out.beta_max = k / (2.0 * kE * out.gamma);
    return out;
}

double geocast_lb(ProtocolClass cls, double n, double alpha) {
    Preconditions pre;
    pre.require(alpha >= 0, "alpha >= 0");
    switch (cls) {
    case ProtocolClass::Fair: pre.require(n > 24, "n > 24"); break;
    case ProtocolClass::Oblivious: pre.require(n > 3, "n > 3"); break;
    case ProtocolClass::Adaptive: pre.require(n > 17, "n > 17"); break;
    }
    pre.check();

    const double phase_term = alpha * n / 2.0;
    const double ln_half = std::log(n / 2.0);
    switch (cls) {
    case ProtocolClass::Fair: return phase_term + n * n / (96.0 * ln_half);
    case ProtocolClass::Oblivious: return phase_term + n * n / (48.0 * kE * ln_half);
    case ProtocolClass::Adaptive: {
        const double c = kE * kE * (kE + 1) * (kE + 1) / (2.0 * (kE - 1) * (kE - 1));
        return phase_term + c * n * n / ln_half;
    }
    }
    return 0.0;
}

double ub_good_steps(double n) {
    Preconditions().require(n > 2, "n > 2").check();
    return 4.0 * n * (n - 1) / std::log(n);
}

double ub_budget(double n, double alpha, double beta) {
    Preconditions()
        .require(n > 2, "n > 2")
        .require(beta >= 1, "beta >= 1")
        .require(alpha >= 0, "alpha >= 0")
        .check();
    const double s = ub_good_steps(n);
    return alpha * (n + s / beta) + s;
}

double ub_failure_probability(double n) {
    Preconditions().require(n > 2, "n > 2").check();
    return std::exp(-(n - 1) / 4.0);
}

double chernoff(ChernoffKind kind, double mu, double phi_or_R) {
    Preconditions pre;
    pre.require(mu >= 0, "mu >= 0");
    switch (kind) {
    case ChernoffKind::TightBelow:
    case ChernoffKind::Below:
        pre.require(phi_or_R > 0 && phi_or_R < 1, "0 < phi < 1");
        break;
    case ChernoffKind::TightAbove: pre.require(phi_or_R > 0, "phi > 0"); break;
    case ChernoffKind::LooseAbove: pre.require(phi_or_R >= 6 * mu, "R >= 6 mu"); break;
    }
    pre.check();

    const double phi = phi_or_R;
    switch (kind) {
    case ChernoffKind::TightBelow:
        return std::exp(mu * (-phi - (1 - phi) * std::log(1 - phi)));
    case ChernoffKind::Below: return std::exp(-phi * phi * mu / 2.0);
    case ChernoffKind::TightAbove:
        return std::exp(mu * (phi - (1 + phi) * std::log(1 + phi)));
    case ChernoffKind::LooseAbove: return std::exp2(-phi_or_R);
    }
    return 1.0;
}

Estimate estimate_probability(long successes, long trials) {
    if (trials < 1) throw ParameterError("estimate_probability: trials must be >= 1");
    if (successes < 0 || successes > trials)
        throw ParameterError("estimate_probability: successes must lie in [0, trials]");
    constexpr double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (phat + z2 / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
    const double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double upper = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {phat, lower, upper};
}

// ---------------------------------------------------------------------------

namespace {

double number(const std::map<std::string, std::string>& in, const std::string& key) {
    auto it = in.find(key);
    if (it == in.end()) throw ParameterError("missing parameter '" + key + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != it->second.size())
        throw ParameterError("parameter '" + key + "' is not a number: " + it->second);
    return v;
}

double number_or(const std::map<std::string, std::string>& in, const std::string& key,
                 double fallback) {
    return in.count(key) ? number(in, key) : fallback;
}

ProtocolClass protocol_class(const std::string& s) {
    if (s == "fair") return ProtocolClass::Fair;
    if (s == "oblivious") return ProtocolClass::Oblivious;
    if (s == "adaptive") return ProtocolClass::Adaptive;
    throw ParameterError("unknown protocol class '" + s + "' (fair|oblivious|adaptive)");
}

ChernoffKind chernoff_kind(const std::string& s) {
    if (s == "eq3") return ChernoffKind::TightBelow;
    if (s == "eq4") return ChernoffKind::Below;
    if (s == "eq5") return ChernoffKind::TightAbove;
    if (s == "eq6") return ChernoffKind::LooseAbove;
    throw ParameterError("unknown chernoff kind '" + s + "' (eq3|eq4|eq5|eq6)");
}

}  // namespace

BoundReport evaluate(const std::string& name, const std::map<std::string, std::string>& inputs) {
    BoundReport report;
    report.name = name;
    report.inputs = inputs;
    auto& v = report.values;
    try {
        if (name == "stability_fair_T") {
            const double k = number(inputs, "k");
            const double eps = number(inputs, "epsilon");
            v["value"] = stability_fair_T(k, eps);
            v["proof_form"] = stability_fair_T_proof_form(k, eps);
        } else if (name == "stability_oblivious_beta_max") {
            v["value"] = stability_oblivious_beta_max(number(inputs, "k"));
        } else if (name == "stability_adaptive_params") {
            const auto p = stability_adaptive_params(number(inputs, "k"), number(inputs, "beta"));
            v["xi_const"] = p.xi_const;
            v["delta"] = p.delta;
            v["gamma"] = p.gamma;
            v["beta_max"] = p.beta_max;
        } else if (name == "geocast_lb") {
            auto it = inputs.find("kind");
            if (it == inputs.end()) throw ParameterError("missing parameter 'kind'");
            v["value"] = geocast_lb(protocol_class(it->second), number(inputs, "n"),
                                    number_or(inputs, "alpha", 0.0));
        } else if (name == "ub_budget") {
            const double n = number(inputs, "n");
            v["value"] = ub_budget(n, number_or(inputs, "alpha", 0.0), number_or(inputs, "beta", 1.0));
            v["good_steps"] = ub_good_steps(n);
            v["failure_probability"] = ub_failure_probability(n);
        } else if (name == "chernoff") {
            auto it = inputs.find("kind");
            if (it == inputs.end()) throw ParameterError("missing parameter 'kind'");
            const auto kind = chernoff_kind(it->second);
            const double arg = kind == ChernoffKind::LooseAbove ? number(inputs, "R") : number(inputs, "phi");
            v["value"] = chernoff(kind, number(inputs, "mu"), arg);
        } else if (name == "uniform_fair_prob") {
            const double n = number(inputs, "n");
            if (!(n > 2)) throw PreconditionError({"n > 2"});
            v["value"] = uniform_fair_prob(static_cast<std::size_t>(n));
        } else {
            throw ParameterError("unknown bound '" + name + "'");
        }
        report.preconditions_ok = true;
    } catch (const PreconditionError& e) {
        report.preconditions_ok = false;
        report.violated = e.violated();
        report.values.clear();
    }
    return report;
}

}  // namespace manet::bounds
