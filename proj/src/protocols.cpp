#include "manet/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "manet/error.hpp"

namespace manet {

std::string_view to_string(ProtocolKind kind) {
    switch (kind) {
    case ProtocolKind::FairUniform: return "fair-uniform";
    case ProtocolKind::ObliviousSchedule: return "oblivious-schedule";
    case ProtocolKind::LocallyAdaptive: return "locally-adaptive";
    }
    return "unknown";
}

double Schedule::at(std::size_t step) const {
    if (step < 1) throw ParameterError("schedule steps are 1-based");
    if (step <= prefix.size()) return prefix[step - 1];
    if (tail.empty()) throw ParameterError("schedule has an empty tail");
    return tail[(step - prefix.size() - 1) % tail.size()];
}

// ---------------------------------------------------------------------------
// Adaptive rule registry. Each rule is a pure function of (step, history).
// ---------------------------------------------------------------------------

namespace {

using Params = std::map<std::string, double>;
using RuleFn = double (*)(const Params&, std::size_t, std::string_view);

double param(const Params& p, const char* key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

double constant_p(const Params& p, std::size_t, std::string_view) { return param(p, "p", 0.5); }

// base * 2^-(number of T symbols so far)
double halve_after_t(const Params& p, std::size_t, std::string_view history) {
    const auto transmissions = std::count(history.begin(), history.end(), 'T');
    return std::ldexp(param(p, "base", 0.5), -static_cast<int>(std::min<long>(transmissions, 1074)));
}

// Halves per consecutive T and returns to base after any R step.
double reset_on_receive(const Params& p, std::size_t, std::string_view history) {
    std::size_t streak = 0;
    for (auto it = history.rbegin(); it != history.rend() && *it == 'T'; ++it) ++streak;
    return std::ldexp(param(p, "base", 0.5), -static_cast<int>(std::min<std::size_t>(streak, 1074)));
}

double decay_inverse_t(const Params& p, std::size_t step, std::string_view) {
    return std::min(1.0, param(p, "base", 1.0) / static_cast<double>(step));
}

struct RuleEntry {
    const char* name;
    RuleFn fn;
    std::vector<std::string_view> keys;
};

const RuleEntry kRules[] = {
    {"constant-p", constant_p, {"p"}},
    {"halve-after-T", halve_after_t, {"base"}},
    {"reset-on-receive", reset_on_receive, {"base"}},
    {"decay-1/t", decay_inverse_t, {"base"}},
};

const RuleEntry& find_rule(const std::string& name) {
    for (const auto& r : kRules)
        if (name == r.name) return r;
    throw ParameterError("unknown adaptive rule '" + name + "'");
}

void check_probability(double p, const std::string& where) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError(where + ": probability outside [0,1]");
}

void validate_schedule(const Schedule& s, const std::string& where) {
    if (s.tail.empty()) throw ParameterError(where + ": schedule tail must not be empty");
    for (double p : s.prefix) check_probability(p, where);
    for (double p : s.tail) check_probability(p, where);
}

}  // namespace

std::vector<std::string> adaptive_rules() {
    std::vector<std::string> out;
    for (const auto& r : kRules) out.emplace_back(r.name);
    return out;
}

ProtocolSpec ProtocolSpec::uniform_schedule(Schedule schedule) {
    ObliviousSchedule o;
    o.fallback = std::move(schedule);
    return {std::move(o)};
}

ProtocolSpec ProtocolSpec::adaptive(std::string rule, std::map<std::string, double> params) {
    return {LocallyAdaptive{std::move(rule), std::move(params)}};
}

void ProtocolSpec::validate() const {
    if (const auto* o = std::get_if<ObliviousSchedule>(&params)) {
        for (const auto& [id, s] : o->schedules) {
            if (id < 1) throw ParameterError("schedule for invalid node id " + std::to_string(id));
            validate_schedule(s, "schedule of node " + std::to_string(id));
        }
        if (o->fallback) validate_schedule(*o->fallback, "default schedule");
    } else if (const auto* a = std::get_if<LocallyAdaptive>(&params)) {
        const auto& rule = find_rule(a->rule);
        for (const auto& [key, value] : a->params) {
            if (std::find_if(rule.keys.begin(), rule.keys.end(),
                             [&](std::string_view k) { return key == k; }) == rule.keys.end())
                throw ParameterError("rule '" + a->rule + "' has no parameter '" + key + "'");
            if (key == "p" || key == "base") {
                if (a->rule == "decay-1/t") {
                    if (!(value >= 0)) throw ParameterError("decay-1/t base must be >= 0");
                } else {
                    check_probability(value, "rule '" + a->rule + "'");
                }
            }
        }
    }
}

double uniform_fair_prob(std::size_t n) {
    if (n <= 2) throw PreconditionError({"n > 2"});
    const double nn = static_cast<double>(n);
    return std::log(nn) / nn;
}

double schedule_prob(const ProtocolSpec& spec, NodeId node, std::size_t local_step) {
    const auto* o = std::get_if<ObliviousSchedule>(&spec.params);
    if (!o) throw ParameterError("schedule_prob needs an oblivious-schedule protocol");
    if (local_step < 1) throw ParameterError("local steps are 1-based");
    if (auto it = o->schedules.find(node); it != o->schedules.end()) return it->second.at(local_step);
    if (o->fallback) return o->fallback->at(local_step);
    throw ParameterError("no schedule for node " + std::to_string(node));
}

double adaptive_prob(const ProtocolSpec& spec, NodeId /*node*/, std::size_t local_step,
                     std::string_view history) {
    const auto* a = std::get_if<LocallyAdaptive>(&spec.params);
    if (!a) throw ParameterError("adaptive_prob needs a locally-adaptive protocol");
    if (local_step < 1) throw ParameterError("local steps are 1-based");
    if (history.size() != local_step - 1)
        throw ParameterError("history length " + std::to_string(history.size()) +
                             " does not match local step " + std::to_string(local_step));
    const double p = find_rule(a->rule).fn(a->params, local_step, history);
    return std::clamp(p, 0.0, 1.0);
}

double transmission_probability(const ProtocolSpec& spec, std::size_t n, NodeId node,
                                std::size_t local_step, std::string_view history) {
    switch (spec.kind()) {
    case ProtocolKind::FairUniform: return uniform_fair_prob(n);
    case ProtocolKind::ObliviousSchedule: return schedule_prob(spec, node, local_step);
    case ProtocolKind::LocallyAdaptive: return adaptive_prob(spec, node, local_step, history);
    }
    return 0.0;
}

std::vector<Candidate> next_step_probabilities(const WorldState& world, const ProtocolSpec& spec) {
    std::vector<Candidate> out;
    for (const auto& node : world.nodes) {
        if (!node.active || !node.informed || !node.covered) continue;
        out.push_back({node.id, transmission_probability(spec, world.size(), node.id,
                                                         node.local_step + 1, node.history)});
    }
    return out;
}

TransmissionDraw decide_transmissions(const WorldState& world, const ProtocolSpec& spec,
                                      const CounterRng& rng, Slot slot) {
    TransmissionDraw draw;
    draw.candidates = next_step_probabilities(world, spec);
    for (const auto& c : draw.candidates) {
        const double u = rng.uniform(static_cast<std::uint64_t>(slot), static_cast<std::uint64_t>(c.node));
        if (u < c.probability) draw.transmitters.push_back(c.node);
    }
    return draw;
}

}  // namespace manet
