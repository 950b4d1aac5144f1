#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "manet/rng.hpp"
#include "manet/types.hpp"

namespace manet {

// ---------------------------------------------------------------------------
// Protocol descriptions
// ---------------------------------------------------------------------------

enum class ProtocolKind { FairUniform, ObliviousSchedule, LocallyAdaptive };

std::string_view to_string(ProtocolKind kind);

/// Every informed node transmits with p = ln n / n in every step.
struct FairUniform {};

/// Transmission-probability sequence: a finite prefix followed by a tail that
/// repeats forever.
struct Schedule {
    std::vector<double> prefix;
    std::vector<double> tail;

    /// Probability for the given 1-based local step.
    double at(std::size_t step) const;
};

struct ObliviousSchedule {
    std::map<NodeId, Schedule> schedules;
    /// Used for any node without an explicit entry.
    std::optional<Schedule> fallback;
};

/// A named locally adaptive rule; parameters are rule-specific.
struct LocallyAdaptive {
    std::string rule;
    std::map<std::string, double> params;
};

struct ProtocolSpec {
    std::variant<FairUniform, ObliviousSchedule, LocallyAdaptive> params;

    ProtocolKind kind() const noexcept { return static_cast<ProtocolKind>(params.index()); }

    static ProtocolSpec fair_uniform() { return {FairUniform{}}; }
    /// Same schedule for every node; fair and oblivious.
    static ProtocolSpec uniform_schedule(Schedule schedule);
    static ProtocolSpec adaptive(std::string rule, std::map<std::string, double> params = {});

    /// Throws ParameterError on probabilities outside [0,1], empty tails or unknown rules.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Probability sources
// ---------------------------------------------------------------------------

/// ln(n)/n, the upper-bound protocol's probability. Requires n > 2.
double uniform_fair_prob(std::size_t n);

double schedule_prob(const ProtocolSpec& spec, NodeId node, std::size_t local_step);

/// `history` must hold exactly local_step - 1 symbols.
double adaptive_prob(const ProtocolSpec& spec, NodeId node, std::size_t local_step,
                     std::string_view history);

/// Names of the registered adaptive rules.
std::vector<std::string> adaptive_rules();

/// Probability the protocol assigns to `node` in its `local_step`-th step
/// given the first local_step - 1 history symbols. Dispatches on the kind.
double transmission_probability(const ProtocolSpec& spec, std::size_t n, NodeId node,
                                std::size_t local_step, std::string_view history);

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

struct Candidate {
    NodeId node = 0;
    double probability = 0.0;
};

struct TransmissionDraw {
    std::vector<Candidate> candidates;  ///< informed active nodes, ascending id
    std::vector<NodeId> transmitters;   ///< ascending id
};

/// Probabilities each informed active node would use in its next step.
std::vector<Candidate> next_step_probabilities(const WorldState& world, const ProtocolSpec& spec);

/// Samples the transmit set for `slot`: one uniform variate per candidate,
/// drawn from the (slot, node) counter of `rng`. Uninformed, uncovered and
/// inactive nodes never transmit.
TransmissionDraw decide_transmissions(const WorldState& world, const ProtocolSpec& spec,
                                      const CounterRng& rng, Slot slot);

}  // namespace manet
