#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "manet/bounds.hpp"
#include "manet/model.hpp"
#include "manet/protocols.hpp"

namespace manet {

// ---------------------------------------------------------------------------
// Scenario geometry
// ---------------------------------------------------------------------------

/// Cluster radius used by the lower-bound layouts: min(r/100, v_max/4).
double xi_cluster(double r, double v_max);

/// Deterministic micro-grid of `count` distinct points inside a disk of
/// radius `radius` around `center`, pitch min(xi/(2n), radius/side).
std::vector<Point> micro_grid(Point center, double radius, std::size_t count, double xi, std::size_t n);

/// Three clusters: A within r of B, B within xi of B', A at (r, r+xi] from B'.
struct StabilityGeometry {
    double r = 1.0;
    double xi = 0.01;
    double rho = 0.0;  ///< micro-disk radius
    Point a, b, bprime;
    std::vector<Point> a_spots;       ///< one per A node
    std::vector<Point> b_spots;       ///< one per member, same order as bprime_spots
    std::vector<Point> bprime_spots;

    static StabilityGeometry build(double r, double xi, std::size_t members, std::size_t a_nodes,
                                   std::size_t n);
};

/// Four clusters and the point x. A and C sit at (r, r+eps] from x; B within
/// r of x; B' within eps of B and beyond r from x and A; C beyond r from A
/// and within r of every B' spot.
struct GeocastGeometry {
    double r = 1.0;
    double eps = 0.01;
    double rho = 0.0;
    Point x, a, b, bprime, c;
    std::vector<Point> a_spots;       ///< one per A node
    std::vector<Point> c_spots;       ///< one per A node, same order
    std::vector<Point> b_spots;       ///< one per member
    std::vector<Point> bprime_spots;

    static GeocastGeometry build(double r, double eps, std::size_t members, std::size_t a_nodes,
                                 std::size_t n);

    /// Point on the arc around B's center through A spot `i`, at `angle`.
    Point arc_point(std::size_t i, double angle) const;
    /// Angle of A spot `i` as seen from B's center.
    double home_angle(std::size_t i) const;
};

/// How one A node travels: u (x -> C) reaches C at slot `u_arrival` of a
/// phase of `length` slots; v leaves A afterwards along the arc and reaches
/// x at slot `length`.
struct PhasePlan {
    long length = 1;
    long u_arrival = 1;
    double required_speed = 0.0;
};

PhasePlan plan_phases(const GeocastGeometry& geo, long alpha);

// ---------------------------------------------------------------------------
// Witness selection and contention
// ---------------------------------------------------------------------------

struct WitnessChoice {
    NodeId node = 0;
    double low_contention_sum = 0.0;   ///< sum over low-contention slots of the chosen node
    double low_contention_total = 0.0; ///< same sum over all members
    std::vector<std::uint8_t> low_slots;
};

/// `probs[j][s]` is member j's transmission probability in window slot s.
/// Low-contention slots have sum_j probs[j][s] < 1 + ln k. Returns the member
/// minimizing its low-contention sum; ties go to the lowest id.
WitnessChoice select_witness_y_oblivious(const std::vector<std::vector<double>>& probs,
                                         std::span<const NodeId> members, double k);

/// Same selection with a caller-supplied contention threshold.
WitnessChoice select_witness(const std::vector<std::vector<double>>& probs,
                             std::span<const NodeId> members, double threshold);

/// Monte Carlo estimate of each member's conditional expected transmission
/// probability over the next `window` steps, conditioning step by step on
/// X_t > gamma/e (when the step's expectation is >= gamma) or X_t <= e*gamma
/// (otherwise). Result is [member][step].
struct ConditionalEstimate {
    std::vector<std::vector<double>> expectations;
    std::size_t accepted = 0;  ///< rollouts that met every conditioning event
    std::size_t rollouts = 0;
};

ConditionalEstimate estimate_conditional_expectations(const WorldState& world, const ProtocolSpec& spec,
                                                      std::span<const NodeId> members, long window,
                                                      double gamma, std::size_t rollouts,
                                                      std::mt19937_64& rng);

enum class ContentionClass { Fair, Oblivious, Adaptive };

/// Decides, per slot, whether the whole informed cluster joins B, and picks
/// the witness y for each window.
class ContentionPolicy {
public:
    virtual ~ContentionPolicy() = default;

    virtual ContentionClass kind() const noexcept = 0;
    /// Threshold compared against contention() to trigger a mass move.
    virtual double threshold() const noexcept = 0;
    /// Fair: the common probability; otherwise the summed expectation.
    virtual double contention(std::span<const Candidate> member_probs) const = 0;
    bool mass_move(std::span<const Candidate> member_probs) const {
        return contention(member_probs) >= threshold();
    }
    /// Witness for slots [first, first + window); window <= 0 means unbounded.
    virtual NodeId choose_witness(const WorldState& world, std::span<const NodeId> members,
                                  long window) = 0;
};

std::unique_ptr<ContentionPolicy> make_fair_policy(double threshold);
std::unique_ptr<ContentionPolicy> make_oblivious_policy(const ProtocolSpec& spec, std::size_t n, double k);
std::unique_ptr<ContentionPolicy> make_adaptive_policy(const ProtocolSpec& spec, std::size_t n,
                                                       double gamma, std::size_t rollouts,
                                                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Adversaries
// ---------------------------------------------------------------------------

enum class Role : std::uint8_t { A, B, Bprime, C, Arc, AtX, ToC, Free };

struct AdversaryLogEntry {
    Slot slot = 0;
    std::vector<Role> roles;
    NodeId witness = 0;       ///< y, 0 when none is placed
    NodeId at_x = 0;          ///< node parked at x (geocast)
    bool interlude = false;   ///< the node at x is being throttled this slot
    bool contention_slot = false;  ///< a mass-move decision was taken
    bool mass_move = false;
    double contention = 0.0;
    double threshold = 0.0;
};

struct SlotPlan {
    std::vector<Point> positions;
    std::vector<ActivationEvent> events;
};

/// What the adversary sees at a slot boundary: the state at the end of the
/// previous slot and the probabilities every informed node will use next.
/// It never sees the protocol's random stream.
struct AdversaryView {
    Slot next_slot = 1;
    const WorldState& world;
    std::span<const Candidate> next_probs;
};

class Adversary {
public:
    virtual ~Adversary() = default;

    /// Layout and activation events for slot 1 (all nodes start inactive).
    virtual SlotPlan initial() = 0;
    virtual SlotPlan plan(const AdversaryView& view) = 0;

    const std::vector<AdversaryLogEntry>& log() const noexcept { return log_; }
    virtual const StabilityGeometry* stability_geometry() const noexcept { return nullptr; }
    virtual const GeocastGeometry* geocast_geometry() const noexcept { return nullptr; }

protected:
    std::vector<AdversaryLogEntry> log_;
};

/// Builds the adversary described by cfg.adversary, checking the parameter
/// preconditions of the lower-bound scenarios (ParameterError on failure).
std::unique_ptr<Adversary> make_adversary(const SimConfig& cfg);

/// Slot-1 layout of a lower-bound scenario (all nodes active).
WorldState build_initial_layout(const SimConfig& cfg);

/// Interlude cap of the oblivious geocast construction:
/// max(1, floor(n / (24 e ln(n/2)))).
long geocast_interlude_cap(std::size_t n);

/// Mass-move thresholds of the fair constructions.
double stability_fair_threshold(double k);   ///< 4 ln k / k
double geocast_fair_threshold(double n);     ///< 8 ln(n/2) / n

}  // namespace manet
