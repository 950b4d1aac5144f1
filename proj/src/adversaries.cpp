#include "manet/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

#include "manet/error.hpp"
#include "manet/rng.hpp"

namespace manet {

namespace {
constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;
}  // namespace

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

double xi_cluster(double r, double v_max) { return std::min(r / 100.0, v_max / 4.0); }

std::vector<Point> micro_grid(Point center, double radius, std::size_t count, double xi, std::size_t n) {
    std::vector<Point> out;
    if (count == 0) return out;
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
    const double pitch = std::min(xi / (2.0 * static_cast<double>(n)), radius / static_cast<double>(side));
    const double half = (static_cast<double>(side) - 1.0) / 2.0;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double gx = static_cast<double>(i % side) - half;
        const double gy = static_cast<double>(i / side) - half;
        out.push_back({center.x + gx * pitch, center.y + gy * pitch});
    }
    return out;
}

namespace {

std::vector<Point> shifted(const std::vector<Point>& pts, Point from, Point to) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back({p.x + (to.x - from.x), p.y + (to.y - from.y)});
    return out;
}

}  // namespace

StabilityGeometry StabilityGeometry::build(double r, double xi, std::size_t members, std::size_t a_nodes,
                                           std::size_t n) {
    StabilityGeometry g;
    g.r = r;
    g.xi = xi;
    g.rho = xi / 16.0;
    g.bprime = {0.0, 0.0};
    g.b = {0.75 * xi, 0.0};
    g.a = {r + 0.5 * xi, 0.0};
    g.bprime_spots = micro_grid(g.bprime, g.rho, members, xi, n);
    g.b_spots = shifted(g.bprime_spots, g.bprime, g.b);
    g.a_spots = micro_grid(g.a, g.rho, a_nodes, xi, n);
    return g;
}

GeocastGeometry GeocastGeometry::build(double r, double eps, std::size_t members, std::size_t a_nodes,
                                       std::size_t n) {
    GeocastGeometry g;
    g.r = r;
    g.eps = eps;
    g.rho = eps / 16.0;
    g.x = {0.0, 0.0};
    g.b = {-(r - eps / 4.0), 0.0};
    g.bprime = {-(r + eps / 4.0), 0.0};

    // A: equidistant (r + eps/2) from x and from B's center.
    const double ring = r + eps / 2.0;
    const double half_base = (r - eps / 4.0) / 2.0;
    g.a = {-half_base, std::sqrt(ring * ring - half_base * half_base)};

    // C: on the same ring around x, below the axis, at r - 3 rho from B'.
    const double dist_bp = r + eps / 4.0;
    const double target = r - 3.0 * g.rho;
    const double cos_t = (ring * ring + dist_bp * dist_bp - target * target) / (2.0 * ring * dist_bp);
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    g.c = {-ring * cos_t, -ring * sin_t};

    g.bprime_spots = micro_grid(g.bprime, g.rho, members, eps, n);
    g.b_spots = shifted(g.bprime_spots, g.bprime, g.b);
    g.a_spots = micro_grid(g.a, g.rho, a_nodes, eps, n);
    g.c_spots = shifted(g.a_spots, g.a, g.c);
    return g;
}

double GeocastGeometry::home_angle(std::size_t i) const {
    const Point& h = a_spots.at(i);
    return std::atan2(h.y - b.y, h.x - b.x);
}

Point GeocastGeometry::arc_point(std::size_t i, double angle) const {
    return polar(b, distance(a_spots.at(i), b), angle);
}

namespace {

// Worst per-slot displacement for a phase of `length` slots where u reaches
// C at `u_arrival`.
double phase_speed(const GeocastGeometry& geo, long length, long u_arrival) {
    double worst = 0.0;
    for (std::size_t i = 0; i < geo.a_spots.size(); ++i) {
        worst = std::max(worst, distance(geo.x, geo.c_spots[i]) / static_cast<double>(u_arrival));
        const long arc_slots = length - u_arrival - 1;
        if (arc_slots <= 0) {
            worst = std::max(worst, distance(geo.a_spots[i], geo.x));
            continue;
        }
        const double radius = distance(geo.a_spots[i], geo.b);
        const double step = geo.home_angle(i) / static_cast<double>(arc_slots);
        worst = std::max(worst, 2.0 * radius * std::sin(std::abs(step) / 2.0));
        worst = std::max(worst, distance(geo.arc_point(i, 0.0), geo.x));
    }
    return worst;
}

}  // namespace

PhasePlan plan_phases(const GeocastGeometry& geo, long alpha) {
    PhasePlan best;
    best.length = std::max<long>(alpha, 1);
    best.required_speed = std::numeric_limits<double>::infinity();
    for (long m = 1; m <= best.length; ++m) {
        const double s = phase_speed(geo, best.length, m);
        if (s < best.required_speed) {
            best.required_speed = s;
            best.u_arrival = m;
        }
    }
    return best;
}

long geocast_interlude_cap(std::size_t n) {
    const double nn = static_cast<double>(n);
    const double raw = nn / (24.0 * kE * std::log(nn / 2.0));
    return std::max<long>(1, static_cast<long>(std::floor(raw)));
}

double stability_fair_threshold(double k) { return 4.0 * std::log(k) / k; }
double geocast_fair_threshold(double n) { return 8.0 * std::log(n / 2.0) / n; }

// ---------------------------------------------------------------------------
// Witness selection
// ---------------------------------------------------------------------------

WitnessChoice select_witness(const std::vector<std::vector<double>>& probs,
                             std::span<const NodeId> members, double threshold) {
    if (members.empty()) throw ParameterError("witness selection over an empty member set");
    if (probs.size() != members.size()) throw ParameterError("witness selection: one row per member");
    const std::size_t window = probs.front().size();
    for (const auto& row : probs)
        if (row.size() != window) throw ParameterError("witness selection: ragged probability rows");

    WitnessChoice out;
    out.low_slots.assign(window, 0);
    for (std::size_t s = 0; s < window; ++s) {
        double sum = 0.0;
        for (const auto& row : probs) sum += row[s];
        out.low_slots[s] = sum < threshold;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < members.size(); ++j) {
        double sum = 0.0;
        for (std::size_t s = 0; s < window; ++s)
            if (out.low_slots[s]) sum += probs[j][s];
        out.low_contention_total += sum;
        if (sum < best || (sum == best && members[j] < out.node)) {
            best = sum;
            out.node = members[j];
        }
    }
    out.low_contention_sum = best;
    return out;
}

WitnessChoice select_witness_y_oblivious(const std::vector<std::vector<double>>& probs,
                                         std::span<const NodeId> members, double k) {
    if (!(k > 0)) throw ParameterError("witness selection: k must be positive");
    return select_witness(probs, members, 1.0 + std::log(k));
}

ConditionalEstimate estimate_conditional_expectations(const WorldState& world, const ProtocolSpec& spec,
                                                      std::span<const NodeId> members, long window,
                                                      double gamma, std::size_t rollouts,
                                                      std::mt19937_64& rng) {
    if (rollouts < 1) throw ParameterError("adaptive adversary needs at least one rollout");
    if (window < 1) throw ParameterError("conditional estimate needs a positive window");
    const std::size_t k = members.size();
    const auto w = static_cast<std::size_t>(window);

    std::vector<History> hist(k);
    std::vector<std::size_t> base_step(k), base_len(k);
    for (std::size_t j = 0; j < k; ++j) {
        const NodeState& node = world.node(members[j]);
        hist[j] = node.history;
        base_step[j] = node.local_step;
        base_len[j] = node.history.size();
    }

    std::vector<std::vector<double>> conditioned(k, std::vector<double>(w, 0.0));
    std::vector<std::vector<double>> plain(k, std::vector<double>(w, 0.0));
    std::vector<std::size_t> alive_count(w, 0);
    std::vector<double> p(k);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ConditionalEstimate out;
    out.rollouts = rollouts;
    for (std::size_t m = 0; m < rollouts; ++m) {
        bool alive = true;
        for (std::size_t s = 0; s < w; ++s) {
            double expected = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                p[j] = transmission_probability(spec, world.size(), members[j], base_step[j] + s + 1, hist[j]);
                expected += p[j];
                plain[j][s] += p[j];
                if (alive) conditioned[j][s] += p[j];
            }
            if (alive) ++alive_count[s];
            int transmitted = 0;
            for (std::size_t j = 0; j < k; ++j) {
                const bool tx = unit(rng) < p[j];
                transmitted += tx;
                hist[j].push_back(tx ? 'T' : 'R');
            }
            const bool held = expected >= gamma ? transmitted > gamma / kE : transmitted <= kE * gamma;
            alive = alive && held;
        }
        if (alive) ++out.accepted;
        for (std::size_t j = 0; j < k; ++j) hist[j].resize(base_len[j]);
    }

    out.expectations.assign(k, std::vector<double>(w, 0.0));
    for (std::size_t s = 0; s < w; ++s) {
        for (std::size_t j = 0; j < k; ++j) {
            out.expectations[j][s] = alive_count[s] > 0
                ? conditioned[j][s] / static_cast<double>(alive_count[s])
                : plain[j][s] / static_cast<double>(rollouts);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contention policies
// ---------------------------------------------------------------------------

namespace {

class FairPolicy final : public ContentionPolicy {
public:
    explicit FairPolicy(double threshold) : threshold_(threshold) {}

    ContentionClass kind() const noexcept override { return ContentionClass::Fair; }
    double threshold() const noexcept override { return threshold_; }

    double contention(std::span<const Candidate> probs) const override {
        if (probs.empty()) return 0.0;
        const double p = probs.front().probability;
        for (const auto& c : probs) {
            if (c.probability != p) {
                std::ostringstream os;
                os << "fair adversary needs a fair protocol: node " << probs.front().node << " uses " << p
                   << " but node " << c.node << " uses " << c.probability;
                throw ParameterError(os.str());
            }
        }
        return p;
    }

    NodeId choose_witness(const WorldState&, std::span<const NodeId> members, long) override {
        if (members.empty()) throw ParameterError("witness selection over an empty member set");
        return *std::min_element(members.begin(), members.end());
    }

private:
    double threshold_;
};

double summed(std::span<const Candidate> probs) {
    double s = 0.0;
    for (const auto& c : probs) s += c.probability;
    return s;
}

class ObliviousPolicy final : public ContentionPolicy {
public:
    ObliviousPolicy(ProtocolSpec spec, std::size_t n, double k) : spec_(std::move(spec)), n_(n), k_(k) {}

    ContentionClass kind() const noexcept override { return ContentionClass::Oblivious; }
    double threshold() const noexcept override { return 1.0 + std::log(k_); }
    double contention(std::span<const Candidate> probs) const override { return summed(probs); }

    NodeId choose_witness(const WorldState& world, std::span<const NodeId> members, long window) override {
        const auto w = static_cast<std::size_t>(std::max<long>(window, 1));
        std::vector<std::vector<double>> probs(members.size(), std::vector<double>(w));
        for (std::size_t j = 0; j < members.size(); ++j) {
            const std::size_t step = world.node(members[j]).local_step;
            for (std::size_t s = 0; s < w; ++s)
                probs[j][s] = transmission_probability(spec_, n_, members[j], step + s + 1, {});
        }
        return select_witness_y_oblivious(probs, members, k_).node;
    }

private:
    ProtocolSpec spec_;
    std::size_t n_;
    double k_;
};

class AdaptivePolicy final : public ContentionPolicy {
public:
    AdaptivePolicy(ProtocolSpec spec, double gamma, std::size_t rollouts, std::uint64_t seed)
        : spec_(std::move(spec)), gamma_(gamma), rollouts_(rollouts), rng_(seed) {}

    ContentionClass kind() const noexcept override { return ContentionClass::Adaptive; }
    double threshold() const noexcept override { return gamma_ / kE; }
    double contention(std::span<const Candidate> probs) const override { return summed(probs); }

    NodeId choose_witness(const WorldState& world, std::span<const NodeId> members, long window) override {
        const auto est = estimate_conditional_expectations(world, spec_, members, std::max<long>(window, 1),
                                                           gamma_, rollouts_, rng_);
        return select_witness(est.expectations, members, gamma_).node;
    }

private:
    ProtocolSpec spec_;
    double gamma_;
    std::size_t rollouts_;
    std::mt19937_64 rng_;
};

}  // namespace

std::unique_ptr<ContentionPolicy> make_fair_policy(double threshold) {
    return std::make_unique<FairPolicy>(threshold);
}

std::unique_ptr<ContentionPolicy> make_oblivious_policy(const ProtocolSpec& spec, std::size_t n, double k) {
    if (spec.kind() == ProtocolKind::LocallyAdaptive)
        throw ParameterError("oblivious adversary needs an oblivious protocol");
    return std::make_unique<ObliviousPolicy>(spec, n, k);
}

std::unique_ptr<ContentionPolicy> make_adaptive_policy(const ProtocolSpec& spec, std::size_t, double gamma,
                                                       std::size_t rollouts, std::uint64_t seed) {
    if (spec.kind() != ProtocolKind::LocallyAdaptive)
        throw ParameterError("adaptive adversary needs a locally-adaptive protocol");
    if (rollouts < 1) throw ParameterError("adaptive adversary needs at least one rollout");
    return std::make_unique<AdaptivePolicy>(spec, gamma, rollouts, seed);
}

// ---------------------------------------------------------------------------
// Adversary implementations
// ---------------------------------------------------------------------------

namespace {

std::vector<ActivationEvent> all_up(std::size_t n) {
    std::vector<ActivationEvent> ev;
    ev.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ev.push_back({id_of(i), true});
    return ev;
}

std::vector<Candidate> restrict_to(std::span<const Candidate> probs, const std::vector<std::uint8_t>& member) {
    std::vector<Candidate> out;
    for (const auto& c : probs)
        if (member[index_of(c.node)]) out.push_back(c);
    return out;
}

bool all_covered(const WorldState& world, const std::vector<NodeId>& ids) {
    return std::all_of(ids.begin(), ids.end(), [&](NodeId id) { return world.node(id).covered; });
}

const std::uint64_t kAdversaryStream = 0x6164766572736172ULL;

/// Shared machinery of the two lower-bound scenario families: an informed
/// cluster (members, B'/B) throttled by a contention policy.
class ClusterAdversary : public Adversary {
protected:
    ClusterAdversary(const SimConfig& cfg, std::size_t members, std::unique_ptr<ContentionPolicy> policy)
        : cfg_(cfg), policy_(std::move(policy)), is_member_(cfg.n, 0) {
        for (std::size_t i = 0; i < members; ++i) {
            members_.push_back(id_of(i));
            is_member_[i] = 1;
        }
        for (std::size_t i = members; i < cfg.n; ++i) outsiders_.push_back(id_of(i));
    }

    /// Contention decision for the coming slot, recorded in `entry`.
    bool decide_mass_move(const AdversaryView& view, AdversaryLogEntry& entry) {
        const double value = policy_->contention(view.next_probs.empty()
                                                     ? std::span<const Candidate>{}
                                                     : std::span<const Candidate>(view.next_probs));
        // Fair policies compare the common probability; the others sum over members.
        double stat = value;
        if (policy_->kind() != ContentionClass::Fair) {
            const auto mine = restrict_to(view.next_probs, is_member_);
            stat = policy_->contention(mine);
        }
        entry.contention_slot = true;
        entry.contention = stat;
        entry.threshold = policy_->threshold();
        entry.mass_move = stat >= policy_->threshold();
        return entry.mass_move;
    }

    SimConfig cfg_;
    std::unique_ptr<ContentionPolicy> policy_;
    std::vector<NodeId> members_;
    std::vector<NodeId> outsiders_;
    std::vector<std::uint8_t> is_member_;
};

class StabilityAdversary final : public ClusterAdversary {
public:
    StabilityAdversary(const SimConfig& cfg, std::size_t k, std::unique_ptr<ContentionPolicy> policy, long window)
        : ClusterAdversary(cfg, k, std::move(policy)), window_(window) {
        const double xi = xi_cluster(cfg.r, cfg.v_max);
        geo_ = StabilityGeometry::build(cfg.r, xi, k, cfg.n - k, cfg.n);
    }

    const StabilityGeometry* stability_geometry() const noexcept override { return &geo_; }

    SlotPlan initial() override {
        AdversaryLogEntry entry;
        entry.slot = 1;
        SlotPlan plan{layout(0, false, entry), all_up(cfg_.n)};
        log_.push_back(std::move(entry));
        return plan;
    }

    SlotPlan plan(const AdversaryView& view) override {
        AdversaryLogEntry entry;
        entry.slot = view.next_slot;
        if (!started_ && all_covered(view.world, members_)) started_ = true;

        bool mass = false;
        if (started_) {
            if (window_ > 0 ? remaining_ == 0 : witness_ == 0) {
                witness_ = policy_->choose_witness(view.world, members_, window_);
                remaining_ = window_;
            }
            if (window_ > 0) --remaining_;
            mass = decide_mass_move(view, entry);
        }
        SlotPlan plan{layout(started_ ? witness_ : 0, mass, entry), {}};
        log_.push_back(std::move(entry));
        return plan;
    }

private:
    std::vector<Point> layout(NodeId witness, bool mass, AdversaryLogEntry& entry) const {
        std::vector<Point> pos(cfg_.n);
        entry.roles.assign(cfg_.n, Role::A);
        entry.witness = witness;
        for (std::size_t j = 0; j < members_.size(); ++j) {
            const std::size_t i = index_of(members_[j]);
            const bool in_b = mass || members_[j] == witness;
            pos[i] = in_b ? geo_.b_spots[j] : geo_.bprime_spots[j];
            entry.roles[i] = in_b ? Role::B : Role::Bprime;
        }
        for (std::size_t j = 0; j < outsiders_.size(); ++j) pos[index_of(outsiders_[j])] = geo_.a_spots[j];
        return pos;
    }

    StabilityGeometry geo_;
    long window_;         ///< 0: witness fixed forever
    long remaining_ = 0;
    NodeId witness_ = 0;
    bool started_ = false;
};

class GeocastAdversary final : public ClusterAdversary {
public:
    GeocastAdversary(const SimConfig& cfg, std::unique_ptr<ContentionPolicy> policy, long cap)
        : ClusterAdversary(cfg, cfg.n - cfg.n / 2, std::move(policy)), cap_(cap) {
        const double eps = xi_cluster(cfg.r, cfg.v_max);
        geo_ = GeocastGeometry::build(cfg.r, eps, members_.size(), outsiders_.size(), cfg.n);
        phases_ = plan_phases(geo_, cfg.alpha);
        for (std::size_t j = 0; j < outsiders_.size(); ++j) slot_of_[outsiders_[j]] = j;
        queue_.assign(outsiders_.begin(), outsiders_.end());
    }

    const GeocastGeometry* geocast_geometry() const noexcept override { return &geo_; }
    const PhasePlan& phases() const noexcept { return phases_; }

    SlotPlan initial() override {
        pos_.assign(cfg_.n, Point{});
        roles_.assign(cfg_.n, Role::A);
        for (std::size_t j = 0; j < members_.size(); ++j) {
            pos_[index_of(members_[j])] = geo_.bprime_spots[j];
            roles_[index_of(members_[j])] = Role::Bprime;
        }
        for (std::size_t j = 0; j < outsiders_.size(); ++j) pos_[index_of(outsiders_[j])] = geo_.a_spots[j];
        AdversaryLogEntry entry;
        entry.slot = 1;
        entry.roles = roles_;
        log_.push_back(std::move(entry));
        return {pos_, all_up(cfg_.n)};
    }

    SlotPlan plan(const AdversaryView& view) override {
        AdversaryLogEntry entry;
        entry.slot = view.next_slot;

        if (stage_ == Stage::Waiting && all_covered(view.world, members_)) start_phase(0);
        if (stage_ == Stage::Interlude) {
            const bool covered = view.world.node(at_x_).covered;
            const bool capped = cap_ > 0 && interlude_slots_ >= cap_;
            if (covered || capped) {
                park_members(0, false);
                const NodeId leaving = at_x_;
                at_x_ = 0;
                start_phase(leaving);
            }
        }
        if (stage_ == Stage::Moving) advance_phase(view);
        if (stage_ == Stage::Interlude) {
            ++interlude_slots_;
            entry.interlude = true;
            park_members(witness_, decide_mass_move(view, entry));
        }

        entry.roles = roles_;
        entry.witness = stage_ == Stage::Interlude ? witness_ : 0;
        entry.at_x = at_x_;
        log_.push_back(std::move(entry));
        return {pos_, {}};
    }

private:
    enum class Stage { Waiting, Moving, Interlude, Done };

    void start_phase(NodeId leaving) {
        u_ = leaving;
        v_ = 0;
        if (!queue_.empty()) {
            v_ = queue_.front();
            queue_.pop_front();
        }
        step_ = 0;
        stage_ = (u_ == 0 && v_ == 0) ? Stage::Done : Stage::Moving;
    }

    void advance_phase(const AdversaryView& view) {
        ++step_;
        const long len = phases_.length;
        const long m = phases_.u_arrival;
        if (u_ != 0) {
            const std::size_t j = slot_of_.at(u_);
            const std::size_t i = index_of(u_);
            if (step_ >= m) {
                pos_[i] = geo_.c_spots[j];
                roles_[i] = Role::C;
            } else {
                pos_[i] = lerp(geo_.x, geo_.c_spots[j], static_cast<double>(step_) / static_cast<double>(m));
                roles_[i] = Role::ToC;
            }
        }
        if (v_ != 0) {
            const std::size_t j = slot_of_.at(v_);
            const std::size_t i = index_of(v_);
            const long arc_slots = len - m - 1;
            if (step_ >= len) {
                pos_[i] = geo_.x;
                roles_[i] = Role::AtX;
            } else if (step_ > m && arc_slots > 0) {
                const double frac = 1.0 - static_cast<double>(step_ - m) / static_cast<double>(arc_slots);
                pos_[i] = geo_.arc_point(j, geo_.home_angle(j) * frac);
                roles_[i] = Role::Arc;
            }
        }
        if (step_ >= len) {
            if (v_ != 0) {
                at_x_ = v_;
                interlude_slots_ = 0;
                witness_ = policy_->choose_witness(view.world, members_, cap_);
                stage_ = Stage::Interlude;
            } else {
                stage_ = Stage::Done;
            }
            u_ = v_ = 0;
        }
    }

    void park_members(NodeId witness, bool mass) {
        for (std::size_t j = 0; j < members_.size(); ++j) {
            const std::size_t i = index_of(members_[j]);
            const bool in_b = mass || members_[j] == witness;
            pos_[i] = in_b ? geo_.b_spots[j] : geo_.bprime_spots[j];
            roles_[i] = in_b ? Role::B : Role::Bprime;
        }
    }

    GeocastGeometry geo_;
    PhasePlan phases_;
    long cap_;  ///< 0: interlude lasts until the node at x is covered
    std::map<NodeId, std::size_t> slot_of_;
    std::deque<NodeId> queue_;
    std::vector<Point> pos_;
    std::vector<Role> roles_;
    Stage stage_ = Stage::Waiting;
    NodeId u_ = 0, v_ = 0, at_x_ = 0, witness_ = 0;
    long step_ = 0;
    long interlude_slots_ = 0;
};

class StaticAdversary final : public Adversary {
public:
    explicit StaticAdversary(std::vector<Point> positions) : positions_(std::move(positions)) {}

    SlotPlan initial() override { return {positions_, all_up(positions_.size())}; }
    SlotPlan plan(const AdversaryView&) override { return {positions_, {}}; }

private:
    std::vector<Point> positions_;
};

class ScriptedAdversary final : public Adversary {
public:
    explicit ScriptedAdversary(ScriptTable table) : table_(std::move(table)) {}

    SlotPlan initial() override {
        SlotPlan plan;
        for (std::size_t i = 0; i < table_.at(1).size(); ++i) {
            const auto& e = table_.at(1)[i];
            plan.positions.push_back(e.pos);
            if (e.active) plan.events.push_back({id_of(i), true});
        }
        return plan;
    }

    SlotPlan plan(const AdversaryView& view) override {
        SlotPlan plan;
        const auto& row = table_.at(view.next_slot);
        for (std::size_t i = 0; i < row.size(); ++i) {
            plan.positions.push_back(row[i].pos);
            if (row[i].active != view.world.nodes[i].active) plan.events.push_back({id_of(i), row[i].active});
        }
        return plan;
    }

private:
    ScriptTable table_;
};

void require(std::vector<std::string>& bad, bool ok, std::string what) {
    if (!ok) bad.push_back(std::move(what));
}

}  // namespace

std::unique_ptr<Adversary> make_adversary(const SimConfig& cfg) {
    const AdversarySpec& spec = cfg.adversary;
    const double n = static_cast<double>(cfg.n);
    const std::uint64_t adv_seed = mix_seed(cfg.seed, kAdversaryStream, 0);
    std::vector<std::string> bad;

    if (is_stability(spec.kind) || is_geocast(spec.kind)) {
        const double xi = xi_cluster(cfg.r, cfg.v_max);
        require(bad, cfg.d >= cfg.r + xi, "d >= r + xi_cluster");
    }

    switch (spec.kind) {
    case AdversaryKind::StabilityFair:
    case AdversaryKind::StabilityOblivious:
    case AdversaryKind::StabilityAdaptive: {
        const double k = static_cast<double>(spec.k);
        require(bad, spec.k < cfg.n, "k < n");
        std::unique_ptr<ContentionPolicy> policy;
        long window = cfg.beta;
        if (spec.kind == AdversaryKind::StabilityFair) {
            require(bad, spec.k >= 45, "45 <= k");
            if (bad.empty()) policy = make_fair_policy(stability_fair_threshold(k));
            window = 0;
        } else if (spec.kind == AdversaryKind::StabilityOblivious) {
            require(bad, k >= std::exp(3.0), "e^3 <= k");
            if (bad.empty()) policy = make_oblivious_policy(cfg.protocol, cfg.n, k);
        } else {
            require(bad, k > bounds::adaptive_k_min(), "k > (2/(1-1/e))^(xi/e)");
            require(bad, spec.rollouts >= 1, "rollouts >= 1");
            if (bad.empty()) {
                const double gamma = bounds::stability_adaptive_params(k, static_cast<double>(cfg.beta)).gamma;
                policy = make_adaptive_policy(cfg.protocol, cfg.n, gamma, spec.rollouts, adv_seed);
            }
        }
        if (!bad.empty()) throw PreconditionError(bad);
        return std::make_unique<StabilityAdversary>(cfg, spec.k, std::move(policy), window);
    }
    case AdversaryKind::GeocastFair:
    case AdversaryKind::GeocastOblivious:
    case AdversaryKind::GeocastAdaptive: {
        if (cfg.alpha > 0)
            require(bad, cfg.v_max > kPi * cfg.r / (6.0 * static_cast<double>(cfg.alpha)),
                    "v_max > pi r / (6 alpha)");
        const std::size_t members = cfg.n - cfg.n / 2;
        std::unique_ptr<ContentionPolicy> policy;
        long cap = 0;
        if (spec.kind == AdversaryKind::GeocastFair) {
            require(bad, cfg.n > 24, "n > 24");
            if (bad.empty()) policy = make_fair_policy(geocast_fair_threshold(n));
        } else if (spec.kind == AdversaryKind::GeocastOblivious) {
            require(bad, cfg.n > 3, "n > 3");
            cap = geocast_interlude_cap(cfg.n);
            if (bad.empty()) policy = make_oblivious_policy(cfg.protocol, cfg.n, static_cast<double>(members));
        } else {
            require(bad, cfg.n > 17, "n > 17");
            require(bad, spec.rollouts >= 1, "rollouts >= 1");
            cap = geocast_interlude_cap(cfg.n);
            if (bad.empty()) {
                const double gamma = bounds::stability_adaptive_params(static_cast<double>(members),
                                                                       static_cast<double>(cap)).gamma;
                policy = make_adaptive_policy(cfg.protocol, cfg.n, gamma, spec.rollouts, adv_seed);
            }
        }
        if (!bad.empty()) throw PreconditionError(bad);
        auto adv = std::make_unique<GeocastAdversary>(cfg, std::move(policy), cap);
        const double need = adv->phases().required_speed;
        if (!(cfg.v_max >= need)) {
            std::ostringstream os;
            os << "v_max >= " << need << " (per-slot displacement of the phase paths for alpha = " << cfg.alpha
               << ")";
            throw PreconditionError({os.str()});
        }
        return adv;
    }
    case AdversaryKind::Static: {
        auto positions = spec.positions.empty() ? line_layout(cfg.n, 0.9 * cfg.r) : spec.positions;
        if (positions.size() != cfg.n)
            throw ParameterError("static adversary needs exactly n positions");
        return std::make_unique<StaticAdversary>(std::move(positions));
    }
    case AdversaryKind::Scripted: {
        if (!spec.script) throw ParameterError("scripted adversary needs a table");
        spec.script->validate(cfg.n);
        if (!spec.script->cyclic && static_cast<long>(spec.script->length()) < cfg.slot_budget())
            throw ParameterError("script table has " + std::to_string(spec.script->length()) +
                                 " slots, shorter than max_slots " + std::to_string(cfg.slot_budget()));
        return std::make_unique<ScriptedAdversary>(*spec.script);
    }
    }
    throw ParameterError("unsupported adversary kind");
}

WorldState build_initial_layout(const SimConfig& cfg) {
    auto adv = make_adversary(cfg);
    const SlotPlan plan = adv->initial();
    WorldState world = WorldState::with_nodes(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) world.nodes[i].pos = plan.positions.at(i);
    return apply_activation(world, plan.events);
}

}  // namespace manet
