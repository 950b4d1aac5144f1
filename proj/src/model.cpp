#include "manet/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "manet/bounds.hpp"
#include "manet/error.hpp"

namespace manet {

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

}  // namespace

PreconditionError::PreconditionError(std::vector<std::string> violated)
    : ParameterError("precondition violated: " + join(violated)), violated_(std::move(violated)) {}

WorldState WorldState::with_nodes(std::size_t n) {
    WorldState w;
    w.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.nodes[i].id = id_of(i);
    return w;
}

Snapshot Snapshot::of(const WorldState& world) {
    Snapshot s;
    const std::size_t n = world.size();
    s.positions.reserve(n);
    s.active.reserve(n);
    s.covered.reserve(n);
    s.informed.reserve(n);
    for (const auto& node : world.nodes) {
        s.positions.push_back(node.pos);
        s.active.push_back(node.active);
        s.covered.push_back(node.covered);
        s.informed.push_back(node.informed);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Scenario descriptions
// ---------------------------------------------------------------------------

namespace {

constexpr std::pair<AdversaryKind, std::string_view> kAdversaryNames[] = {
    {AdversaryKind::StabilityFair, "stability-fair"},
    {AdversaryKind::StabilityOblivious, "stability-oblivious"},
    {AdversaryKind::StabilityAdaptive, "stability-adaptive"},
    {AdversaryKind::GeocastFair, "geocast-fair"},
    {AdversaryKind::GeocastOblivious, "geocast-oblivious"},
    {AdversaryKind::GeocastAdaptive, "geocast-adaptive"},
    {AdversaryKind::Static, "static"},
    {AdversaryKind::Scripted, "scripted"},
};

}  // namespace

std::string_view to_string(AdversaryKind kind) {
    for (const auto& [k, name] : kAdversaryNames)
        if (k == kind) return name;
    return "unknown";
}

AdversaryKind adversary_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kAdversaryNames)
        if (n == name) return k;
    throw ParameterError("unknown adversary kind '" + std::string(name) + "'");
}

bool is_stability(AdversaryKind kind) noexcept {
    return kind == AdversaryKind::StabilityFair || kind == AdversaryKind::StabilityOblivious ||
           kind == AdversaryKind::StabilityAdaptive;
}

bool is_geocast(AdversaryKind kind) noexcept {
    return kind == AdversaryKind::GeocastFair || kind == AdversaryKind::GeocastOblivious ||
           kind == AdversaryKind::GeocastAdaptive;
}

const std::vector<ScriptEntry>& ScriptTable::at(Slot slot) const {
    if (slots.empty()) throw MalformedInput("script table is empty");
    if (slot < 1) throw MalformedInput("script slot must be >= 1");
    auto row = static_cast<std::size_t>(slot - 1);
    if (cyclic) row %= slots.size();
    if (row >= slots.size())
        throw MalformedInput("script table has no row for slot " + std::to_string(slot));
    return slots[row];
}

void ScriptTable::validate(std::size_t n) const {
    if (slots.empty()) throw MalformedInput("script table is empty");
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (slots[s].size() != n) {
            std::ostringstream os;
            os << "script slot " << s + 1 << " defines " << slots[s].size() << " nodes, expected " << n;
            throw MalformedInput(os.str());
        }
        for (const auto& e : slots[s])
            if (!std::isfinite(e.pos.x) || !std::isfinite(e.pos.y))
                throw MalformedInput("script slot " + std::to_string(s + 1) + " has a non-finite position");
    }
}

std::vector<Point> line_layout(std::size_t n, double spacing) {
    std::vector<Point> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {static_cast<double>(i) * spacing, 0.0};
    return out;
}

namespace {

std::vector<ScriptEntry> path_row(std::size_t n, double hop) {
    std::vector<ScriptEntry> row;
    row.reserve(n);
    for (const auto& p : line_layout(n, hop)) row.push_back({p, true});
    return row;
}

}  // namespace

ScriptTable alternating_path_script(std::size_t n, double r) {
    ScriptTable t;
    t.cyclic = true;
    t.slots.push_back(path_row(n, 0.9 * r));
    auto zigzag = path_row(n, 0.9 * r);
    for (std::size_t i = 1; i < n; i += 2) zigzag[i].pos.y = 0.5 * r;
    t.slots.push_back(std::move(zigzag));
    return t;
}

ScriptTable static_path_script(std::size_t n, double r) {
    ScriptTable t;
    t.cyclic = true;
    t.slots.push_back(path_row(n, 0.9 * r));
    return t;
}

// ---------------------------------------------------------------------------
// SimConfig
// ---------------------------------------------------------------------------

void SimConfig::validate() const {
    std::vector<std::string> bad;
    if (n < 2) bad.push_back("n >= 2");
    if (!(r > 0) || !std::isfinite(r)) bad.push_back("r > 0");
    if (beta < 1) bad.push_back("beta >= 1");
    if (alpha < 0) bad.push_back("alpha >= 0");
    if (!(v_max > 0)) bad.push_back("v_max > 0");
    if (max_slots < 0) bad.push_back("max_slots >= 1");
    if (max_slots == 0 && n <= 2) bad.push_back("max_slots must be given explicitly when n <= 2");
    if (predicate == Predicate::Geocast && !(d > 0)) bad.push_back("d > 0 for the geocast predicate");
    if (!bad.empty()) throw ParameterError("invalid configuration: " + join(bad));
    protocol.validate();
}

long SimConfig::slot_budget() const {
    if (max_slots > 0) return max_slots;
    const double ub = bounds::ub_budget(static_cast<double>(n), static_cast<double>(alpha),
                                        static_cast<double>(beta));
    return static_cast<long>(std::ceil(4.0 * ub));
}

const SlotRecord& Trace::at(Slot slot) const {
    if (slot < 1 || slot > last_slot())
        throw MalformedInput("slot " + std::to_string(slot) + " outside trace [1, " +
                             std::to_string(last_slot()) + "]");
    return slots[static_cast<std::size_t>(slot - 1)];
}

// ---------------------------------------------------------------------------
// Legality rules
// ---------------------------------------------------------------------------

std::optional<MotionViolation> validate_motion(std::span<const Point> prev, const WorldState& next,
                                               double v_max) {
    if (prev.size() != next.size())
        throw MalformedInput("validate_motion: node sets differ in size");

    const std::size_t n = next.size();
    std::vector<std::optional<MotionViolation>> found(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double disp = distance(prev[i], next.nodes[i].pos);
        if (!(disp <= v_max))
            found[i] = MotionViolation{id_of(i), disp, MotionViolation::Reason::SpeedBound};
    }

    // Exact coordinate equality among active nodes; the later id of a
    // coinciding pair is the offender.
    std::vector<std::tuple<double, double, std::size_t>> occupied;
    occupied.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (next.nodes[i].active) occupied.emplace_back(next.nodes[i].pos.x, next.nodes[i].pos.y, i);
    std::sort(occupied.begin(), occupied.end());
    for (std::size_t j = 1; j < occupied.size(); ++j) {
        const auto& [x0, y0, i0] = occupied[j - 1];
        const auto& [x1, y1, i1] = occupied[j];
        if (x0 == x1 && y0 == y1) {
            const std::size_t later = std::max(i0, i1);
            if (!found[later])
                found[later] = MotionViolation{id_of(later), distance(prev[later], next.nodes[later].pos),
                                               MotionViolation::Reason::SharedPosition};
        }
    }
    for (auto& f : found)
        if (f) return f;
    return std::nullopt;
}

std::optional<MotionViolation> validate_motion(const WorldState& prev, const WorldState& next,
                                               const SimConfig& cfg) {
    std::vector<Point> positions;
    positions.reserve(prev.size());
    for (const auto& node : prev.nodes) positions.push_back(node.pos);
    return validate_motion(positions, next, cfg.v_max);
}

WorldState apply_activation(const WorldState& state, std::span<const ActivationEvent> events) {
    WorldState out = state;
    std::vector<bool> seen(state.size(), false);
    for (const auto& ev : events) {
        if (ev.node < 1 || static_cast<std::size_t>(ev.node) > state.size())
            throw MalformedInput("activation event for unknown node " + std::to_string(ev.node));
        if (seen[index_of(ev.node)])
            throw MalformedInput("node " + std::to_string(ev.node) + " has two events at one boundary");
        seen[index_of(ev.node)] = true;

        NodeState& node = out.node(ev.node);
        if (ev.up && node.active)
            throw MalformedInput("node " + std::to_string(ev.node) + " activated while active");
        if (!ev.up && !node.active)
            throw MalformedInput("node " + std::to_string(ev.node) + " deactivated while inactive");
        node.active = ev.up;
        node.informed = false;
        node.local_step = 0;
        node.history.clear();
    }
    return out;
}

}  // namespace manet
