#include "manet/engine.hpp"

#include <algorithm>
#include <sstream>

#include "manet/channel.hpp"
#include "manet/error.hpp"
#include "manet/protocols.hpp"

namespace manet {

std::vector<NodeId> target_set(const WorldState& world_at_t1, Predicate predicate, double d) {
    std::vector<NodeId> out;
    if (predicate == Predicate::AllNodes) {
        for (std::size_t i = 0; i < world_at_t1.size(); ++i) out.push_back(id_of(i));
        return out;
    }
    const Point src = world_at_t1.node(kSource).pos;
    for (const auto& node : world_at_t1.nodes)
        if (node.active && distance(node.pos, src) <= d) out.push_back(node.id);
    return out;
}

bool is_solved(const WorldState& world, std::span<const NodeId> targets) {
    return std::all_of(targets.begin(), targets.end(), [&](NodeId id) { return world.node(id).covered; });
}

namespace {

std::string describe(const MotionViolation& v, Slot slot) {
    std::ostringstream os;
    os << "illegal move in slot " << slot << ": node " << v.node;
    if (v.reason == MotionViolation::Reason::SpeedBound)
        os << " moved " << v.displacement << " (above v_max)";
    else
        os << " shares its position with another active node";
    return os.str();
}

}  // namespace

RunResult run(const SimConfig& cfg, const RunOptions& options) {
    cfg.validate();
    auto adversary = make_adversary(cfg);
    RunResult result = run(cfg, *adversary, options);
    if (const auto* g = adversary->stability_geometry()) result.stability_geometry = *g;
    if (const auto* g = adversary->geocast_geometry()) result.geocast_geometry = *g;
    return result;
}

RunResult run(const SimConfig& cfg, Adversary& adversary, const RunOptions& options) {
    cfg.validate();
    const std::size_t n = cfg.n;
    const Slot budget = cfg.slot_budget();
    const CounterRng rng(cfg.seed);

    RunResult result;
    result.seed = cfg.seed;
    result.trace.meta = {n, cfg.r, cfg.d, cfg.alpha, cfg.beta, cfg.seed, kSourceSlot, {}, std::nullopt};

    WorldState world = WorldState::with_nodes(n);
    std::vector<Point> prev_positions;
    std::vector<Candidate> next_probs;
    std::vector<NodeId> targets;

    for (Slot slot = 1; slot <= budget; ++slot) {
        // (1) adversary move and activation at the slot boundary
        SlotPlan plan = slot == 1 ? adversary.initial()
                                  : adversary.plan(AdversaryView{slot, world, next_probs});
        if (plan.positions.size() != n)
            throw MalformedInput("adversary produced " + std::to_string(plan.positions.size()) +
                                 " positions for " + std::to_string(n) + " nodes in slot " +
                                 std::to_string(slot));
        for (std::size_t i = 0; i < n; ++i) world.nodes[i].pos = plan.positions[i];
        world = apply_activation(world, plan.events);

        // (2) motion legality
        if (slot > 1) {
            if (auto v = validate_motion(prev_positions, world, cfg.v_max)) throw MotionError(describe(*v, slot));
        } else {
            std::vector<Point> same = plan.positions;
            if (auto v = validate_motion(same, world, cfg.v_max)) throw MotionError(describe(*v, slot));
        }
        prev_positions = plan.positions;

        // (3)-(5) probabilities, sampling, channel
        const TransmissionDraw draw = decide_transmissions(world, cfg.protocol, rng, slot);
        const SlotOutcome outcome = resolve_slot(world, draw.transmitters, cfg.r);

        // (6) state update
        std::vector<std::uint8_t> sent(n, 0);
        for (NodeId id : draw.transmitters) sent[index_of(id)] = 1;
        for (auto& node : world.nodes) {
            if (!node.active) continue;
            node.history.push_back(sent[index_of(node.id)] ? 'T' : 'R');
            ++node.local_step;
        }
        for (const auto& [receiver, sender] : outcome.receptions) {
            NodeState& node = world.node(receiver);
            node.covered = true;
            node.informed = true;
        }
        if (slot == kSourceSlot) {
            NodeState& src = world.node(kSource);
            if (!src.active) throw MalformedInput("the source is inactive in slot " + std::to_string(slot));
            src.covered = true;
            src.informed = true;
            targets = target_set(world, cfg.predicate, cfg.d);
            result.trace.meta.targets = targets;
        }

        SlotRecord record{slot, Snapshot::of(world), draw.transmitters,
                          std::map<NodeId, NodeId>(outcome.receptions.begin(), outcome.receptions.end())};
        if (options.on_slot) options.on_slot(record);
        if (options.record_trace) result.trace.slots.push_back(std::move(record));
        result.slots = slot;

        // (7) termination
        if (slot >= kSourceSlot && is_solved(world, targets)) {
            result.solved = true;
            result.solve_slot = slot;
            result.trace.meta.solved_slot = slot;
            break;
        }
        next_probs = next_step_probabilities(world, cfg.protocol);
    }

    result.covered_count = static_cast<std::size_t>(
        std::count_if(world.nodes.begin(), world.nodes.end(), [](const NodeState& s) { return s.covered; }));
    result.adversary_log = adversary.log();
    if (options.record_trace && options.audit) result.audit = audit_alpha_beta(result.trace, cfg.alpha, cfg.beta);
    return result;
}

}  // namespace manet
