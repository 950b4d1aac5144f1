#include "manet/connectivity.hpp"

#include <algorithm>
#include <limits>

#include "manet/channel.hpp"
#include "manet/error.hpp"

namespace manet {

std::vector<std::pair<NodeId, NodeId>> links_at(const Trace& trace, Slot t) {
    const Snapshot& s = trace.at(t).state;
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (linked(s, a, b, trace.meta.r)) out.emplace_back(id_of(a), id_of(b));
    return out;
}

bool online_route_exists(const Trace& trace, NodeId u, NodeId v, Slot t_start) {
    const std::size_t n = trace.meta.n;
    if (u < 1 || v < 1 || static_cast<std::size_t>(u) > n || static_cast<std::size_t>(v) > n)
        throw MalformedInput("online_route_exists: unknown node");
    if (u == v) throw MalformedInput("online_route_exists: endpoints must differ");

    std::vector<std::uint8_t> reached(n, 0);
    reached[index_of(u)] = 1;
    for (Slot t = std::max<Slot>(t_start, 1); t <= trace.last_slot(); ++t) {
        const Snapshot& s = trace.at(t).state;
        // One hop per slot: extend only from nodes reached before t.
        std::vector<std::uint8_t> next = reached;
        for (std::size_t a = 0; a < n; ++a) {
            if (!reached[a]) continue;
            for (std::size_t b = 0; b < n; ++b)
                if (!reached[b] && linked(s, a, b, trace.meta.r)) next[b] = 1;
        }
        reached.swap(next);
        if (reached[index_of(v)]) return true;
    }
    return false;
}

std::optional<Slot> solved_slot(const Trace& trace) {
    for (Slot t = trace.meta.t1; t <= trace.last_slot(); ++t) {
        if (t < 1) continue;
        const Snapshot& s = trace.at(t).state;
        const bool all = std::all_of(trace.meta.targets.begin(), trace.meta.targets.end(),
                                     [&](NodeId id) { return s.covered[index_of(id)] != 0; });
        if (all) return t;
    }
    return std::nullopt;
}

namespace {

struct StartOfSlot {
    const Trace& trace;

    bool informed(Slot t, std::size_t i) const {
        if (t < 2) return false;
        return trace.at(t - 1).state.informed[i] && trace.at(t).state.active[i];
    }
    bool covered(Slot t, std::size_t i) const {
        if (t < 2) return false;
        return trace.at(t - 1).state.covered[i] != 0;
    }
};

}  // namespace

std::vector<std::optional<Witness>> witness_slots(const Trace& trace, long beta) {
    if (beta < 1) throw ParameterError("audit: beta must be >= 1");
    const std::size_t n = trace.meta.n;
    const Slot last = trace.last_slot();
    const double r = trace.meta.r;
    StartOfSlot start{trace};

    // First slot at whose end each node is covered.
    std::vector<Slot> cover_slot(n, std::numeric_limits<Slot>::max());
    for (Slot t = last; t >= 1; --t) {
        const Snapshot& s = trace.at(t).state;
        for (std::size_t i = 0; i < n; ++i)
            if (s.covered[i]) cover_slot[i] = t;
    }

    std::vector<std::optional<Witness>> good(static_cast<std::size_t>(last));
    std::vector<std::size_t> informed, uncovered;
    for (Slot tp = std::max<Slot>(trace.meta.t1 + 1, 1); tp <= last; ++tp) {
        informed.clear();
        uncovered.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (start.informed(tp, i)) informed.push_back(i);
            else if (!start.covered(tp, i)) uncovered.push_back(i);
        }
        if (informed.empty() || uncovered.empty()) continue;

        for (std::size_t q : uncovered) {
            const Slot end = std::min({tp + beta - 1, cover_slot[q], last});
            for (std::size_t p : informed) {
                bool holds = true;
                for (Slot s = tp; s <= end && holds; ++s) holds = linked(trace.at(s).state, p, q, r);
                if (holds) {
                    good[static_cast<std::size_t>(tp - 1)] = Witness{id_of(p), id_of(q), tp};
                    break;
                }
            }
            if (good[static_cast<std::size_t>(tp - 1)]) break;
        }
    }
    return good;
}

AuditReport audit_alpha_beta(const Trace& trace, long alpha, long beta) {
    if (alpha < 0) throw ParameterError("audit: alpha must be >= 0");
    const auto good = witness_slots(trace, beta);
    const Slot last = trace.last_slot();
    const Slot solved = solved_slot(trace).value_or(std::numeric_limits<Slot>::max());

    AuditReport report;
    report.witness_log.resize(static_cast<std::size_t>(last));
    const Slot first_tp = std::max<Slot>(trace.meta.t1 + 1, 1);
    for (Slot t = first_tp; t <= last && t < solved; ++t) {
        const Slot lo = std::max(first_tp, t - beta + 1);
        const Slot hi = std::min(last, t + alpha);
        std::optional<Witness> w;
        for (Slot tp = lo; tp <= hi && !w; ++tp) w = good[static_cast<std::size_t>(tp - 1)];
        report.witness_log[static_cast<std::size_t>(t - 1)] = w;
        if (!w && t + alpha <= last && report.ok) {
            report.ok = false;
            report.first_violation_slot = t;
        }
    }
    return report;
}

}  // namespace manet
