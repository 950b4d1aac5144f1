// Independent reference implementations used by the tests. They follow the
// definitions literally and trade speed for obviousness.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "manet/adversaries.hpp"
#include "manet/model.hpp"

namespace oracle {

using manet::NodeId;
using manet::Point;
using manet::Slot;

inline double dist(Point a, Point b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Receptions: a silent active node hears u iff u is the only active
/// transmitter within range.
inline std::map<NodeId, NodeId> receptions(const std::vector<Point>& pos, const std::vector<bool>& active,
                                           const std::set<NodeId>& tx, double r) {
    std::map<NodeId, NodeId> out;
    const int n = static_cast<int>(pos.size());
    for (int v = 1; v <= n; ++v) {
        if (!active[v - 1] || tx.count(v)) continue;
        int heard = 0;
        NodeId from = 0;
        for (int u = 1; u <= n; ++u) {
            if (u == v || !tx.count(u) || !active[u - 1]) continue;
            if (dist(pos[u - 1], pos[v - 1]) <= r) {
                ++heard;
                from = u;
            }
        }
        if (heard == 1) out[v] = from;
    }
    return out;
}

inline bool link(const manet::Trace& tr, Slot s, int a, int b) {
    const auto& st = tr.slots[static_cast<std::size_t>(s - 1)].state;
    return st.active[a] && st.active[b] && dist(st.positions[a], st.positions[b]) <= tr.meta.r;
}

/// Quantifier sweep over the definition of (alpha, beta)-connectivity with
/// the start-of-slot reading of "informed" / "uncovered" at t'.
inline bool audit(const manet::Trace& tr, long alpha, long beta, std::optional<Slot>* first_bad = nullptr) {
    const Slot last = static_cast<Slot>(tr.slots.size());
    const int n = static_cast<int>(tr.meta.n);
    const Slot t1 = tr.meta.t1;
    auto flag = [&](Slot s, int i, int which) {
        const auto& st = tr.slots[static_cast<std::size_t>(s - 1)].state;
        return (which == 0 ? st.informed[i] : st.covered[i]) != 0;
    };
    auto active = [&](Slot s, int i) { return tr.slots[static_cast<std::size_t>(s - 1)].state.active[i] != 0; };
    // solved: first slot >= t1 at whose end all targets are covered
    Slot solved = std::numeric_limits<Slot>::max();
    for (Slot s = std::max<Slot>(t1, 1); s <= last && solved == std::numeric_limits<Slot>::max(); ++s) {
        bool all = true;
        for (NodeId v : tr.meta.targets) all = all && flag(s, v - 1, 1);
        if (all) solved = s;
    }
    for (Slot t = t1 + 1; t <= last && t < solved; ++t) {
        if (t < 1 || t + alpha > last) continue;
        bool found = false;
        for (Slot tp = std::max<Slot>(t - beta + 1, t1 + 1); tp <= t + alpha && !found; ++tp) {
            if (tp < 2) continue;
            for (int p = 0; p < n && !found; ++p) {
                if (!(flag(tp - 1, p, 0) && active(tp, p))) continue;
                for (int q = 0; q < n && !found; ++q) {
                    if (flag(tp - 1, q, 1)) continue;
                    bool ok = true;
                    for (Slot s = tp; s <= tp + beta - 1 && s <= last && ok; ++s) {
                        ok = link(tr, s, p, q);
                        if (flag(s, q, 1)) break;  // p' covered: the remaining window is moot
                    }
                    found = ok;
                }
            }
        }
        if (!found) {
            if (first_bad) *first_bad = t;
            return false;
        }
    }
    return true;
}

/// Member minimizing its summed probability over low-contention slots, by
/// enumerating every candidate.
inline NodeId argmin_witness(const std::vector<std::vector<double>>& probs, const std::vector<NodeId>& members,
                             double threshold) {
    const std::size_t w = probs.front().size();
    NodeId best = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < members.size(); ++y) {
        double sum = 0;
        for (std::size_t s = 0; s < w; ++s) {
            double col = 0;
            for (std::size_t j = 0; j < members.size(); ++j) col += probs[j][s];
            if (col < threshold) sum += probs[y][s];
        }
        if (sum < best_sum || (sum == best_sum && members[y] < best)) {
            best_sum = sum;
            best = members[y];
        }
    }
    return best;
}

inline double binom_pmf(int m, int x, double q) {
    return std::exp(std::lgamma(m + 1.0) - std::lgamma(x + 1.0) - std::lgamma(m - x + 1.0) + x * std::log(q) +
                    (m - x) * std::log1p(-q));
}
/// P[X <= x] for X ~ Bin(m, q).
inline double binom_cdf(int m, double x, double q) {
    double s = 0;
    for (int i = 0; i <= m && i <= x; ++i) s += binom_pmf(m, i, q);
    return std::min(1.0, s);
}
/// P[X >= x].
inline double binom_sf(int m, double x, double q) {
    double s = 0;
    for (int i = std::max(0, static_cast<int>(std::ceil(x))); i <= m; ++i) s += binom_pmf(m, i, q);
    return std::min(1.0, s);
}

/// Trace-level invariants shared by every built-in adversary. Returns an
/// empty string when all hold, otherwise the first problem found.
inline std::string trace_invariants(const manet::Trace& tr, double v_max) {
    const std::size_t n = tr.meta.n;
    for (std::size_t k = 0; k < tr.slots.size(); ++k) {
        const auto& rec = tr.slots[k];
        const auto& st = rec.state;
        const bool first = k == 0;
        for (NodeId u : rec.tx) {
            const auto i = static_cast<std::size_t>(u - 1);
            const bool informed_start = !first && tr.slots[k - 1].state.informed[i] && st.active[i];
            if (!informed_start) return "slot " + std::to_string(rec.slot) + ": node " + std::to_string(u) + " transmitted uninformed";
        }
        for (std::size_t i = 0; i < n; ++i) {
            const bool was = !first && tr.slots[k - 1].state.covered[i];
            if (was && !st.covered[i]) return "covered flag dropped in slot " + std::to_string(rec.slot);
            const bool source_now = rec.slot == tr.meta.t1 && i == 0;
            if (!was && st.covered[i] && !rec.rx.count(static_cast<NodeId>(i + 1)) && !source_now)
                return "node " + std::to_string(i + 1) + " covered without a reception in slot " + std::to_string(rec.slot);
            if (!first && dist(st.positions[i], tr.slots[k - 1].state.positions[i]) > v_max + 1e-12)
                return "speed bound broken by node " + std::to_string(i + 1) + " in slot " + std::to_string(rec.slot);
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (st.active[a] && st.active[b] && st.positions[a] == st.positions[b])
                    return "shared position in slot " + std::to_string(rec.slot);
    }
    return {};
}

/// Distance relations between the roles an adversary reports for each slot.
inline std::string geometry_invariants(const manet::Trace& tr, const std::vector<manet::AdversaryLogEntry>& log,
                                       bool geocast, double xi) {
    using manet::Role;
    const double r = tr.meta.r;
    for (const auto& e : log) {
        if (e.slot < 1 || e.slot > static_cast<Slot>(tr.slots.size()) || e.roles.empty()) continue;
        const auto& pos = tr.slots[static_cast<std::size_t>(e.slot - 1)].state.positions;
        auto of = [&](Role role) {
            std::vector<std::size_t> out;
            for (std::size_t i = 0; i < e.roles.size(); ++i)
                if (e.roles[i] == role) out.push_back(i);
            return out;
        };
        const auto A = of(Role::A), B = of(Role::B), Bp = of(Role::Bprime), C = of(Role::C), Arc = of(Role::Arc),
                   X = of(Role::AtX), ToC = of(Role::ToC);
        auto fail = [&](const std::string& what) { return "slot " + std::to_string(e.slot) + ": " + what; };
        auto all_within = [&](const std::vector<std::size_t>& s1, const std::vector<std::size_t>& s2, double bound) {
            for (auto i : s1)
                for (auto j : s2)
                    if (dist(pos[i], pos[j]) > bound) return false;
            return true;
        };
        auto all_beyond = [&](const std::vector<std::size_t>& s1, const std::vector<std::size_t>& s2) {
            for (auto i : s1)
                for (auto j : s2)
                    if (i != j && dist(pos[i], pos[j]) <= r) return false;
            return true;
        };
        if (!geocast) {
            if (!all_within(A, B, r)) return fail("an A node is out of range of B");
            if (!all_beyond(A, Bp)) return fail("an A node reaches B'");
            if (!all_within(B, Bp, xi)) return fail("B and B' are farther than xi apart");
            continue;
        }
        if (X.size() > 1) return fail("more than one node at x");
        if (!all_within(X, B, r)) return fail("the node at x is out of range of B");
        std::vector<std::size_t> far_from_x = Bp;
        far_from_x.insert(far_from_x.end(), A.begin(), A.end());
        far_from_x.insert(far_from_x.end(), Arc.begin(), Arc.end());
        far_from_x.insert(far_from_x.end(), C.begin(), C.end());
        if (!all_beyond(X, far_from_x)) return fail("the node at x reaches B', A, the arc or C");
        std::vector<std::size_t> informed_side = B;
        for (const auto* s : {&Bp, &C, &ToC, &X}) informed_side.insert(informed_side.end(), s->begin(), s->end());
        std::vector<std::size_t> waiting = A;
        waiting.insert(waiting.end(), Arc.begin(), Arc.end());
        if (!all_beyond(waiting, informed_side)) return fail("a waiting A node is in range of the informed side");
        if (!all_within(C, Bp, r)) return fail("a C node is out of range of B'");
    }
    return {};
}

}  // namespace oracle
