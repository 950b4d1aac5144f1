#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "manet/model.hpp"

namespace manet {

/// Links present during slot t as (u, v) pairs with u < v.
std::vector<std::pair<NodeId, NodeId>> links_at(const Trace& trace, Slot t);

/// True iff a node sequence u = w0 .. wk = v exists with links at strictly
/// increasing slots, all >= t_start.
bool online_route_exists(const Trace& trace, NodeId u, NodeId v, Slot t_start);

struct Witness {
    NodeId p = 0;        ///< informed at the start of t_prime
    NodeId p_prime = 0;  ///< uncovered at the start of t_prime
    Slot t_prime = 0;
};

struct AuditReport {
    bool ok = true;
    std::optional<Slot> first_violation_slot;
    /// Index s - 1 holds the witness used for slot s, if one was needed and found.
    std::vector<std::optional<Witness>> witness_log;
};

// Conventions shared by the audit and its tests:
//  * "at time t'" means the start of slot t': a node is informed then iff it
//    was informed at the end of t'-1 and is active in t'; covered likewise
//    from the end of t'-1.
//  * Slots needing a witness are t1 < t < solved slot (or the trace end).
//  * A link window is cut short when p' becomes covered (end-of-slot flag) or
//    when the recorded trace ends.
//  * A slot whose window [t, t+alpha] runs past the trace end is never
//    reported as a violation, since the missing future may hold its witness.

/// For each slot t' (index t'-1): a pair satisfying the link condition for
/// window length beta, if any.
std::vector<std::optional<Witness>> witness_slots(const Trace& trace, long beta);

/// Post-hoc check of (alpha, beta)-connectivity.
AuditReport audit_alpha_beta(const Trace& trace, long alpha, long beta);

/// First slot at whose end every target is covered, if any.
std::optional<Slot> solved_slot(const Trace& trace);

}  // namespace manet
