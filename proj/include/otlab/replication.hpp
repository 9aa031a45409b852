#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "otlab/core.hpp"
#include "otlab/transform.hpp"

namespace otlab {

using VectorClock = std::vector<int>;

struct ClockLengthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an operation is integrated before its causal predecessors.
struct NotReadyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// a >= b componentwise.
inline bool dominates(const VectorClock& a, const VectorClock& b) {
  if (a.size() != b.size())
    throw ClockLengthError("vector clocks of different site counts");
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

/// An operation together with its generation context. The stamp is a copy of
/// the generating site's clock taken before the local increment, and never
/// changes afterwards, however the operation's executed form is transformed
/// downstream.
struct StampedOperation {
  Operation op;
  int origin = 0;
  VectorClock stamp;

  bool operator==(const StampedOperation&) const = default;
};

/// a was generated in b's causal past: b's stamp counts at least one more
/// operation from a's origin than a's own stamp does.
inline bool causally_depends(const StampedOperation& a,
                             const StampedOperation& b) {
  return a.stamp.at(a.origin) < b.stamp.at(a.origin);
}

inline bool concurrent(const StampedOperation& a, const StampedOperation& b) {
  return !causally_depends(a, b) && !causally_depends(b, a);
}

/// One collaborating site: a document replica, a clock counting integrated
/// operations per origin, the history of operations in the form they were
/// executed here (each keeping its original stamp), and a pending set of
/// received operations still waiting for causal predecessors. Transitions
/// are value to value: callers get a new replica back.
struct SiteReplica {
  int id = 0;
  Document doc;
  VectorClock clock;
  std::vector<StampedOperation> history;
  std::vector<StampedOperation> pending;
  /// First application failure, if any; the failing operation leaves the
  /// document untouched but integration bookkeeping continues.
  std::optional<OutOfRange> poison;

  static SiteReplica make(int id, int site_count, Document initial) {
    SiteReplica r;
    r.id = id;
    r.doc = std::move(initial);
    r.clock.assign(site_count, 0);
    return r;
  }

  /// All causal predecessors of `in` have been integrated here.
  bool ready_for(const StampedOperation& in) const {
    return dominates(clock, in.stamp);
  }
};

/// Execute a locally generated operation, returning the updated replica and
/// the stamped form to broadcast. The operation must be valid on the current
/// document.
inline std::pair<SiteReplica, StampedOperation> generate_local(
    SiteReplica site, const Operation& op) {
  ApplyResult r = apply_op(site.doc, op);
  if (!ok(r))
    throw std::invalid_argument("locally generated operation out of range: " +
                                op.str() + " on document of length " +
                                std::to_string(site.doc.size()));
  StampedOperation stamped{op, site.id, site.clock};
  site.doc = doc(r);
  site.history.push_back(stamped);
  site.clock[site.id] += 1;
  return {std::move(site), std::move(stamped)};
}

/// Integrate a causally ready remote operation in three steps: reorder the
/// history so that entries from `in`'s causal past come first (stable, so
/// execution order inside each part is preserved), transform `in` across the
/// concurrent tail, then execute the result and append it with its original
/// stamp.
inline SiteReplica integrate_remote(SiteReplica site, const ITFunction& it,
                                    const StampedOperation& in) {
  if (!site.ready_for(in))
    throw NotReadyError("delivery before causal predecessors: " + in.op.str());
  auto mid = std::stable_partition(
      site.history.begin(), site.history.end(),
      [&](const StampedOperation& h) { return causally_depends(h, in); });
  Operation transformed = in.op;
  for (auto itr = mid; itr != site.history.end(); ++itr)
    transformed = it(transformed, itr->op);
  ApplyResult r = apply_op(site.doc, transformed);
  if (ok(r))
    site.doc = doc(r);
  else if (!site.poison)
    site.poison = error(r);
  site.history.push_back(StampedOperation{transformed, in.origin, in.stamp});
  site.clock[in.origin] += 1;
  return site;
}

/// Integrate ready pending operations until none is ready. When several are
/// ready at once, lowest origin index goes first, then arrival order.
inline SiteReplica pump_pending(SiteReplica site, const ITFunction& it) {
  for (;;) {
    auto pick = site.pending.end();
    for (auto itr = site.pending.begin(); itr != site.pending.end(); ++itr)
      if (site.ready_for(*itr) &&
          (pick == site.pending.end() || itr->origin < pick->origin))
        pick = itr;
    if (pick == site.pending.end()) return site;
    StampedOperation next = *pick;
    site.pending.erase(pick);
    site = integrate_remote(std::move(site), it, next);
  }
}

/// Hand a received operation to a replica: parked in pending, then the pump
/// integrates everything that has become ready.
inline SiteReplica receive(SiteReplica site, const ITFunction& it,
                           const StampedOperation& in) {
  site.pending.push_back(in);
  return pump_pending(std::move(site), it);
}

/// No causally ordered pair appears swapped in an execution history.
inline bool history_causally_ordered(
    const std::vector<StampedOperation>& history) {
  for (size_t i = 0; i < history.size(); ++i)
    for (size_t j = i + 1; j < history.size(); ++j)
      if (causally_depends(history[j], history[i])) return false;
  return true;
}

inline bool history_causally_ordered(const SiteReplica& site) {
  return history_causally_ordered(site.history);
}

/// clock[k] equals the number of history entries originating at site k.
inline bool clock_sound(const VectorClock& clock,
                        const std::vector<StampedOperation>& history) {
  VectorClock counted(clock.size(), 0);
  for (const StampedOperation& h : history) counted.at(h.origin) += 1;
  return counted == clock;
}

inline bool clock_sound(const SiteReplica& site) {
  return clock_sound(site.clock, site.history);
}

}  // namespace otlab
