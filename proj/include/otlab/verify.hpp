#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "otlab/core.hpp"
#include "otlab/transform.hpp"

namespace otlab {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bounded universe the property checkers quantify over: operations touch
/// positions 0..max_pos with insert characters from `alphabet`, evaluated on
/// a probe document of pairwise-distinct symbols disjoint from the alphabet
/// (so distinct operation effects are never masked by repeated symbols).
/// depth > 0 additionally admits operations already transformed along
/// sequences of up to `depth` fresh operations.
struct OperationDomain {
  int max_pos = 3;
  std::string alphabet = "abc";
  Document probe = "uvwxyz";
  int depth = 0;
};

inline void validate_domain(const OperationDomain& dom) {
  if (dom.max_pos < 0) throw DomainError("max position must be non-negative");
  if (dom.alphabet.empty()) throw DomainError("alphabet must not be empty");
  if (dom.depth < 0) throw DomainError("depth must be non-negative");
  if (static_cast<int>(dom.probe.size()) < dom.max_pos + 2)
    throw DomainError("probe document must be at least max position + 2 long");
  std::set<char> seen(dom.probe.begin(), dom.probe.end());
  if (seen.size() != dom.probe.size())
    throw DomainError("probe symbols must be pairwise distinct");
  for (char c : dom.alphabet)
    if (seen.count(c))
      throw DomainError("probe symbols must not occur in the alphabet");
}

namespace detail {

inline bool applicable(const Operation& o, const Document& d) {
  const int len = static_cast<int>(d.size());
  if (o.is_ins()) return o.pos >= 0 && o.pos <= len;
  if (o.is_del()) return o.pos >= 0 && o.pos < len;
  return true;
}

/// One closure step: transform `target` against a fresh `context` operation.
/// Families that break ties by priority or site id see both relative orders;
/// the temporary ids are stripped from the results.
inline std::vector<Operation> closure_step(const ITFunction& it,
                                           Operation target,
                                           Operation context) {
  if (it.family != ItFamily::Priority && it.family != ItFamily::SiteId)
    return {it(target, context)};
  std::vector<Operation> out;
  for (auto [a, b] : {std::pair{1, 2}, std::pair{2, 1}}) {
    Operation t = target, c = context;
    if (it.family == ItFamily::Priority) {
      t.ext.priority = a;
      c.ext.priority = b;
    } else {
      t.ext.site = a;
      c.ext.site = b;
    }
    Operation r = it(t, c);
    r.ext.priority.reset();
    r.ext.site.reset();
    out.push_back(r);
  }
  return out;
}

}  // namespace detail

/// All operations of the domain for the given function: every insert and
/// delete at positions 0..max_pos (inserts of a tie-stamped family carry no
/// stamp yet; those are assigned per operand slot at check time), closed
/// under up to `depth` transformation steps against fresh operations.
inline std::vector<Operation> enumerate_operations(const OperationDomain& dom,
                                                   const ITFunction& it) {
  validate_domain(dom);
  std::vector<Operation> fresh;
  for (int p = 0; p <= dom.max_pos; ++p) {
    for (char c : dom.alphabet) {
      Operation op = Operation::ins(p, c);
      if (it.family == ItFamily::InitialPos) op.ext.initial_pos = p;
      fresh.push_back(op);
    }
    fresh.push_back(Operation::del(p));
  }
  std::set<Operation> all(fresh.begin(), fresh.end());
  std::vector<Operation> level = fresh;
  for (int d = 0; d < dom.depth; ++d) {
    std::set<Operation> next;
    for (const Operation& o : level)
      for (const Operation& ctx : fresh)
        for (const Operation& r : detail::closure_step(it, o, ctx))
          if (!all.count(r)) next.insert(r);
    all.insert(next.begin(), next.end());
    level.assign(next.begin(), next.end());
    if (level.empty()) break;
  }
  std::vector<Operation> out;
  for (const Operation& o : all)
    if (!o.is_nop() && o.pos >= 0 && detail::applicable(o, dom.probe))
      out.push_back(o);
  return out;  // std::set iteration is already sorted
}

/// Give slot-specific tie-break ids to an operand of a stamped family.
inline Operation assign_slot(Operation op, ItFamily family, int slot) {
  if (family == ItFamily::Priority && op.is_ins()) op.ext.priority = slot;
  if (family == ItFamily::SiteId && op.is_ins()) op.ext.site = slot;
  return op;
}

enum class FailTag { StateDivergence, IllFormedInsert, ApplicationMismatch };

inline const char* to_string(FailTag t) {
  switch (t) {
    case FailTag::StateDivergence: return "state-divergence";
    case FailTag::IllFormedInsert: return "ill-formed-insert";
    case FailTag::ApplicationMismatch: return "application-mismatch";
  }
  return "?";
}

struct Tp1Outcome {
  bool pass = false;
  FailTag tag = FailTag::StateDivergence;
  Operation t21, t12;
  ApplyResult left, right;
};

/// The two-operation convergence identity on an ordered pair: executing
/// [o1; IT(o2,o1)] and [o2; IT(o1,o2)] from the probe must agree. A
/// transformed insert at a negative position is ill-formed (an insert carries
/// content and is unexecutable everywhere below position 0) and fails the
/// instance outright; any other out-of-range outcome counts as equivalent
/// exactly when both sides fail at the same step.
inline Tp1Outcome evaluate_tp1_instance(const ITFunction& it,
                                        const Operation& o1,
                                        const Operation& o2,
                                        const Document& probe) {
  Tp1Outcome out;
  out.t21 = it(o2, o1);
  out.t12 = it(o1, o2);
  out.left = apply_sequence(probe, {o1, out.t21});
  out.right = apply_sequence(probe, {o2, out.t12});
  if ((out.t21.is_ins() && out.t21.pos < 0) ||
      (out.t12.is_ins() && out.t12.pos < 0)) {
    out.tag = FailTag::IllFormedInsert;
    return out;
  }
  if (ok(out.left) != ok(out.right)) {
    out.tag = FailTag::ApplicationMismatch;
    return out;
  }
  if (ok(out.left)) {
    out.pass = doc(out.left) == doc(out.right);
    out.tag = FailTag::StateDivergence;
    return out;
  }
  out.pass = error(out.left).seq_index == error(out.right).seq_index;
  out.tag = FailTag::ApplicationMismatch;
  return out;
}

struct TP1Witness {
  Operation o1, o2;   // the offending ordered pair, slot ids filled in
  Operation t21, t12; // both transformed forms
  FailTag tag = FailTag::StateDivergence;
  ApplyResult left, right;
};

struct TP1Report {
  bool holds = false;
  long instances = 0;
  std::vector<TP1Witness> witnesses;
};

/// Exhaustive bounded check of the two-operation convergence identity over
/// every ordered pair of domain operations (both relative stamp orders are
/// reached because both orderings of each unordered pair are evaluated).
inline TP1Report check_tp1(const ITFunction& it, const OperationDomain& dom) {
  std::vector<Operation> ops = enumerate_operations(dom, it);
  TP1Report report;
  for (const Operation& a : ops) {
    for (const Operation& b : ops) {
      Operation o1 = assign_slot(a, it.family, 1);
      Operation o2 = assign_slot(b, it.family, 2);
      Tp1Outcome r = evaluate_tp1_instance(it, o1, o2, dom.probe);
      ++report.instances;
      if (!r.pass)
        report.witnesses.push_back(
            {o1, o2, r.t21, r.t12, r.tag, r.left, r.right});
    }
  }
  std::sort(report.witnesses.begin(), report.witnesses.end(),
            [](const TP1Witness& x, const TP1Witness& y) {
              return std::tie(x.o1, x.o2, x.t21, x.t12) <
                     std::tie(y.o1, y.o2, y.t21, y.t12);
            });
  report.holds = report.witnesses.empty();
  return report;
}

struct TP2Witness {
  Operation o1, o2, o3;  // pairwise-concurrent triple, slot ids filled in
  Operation t21, t12;    // IT(o2,o1) and IT(o1,o2)
  Operation r1, r2;      // o3 carried along [o1; t21] and [o2; t12]
};

struct TP2Report {
  bool holds = false;
  long instances = 0;
  std::vector<TP2Witness> witnesses;
};

/// Exhaustive bounded check that transforming o3 along the two equivalent
/// two-operation sequences yields structurally equal results, over every
/// ordered triple of domain operations; stamped families additionally see
/// every assignment of three distinct tie-break ids to the operand slots.
inline TP2Report check_tp2(const ITFunction& it, const OperationDomain& dom) {
  std::vector<Operation> ops = enumerate_operations(dom, it);
  const bool stamped =
      it.family == ItFamily::Priority || it.family == ItFamily::SiteId;
  std::vector<std::array<int, 3>> slot_ids = {{1, 2, 3}};
  if (stamped)
    slot_ids = {{1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}, {3, 2, 1}};
  TP2Report report;
  for (const Operation& a : ops) {
    for (const Operation& b : ops) {
      for (const Operation& c : ops) {
        for (const auto& ids : slot_ids) {
          Operation o1 = assign_slot(a, it.family, ids[0]);
          Operation o2 = assign_slot(b, it.family, ids[1]);
          Operation o3 = assign_slot(c, it.family, ids[2]);
          Operation t21 = it(o2, o1);
          Operation t12 = it(o1, o2);
          Operation r1 = it(it(o3, o1), t21);
          Operation r2 = it(it(o3, o2), t12);
          ++report.instances;
          if (!(r1 == r2))
            report.witnesses.push_back({o1, o2, o3, t21, t12, r1, r2});
        }
      }
    }
  }
  std::sort(report.witnesses.begin(), report.witnesses.end(),
            [](const TP2Witness& x, const TP2Witness& y) {
              return std::tie(x.o1, x.o2, x.o3) < std::tie(y.o1, y.o2, y.o3);
            });
  report.holds = report.witnesses.empty();
  return report;
}

}  // namespace otlab
