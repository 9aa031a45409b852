#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "otlab/core.hpp"
#include "otlab/transform.hpp"
#include "otlab/verify.hpp"

namespace otlab {

/// What a position-shift transformation may do to the transformed operation:
/// wipe it out, or move its position by -1 / 0 / +1. The character parameter
/// is never touched.
enum class ShiftAction { MakeNop, ShiftMinus, Keep, ShiftPlus };

inline constexpr std::array<ShiftAction, 4> kAllShiftActions = {
    ShiftAction::MakeNop, ShiftAction::ShiftMinus, ShiftAction::Keep,
    ShiftAction::ShiftPlus};

inline const char* to_string(ShiftAction a) {
  switch (a) {
    case ShiftAction::MakeNop: return "nop";
    case ShiftAction::ShiftMinus: return "minus";
    case ShiftAction::Keep: return "keep";
    case ShiftAction::ShiftPlus: return "plus";
  }
  return "?";
}

inline Operation apply_shift(const Operation& o, ShiftAction a) {
  switch (a) {
    case ShiftAction::MakeNop: return Operation::nop();
    case ShiftAction::ShiftMinus: return o.at(o.pos - 1);
    case ShiftAction::Keep: return o;
    case ShiftAction::ShiftPlus: return o.at(o.pos + 1);
  }
  return o;
}

/// A total position-shift transformation function: one action per argument
/// case.
using ITStrategy = std::array<ShiftAction, kTransformCaseCount>;

inline ShiftAction& action_for(ITStrategy& s, TransformCase c) {
  return s[static_cast<size_t>(c)];
}
inline ShiftAction action_for(const ITStrategy& s, TransformCase c) {
  return s[static_cast<size_t>(c)];
}

inline ITFunction strategy_as_it(const ITStrategy& s,
                                 std::string name = "strategy") {
  return ITFunction{std::move(name), ItFamily::Basic,
                    [s](const Operation& o1, const Operation& o2) {
                      return apply_shift(o1, action_for(s, *classify(o1, o2)));
                    }};
}

/// The argument cases that a pair and its swapped form can touch together.
/// Mirror-linked cases must be decided jointly: one TP1 instance evaluates
/// both directions.
struct CaseGroup {
  std::string name;
  std::vector<TransformCase> cases;
};

inline const std::vector<CaseGroup>& case_groups() {
  static const std::vector<CaseGroup> groups = {
      {"ins-ins-diff", {TransformCase::II_PosLt, TransformCase::II_PosGt}},
      {"ins-ins-eq-chars-diff",
       {TransformCase::II_PosEqChLt, TransformCase::II_PosEqChGt}},
      {"ins-ins-eq-chars-eq", {TransformCase::II_PosEqChEq}},
      {"ins-del-lt", {TransformCase::ID_PosLt, TransformCase::DI_PosGt}},
      {"ins-del-eq", {TransformCase::ID_PosEq, TransformCase::DI_PosEq}},
      {"ins-del-gt", {TransformCase::ID_PosGt, TransformCase::DI_PosLt}},
      {"del-del-diff", {TransformCase::DD_PosLt, TransformCase::DD_PosGt}},
      {"del-del-eq", {TransformCase::DD_PosEq}},
  };
  return groups;
}

/// A joint choice of actions for one group, parallel to CaseGroup::cases.
using GroupAssignment = std::vector<ShiftAction>;

/// Per group, every joint assignment that survives the bounded TP1 test.
struct CaseConstraintSet {
  OperationDomain domain;
  std::vector<std::vector<GroupAssignment>> admissible;  // [group][k]
};

/// Exhaustively decide TP1 admissibility per case group: a TP1 instance's
/// two transformation calls classify into exactly one group (a case and its
/// mirror), so the groups decouple and each joint assignment can be tested
/// against just the pairs that reach it.
inline CaseConstraintSet synthesize_tp1(const OperationDomain& dom) {
  const ITFunction basic{"basic", ItFamily::Basic, it_sun};
  std::vector<Operation> ops = enumerate_operations(dom, basic);
  const auto& groups = case_groups();

  CaseConstraintSet cs;
  cs.domain = dom;
  cs.admissible.resize(groups.size());
  for (size_t g = 0; g < groups.size(); ++g) {
    std::vector<std::pair<Operation, Operation>> pairs;
    for (const Operation& a : ops)
      for (const Operation& b : ops) {
        TransformCase c = *classify(a, b);
        if (std::find(groups[g].cases.begin(), groups[g].cases.end(), c) !=
            groups[g].cases.end())
          pairs.push_back({a, b});
      }
    const size_t n = groups[g].cases.size();
    std::vector<size_t> pick(n, 0);
    for (;;) {
      GroupAssignment asg(n);
      for (size_t i = 0; i < n; ++i) asg[i] = kAllShiftActions[pick[i]];
      ITStrategy table;
      table.fill(ShiftAction::Keep);  // unreached cases
      for (size_t i = 0; i < n; ++i) action_for(table, groups[g].cases[i]) = asg[i];
      ITFunction it = strategy_as_it(table);
      bool all_pass = true;
      for (const auto& [a, b] : pairs)
        if (!evaluate_tp1_instance(it, a, b, dom.probe).pass) {
          all_pass = false;
          break;
        }
      if (all_pass) cs.admissible[g].push_back(asg);
      size_t i = n;
      while (i > 0 && ++pick[i - 1] == kAllShiftActions.size()) pick[--i] = 0;
      if (i == 0) break;
    }
  }
  return cs;
}

/// Drop the admissible choices that are nonsensical for an editor even
/// though they converge: when both sites delete the same position, the only
/// sensible joint outcome is that the symbol is deleted once, so the second
/// deletion must collapse to a no-op (shifted re-deletions would eat a
/// neighbouring symbol twice). Everything else stays; the surviving choices
/// compose into full strategies.
inline std::vector<ITStrategy> coherence_filter(const CaseConstraintSet& cs) {
  const auto& groups = case_groups();
  std::vector<std::vector<GroupAssignment>> kept = cs.admissible;
  for (size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].name != "del-del-eq") continue;
    std::vector<GroupAssignment> filtered;
    for (const GroupAssignment& asg : kept[g])
      if (asg == GroupAssignment{ShiftAction::MakeNop}) filtered.push_back(asg);
    kept[g] = filtered;
  }
  std::vector<ITStrategy> out;
  std::vector<size_t> pick(groups.size(), 0);
  for (size_t g = 0; g < groups.size(); ++g)
    if (kept[g].empty()) return out;
  for (;;) {
    ITStrategy table;
    for (size_t g = 0; g < groups.size(); ++g)
      for (size_t i = 0; i < groups[g].cases.size(); ++i)
        action_for(table, groups[g].cases[i]) = kept[g][pick[g]][i];
    out.push_back(table);
    size_t g = groups.size();
    while (g > 0 && ++pick[g - 1] == kept[g - 1].size()) pick[--g] = 0;
    if (g == 0) break;
  }
  return out;
}

enum class WitnessPattern { Scenario1, Scenario2, Other };

inline const char* to_string(WitnessPattern p) {
  switch (p) {
    case WitnessPattern::Scenario1: return "scenario-1";
    case WitnessPattern::Scenario2: return "scenario-2";
    case WitnessPattern::Other: return "other";
  }
  return "?";
}

/// The two symbolic blocking triples, instantiated at position p: a deletion
/// meeting two concurrent insertions that straddle it.
inline std::array<Operation, 3> scenario1_triple(int p, Symbol c2, Symbol c3) {
  return {Operation::del(p), Operation::ins(p, c2), Operation::ins(p + 1, c3)};
}
inline std::array<Operation, 3> scenario2_triple(int p, Symbol c2, Symbol c3) {
  return {Operation::del(p), Operation::ins(p + 1, c2), Operation::ins(p, c3)};
}

inline WitnessPattern classify_witness(const TP2Witness& w) {
  if (w.o1.is_del() && w.o2.is_ins() && w.o3.is_ins()) {
    if (w.o2.pos == w.o1.pos && w.o3.pos == w.o1.pos + 1)
      return WitnessPattern::Scenario1;
    if (w.o2.pos == w.o1.pos + 1 && w.o3.pos == w.o1.pos)
      return WitnessPattern::Scenario2;
  }
  return WitnessPattern::Other;
}

struct StrategyTp2Result {
  std::string name;
  ITStrategy strategy;
  bool fails = false;
  long witness_count = 0;
  std::optional<TP2Witness> minimal;
  long scenario1_witnesses = 0;
  long scenario2_witnesses = 0;
  long other_witnesses = 0;
};

/// For one character relation between the third operation's symbol and the
/// concurrent insert's symbol: the equal-position insert case both blocking
/// chains funnel into, and the shift actions under which each chain closes.
/// The chains close under disjoint actions, so no strategy satisfies both.
struct ChainRequirement {
  TransformCase conflict_case = TransformCase::II_PosEqChEq;
  std::vector<ShiftAction> scenario1_admits;
  std::vector<ShiftAction> scenario2_admits;
  bool jointly_satisfiable = false;
};

struct ImpossibilityReport {
  bool all_fail = false;
  std::vector<StrategyTp2Result> per_strategy;
  std::vector<ChainRequirement> contradiction;
  bool contradiction_holds = false;
};

namespace detail {

inline bool tp2_instance_holds(const ITFunction& it, const Operation& o1,
                               const Operation& o2, const Operation& o3) {
  Operation r1 = it(it(o3, o1), it(o2, o1));
  Operation r2 = it(it(o3, o2), it(o1, o2));
  return r1 == r2;
}

}  // namespace detail

/// Check every strategy against TP2 over the domain, classify its full
/// witness set against the two blocking patterns, and extract the mechanical
/// contradiction: for each character relation, which actions on the funnel
/// case close the scenario-1 chain and which close the scenario-2 chain.
inline ImpossibilityReport prove_impossibility(
    const std::vector<ITStrategy>& strategies, const OperationDomain& dom) {
  ImpossibilityReport report;
  report.all_fail = !strategies.empty();
  for (size_t k = 0; k < strategies.size(); ++k) {
    ITFunction it = strategy_as_it(strategies[k], "synth:" + std::to_string(k));
    TP2Report tp2 = check_tp2(it, dom);
    StrategyTp2Result res;
    res.name = it.name;
    res.strategy = strategies[k];
    res.fails = !tp2.holds;
    res.witness_count = static_cast<long>(tp2.witnesses.size());
    if (!tp2.witnesses.empty()) res.minimal = tp2.witnesses.front();
    for (const TP2Witness& w : tp2.witnesses) switch (classify_witness(w)) {
        case WitnessPattern::Scenario1: ++res.scenario1_witnesses; break;
        case WitnessPattern::Scenario2: ++res.scenario2_witnesses; break;
        case WitnessPattern::Other: ++res.other_witnesses; break;
      }
    if (!res.fails) report.all_fail = false;
    report.per_strategy.push_back(std::move(res));
  }

  // The funnel: both chains end by transforming Ins(p,c3) against Ins(p,c2),
  // whose case depends only on the character relation. Probe every action
  // for that case inside an otherwise-arbitrary surviving strategy; the two
  // forced chain prefixes make the outcome independent of the host strategy.
  const int p = 0;
  const struct {
    Symbol c2, c3;
  } relations[] = {{'b', 'a'}, {'a', 'b'}, {'a', 'a'}};
  ITStrategy host;
  if (!strategies.empty()) host = strategies.front();
  else host.fill(ShiftAction::Keep);
  report.contradiction_holds = !strategies.empty();
  for (const auto& rel : relations) {
    ChainRequirement req;
    req.conflict_case =
        *classify(Operation::ins(p, rel.c3), Operation::ins(p, rel.c2));
    auto s1 = scenario1_triple(p, rel.c2, rel.c3);
    auto s2 = scenario2_triple(p, rel.c2, rel.c3);
    for (ShiftAction a : kAllShiftActions) {
      ITStrategy probe = host;
      action_for(probe, req.conflict_case) = a;
      ITFunction it = strategy_as_it(probe);
      if (detail::tp2_instance_holds(it, s1[0], s1[1], s1[2]))
        req.scenario1_admits.push_back(a);
      if (detail::tp2_instance_holds(it, s2[0], s2[1], s2[2]))
        req.scenario2_admits.push_back(a);
    }
    for (ShiftAction a : req.scenario1_admits)
      if (std::find(req.scenario2_admits.begin(), req.scenario2_admits.end(),
                    a) != req.scenario2_admits.end())
        req.jointly_satisfiable = true;
    if (req.jointly_satisfiable) report.contradiction_holds = false;
    report.contradiction.push_back(std::move(req));
  }
  return report;
}

}  // namespace otlab
