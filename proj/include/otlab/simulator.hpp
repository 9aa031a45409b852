#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "otlab/core.hpp"
#include "otlab/replication.hpp"
#include "otlab/transform.hpp"

namespace otlab {

struct MalformedScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExplosionGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerateEvent {
  int site = 0;
  Operation op;
  bool operator==(const GenerateEvent&) const = default;
};

/// Delivery of a previously generated operation; `ref` is the 0-based
/// ordinal among the scenario's generate events.
struct DeliverEvent {
  int site = 0;
  int ref = 0;
  bool operator==(const DeliverEvent&) const = default;
};

using Event = std::variant<GenerateEvent, DeliverEvent>;

enum class RunMode { Scripted, AllOrders };

struct Scenario {
  std::string name;
  int sites = 0;
  Document initial;
  std::string it_family;  // name of the intended transformation function
  std::vector<Event> events;
  RunMode mode = RunMode::Scripted;

  bool operator==(const Scenario&) const = default;
};

struct SiteState {
  int id = 0;
  Document doc;
  VectorClock clock;
  std::vector<StampedOperation> history;
};

struct Divergence {
  int site_a = 0;
  int site_b = 0;
  Document doc_a;
  Document doc_b;
};

struct SiteFailure {
  int site = 0;
  OutOfRange what;
};

struct RunOutcome {
  std::vector<SiteState> sites;
  bool converged = false;
  std::optional<Divergence> divergence;
  std::vector<SiteFailure> failures;
  /// For all-orders runs: the per-site delivery order (lists of generate
  /// ordinals) that produced this outcome.
  std::vector<std::vector<int>> delivery_orders;
};

/// Structural checks: site indices in range, every delivery references an
/// earlier generate at a different site, no duplicate delivery, and each
/// generated operation is delivered to every other site exactly once.
inline void validate_scenario(const Scenario& sc) {
  if (sc.sites < 1)
    throw MalformedScenarioError("scenario needs at least one site");
  int gens = 0;
  std::set<std::pair<int, int>> seen;  // (ref, site)
  std::vector<int> origin;
  for (const Event& e : sc.events) {
    if (const auto* g = std::get_if<GenerateEvent>(&e)) {
      if (g->site < 0 || g->site >= sc.sites)
        throw MalformedScenarioError("generate at unknown site " +
                                     std::to_string(g->site));
      origin.push_back(g->site);
      ++gens;
    } else {
      const auto& d = std::get<DeliverEvent>(e);
      if (d.site < 0 || d.site >= sc.sites)
        throw MalformedScenarioError("deliver at unknown site " +
                                     std::to_string(d.site));
      if (d.ref < 0 || d.ref >= gens)
        throw MalformedScenarioError(
            "deliver references generate " + std::to_string(d.ref) +
            " which does not precede it");
      if (origin[d.ref] == d.site)
        throw MalformedScenarioError("operation delivered to its own origin");
      if (!seen.insert({d.ref, d.site}).second)
        throw MalformedScenarioError("duplicate delivery of operation " +
                                     std::to_string(d.ref));
    }
  }
  for (int r = 0; r < gens; ++r)
    for (int s = 0; s < sc.sites; ++s)
      if (s != origin[r] && !seen.count({r, s}))
        throw MalformedScenarioError("operation " + std::to_string(r) +
                                     " never delivered to site " +
                                     std::to_string(s));
}

namespace detail {

/// Fill in the extension field the running transformation function consults:
/// priority and site-id default to the originating site index, an insert's
/// initial position to its generation position.
inline Operation assign_extension(Operation op, ItFamily family, int site) {
  if (op.is_nop()) return op;
  switch (family) {
    case ItFamily::Basic:
      break;
    case ItFamily::Priority:
      op.ext.priority = site;
      break;
    case ItFamily::SiteId:
      op.ext.site = site;
      break;
    case ItFamily::InitialPos:
      if (op.is_ins()) op.ext.initial_pos = op.pos;
      break;
    case ItFamily::AvAp:
      break;  // fresh operations carry empty environment sets
  }
  return op;
}

inline RunOutcome summarize(std::vector<SiteReplica> replicas) {
  RunOutcome out;
  for (SiteReplica& r : replicas) {
    if (r.poison) out.failures.push_back({r.id, *r.poison});
    out.sites.push_back(
        {r.id, std::move(r.doc), std::move(r.clock), std::move(r.history)});
  }
  out.converged = out.failures.empty();
  for (size_t i = 0; i + 1 < out.sites.size() && !out.divergence; ++i)
    for (size_t j = i + 1; j < out.sites.size(); ++j)
      if (out.sites[i].doc != out.sites[j].doc) {
        out.divergence =
            Divergence{out.sites[i].id, out.sites[j].id, out.sites[i].doc,
                       out.sites[j].doc};
        out.converged = false;
        break;
      }
  return out;
}

}  // namespace detail

/// Replay the scenario's events in listed order, parking early deliveries
/// until their causal predecessors arrive.
inline RunOutcome run_scenario(const Scenario& sc, const ITFunction& it) {
  validate_scenario(sc);
  std::vector<SiteReplica> replicas;
  for (int s = 0; s < sc.sites; ++s)
    replicas.push_back(SiteReplica::make(s, sc.sites, sc.initial));
  std::vector<StampedOperation> generated;
  for (const Event& e : sc.events) {
    if (const auto* g = std::get_if<GenerateEvent>(&e)) {
      Operation op = detail::assign_extension(g->op, it.family, g->site);
      auto [next, stamped] = generate_local(std::move(replicas[g->site]), op);
      replicas[g->site] = std::move(next);
      generated.push_back(std::move(stamped));
    } else {
      const auto& d = std::get<DeliverEvent>(e);
      replicas[d.site] =
          receive(std::move(replicas[d.site]), it, generated[d.ref]);
    }
  }
  for (const SiteReplica& r : replicas)
    if (!r.pending.empty())
      throw MalformedScenarioError(
          "scenario left undeliverable operations pending at site " +
          std::to_string(r.id));
  return detail::summarize(std::move(replicas));
}

namespace detail {

/// All orders in which `site` can integrate its incoming operations without
/// ever violating causal readiness, ascending by generate ordinal at each
/// choice point.
inline void admissible_orders(const std::vector<StampedOperation>& generated,
                              const std::vector<int>& incoming,
                              std::vector<bool>& used, VectorClock clock,
                              std::vector<int>& prefix,
                              std::vector<std::vector<int>>& out) {
  if (prefix.size() == incoming.size()) {
    out.push_back(prefix);
    return;
  }
  for (size_t i = 0; i < incoming.size(); ++i) {
    if (used[i]) continue;
    const StampedOperation& cand = generated[incoming[i]];
    if (!dominates(clock, cand.stamp)) continue;
    used[i] = true;
    prefix.push_back(incoming[i]);
    VectorClock next = clock;
    next[cand.origin] += 1;
    admissible_orders(generated, incoming, used, next, prefix, out);
    prefix.pop_back();
    used[i] = false;
  }
}

}  // namespace detail

/// Enumerate every causally admissible delivery order. The scenario must
/// front-load all generates (site interactions happen only through delivery,
/// so per-site orders compose independently); one outcome is produced per
/// combination of per-site orders, sites ascending, orders lexicographic on
/// generate ordinals.
inline std::vector<RunOutcome> run_all_orders(const Scenario& sc,
                                              const ITFunction& it,
                                              long cap = 10000) {
  validate_scenario(sc);
  int gens = 0;
  for (size_t i = 0; i < sc.events.size(); ++i)
    if (std::holds_alternative<GenerateEvent>(sc.events[i])) {
      if (gens != static_cast<int>(i))
        throw MalformedScenarioError(
            "all-orders enumeration needs every generate before the first "
            "delivery");
      ++gens;
    }
  if (gens > 10)
    throw ExplosionGuardError("all-orders enumeration capped at 10 operations");

  std::vector<SiteReplica> replicas;
  for (int s = 0; s < sc.sites; ++s)
    replicas.push_back(SiteReplica::make(s, sc.sites, sc.initial));
  std::vector<StampedOperation> generated;
  for (int i = 0; i < gens; ++i) {
    const auto& g = std::get<GenerateEvent>(sc.events[i]);
    Operation op = detail::assign_extension(g.op, it.family, g.site);
    auto [next, stamped] = generate_local(std::move(replicas[g.site]), op);
    replicas[g.site] = std::move(next);
    generated.push_back(std::move(stamped));
  }

  std::vector<std::vector<std::vector<int>>> per_site_orders(sc.sites);
  long total = 1;
  for (int s = 0; s < sc.sites; ++s) {
    std::vector<int> incoming;
    for (int r = 0; r < gens; ++r)
      if (generated[r].origin != s) incoming.push_back(r);
    std::vector<bool> used(incoming.size(), false);
    std::vector<int> prefix;
    detail::admissible_orders(generated, incoming, used, replicas[s].clock,
                              prefix, per_site_orders[s]);
    total *= static_cast<long>(per_site_orders[s].size());
    if (total > cap)
      throw ExplosionGuardError("all-orders outcome count exceeds cap of " +
                                std::to_string(cap));
  }

  std::vector<RunOutcome> outcomes;
  std::vector<size_t> pick(sc.sites, 0);
  for (;;) {
    std::vector<SiteReplica> run = replicas;
    std::vector<std::vector<int>> orders;
    for (int s = 0; s < sc.sites; ++s) {
      orders.push_back(per_site_orders[s][pick[s]]);
      for (int ref : orders.back())
        run[s] = integrate_remote(std::move(run[s]), it, generated[ref]);
    }
    RunOutcome out = detail::summarize(std::move(run));
    out.delivery_orders = std::move(orders);
    outcomes.push_back(std::move(out));
    int s = sc.sites - 1;
    while (s >= 0 && ++pick[s] == per_site_orders[s].size()) pick[s--] = 0;
    if (s < 0) break;
  }
  return outcomes;
}

/// Fixed catalog of replayable sessions: the naive and transformed two-site
/// runs, one divergence scenario per cataloged transformation function, and
/// the two three-site blocking patterns.
inline const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> catalog = [] {
    std::vector<Scenario> v;
    auto gen = [](int site, Operation op) {
      return Event{GenerateEvent{site, std::move(op)}};
    };
    auto del = [](int site, int ref) { return Event{DeliverEvent{site, ref}}; };

    v.push_back({"fig1-naive", 2, "efecte", "identity",
                 {gen(0, Operation::ins(1, 'f')), gen(1, Operation::del(5)),
                  del(1, 0), del(0, 1)}});
    v.push_back({"fig2-transformed", 2, "efecte", "sun",
                 {gen(0, Operation::ins(1, 'f')), gen(1, Operation::del(5)),
                  del(1, 0), del(0, 1)}});
    v.push_back({"ellis-tp1", 2, "efecte", "ellis",
                 {gen(0, Operation::ins(1, 'f')), gen(1, Operation::del(1)),
                  del(1, 0), del(0, 1)}});
    v.push_back({"sun-tp1", 2, "efct", "sun",
                 {gen(0, Operation::ins(2, 'e')), gen(1, Operation::ins(2, 'f')),
                  del(1, 0), del(0, 1)}});
    v.push_back({"suleiman-tp1", 4, "eftte", "suleiman",
                 {gen(0, Operation::ins(3, 'f')), gen(1, Operation::ins(2, 'c')),
                  gen(2, Operation::del(2)), gen(2, Operation::ins(2, 'e')),
                  gen(2, Operation::del(2)),
                  // third site hears the two lone inserts
                  del(2, 0), del(2, 1),
                  // fourth site hears everything, the chained triple first
                  del(3, 2), del(3, 3), del(3, 4), del(3, 1), del(3, 0),
                  del(0, 2), del(0, 3), del(0, 4), del(0, 1),
                  del(1, 2), del(1, 3), del(1, 4), del(1, 0)}});
    v.push_back({"ressel-tp2", 3, "xyz", "ressel",
                 {gen(0, Operation::del(1)), gen(1, Operation::ins(2, 'c')),
                  gen(2, Operation::ins(1, 'e')),
                  del(0, 1), del(0, 2), del(1, 0), del(1, 2), del(2, 0),
                  del(2, 1)}});
    v.push_back({"imine-tp2", 4, "eefft", "imine",
                 {gen(1, Operation::del(1)), gen(0, Operation::del(2)),
                  gen(2, Operation::ins(2, 'e')), gen(1, Operation::ins(2, 'c')),
                  del(3, 0), del(3, 1), del(3, 3), del(3, 2),
                  del(1, 1), del(1, 2),
                  del(0, 0), del(0, 3), del(0, 2),
                  del(2, 0), del(2, 1), del(2, 3)}});
    v.push_back({"scenario-1", 3, "abcd", "sun",
                 {gen(0, Operation::del(1)), gen(1, Operation::ins(1, 'x')),
                  gen(2, Operation::ins(2, 'y')),
                  del(0, 1), del(1, 0), del(0, 2), del(1, 2), del(2, 0),
                  del(2, 1)}});
    v.push_back({"scenario-2", 3, "abcd", "sun",
                 {gen(0, Operation::del(1)), gen(1, Operation::ins(2, 'x')),
                  gen(2, Operation::ins(1, 'y')),
                  del(0, 1), del(1, 0), del(0, 2), del(1, 2), del(2, 0),
                  del(2, 1)}});
    return v;
  }();
  return catalog;
}

inline const Scenario* find_builtin(const std::string& name) {
  for (const Scenario& sc : builtin_scenarios())
    if (sc.name == name) return &sc;
  return nullptr;
}

}  // namespace otlab
