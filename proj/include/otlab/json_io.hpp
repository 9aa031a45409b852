#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "otlab/core.hpp"
#include "otlab/replication.hpp"
#include "otlab/simulator.hpp"
#include "otlab/synth.hpp"
#include "otlab/verify.hpp"

namespace otlab {

using nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Short stable identifiers for the 14 argument cases, used as JSON keys.
inline const char* case_key(TransformCase c) {
  switch (c) {
    case TransformCase::II_PosLt: return "ii-lt";
    case TransformCase::II_PosGt: return "ii-gt";
    case TransformCase::II_PosEqChLt: return "ii-eq-lt";
    case TransformCase::II_PosEqChGt: return "ii-eq-gt";
    case TransformCase::II_PosEqChEq: return "ii-eq-eq";
    case TransformCase::ID_PosLt: return "id-lt";
    case TransformCase::ID_PosEq: return "id-eq";
    case TransformCase::ID_PosGt: return "id-gt";
    case TransformCase::DI_PosLt: return "di-lt";
    case TransformCase::DI_PosEq: return "di-eq";
    case TransformCase::DI_PosGt: return "di-gt";
    case TransformCase::DD_PosLt: return "dd-lt";
    case TransformCase::DD_PosEq: return "dd-eq";
    case TransformCase::DD_PosGt: return "dd-gt";
  }
  return "?";
}

inline json operation_to_json(const Operation& o) {
  json j;
  j["kind"] = to_string(o.kind);
  if (!o.is_nop()) j["pos"] = o.pos;
  if (o.is_ins()) j["char"] = std::string(1, o.ch);
  if (o.ext.priority) j["priority"] = *o.ext.priority;
  if (o.ext.site) j["site"] = *o.ext.site;
  if (o.ext.initial_pos) j["initial_pos"] = *o.ext.initial_pos;
  if (!o.ext.deleted_before.empty()) j["deleted_before"] = o.ext.deleted_before;
  if (!o.ext.deleted_after.empty()) j["deleted_after"] = o.ext.deleted_after;
  return j;
}

inline Operation operation_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw SchemaError("operation needs a \"kind\" string");
  const std::string kind = j["kind"].get<std::string>();
  Operation o;
  if (kind == "nop") {
    o = Operation::nop();
  } else if (kind == "ins" || kind == "del") {
    if (!j.contains("pos") || !j["pos"].is_number_integer())
      throw SchemaError("operation needs an integer \"pos\"");
    int pos = j["pos"].get<int>();
    if (kind == "del") {
      o = Operation::del(pos);
    } else {
      if (!j.contains("char") || !j["char"].is_string() ||
          j["char"].get<std::string>().size() != 1)
        throw SchemaError("insert needs a one-symbol \"char\"");
      o = Operation::ins(pos, j["char"].get<std::string>()[0]);
    }
  } else {
    throw SchemaError("unknown operation kind \"" + kind + "\"");
  }
  if (j.contains("priority")) o.ext.priority = j["priority"].get<int>();
  if (j.contains("site")) o.ext.site = j["site"].get<int>();
  if (j.contains("initial_pos")) o.ext.initial_pos = j["initial_pos"].get<int>();
  if (j.contains("deleted_before"))
    o.ext.deleted_before = j["deleted_before"].get<std::vector<int>>();
  if (j.contains("deleted_after"))
    o.ext.deleted_after = j["deleted_after"].get<std::vector<int>>();
  return o;
}

inline json scenario_to_json(const Scenario& sc) {
  json events = json::array();
  for (const Event& e : sc.events) {
    if (const auto* g = std::get_if<GenerateEvent>(&e))
      events.push_back(
          {{"type", "generate"}, {"site", g->site}, {"op", operation_to_json(g->op)}});
    else {
      const auto& d = std::get<DeliverEvent>(e);
      events.push_back({{"type", "deliver"}, {"site", d.site}, {"ref", d.ref}});
    }
  }
  return json{{"name", sc.name},
              {"sites", sc.sites},
              {"initial", sc.initial},
              {"it_family", sc.it_family},
              {"events", std::move(events)}};
}

inline Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("scenario must be a JSON object");
  for (const char* key : {"name", "sites", "initial", "it_family", "events"})
    if (!j.contains(key))
      throw SchemaError(std::string("scenario lacks \"") + key + "\"");
  if (!j["name"].is_string() || !j["initial"].is_string() ||
      !j["it_family"].is_string() || !j["sites"].is_number_integer() ||
      !j["events"].is_array())
    throw SchemaError("scenario field of wrong type");
  Scenario sc;
  sc.name = j["name"].get<std::string>();
  sc.sites = j["sites"].get<int>();
  sc.initial = j["initial"].get<std::string>();
  sc.it_family = j["it_family"].get<std::string>();
  for (const json& e : j["events"]) {
    if (!e.is_object() || !e.contains("type") || !e["type"].is_string() ||
        !e.contains("site") || !e["site"].is_number_integer())
      throw SchemaError("event needs a \"type\" string and \"site\" integer");
    const std::string type = e["type"].get<std::string>();
    if (type == "generate") {
      if (!e.contains("op")) throw SchemaError("generate event needs an \"op\"");
      sc.events.push_back(
          GenerateEvent{e["site"].get<int>(), operation_from_json(e["op"])});
    } else if (type == "deliver") {
      if (!e.contains("ref") || !e["ref"].is_number_integer())
        throw SchemaError("deliver event needs an integer \"ref\"");
      sc.events.push_back(DeliverEvent{e["site"].get<int>(), e["ref"].get<int>()});
    } else {
      throw SchemaError("unknown event type \"" + type + "\"");
    }
  }
  try {
    validate_scenario(sc);
  } catch (const MalformedScenarioError& e) {
    throw SchemaError(e.what());
  }
  return sc;
}

/// Load a scenario by builtin name or from a JSON file.
inline Scenario load_scenario(const std::string& name_or_path) {
  if (const Scenario* builtin = find_builtin(name_or_path)) return *builtin;
  std::ifstream in(name_or_path);
  if (!in)
    throw ParseError("no builtin scenario or readable file named \"" +
                     name_or_path + "\"");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in " + name_or_path + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline json stamped_to_json(const StampedOperation& s) {
  return json{{"op", operation_to_json(s.op)},
              {"origin", s.origin},
              {"stamp", s.stamp}};
}

inline json outcome_to_json(const RunOutcome& out) {
  json sites = json::array();
  for (const SiteState& s : out.sites) {
    json history = json::array();
    for (const StampedOperation& h : s.history) history.push_back(stamped_to_json(h));
    sites.push_back({{"id", s.id},
                     {"doc", s.doc},
                     {"clock", s.clock},
                     {"history", std::move(history)}});
  }
  json j{{"converged", out.converged}, {"sites", std::move(sites)}};
  if (out.divergence)
    j["divergence"] = {{"site_a", out.divergence->site_a},
                       {"site_b", out.divergence->site_b},
                       {"doc_a", out.divergence->doc_a},
                       {"doc_b", out.divergence->doc_b}};
  if (!out.failures.empty()) {
    json f = json::array();
    for (const SiteFailure& x : out.failures)
      f.push_back({{"site", x.site},
                   {"op", operation_to_json(x.what.op)},
                   {"doc_length", x.what.doc_length}});
    j["failures"] = std::move(f);
  }
  if (!out.delivery_orders.empty()) j["delivery_orders"] = out.delivery_orders;
  return j;
}

inline json apply_result_to_json(const ApplyResult& r) {
  if (ok(r)) return json{{"ok", true}, {"doc", doc(r)}};
  return json{{"ok", false},
              {"op", operation_to_json(error(r).op)},
              {"doc_length", error(r).doc_length},
              {"seq_index", error(r).seq_index}};
}

inline json domain_to_json(const OperationDomain& dom) {
  return json{{"max_pos", dom.max_pos},
              {"alphabet", dom.alphabet},
              {"probe", dom.probe},
              {"depth", dom.depth}};
}

inline json tp1_report_to_json(const std::string& it_name,
                               const OperationDomain& dom,
                               const TP1Report& rep) {
  json witnesses = json::array();
  for (const TP1Witness& w : rep.witnesses)
    witnesses.push_back({{"o1", operation_to_json(w.o1)},
                         {"o2", operation_to_json(w.o2)},
                         {"t21", operation_to_json(w.t21)},
                         {"t12", operation_to_json(w.t12)},
                         {"tag", to_string(w.tag)},
                         {"left", apply_result_to_json(w.left)},
                         {"right", apply_result_to_json(w.right)}});
  return json{{"function", it_name},
              {"property", "tp1"},
              {"domain", domain_to_json(dom)},
              {"holds", rep.holds},
              {"instances", rep.instances},
              {"witnesses", std::move(witnesses)}};
}

inline json tp2_witness_to_json(const TP2Witness& w) {
  return json{{"o1", operation_to_json(w.o1)}, {"o2", operation_to_json(w.o2)},
              {"o3", operation_to_json(w.o3)}, {"t21", operation_to_json(w.t21)},
              {"t12", operation_to_json(w.t12)}, {"r1", operation_to_json(w.r1)},
              {"r2", operation_to_json(w.r2)},
              {"pattern", to_string(classify_witness(w))}};
}

inline json tp2_report_to_json(const std::string& it_name,
                               const OperationDomain& dom,
                               const TP2Report& rep) {
  json witnesses = json::array();
  for (const TP2Witness& w : rep.witnesses)
    witnesses.push_back(tp2_witness_to_json(w));
  return json{{"function", it_name},
              {"property", "tp2"},
              {"domain", domain_to_json(dom)},
              {"holds", rep.holds},
              {"instances", rep.instances},
              {"witnesses", std::move(witnesses)}};
}

inline json strategy_to_json(const std::string& name, const ITStrategy& s) {
  json table;
  for (int c = 0; c < kTransformCaseCount; ++c)
    table[case_key(static_cast<TransformCase>(c))] =
        to_string(s[static_cast<size_t>(c)]);
  return json{{"name", name}, {"table", std::move(table)}};
}

inline json constraint_set_to_json(const CaseConstraintSet& cs) {
  json groups;
  const auto& defs = case_groups();
  for (size_t g = 0; g < defs.size(); ++g) {
    json assignments = json::array();
    for (const GroupAssignment& asg : cs.admissible[g]) {
      json one = json::array();
      for (ShiftAction a : asg) one.push_back(to_string(a));
      assignments.push_back(std::move(one));
    }
    groups[defs[g].name] = std::move(assignments);
  }
  return groups;
}

inline json impossibility_to_json(const ImpossibilityReport& rep) {
  json per = json::array();
  for (const StrategyTp2Result& r : rep.per_strategy) {
    json e{{"name", r.name},
           {"fails", r.fails},
           {"witness_count", r.witness_count},
           {"patterns",
            {{"scenario-1", r.scenario1_witnesses},
             {"scenario-2", r.scenario2_witnesses},
             {"other", r.other_witnesses}}}};
    if (r.minimal) e["minimal"] = tp2_witness_to_json(*r.minimal);
    per.push_back(std::move(e));
  }
  json contradiction = json::array();
  for (const ChainRequirement& c : rep.contradiction) {
    json s1 = json::array(), s2 = json::array();
    for (ShiftAction a : c.scenario1_admits) s1.push_back(to_string(a));
    for (ShiftAction a : c.scenario2_admits) s2.push_back(to_string(a));
    contradiction.push_back({{"conflict_case", case_key(c.conflict_case)},
                             {"scenario1_admits", std::move(s1)},
                             {"scenario2_admits", std::move(s2)},
                             {"jointly_satisfiable", c.jointly_satisfiable}});
  }
  return json{{"all_fail", rep.all_fail},
              {"per_strategy", std::move(per)},
              {"contradiction", std::move(contradiction)},
              {"contradiction_holds", rep.contradiction_holds}};
}

}  // namespace otlab
