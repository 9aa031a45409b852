// Command-line front end: scenario replay, TP1/TP2 checking, strategy
// synthesis, and report emission. Exit codes: 0 = success / property holds,
// 1 = verdict fails (divergence or counterexample found), 2 = usage or
// input error.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otlab/json_io.hpp"
#include "otlab/simulator.hpp"
#include "otlab/synth.hpp"
#include "otlab/transform.hpp"
#include "otlab/verify.hpp"

namespace {

using namespace otlab;

constexpr int kMaxTextWitnesses = 20;

struct DomainFlags {
  int max_pos = 3;
  std::string alphabet = "abc";
  int depth = 0;
};

void add_domain_flags(CLI::App* cmd, DomainFlags& f) {
  cmd->add_option("--max-pos", f.max_pos, "Largest operation position")
      ->capture_default_str();
  cmd->add_option("--alphabet", f.alphabet, "Insert characters")
      ->capture_default_str();
  cmd->add_option("--depth", f.depth,
                  "Closure depth: admit operations already transformed along "
                  "up to this many concurrent operations")
      ->capture_default_str();
}

/// Probe document: pairwise-distinct symbols disjoint from the alphabet,
/// max_pos + 2 long (at least 6, so the default domain probes "uvwxyz").
Document make_probe(int max_pos, const std::string& alphabet) {
  static const std::string pool =
      "uvwxyz0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrst";
  Document probe;
  const size_t want = std::max(6, max_pos + 2);
  for (char c : pool) {
    if (alphabet.find(c) != std::string::npos) continue;
    probe.push_back(c);
    if (probe.size() == want) break;
  }
  return probe;
}

OperationDomain to_domain(const DomainFlags& f) {
  OperationDomain dom{f.max_pos, f.alphabet, make_probe(f.max_pos, f.alphabet),
                      f.depth};
  validate_domain(dom);
  return dom;
}

std::string domain_line(const OperationDomain& dom) {
  return "max-pos=" + std::to_string(dom.max_pos) + " alphabet=" + dom.alphabet +
         " depth=" + std::to_string(dom.depth) + " probe=" + dom.probe;
}

std::vector<ITStrategy> coherent_strategies() {
  return coherence_filter(synthesize_tp1(OperationDomain{}));
}

/// Accepts catalog names (ellis, ressel, sun, suleiman, imine, identity) and
/// synthesized strategies as synth:<index>.
ITFunction resolve_it(const std::string& name) {
  if (const ITFunction* f = find_it_function(name)) return *f;
  if (name.rfind("synth:", 0) == 0) {
    std::vector<ITStrategy> strategies = coherent_strategies();
    size_t k = 0;
    try {
      k = std::stoul(name.substr(6));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad strategy index in \"" + name + "\"");
    }
    if (k >= strategies.size())
      throw std::invalid_argument(
          "strategy index out of range (have " +
          std::to_string(strategies.size()) + "): " + name);
    return strategy_as_it(strategies[k], name);
  }
  throw std::invalid_argument("unknown transformation function \"" + name +
                              "\"");
}

std::string render(const ApplyResult& r) {
  if (ok(r)) return "\"" + doc(r) + "\"";
  return "error at step " + std::to_string(error(r).seq_index) + " (" +
         error(r).op.str() + " on length " +
         std::to_string(error(r).doc_length) + ")";
}

void print_outcome_text(const std::string& scenario, const std::string& fn,
                        const RunOutcome& out) {
  std::cout << "scenario: " << scenario << "\n";
  std::cout << "function: " << fn << "\n";
  for (const SiteState& s : out.sites)
    std::cout << "site " << s.id << ": \"" << s.doc << "\"\n";
  for (const SiteFailure& f : out.failures)
    std::cout << "failure at site " << f.site << ": " << f.what.op.str()
              << " on document of length " << f.what.doc_length << "\n";
  if (out.divergence)
    std::cout << "divergence: site " << out.divergence->site_a << " \""
              << out.divergence->doc_a << "\" vs site "
              << out.divergence->site_b << " \"" << out.divergence->doc_b
              << "\"\n";
  std::cout << "converged: " << (out.converged ? "true" : "false") << "\n";
}

int cmd_simulate(const std::string& scenario_arg, const std::string& it_name,
                 bool all_orders, long cap, const std::string& format) {
  Scenario sc = load_scenario(scenario_arg);
  ITFunction it = resolve_it(it_name.empty() ? sc.it_family : it_name);
  if (!all_orders) {
    RunOutcome out = run_scenario(sc, it);
    if (format == "json") {
      json j = outcome_to_json(out);
      j["scenario"] = sc.name;
      j["function"] = it.name;
      std::cout << j.dump(2) << "\n";
    } else {
      print_outcome_text(sc.name, it.name, out);
    }
    return out.converged ? 0 : 1;
  }
  std::vector<RunOutcome> outs = run_all_orders(sc, it, cap);
  long diverged = 0;
  for (const RunOutcome& o : outs)
    if (!o.converged) ++diverged;
  if (format == "json") {
    json arr = json::array();
    for (const RunOutcome& o : outs) arr.push_back(outcome_to_json(o));
    json j{{"scenario", sc.name},
           {"function", it.name},
           {"orders", outs.size()},
           {"diverged", diverged},
           {"outcomes", std::move(arr)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "scenario: " << sc.name << "\n";
    std::cout << "function: " << it.name << "\n";
    std::cout << "delivery orders: " << outs.size() << "\n";
    std::cout << "diverged: " << diverged << "\n";
    for (const RunOutcome& o : outs) {
      if (o.converged) continue;
      std::cout << "first diverging order:";
      for (size_t s = 0; s < o.delivery_orders.size(); ++s) {
        std::cout << " site" << s << "=[";
        for (size_t i = 0; i < o.delivery_orders[s].size(); ++i)
          std::cout << (i ? "," : "") << o.delivery_orders[s][i];
        std::cout << "]";
      }
      std::cout << "\n";
      print_outcome_text(sc.name, it.name, o);
      break;
    }
  }
  return diverged == 0 ? 0 : 1;
}

int cmd_check_tp1(const std::string& it_name, const DomainFlags& flags,
                  const std::string& format) {
  OperationDomain dom = to_domain(flags);
  ITFunction it = resolve_it(it_name);
  TP1Report rep = check_tp1(it, dom);
  if (format == "json") {
    std::cout << tp1_report_to_json(it.name, dom, rep).dump(2) << "\n";
  } else {
    std::cout << "function: " << it.name << "\n";
    std::cout << "domain: " << domain_line(dom) << "\n";
    std::cout << "instances: " << rep.instances << "\n";
    std::cout << "tp1: " << (rep.holds ? "holds" : "fails") << " ("
              << rep.witnesses.size() << " witnesses)\n";
    int shown = 0;
    for (const TP1Witness& w : rep.witnesses) {
      if (shown++ == kMaxTextWitnesses) {
        std::cout << "  ... and " << (rep.witnesses.size() - kMaxTextWitnesses)
                  << " more\n";
        break;
      }
      std::cout << "  o1=" << w.o1.str() << " o2=" << w.o2.str()
                << " t21=" << w.t21.str() << " t12=" << w.t12.str() << " ["
                << to_string(w.tag) << "] left=" << render(w.left)
                << " right=" << render(w.right) << "\n";
    }
  }
  return rep.holds ? 0 : 1;
}

int cmd_check_tp2(const std::string& it_name, const DomainFlags& flags,
                  const std::string& format) {
  OperationDomain dom = to_domain(flags);
  ITFunction it = resolve_it(it_name);
  TP2Report rep = check_tp2(it, dom);
  if (format == "json") {
    std::cout << tp2_report_to_json(it.name, dom, rep).dump(2) << "\n";
  } else {
    std::cout << "function: " << it.name << "\n";
    std::cout << "domain: " << domain_line(dom) << "\n";
    std::cout << "instances: " << rep.instances << "\n";
    std::cout << "tp2: " << (rep.holds ? "holds" : "fails") << " ("
              << rep.witnesses.size() << " witnesses)\n";
    int shown = 0;
    for (const TP2Witness& w : rep.witnesses) {
      if (shown++ == kMaxTextWitnesses) {
        std::cout << "  ... and " << (rep.witnesses.size() - kMaxTextWitnesses)
                  << " more\n";
        break;
      }
      std::cout << "  o1=" << w.o1.str() << " o2=" << w.o2.str()
                << " o3=" << w.o3.str() << " -> r1=" << w.r1.str()
                << " r2=" << w.r2.str() << " ["
                << to_string(classify_witness(w)) << "]\n";
    }
  }
  return rep.holds ? 0 : 1;
}

int cmd_synthesize(const DomainFlags& flags, const std::string& format) {
  OperationDomain dom = to_domain(flags);
  CaseConstraintSet cs = synthesize_tp1(dom);
  std::vector<ITStrategy> strategies = coherence_filter(cs);
  ImpossibilityReport rep = prove_impossibility(strategies, dom);
  const bool satisfiable = !rep.all_fail || strategies.empty();
  if (format == "json") {
    json names1 = json::array(), names2 = json::array(), other = json::array();
    json strat = json::array();
    json minimal = json::array();
    for (size_t k = 0; k < strategies.size(); ++k)
      strat.push_back(strategy_to_json(rep.per_strategy[k].name, strategies[k]));
    for (const StrategyTp2Result& r : rep.per_strategy) {
      if (r.minimal) minimal.push_back(tp2_witness_to_json(*r.minimal));
      if (r.scenario1_witnesses > 0) names1.push_back(r.name);
      if (r.scenario2_witnesses > 0) names2.push_back(r.name);
      if (r.other_witnesses > 0) other.push_back(r.name);
    }
    json imp = impossibility_to_json(rep);
    json j{{"domain", domain_to_json(dom)},
           {"tp1_admissible", constraint_set_to_json(cs)},
           {"coherent_strategies", std::move(strat)},
           {"tp2",
            {{"all_fail", rep.all_fail},
             {"witnesses", std::move(minimal)},
             {"classification",
              {{"scenario-1", std::move(names1)},
               {"scenario-2", std::move(names2)},
               {"other", std::move(other)}}},
             {"per_strategy", imp["per_strategy"]},
             {"contradiction", imp["contradiction"]},
             {"contradiction_holds", rep.contradiction_holds}}},
           {"tp1_and_tp2_satisfiable", satisfiable}};
    std::cout << j.dump(2) << "\n";
  } else {
    const auto& groups = case_groups();
    std::cout << "domain: " << domain_line(dom) << "\n";
    std::cout << "tp1 admissible assignments per case group:\n";
    for (size_t g = 0; g < groups.size(); ++g) {
      std::cout << "  " << groups[g].name << ":";
      for (const GroupAssignment& asg : cs.admissible[g]) {
        std::cout << " (";
        for (size_t i = 0; i < asg.size(); ++i)
          std::cout << (i ? "," : "") << to_string(asg[i]);
        std::cout << ")";
      }
      std::cout << "\n";
    }
    std::cout << "coherent strategies: " << strategies.size() << "\n";
    for (size_t k = 0; k < strategies.size(); ++k) {
      std::cout << "  " << rep.per_strategy[k].name << ":";
      for (int c = 0; c < kTransformCaseCount; ++c)
        std::cout << " " << case_key(static_cast<TransformCase>(c)) << "="
                  << to_string(strategies[k][static_cast<size_t>(c)]);
      std::cout << "\n";
    }
    std::cout << "tp2: "
              << (rep.all_fail ? "all strategies fail" : "NOT all fail")
              << "\n";
    for (const StrategyTp2Result& r : rep.per_strategy) {
      std::cout << "  " << r.name << ": " << r.witness_count << " witnesses";
      if (r.minimal)
        std::cout << "; minimal o1=" << r.minimal->o1.str()
                  << " o2=" << r.minimal->o2.str()
                  << " o3=" << r.minimal->o3.str()
                  << " -> r1=" << r.minimal->r1.str()
                  << " r2=" << r.minimal->r2.str();
      std::cout << "; patterns: scenario-1=" << r.scenario1_witnesses
                << " scenario-2=" << r.scenario2_witnesses
                << " other=" << r.other_witnesses << "\n";
    }
    std::cout << "contradiction on the equal-position insert case:\n";
    for (const ChainRequirement& c : rep.contradiction) {
      std::cout << "  " << case_key(c.conflict_case) << ": scenario-1 admits {";
      for (size_t i = 0; i < c.scenario1_admits.size(); ++i)
        std::cout << (i ? "," : "") << to_string(c.scenario1_admits[i]);
      std::cout << "}, scenario-2 admits {";
      for (size_t i = 0; i < c.scenario2_admits.size(); ++i)
        std::cout << (i ? "," : "") << to_string(c.scenario2_admits[i]);
      std::cout << "} -> jointly satisfiable: "
                << (c.jointly_satisfiable ? "yes" : "no") << "\n";
    }
    std::cout << "TP1 and TP2 satisfiable: " << (satisfiable ? "yes" : "no")
              << "\n";
  }
  return satisfiable ? 0 : 1;
}

int cmd_scenarios(const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const Scenario& sc : builtin_scenarios())
      arr.push_back(scenario_to_json(sc));
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const Scenario& sc : builtin_scenarios()) {
      int gens = 0;
      for (const Event& e : sc.events)
        if (std::holds_alternative<GenerateEvent>(e)) ++gens;
      std::cout << sc.name << ": " << sc.sites << " sites, initial \""
                << sc.initial << "\", function " << sc.it_family << ", "
                << gens << " operations\n";
    }
  }
  return 0;
}

int cmd_replay_all(const std::string& format) {
  bool all_converged = true;
  json arr = json::array();
  for (const Scenario& sc : builtin_scenarios()) {
    ITFunction it = resolve_it(sc.it_family);
    RunOutcome out = run_scenario(sc, it);
    if (!out.converged) all_converged = false;
    if (format == "json") {
      json j = outcome_to_json(out);
      j["scenario"] = sc.name;
      j["function"] = it.name;
      arr.push_back(std::move(j));
    } else {
      std::cout << sc.name << " (" << it.name << "): ";
      for (size_t s = 0; s < out.sites.size(); ++s)
        std::cout << (s ? " " : "") << "\"" << out.sites[s].doc << "\"";
      std::cout << (out.converged ? "  converged" : "  DIVERGED") << "\n";
    }
  }
  if (format == "json") std::cout << arr.dump(2) << "\n";
  return all_converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"replicated-string transformation workbench"};
  app.require_subcommand(1);

  std::string format = "text";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  std::string scenario_arg, it_name;
  bool all_orders = false;
  long cap = 10000;
  DomainFlags flags;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Replay a scenario and report per-site documents");
  simulate->add_option("--scenario", scenario_arg,
                       "Builtin scenario name or JSON file path")
      ->required();
  simulate->add_option("--it", it_name,
                       "Transformation function (default: the scenario's)");
  simulate->add_flag("--all-orders", all_orders,
                     "Enumerate every causally admissible delivery order");
  simulate->add_option("--cap", cap, "Outcome cap for --all-orders")
      ->capture_default_str();
  add_format(simulate);

  CLI::App* tp1 = app.add_subcommand(
      "check-tp1", "Exhaustively check the two-operation convergence identity");
  tp1->add_option("--it", it_name, "Transformation function")->required();
  add_domain_flags(tp1, flags);
  add_format(tp1);

  CLI::App* tp2 = app.add_subcommand(
      "check-tp2",
      "Exhaustively check transformation-path agreement for third operations");
  tp2->add_option("--it", it_name, "Transformation function")->required();
  add_domain_flags(tp2, flags);
  add_format(tp2);

  CLI::App* synth = app.add_subcommand(
      "synthesize",
      "Search all position-shift strategies: admissible assignments, coherent "
      "strategies, and the joint impossibility");
  add_domain_flags(synth, flags);
  add_format(synth);

  CLI::App* scen =
      app.add_subcommand("scenarios", "List the builtin scenario catalog");
  add_format(scen);

  CLI::App* replay = app.add_subcommand(
      "replay-all", "Replay every builtin scenario under its own function");
  add_format(replay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(scenario_arg, it_name, all_orders, cap, format);
    if (tp1->parsed()) return cmd_check_tp1(it_name, flags, format);
    if (tp2->parsed()) return cmd_check_tp2(it_name, flags, format);
    if (synth->parsed()) return cmd_synthesize(flags, format);
    if (scen->parsed()) return cmd_scenarios(format);
    if (replay->parsed()) return cmd_replay_all(format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
