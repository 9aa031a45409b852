#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "otlab/json_io.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(OTLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("simulate exit codes follow scenario convergence") {
  const std::pair<const char*, int> expected[] = {
      {"fig1-naive", 1},    {"fig2-transformed", 0}, {"ellis-tp1", 1},
      {"sun-tp1", 1},       {"suleiman-tp1", 1},     {"ressel-tp2", 1},
      {"imine-tp2", 1},     {"scenario-1", 0},       {"scenario-2", 1},
  };
  for (const auto& [name, code] : expected) {
    CliResult r = run_cli(std::string("simulate --scenario ") + name);
    INFO(name);
    REQUIRE(r.code == code);
  }
}

TEST_CASE("simulate reports documents as json") {
  CliResult r = run_cli("simulate --scenario fig1-naive --it identity --format json");
  REQUIRE(r.code == 1);
  json j = json::parse(r.out);
  REQUIRE(j["scenario"] == "fig1-naive");
  REQUIRE(j["function"] == "identity");
  REQUIRE(j["converged"] == false);
  REQUIRE(j["sites"][0]["doc"] == "effece");
  REQUIRE(j["sites"][1]["doc"] == "effect");
  REQUIRE(j["divergence"]["doc_a"] == "effece");

  CliResult ok = run_cli("simulate --scenario fig1-naive --it sun --format json");
  REQUIRE(ok.code == 0);
  json jok = json::parse(ok.out);
  REQUIRE(jok["converged"] == true);
  REQUIRE(jok["sites"][0]["doc"] == "effect");
  REQUIRE(jok["sites"][1]["doc"] == "effect");
}

TEST_CASE("all-orders enumeration is exposed through simulate") {
  CliResult r = run_cli(
      "simulate --scenario ressel-tp2 --all-orders --format json");
  REQUIRE(r.code == 1);
  json j = json::parse(r.out);
  REQUIRE(j["orders"] == 8);
  REQUIRE(j["diverged"] == 8);
  REQUIRE(j["outcomes"].size() == 8);
  REQUIRE(j["outcomes"][0].contains("delivery_orders"));

  CliResult capped = run_cli(
      "simulate --scenario ressel-tp2 --all-orders --cap 7");
  REQUIRE(capped.code == 2);
}

TEST_CASE("tp1 checking distinguishes sound and unsound functions") {
  REQUIRE(run_cli("check-tp1 --it sun").code == 1);
  REQUIRE(run_cli("check-tp1 --it ressel").code == 0);
  REQUIRE(run_cli("check-tp1 --it imine").code == 0);

  CliResult r = run_cli("check-tp1 --it ellis --alphabet f --format json");
  REQUIRE(r.code == 1);
  json j = json::parse(r.out);
  REQUIRE(j["function"] == "ellis");
  REQUIRE(j["holds"] == false);
  REQUIRE(j["instances"] == 64);
  bool named_pair = false;
  for (const auto& w : j["witnesses"]) {
    if (w["o1"]["kind"] == "ins" && w["o1"]["pos"] == 1 &&
        w["o1"]["char"] == "f" && w["o1"]["priority"] == 1 &&
        w["o2"]["kind"] == "del" && w["o2"]["pos"] == 1)
      named_pair = true;
  }
  REQUIRE(named_pair);
}

TEST_CASE("tp2 checking reports classified witnesses") {
  CliResult r = run_cli("check-tp2 --it ressel --alphabet ce --format json");
  REQUIRE(r.code == 1);
  json j = json::parse(r.out);
  REQUIRE(j["property"] == "tp2");
  REQUIRE(j["holds"] == false);
  REQUIRE(j["witnesses"].size() > 0);
  for (const auto& w : j["witnesses"]) REQUIRE(w.contains("pattern"));

  REQUIRE(run_cli("check-tp2 --it imine --max-pos 2 --alphabet ce").code == 0);
}

TEST_CASE("synthesize emits the full search report") {
  CliResult r = run_cli("synthesize --format json");
  REQUIRE(r.code == 1);
  json j = json::parse(r.out);

  const json& adm = j["tp1_admissible"];
  REQUIRE(adm["ins-ins-diff"].size() == 1);
  REQUIRE(adm["ins-ins-eq-chars-diff"].size() == 2);
  REQUIRE(adm["ins-ins-eq-chars-eq"].size() == 3);
  REQUIRE(adm["ins-del-lt"].size() == 1);
  REQUIRE(adm["ins-del-eq"].size() == 1);
  REQUIRE(adm["ins-del-gt"].size() == 1);
  REQUIRE(adm["del-del-diff"].size() == 1);
  REQUIRE(adm["del-del-eq"].size() == 4);

  REQUIRE(j["coherent_strategies"].size() == 6);
  REQUIRE(j["tp2"]["all_fail"] == true);
  REQUIRE(j["tp2"]["witnesses"].size() == 6);
  REQUIRE(j["tp2"]["classification"]["scenario-1"].size() == 6);
  REQUIRE(j["tp2"]["classification"]["scenario-2"].size() == 6);
  REQUIRE(j["tp2"]["contradiction_holds"] == true);
  REQUIRE(j["tp1_and_tp2_satisfiable"] == false);

  CliResult text = run_cli("synthesize");
  REQUIRE(text.code == 1);
  REQUIRE(text.out.find("coherent strategies: 6") != std::string::npos);
  REQUIRE(text.out.find("TP1 and TP2 satisfiable: no") != std::string::npos);
}

TEST_CASE("synthesized strategies are usable as --it arguments") {
  CliResult r = run_cli("simulate --scenario scenario-1 --it synth:5 --format json");
  REQUIRE((r.code == 0 || r.code == 1));
  json j = json::parse(r.out);
  REQUIRE(j["function"] == "synth:5");

  REQUIRE(run_cli("check-tp1 --it synth:0").code == 0);
  REQUIRE(run_cli("check-tp2 --it synth:0 --max-pos 1 --alphabet ab").code == 1);
}

TEST_CASE("the scenario catalog is listed and loadable") {
  CliResult r = run_cli("scenarios --format json");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  REQUIRE(j.size() == 9);
  for (const auto& sc : j) {
    otlab::Scenario parsed = otlab::scenario_from_json(sc);
    REQUIRE(otlab::find_builtin(parsed.name) != nullptr);
  }

  CliResult text = run_cli("scenarios");
  REQUIRE(text.code == 0);
  REQUIRE(text.out.find("fig2-transformed") != std::string::npos);
}

TEST_CASE("replay-all surfaces the divergent builtins") {
  CliResult r = run_cli("replay-all");
  REQUIRE(r.code == 1);
  REQUIRE(r.out.find("fig1-naive") != std::string::npos);
  REQUIRE(r.out.find("DIVERGED") != std::string::npos);
  REQUIRE(r.out.find("converged") != std::string::npos);
}

TEST_CASE("usage and input errors exit with code 2") {
  REQUIRE(run_cli("").code == 2);
  REQUIRE(run_cli("frobnicate").code == 2);
  REQUIRE(run_cli("check-tp1").code == 2);
  REQUIRE(run_cli("check-tp1 --it nosuch").code == 2);
  REQUIRE(run_cli("simulate --scenario nosuch").code == 2);
  REQUIRE(run_cli("check-tp1 --it sun --max-pos -1").code == 2);
  REQUIRE(run_cli("simulate --scenario scenario-1 --it synth:9").code == 2);
  REQUIRE(run_cli("simulate --scenario fig1-naive --format yaml").code == 2);
  REQUIRE(run_cli("--help").code == 0);
}
