#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "support.hpp"

using robta::testing::model_path;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(ROBTA_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string m(const char* name) { return "'" + model_path(name) + "'"; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check verdicts and exit codes") {
    Run r3 = run("check " + m("fig3.ta"));
    CHECK(r3.code == 0);
    auto j = nlohmann::json::parse(r3.out);
    CHECK(j.contains("witness"));
    CHECK(run("check " + m("fig4.ta")).code == 1);
    CHECK(run("check " + m("fig1.ta")).code == 1);
    CHECK(run("check /nonexistent/model.ta").code == 3);
    CHECK(run("check " + m("fig3.ta") + " --budget 1,1").code != 1);
    CHECK(run("check " + m("fig3.ta") + " --budget nonsense").code == 3);
    CHECK(run("frobnicate").code == 3);
  }

  TEST_CASE("malformed models are input errors") {
    auto path = std::filesystem::temp_directory_path() / "robta_cli_bad.ta";
    std::ofstream(path) << "clocks x\nbound 1\nlocations l0\ninit l0\nedge l0 l0 \"x<z\"\n";
    CHECK(run("check '" + path.string() + "'").code == 3);
    std::filesystem::remove(path);
  }

  TEST_CASE("fog classification") {
    Run r = run("fog " + m("fig1.ta") + " --anchor 'l1: y==0 && 0<x<1' --cycle l1,l2");
    CHECK(r.code == 0);
    CHECK(r.out.find("Doomed(1)") != std::string::npos);
    Run j = run("fog " + m("fig3.ta") + " --anchor 'l0: 0<x && x-y<0 && y<1' --cycle l0,l1,l2 --format json");
    CHECK(j.code == 0);
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["cluster"] == true);
    CHECK(run("fog " + m("fig3.ta") + " --anchor 'l0: x<1' --cycle l0,l1,l2").code == 3);
  }

  TEST_CASE("validate a saved witness") {
    auto path = std::filesystem::temp_directory_path() / "robta_cli_witness.json";
    std::ofstream(path) << run("check " + m("fig3.ta")).out;
    Run v = run("validate " + m("fig3.ta") + " '" + path.string() + "'");
    CHECK(v.code == 0);
    CHECK(v.out == "valid\n");
    Run big = run("validate " + m("fig3.ta") + " '" + path.string() + "' --delta 1");
    CHECK(big.code == 1);
    CHECK(big.out.find("invalid") != std::string::npos);
    std::filesystem::remove(path);
  }

  TEST_CASE("outputs are reproducible") {
    for (const char* cmd : {"check", "regions"}) {
      std::string a = run(std::string(cmd) + " " + m("fig3.ta")).out;
      CHECK(!a.empty());
      CHECK(a == run(std::string(cmd) + " " + m("fig3.ta")).out);
    }
    std::string s = "simulate " + m("fig3.ta") + " --perturbator random --seed 3 --max-steps 30";
    CHECK(run(s).out == run(s).out);
  }

  TEST_CASE("simulate formats") {
    Run csv = run("simulate " + m("fig3.ta") + " --max-steps 30 --format csv");
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("visit,step,w0,w1,L\n", 0) == 0);
    Run jl = run("simulate " + m("fig3.ta") + " --max-steps 30");
    CHECK(jl.code == 0);
    std::string last = jl.out.substr(jl.out.rfind('\n', jl.out.size() - 2) + 1);
    CHECK(nlohmann::json::parse(last)["status"] == "budget-exhausted");
    Run blocked = run("simulate " + m("fig4.ta") +
                      " --controller scripted --anchor 'l0: 0<x && x-y<0 && y<1' --cycle l0,l1,l2 --max-steps 3000");
    CHECK(blocked.code == 0);
    CHECK(blocked.out.find("\"status\":\"blocked\"") != std::string::npos);
    CHECK(run("simulate " + m("fig4.ta") + " --controller scripted").code == 3);
    CHECK(run("simulate " + m("fig4.ta")).code == 1);
  }
}
