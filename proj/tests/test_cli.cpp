#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "fingap/elliptic.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FINGAP_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

double re(const nlohmann::json& z) { return z[0].get<double>(); }

}  // namespace

TEST_CASE("curve reports the three roots -e_i") {
  const auto r = run("curve --l 0,0,0,1 --tau 0+2i");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "curve");
  for (const char* k : {"version", "command", "inputs", "results", "diagnostics"}) CHECK(j.contains(k));
  const auto ctx = fingap::make_context(fingap::cplx(0, 2));
  const auto& roots = j["results"]["roots"];
  REQUIRE(roots.size() == 3);
  CHECK(re(roots[0]) == doctest::Approx(-ctx.e(1).real()).epsilon(1e-12));
  CHECK(re(roots[1]) == doctest::Approx(-ctx.e(2).real()).epsilon(1e-12));
  CHECK(re(roots[2]) == doctest::Approx(-ctx.e(3).real()).epsilon(1e-12));
}

TEST_CASE("bands as CSV") {
  const auto r = run("bands --l 0,0,0,1 --tau 0+2i --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("gap,lower,upper\n0,-inf,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}

TEST_CASE("heun reports a vanishing Fuchs defect") {
  const auto r = run("heun --l 0,0,0,1 --tau 0+2i --E 0");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(re(j["results"]["fuchs_defect"])) < 1e-12);
  CHECK(j["results"]["cycle_winding_numbers"] == nlohmann::json::array({-1, -1, 0}));
}

TEST_CASE("other commands") {
  auto j = nlohmann::json::parse(run("xi --l 2,1,0,0 --tau 0.3+1.4i").out);
  CHECK(j["results"]["genus"] == 2);
  j = nlohmann::json::parse(run("operator-check --l 2,1,0,0 --tau 2i").out);
  CHECK(j["results"]["commutator_pass"] == true);
  CHECK(j["results"]["determinant"]["proven_case"] == true);
  j = nlohmann::json::parse(run("monodromy --l 1,1,0,1 --tau 0.2+1.3i --E 4-2i --period 0,1").out);
  CHECK(j["results"]["agree"] == true);
  j = nlohmann::json::parse(run("eigen-continue --l 1,1,0,0 --m 1 --p-path 0:0.05:2").out);
  CHECK(j["results"]["samples"].size() == 3);
  CHECK(j["results"]["truncated"] == false);
}

TEST_CASE("output is deterministic") {
  const auto a = run("monodromy --l 2,1,0,0 --tau 0.3+1.4i --E 3+1i");
  const auto b = run("monodromy --l 2,1,0,0 --tau 0.3+1.4i --E 3+1i");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("exit codes") {
  CHECK(run("curve --l 0,0,0,0").code == 2);
  CHECK(run("curve --l 1,2,3").code == 2);
  CHECK(run("curve --tau 1-2i").code == 2);
  CHECK(run("curve --tau abc").code == 2);
  CHECK(run("xi --format csv").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("bands --l 1,0,0,1").code == 1);
  CHECK(run("monodromy --l 0,0,0,1 --tau 2i --E 0").code == 0);
}
