#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <doctest.h>
#include <json.hpp>

#include "minmax/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "minmax_hyper");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = mmh::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json report(const Run& r) { return json::parse(r.out); }

double num(const json& j) { return j.get<double>(); }

}  // namespace

TEST_CASE("hyper-min on exp(1)") {
  const auto r = run({"hyper-min", "--dist", "exp(1)", "--p", "1", "--q", "2"});
  REQUIRE(r.code == 0);
  const auto j = report(r);
  CHECK(j["schema"] == 1);
  CHECK(j["subcommand"] == "hyper-min");
  CHECK(num(j["summary"]["C_empirical"]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(j.contains("grid"));
  CHECK(j.contains("tolerances"));
  CHECK(j.contains("timestamp"));
  for (const auto& a : j["assertions"]) {
    CHECK(a["verdict"] == "holds");
    CHECK(!a["statement"].get<std::string>().empty());
  }
}

TEST_CASE("constants") {
  const auto j = report(run({"constants", "--C", "2", "--p", "1", "--q", "2"}));
  CHECK(num(j["result"]["alpha_21"]) == doctest::Approx(8).epsilon(1e-12));
  CHECK(num(j["result"]["K_32"]) == doctest::Approx(32).epsilon(1e-12));
  CHECK(num(j["result"]["R_b"]) == doctest::Approx(6 * std::sqrt(2.0)).epsilon(1e-12));
  const auto& f = j["result"]["integral_form"];
  CHECK(num(f["delta"]) == doctest::Approx(0.5));
  CHECK(num(f["R"]) == doctest::Approx(2));
  CHECK(num(f["beta"]) == doctest::Approx(1));
}

TEST_CASE("moments with a Monte Carlo cross-check") {
  const auto r = run({"moments", "--dist", "uniform(0,1)", "--word", "max2.min3", "--r", "1", "--samples", "1000000"});
  CHECK(r.code == 0);
  const auto j = report(r);
  CHECK(num(j["result"]["moment"]) == doctest::Approx(5.0 / 14.0).epsilon(1e-9));
  CHECK(j["assertions"][0]["verdict"] == "holds");
  CHECK(j["monte_carlo"]["samples"] == 1000000);
}

TEST_CASE("exit codes") {
  CHECK(run({"hyper-max", "--dist", "pareto(3,1)", "--q", "3"}).code == 1);
  const auto inf = report(run({"hyper-max", "--dist", "pareto(3,1)", "--q", "3"}));
  CHECK(inf["error"]["kind"] == "InfiniteMoment");

  const auto bad = run({"hyper-min", "--dist", "nosuch(1)"});
  CHECK(bad.code == 3);
  CHECK(!bad.err.empty());
  CHECK(bad.out.empty());
  CHECK(run({"hyper-min", "--dist", "exp(1)", "--p", "3", "--q", "2"}).code == 3);
  CHECK(run({"frobnicate"}).code == 3);
  CHECK(run({}).code == 3);
  CHECK(run({"hyper-min", "--dist", "exp(1)", "--format", "xml"}).code == 3);

  const auto atom = run({"hyper-min", "--dist", "atomzero(0.3, exp(1))"});
  CHECK(atom.code == 1);
  // Small-ball comparison needs a min-hypercontractive X.
  CHECK(run({"compare", "--dist-x", "atomzero(0.3, exp(1))", "--dist-y", "exp(1)", "--direction", "small-ball"}).code ==
        2);
  CHECK(run({"compare", "--dist-x", "uniform(0,1)", "--dist-y", "pareto(3,1)", "--direction", "two-sided"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("seed resolution and determinism") {
  const std::vector<std::string> base = {"small-ball", "--sets", R"({"kind":"lpball","dimension":2,"p":2,"radius":1})",
                                         "--no-timestamp", "--samples", "200000"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return run(a);
  };
  const auto s1 = with({"--seed", "5", "--threads", "1"});
  const auto s4 = with({"--seed", "5", "--threads", "4"});
  CHECK(s1.out == s4.out);
  CHECK(report(s1)["seed"] == 5);
  CHECK(!report(s1).contains("timestamp"));

  ::setenv("MINMAX_HYPER_SEED", "5", 1);
  const auto env = with({});
  ::unsetenv("MINMAX_HYPER_SEED");
  CHECK(env.out == s1.out);
  CHECK(report(with({}))["seed"] == 0);
  CHECK(with({"--seed", "6"}).out != s1.out);
}

TEST_CASE("text format and --out") {
  const auto t = run({"hyper-min", "--dist", "exp(1)", "--format", "text"});
  CHECK(t.out.find("hyper-min: exit 0") != std::string::npos);
  CHECK(t.out.find("[holds]") != std::string::npos);

  const auto path = std::filesystem::temp_directory_path() / "minmax_hyper_test_out.json";
  const auto r = run({"constants", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["subcommand"] == "constants");
  std::filesystem::remove(path);
}

TEST_CASE("infinite values are written as strings") {
  const auto j = report(run({"hyper-min", "--dist", "loglight()"}));
  const auto& c = j["summary"]["C_empirical"];
  CHECK((c.is_string() || c.is_number()));
  CHECK(mmh::cli::number(INFINITY) == "inf");
  CHECK(mmh::cli::number(NAN) == "nan");
}

TEST_CASE("installed binary") {
  const std::string bin = MINMAX_HYPER_BIN;
  const int status = std::system((bin + " constants --no-timestamp > /dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 0);
  const int bad = std::system((bin + " hyper-min --dist 'exp(' > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(bad) == 3);
}
