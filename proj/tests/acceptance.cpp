// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "minmax/cli.hpp"
#include "minmax/comparison.hpp"
#include "minmax/error.hpp"
#include "minmax/gauss_stable.hpp"
#include "minmax/hyper.hpp"
#include "minmax/numeric.hpp"
#include "oracles.hpp"

using namespace mmh;
using nlohmann::json;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

struct Checker {
  Result r;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (r.pass) r.detail.clear();
      r.pass = false;
      r.detail += (r.detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) {
    if (r.pass) r.detail += (r.detail.empty() ? "" : "; ") + s;
  }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<DistributionSpec> positive_laws() {
  return {dist::exponential(1), dist::uniform(0, 1), dist::pareto(3, 1), dist::weibull(2, 1), dist::halfnormal(1)};
}

std::vector<DistributionSpec> builtins() {
  return {dist::exponential(1),  dist::uniform(0, 1),   dist::pareto(3, 1),
          dist::weibull(2, 1),   dist::halfnormal(1),   dist::lognormal(0, 1),
          dist::constant(1.5),   dist::atomzero(0.3, dist::exponential(1)), dist::loglight(),
          dist::stablemod(1.5)};
}

int cli(const std::vector<std::string>& args, std::string& out) {
  std::vector<const char*> argv = {"minmax_hyper"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  return code;
}

// 1
Result exponential_constant() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  std::string out;
  const int code = cli({"hyper-min", "--dist", "exp(1)", "--p", "1", "--q", "2", "--no-timestamp"}, out);
  const double secs = seconds_since(t0);
  const json j = json::parse(out);
  const double C = j["summary"]["C_empirical"].get<double>();
  double lo = INFINITY, hi = 0;
  for (const auto& row : j["result"]["empirical"]["profile"]) {
    lo = std::min(lo, row["ratio"].get<double>());
    hi = std::max(hi, row["ratio"].get<double>());
  }
  c.expect(code == 0, "exit code " + std::to_string(code));
  c.expect(std::abs(C - std::sqrt(2.0)) <= 1e-6, "C = " + fmt(C, 12));
  c.expect(hi - lo <= 1e-6, "profile spread " + fmt(hi - lo));
  c.expect(j["result"]["empirical"]["profile"].size() == 31, "n grid is not 2^0..2^30");
  c.expect(secs < 10, "runtime " + fmt(secs) + " s");
  c.note("C = " + fmt(C, 12) + ", spread " + fmt(hi - lo, 3) + ", " + fmt(secs, 3) + " s");
  return c.r;
}

// 2
Result composition_vs_mc() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  // r = 1 except stablemod(1.5), where r = 1/2 keeps the estimator's variance finite.
  // constant() is left out: its Monte Carlo standard error is zero.
  const std::vector<DistributionSpec> laws = {dist::exponential(1),  dist::uniform(0, 1), dist::pareto(3, 1),
                                              dist::weibull(2, 1),   dist::halfnormal(1), dist::lognormal(0, 1),
                                              dist::atomzero(0.3, dist::exponential(1)), dist::loglight(),
                                              dist::stablemod(1.5)};
  std::mt19937_64 g(20240611);
  int worst = 0;
  double worst_z = 0;
  for (int k = 0; k < 20; ++k) {
    const auto& d = laws[g() % laws.size()];
    const std::size_t depth = 1 + g() % 3;
    std::vector<WordStep> steps;
    for (std::size_t i = 0; i < depth; ++i) steps.push_back({g() % 2 ? Op::MAX : Op::MIN, 1 + g() % 5});
    const Word w(steps);
    const double r = d.tail_index() < 2 ? 0.5 : 1.0;
    const double exact = std::pow(moment_norm({d, w, r}), r);
    const auto mc = oracle::tournament_moment(d, w, r, 1000000, 1000 + k);
    const double z = std::abs(exact - mc.mean) / mc.std_error;
    if (z > worst_z) {
      worst_z = z;
      worst = k;
    }
    c.expect(z <= 4.0, d.name() + " " + w.to_string() + ": " + fmt(z, 3) + " stderr");
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 120, "runtime " + fmt(secs) + " s");
  c.note("20 pairs, largest deviation " + fmt(worst_z, 3) + " stderr (pair " + std::to_string(worst) + "), " +
         fmt(secs, 3) + " s");
  return c.r;
}

// 3
Result min_loop() {
  Checker c;
  HyperParams hp;
  double worst = 0;
  for (const auto& d : positive_laws()) {
    const auto rep = check_min_conditions(d, hp);
    for (const char* id : {"ii", "iii", "iv"})
      c.expect(rep.find(id)->verdict == Verdict::Holds, d.name() + " (" + id + ") " + to_string(rep.find(id)->verdict));
    c.expect(rep.sigma > 0, d.name() + " sigma = 0");
    // Recompute ||m_n||_q / ||m_n||_p on the full grid and compare with 1 / sigma.
    for (std::uint64_t n : hp.n_grid) {
      const Word w = Word::single(Op::MIN, n);
      const double ratio = moment_norm({d, w, hp.q, 1e-11}) / moment_norm({d, w, hp.p, 1e-11});
      const double excess = ratio * rep.sigma - 1.0;
      worst = std::max(worst, excess);
      c.expect(excess <= 1e-8, d.name() + " n = " + std::to_string(n) + " violates by " + fmt(excess));
    }
  }
  for (const auto& d : {dist::atomzero(0.3, dist::exponential(1)), dist::loglight()}) {
    const auto rep = check_min_conditions(d, hp);
    const auto* iii = rep.find("iii");
    c.expect(iii->verdict == Verdict::Fails, d.name() + " (iii) " + to_string(iii->verdict));
    c.expect(!iii->witnesses.empty(), d.name() + " (iii) has no witness");
  }
  c.note("5 laws hold, largest relative excess " + fmt(worst, 3) + ", both counterexamples fail (iii) with witnesses");
  return c.r;
}

// 4
Result max_loop() {
  Checker c;
  HyperParams hp;
  for (const auto& d : positive_laws()) {
    const auto rep = check_max_conditions(d, hp);
    for (const char* id : {"ii", "iii", "iv", "ii<=>iii"})
      c.expect(rep.find(id)->verdict == Verdict::Holds, d.name() + " (" + id + ") " + to_string(rep.find(id)->verdict));
    const double B = rep.find("ii")->constant("B");
    const double B_from_D = rep.find("ii<=>iii")->constant("B_from_D_eps_0.5");
    c.expect(B_from_D >= B * (1 - 1e-9), d.name() + ": B from D " + fmt(B_from_D) + " below fitted " + fmt(B));
  }
  HyperParams q25 = hp;
  q25.q = 2.5;
  const auto p25 = check_max_conditions(dist::pareto(3, 1), q25);
  c.expect(p25.overall() == Verdict::Holds, "pareto(3,1) q = 2.5 " + std::string(to_string(p25.overall())));
  HyperParams q3 = hp;
  q3.q = 3;
  bool raised = false;
  try {
    check_max_conditions(dist::pareto(3, 1), q3);
  } catch (const InfiniteMoment&) {
    raised = true;
  }
  c.expect(raised, "pareto(3,1) q = 3 did not raise InfiniteMoment");
  c.note("5 laws hold at q = 2, pareto(3,1) holds at q = 2.5 and raises InfiniteMoment at q = 3");
  return c.r;
}

// 5
Result words() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  HyperParams hp;
  const auto e = dist::exponential(1);
  const auto cs = clip_sigma_search(e, hp);
  c.expect(cs.sigma > 0, "sigma = 0");
  const auto ws = minmax_words(2, {2, 4, 8});
  const auto it = iterated_hyper_check(e, hp, ws, cs.sigma);
  std::size_t ok = 0;
  for (const auto& w : it.words) {
    // Independent ratio from moment_norm on the composed law.
    const double ratio = moment_norm({e, w.word, 2.0, 1e-11}) / moment_norm({e, w.word, 1.0, 1e-11});
    const bool holds = ratio * cs.sigma <= 1.0 + 1e-8;
    ok += holds;
    c.expect(holds, w.word.to_string() + " ratio " + fmt(ratio));
  }
  c.expect(it.verdict == Verdict::Holds, "iterated check " + std::string(to_string(it.verdict)));
  const double secs = seconds_since(t0);
  c.expect(secs < 60, "runtime " + fmt(secs) + " s");
  c.note("sigma = " + fmt(cs.sigma) + ", " + std::to_string(ok) + "/" + std::to_string(ws.size()) + " words, " +
         fmt(secs, 3) + " s");
  return c.r;
}

/// E M_N^r from P(M_N > t) = 1 - (1 - P(X > t))^N, integrated piecewise with Gauss-Kronrod.
double max_moment_by_quadrature(const DistributionSpec& d, std::uint64_t N, double r) {
  std::vector<double> cuts = {0.0};
  for (double v : num::geomspace(1e-300, 1.0, 400)) {
    const double t = d.tail_quantile(v);
    if (std::isfinite(t) && t > 0) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0;
  auto f = [&](double t) {
    if (t <= 0) return 0.0;
    const double u = d.tail(t);
    const double p = -std::expm1(static_cast<double>(N) * std::log1p(-u));
    return r * std::pow(t, r - 1) * p;
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 10, 1e-11);
  return total;
}

// 6
Result sandwiches() {
  Checker c;
  const double r = 1.0;
  std::size_t points = 0;
  for (const auto& d : builtins()) {
    for (std::uint64_t N : {1ull, 10ull, 100ull, 10000ull}) {
      const auto b = max_moment_bounds(d, N, r);
      const double exact = max_moment_by_quadrature(d, N, r);
      const double slack = 1e-7 * exact;
      c.expect(b.lower <= exact + slack && exact <= b.upper + slack,
               d.name() + " N = " + std::to_string(N) + ": " + fmt(b.lower) + " <= " + fmt(exact) + " <= " + fmt(b.upper));
      for (double x : log_quantile_grid(d.model(), 100)) {
        const double t = std::exp(x);
        const auto s = max_tail_sandwich(d, t, N);
        const double u = d.tail(t);
        const double mid = -std::expm1(static_cast<double>(N) * std::log1p(-u));
        ++points;
        c.expect(s.lower <= mid * (1 + 1e-12) && mid <= s.upper * (1 + 1e-12),
                 d.name() + " tail sandwich at t = " + fmt(t));
      }
    }
  }
  c.note(std::to_string(builtins().size()) + " laws x 4 N, r = 1, " + std::to_string(points) + " tail points");
  return c.r;
}

// 7
Result golden_constants() {
  Checker c;
  auto exact = [&](double got, double want, const char* name) {
    c.expect(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)), std::string(name) + " = " + fmt(got, 17));
  };
  exact(lemma21_alpha(2, 1, 2), 8, "alpha_21");
  exact(lemma32_K(std::sqrt(2.0), 1, 2), 16, "K_32");
  exact(regularity_R(0.5), 6 * std::sqrt(2.0), "R(1/2)");
  const auto p = integral_form_constants(0.25);
  exact(p.delta, 0.5, "delta");
  exact(p.R, 2, "R");
  exact(p.beta, 1, "beta");
  c.note("alpha_21 = 8, K_32 = 16, R(1/2) = " + fmt(regularity_R(0.5), 10) + ", (delta, R, beta) = (0.5, 2, 1)");
  return c.r;
}

// 8
Result paley_zygmund() {
  Checker c;
  std::size_t rows = 0;
  for (const auto& d : builtins()) {
    HyperParams hp;
    // stablemod(1.5) has no second moment.
    if (d.tail_index() < 2) {
      hp.p = 0.5;
      hp.q = 1.0;
    }
    const double C = empirical_hyper_constant(d, hp, Op::MIN).C;
    for (const auto& row : paley_zygmund_check(d, hp, Op::MIN, {0.25, 0.5, 0.75}, C)) {
      ++rows;
      // Probability recomputed in log space: n log P(X > lambda ||m_n||_p).
      const double log_norm = log_moment_norm(compose_cdf(d, Word::single(Op::MIN, row.n)), hp.p);
      const double prob =
          std::exp(static_cast<double>(row.n) * d.model().log_tail_at(std::log(row.lambda) + log_norm));
      c.expect(std::abs(prob - row.probability) <= 1e-8 * prob + 1e-300,
               d.name() + " probability mismatch at n = " + std::to_string(row.n));
      c.expect(prob >= row.bound, d.name() + " n = " + std::to_string(row.n) + " lambda = " + fmt(row.lambda));
    }
  }
  c.note(std::to_string(rows) + " (law, lambda, n) rows");
  return c.r;
}

McOptions budget(std::uint64_t n) {
  McOptions o;
  o.samples = n;
  return o;
}

// 9
Result gaussian_small_ball() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = VectorLaw::gaussian(Eigen::MatrixXd::Identity(2, 2), 9);
  const std::vector<double> radii = {0.25, 0.5, 1.0, 2.0};
  const auto est = small_ball(g, ConvexSet::lpball(2, 2.0, 1.0), Eigen::VectorXd::Zero(2), radii, budget(1000000));
  std::string vals;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double exact = -std::expm1(-radii[i] * radii[i] / 2);
    const auto& p = est.estimates[i];
    c.expect(p.lo <= exact && exact <= p.hi, "t = " + fmt(radii[i]) + ": " + fmt(exact) + " outside [" + fmt(p.lo) +
                                                 ", " + fmt(p.hi) + "]");
    vals += (vals.empty() ? "" : ", ") + fmt(p.p, 5);
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 30, "runtime " + fmt(secs) + " s");
  c.note("estimates " + vals + ", " + fmt(secs, 3) + " s");
  return c.r;
}

struct StableConfig {
  double alpha;
  std::size_t d;
};

std::vector<StableConfig> stable_configs() {
  std::vector<StableConfig> v;
  for (double a : {0.8, 1.0, 1.5, 2.0})
    for (std::size_t d : {2u, 3u}) v.push_back({a, d});
  return v;
}

// 10
Result stable_regularity(std::vector<double>& scales) {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto ts = num::geomspace(1e-3, 1.0, 20);
  std::uint64_t seed = 100;
  for (const auto& cfg : stable_configs()) {
    const auto law = VectorLaw::stable_subgaussian(cfg.alpha, Eigen::MatrixXd::Identity(cfg.d, cfg.d), seed++);
    const auto set = ConvexSet::lpball(cfg.d, 2.0, 1.0);
    const auto rep = regularity_check(law, set, 0.5, ts, budget(1000000), 0.4);
    scales.push_back(rep.scale);
    const std::string tag = "alpha " + fmt(cfg.alpha) + " d " + std::to_string(cfg.d);
    c.expect(rep.holds, tag + ": " + rep.note);
    c.expect(rep.nu_B.p <= 0.5 && std::abs(rep.nu_B.p - 0.4) <= 0.01, tag + ": nu(B) = " + fmt(rep.nu_B.p));
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 600, "runtime " + fmt(secs) + " s");
  c.note("8 configurations, 20 t values each, " + fmt(secs, 3) + " s");
  return c.r;
}

// 11
Result kanter(const std::vector<double>& scales) {
  Checker c;
  const auto kappas = num::geomspace(1e-3, 1.0, 12);
  std::uint64_t seed = 100;
  std::size_t i = 0, rows = 0;
  for (const auto& cfg : stable_configs()) {
    const auto law = VectorLaw::stable_subgaussian(cfg.alpha, Eigen::MatrixXd::Identity(cfg.d, cfg.d), seed++);
    const auto set = ConvexSet::lpball(cfg.d, 2.0, 1.0).scaled(scales.at(i++));
    const auto shifts = default_shifts(set);
    const auto rep = kanter_bound_check(law, set, shifts, kappas, budget(1000000));
    rows += rep.rows.size();
    const std::string tag = "alpha " + fmt(cfg.alpha) + " d " + std::to_string(cfg.d);
    c.expect(shifts.size() == 3, tag + ": shifts");
    c.expect(rep.holds && !rep.inconclusive, tag + ": " + rep.note);
  }
  c.note(std::to_string(rows) + " (shift, kappa) rows across 8 configurations");
  return c.r;
}

// 12
Result khatri_sidak() {
  Checker c;
  Eigen::VectorXd u(2);
  u << 1, 0;
  const std::vector<ConvexSet> sets = {ConvexSet::slab(u, 1.0), ConvexSet::lpball(2, num::kInf, 1.2)};
  std::uint64_t seed = 12;
  for (double rho : {0.0, 0.5, 0.9}) {
    Eigen::MatrixXd S(2, 2);
    S << 1, rho, rho, 1;
    const auto rep = correlation_check(VectorLaw::gaussian(S, seed++), sets, 1.0, budget(10000000));
    c.expect(rep.holds && rep.asserted, "rho = " + fmt(rho) + ": lhs " + fmt(rep.lhs) + " rhs " + fmt(rep.rhs));
    c.note("rho " + fmt(rho) + ": " + fmt(rep.lhs, 5) + " >= " + fmt(rep.rhs, 5));
  }
  return c.r;
}

// 13
Result slepian() {
  Checker c;
  std::mt19937_64 g(13);
  std::normal_distribution<double> N;
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    const int d = 2 + static_cast<int>(g() % 3);
    const int L = 2 + static_cast<int>(g() % 3);
    auto random_pd = [&] {
      Eigen::MatrixXd A(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = N(g);
      return Eigen::MatrixXd(A * A.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d));
    };
    const Eigen::MatrixXd cov = random_pd();
    std::vector<ConvexSet> sets;
    for (int l = 0; l < L; ++l) sets.push_back(ConvexSet::ellipsoid(random_pd()));
    const auto rep = slepian_sqrt2_check(cov, sets, budget(1000000), 1300 + k);
    worst = std::max(worst, rep.ratio);
    c.expect(rep.holds, "configuration " + std::to_string(k) + ": ratio " + fmt(rep.ratio));
  }
  c.note("10 configurations, largest lhs/rhs " + fmt(worst, 4));
  return c.r;
}

// 14
Result thinning() {
  Checker c;
  HyperParams hp;
  const auto v = thinning_equivalence(dist::exponential(1), dist::exponential(2), hp);
  c.expect(v.constant("C_tail") == 1.0, "fitted C_tail = " + fmt(v.constant("C_tail")));
  for (const auto& chk : v.checks) c.expect(chk.verdict == Verdict::Holds, chk.id + " " + to_string(chk.verdict));
  c.expect(v.verdict == Verdict::Holds, "verdict " + std::string(to_string(v.verdict)));
  const auto t = tail_comparison(dist::exponential(1), dist::exponential(2), hp);
  c.expect(t.verdict == Verdict::Holds, "tail comparison " + std::string(to_string(t.verdict)));
  c.note("C_tail = 1; thinned CDF, moment and tail checks hold");
  return c.r;
}

// 15
Result determinism() {
  Checker c;
  const std::string ball = R"({"kind":"lpball","dimension":2,"p":2,"radius":1})";
  const std::string pair = R"([{"kind":"slab","u":[1,0],"width":1},{"kind":"lpball","dimension":2,"p":2,"radius":1}])";
  const std::string ell = R"([{"kind":"ellipsoid","Q":[[1,0],[0,2]]},{"kind":"ellipsoid","Q":[[3,1],[1,1]]}])";
  const std::vector<std::vector<std::string>> runs = {
      {"moments", "--dist", "exp(1)", "--word", "max3.min2", "--samples", "200000"},
      {"bounds", "--dist", "pareto(3,1)"},
      {"hyper-min", "--dist", "weibull(2,1)"},
      {"hyper-max", "--dist", "exp(1)"},
      {"hyper-minmax", "--dist", "exp(1)"},
      {"constants"},
      {"compare", "--dist-x", "exp(1)", "--dist-y", "exp(2)"},
      {"small-ball", "--sets", ball, "--law", "subgaussian", "--alpha", "1.3", "--samples", "200000"},
      {"kanter", "--sets", ball, "--law", "indep", "--alpha", "1", "--samples", "200000"},
      {"regularity", "--sets", ball, "--law", "subgaussian", "--alpha", "1.5", "--samples", "200000"},
      {"correlation", "--sets", pair, "--samples", "200000"},
      {"slepian", "--sets", ell, "--samples", "200000"},
      {"hyp62", "--sets", ell},
      {"integral72", "--sets", ball, "--samples", "200000"},
      {"explore-conjectures", "--samples", "100000"},
  };
  for (const auto& args : runs) {
    auto a = args, b = args;
    for (auto* v : {&a, &b}) v->insert(v->end(), {"--seed", "42", "--no-timestamp"});
    a.insert(a.end(), {"--threads", "1"});
    b.insert(b.end(), {"--threads", "4"});
    std::string out_a, out_b;
    const int ca = cli(a, out_a);
    const int cb = cli(b, out_b);
    c.expect(ca == cb && out_a == out_b && !out_a.empty(), args[0] + " differs between 1 and 4 threads");
  }
  c.note(std::to_string(runs.size()) + " subcommands byte-identical at 1 and 4 threads");
  return c.r;
}

}  // namespace

int main() {
  std::vector<double> scales;
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"exponential min-hyper constant", exponential_constant},
      {"composition vs Monte Carlo", composition_vs_mc},
      {"min conditions loop", min_loop},
      {"max conditions loop", max_loop},
      {"clip sigma and word sweep", words},
      {"max moment and tail sandwiches", sandwiches},
      {"constants golden values", golden_constants},
      {"Paley-Zygmund lower bound", paley_zygmund},
      {"Gaussian small ball", gaussian_small_ball},
      {"stable regularity", [&] { return stable_regularity(scales); }},
      {"shifted small-ball bound", [&] { return kanter(scales); }},
      {"slab correlation in the plane", khatri_sidak},
      {"sqrt(2) comparison of maxima", slepian},
      {"thinning equivalence", thinning},
      {"determinism across threads", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("criterion %2zu %s  %s: %s (%.1f s)\n", i + 1, r.pass ? "PASS" : "FAIL", criteria[i].first,
                r.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
