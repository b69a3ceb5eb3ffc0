#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "minmax/error.hpp"
#include "minmax/numeric.hpp"
#include "report_json.hpp"

namespace mmh::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSamples = 1000000;

HyperParams hyper_params(const RunConfig& c) {
  HyperParams hp;
  hp.p = c.p;
  hp.q = c.q;
  hp.threads = c.threads;
  hp.rho = c.rho;
  hp.t_grid_size = c.t_grid_size;
  hp.validate();
  return hp;
}

json grid_json(const HyperParams& hp) {
  return {{"n_grid", {{"kind", "powers of two"}, {"first", hp.n_grid.front()}, {"last", hp.n_grid.back()},
                      {"size", hp.n_grid.size()}}},
          {"t_grid_size", hp.t_grid_size},
          {"t_grid", "log-spaced between the 1e-9 and 1 - 1e-9 quantiles"},
          {"rho", hp.rho}};
}

json hyper_tolerances(const HyperParams& hp) {
  return {{"rel_tol", hp.rel_tol}, {"quadrature_rel_tol", 1e-11}, {"log_compare_slack", 1e-12}};
}

McOptions mc_options(const RunConfig& c, std::uint64_t fallback = kDefaultSamples) {
  McOptions o;
  o.samples = c.samples ? c.samples : fallback;
  o.threads = c.threads;
  return o;
}

json mc_tolerances(const McOptions& o) {
  return {{"samples", o.samples},
          {"interval", "Wilson 0.999"},
          {"z", kWilsonZ},
          {"assert_slack", "4 standard errors"},
          {"escalation", "1e7 samples when within 8 standard errors"}};
}

const DistributionSpec require_dist(const std::string& text, const char* flag) {
  if (text.empty()) throw DomainError(std::string("missing ") + flag);
  return parse_spec(text);
}

json json_arg(const std::string& text, const char* flag) {
  if (text.empty()) throw DomainError(std::string("missing ") + flag);
  std::string body = text;
  std::error_code ec;
  if (std::filesystem::is_regular_file(text, ec)) {
    std::ifstream in(text);
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string(flag) + " is not valid JSON: " + e.what());
  }
}

/// --cov: a number, a flat row-major array (square length or with "dimension"),
/// nested rows, or {"dimension": d, "data": [...]}.
Eigen::MatrixXd parse_cov(const json& j) {
  std::vector<double> flat;
  std::size_t d = 0;
  auto fill = [&](const json& arr) {
    if (!arr.empty() && arr.front().is_array()) {
      d = arr.size();
      for (const auto& row : arr) {
        if (row.size() != d) throw DomainError("covariance rows must have equal length");
        for (const auto& v : row) flat.push_back(v.get<double>());
      }
    } else {
      for (const auto& v : arr) flat.push_back(v.get<double>());
    }
  };
  if (j.is_number()) {
    flat = {j.get<double>()};
    d = 1;
  } else if (j.is_array()) {
    fill(j);
  } else if (j.is_object()) {
    fill(j.at("data"));
    if (j.contains("dimension")) d = j.at("dimension").get<std::size_t>();
  } else {
    throw DomainError("--cov must be a number, an array or an object");
  }
  if (d == 0) d = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
  if (d == 0 || d * d != flat.size()) throw DomainError("--cov size does not match its dimension");
  Eigen::MatrixXd m(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k) m(r, k) = flat[r * d + k];
  return m;
}

std::vector<ConvexSet> parse_sets(const RunConfig& c) {
  const json j = json_arg(c.sets, "--sets");
  std::vector<ConvexSet> out;
  if (j.is_array()) {
    for (const auto& s : j) out.push_back(ConvexSet::from_json(s));
  } else {
    out.push_back(ConvexSet::from_json(j));
  }
  if (out.empty()) throw DomainError("--sets lists no set");
  return out;
}

Eigen::MatrixXd cov_or_identity(const RunConfig& c, std::size_t dim) {
  if (c.cov.empty()) return Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  return parse_cov(json_arg(c.cov, "--cov"));
}

VectorLaw make_law(const RunConfig& c, std::size_t dim) {
  const Eigen::MatrixXd cov = cov_or_identity(c, dim);
  if (static_cast<std::size_t>(cov.rows()) != dim) throw DomainError("--cov dimension differs from the sets");
  if (c.law == "gaussian") return VectorLaw::gaussian(cov, c.seed);
  if (c.law == "subgaussian") return VectorLaw::stable_subgaussian(c.alpha, cov, c.seed);
  if (c.law == "indep") return VectorLaw::stable_indep(c.alpha, cov.diagonal().cwiseSqrt(), c.seed);
  throw DomainError("--law must be gaussian, subgaussian or indep");
}

json law_json(const VectorLaw& law) {
  json cov = json::array();
  for (Eigen::Index i = 0; i < law.covariance().rows(); ++i)
    for (Eigen::Index k = 0; k < law.covariance().cols(); ++k) cov.push_back(number(law.covariance()(i, k)));
  return {{"kind", to_string(law.kind())},
          {"dimension", law.dim()},
          {"alpha", law.alpha()},
          {"covariance", cov},
          {"scale_convention", law.scale_convention()}};
}

json sets_json(const std::vector<ConvexSet>& sets) {
  json a = json::array();
  for (const auto& s : sets) a.push_back(s.to_json());
  return a;
}

std::vector<double> default_t_grid() { return num::geomspace(1e-3, 1.0, 20); }

Verdict verdict_of(bool holds) { return holds ? Verdict::Holds : Verdict::Fails; }

json error_json(const Error& e) { return {{"kind", e.kind()}, {"message", e.what()}}; }

Outcome finish(json report) {
  Outcome o;
  if (!report.contains("assertions")) report["assertions"] = json::array();
  o.exit_code = exit_code_for(report["assertions"]);
  o.report = std::move(report);
  return o;
}

// ------------------------------------------------------------------ subcommands

Outcome cmd_moments(const RunConfig& c) {
  const DistributionSpec spec = require_dist(c.dist, "--dist");
  const Word word = Word::parse(c.word);
  const double r = c.r.value_or(1.0);
  const DistributionSpec law = compose_cdf(spec, word);
  const double log_norm = log_moment_norm(law, r, 1e-10);
  json rep;
  rep["result"] = {{"word", word.to_string()},
                   {"r", r},
                   {"norm", number(std::exp(log_norm))},
                   {"log_norm", number(log_norm)},
                   {"moment", number(std::exp(r * log_norm))}};
  rep["tolerances"] = {{"quadrature_rel_tol", 1e-10}};
  rep["summary"] = {{"moment", number(std::exp(r * log_norm))}};
  json assertions = json::array();
  if (c.samples > 0) {
    struct Acc {
      double sum = 0.0, sum_sq = 0.0;
    };
    SamplePlan plan;
    plan.samples = c.samples;
    plan.seed = c.seed;
    plan.threads = c.threads;
    const Acc acc = run_chunks(
        plan, Acc{},
        [&](RandomStream& rng, std::uint64_t count) {
          Acc a;
          for (std::uint64_t k = 0; k < count; ++k) {
            const double v = std::pow(law.sample(rng), r);
            a.sum += v;
            a.sum_sq += v * v;
          }
          return a;
        },
        [](Acc& a, const Acc& b) {
          a.sum += b.sum;
          a.sum_sq += b.sum_sq;
        });
    const double N = static_cast<double>(c.samples);
    const double mean = acc.sum / N;
    const double se = std::sqrt(std::max(0.0, acc.sum_sq / N - mean * mean) / N);
    const double exact = std::exp(r * log_norm);
    rep["monte_carlo"] = {{"samples", c.samples}, {"mean", number(mean)}, {"std_error", number(se)}};
    assertions.push_back(assertion("quadrature_vs_mc", "|E W^r (quadrature) - MC mean| <= 4 stderr",
                                   verdict_of(std::abs(exact - mean) <= 4.0 * se)));
  }
  rep["assertions"] = assertions;
  return finish(rep);
}

Outcome cmd_bounds(const RunConfig& c) {
  const DistributionSpec spec = require_dist(c.dist, "--dist");
  const double r = c.r.value_or(1.0);
  if (!spec.moment_finite(r)) throw InfiniteMoment("E X^r is infinite for " + spec.name());
  const std::vector<double> xs = log_quantile_grid(spec.model(), 200);
  json rows = json::array();
  bool moment_ok = true, tail_ok = true;
  for (std::uint64_t N : c.N) {
    if (N == 0) throw DomainError("N must be positive");
    const MaxMomentBounds b = max_moment_bounds(spec, N, r);
    const DistributionSpec MN = compose_cdf(spec, Word::single(Op::MAX, N));
    const double exact = std::exp(r * log_moment_norm(MN, r, 1e-11));
    const double slack = 1e-9 * exact;
    const bool ok = b.lower <= exact + slack && exact <= b.upper + slack;
    moment_ok = moment_ok && ok;
    std::size_t tail_fail = 0;
    for (double x : xs) {
      const double u = std::exp(spec.model().log_tail_at(x));
      const TailSandwich s = tail_sandwich_from_u(u, N);
      const double exact_tail = std::exp(MN.model().log_tail_at(x));
      if (exact_tail < s.lower * (1.0 - 1e-12) || exact_tail > s.upper * (1.0 + 1e-12)) ++tail_fail;
    }
    tail_ok = tail_ok && tail_fail == 0;
    rows.push_back({{"N", N},
                    {"b_N", number(b.b_N)},
                    {"lower", number(b.lower)},
                    {"moment", number(exact)},
                    {"upper", number(b.upper)},
                    {"at_atom", b.at_atom},
                    {"holds", ok},
                    {"tail_grid_failures", tail_fail}});
  }
  json rep;
  rep["result"] = {{"r", r}, {"rows", rows}, {"tail_grid_size", xs.size()}};
  rep["grid"] = {{"N", c.N}, {"t_grid", "log-spaced quantile grid, 200 points"}};
  rep["tolerances"] = {{"moment_rel_slack", 1e-9}, {"tail_rel_slack", 1e-12}};
  rep["assertions"] = {
      assertion("max_moment_sandwich", "lower <= E M_N^r <= upper around b_N", verdict_of(moment_ok)),
      assertion("max_tail_sandwich", "n u / (1 + n u) <= P(M_n > t) <= min(n u, 1), u = P(X > t)",
                verdict_of(tail_ok))};
  return finish(rep);
}

const std::map<std::string, std::string>& statements() {
  static const std::map<std::string, std::string> m = {
      {"min:ii", "P(X <= tau t) <= P(X <= t) / 2 for t <= rho ||X||_p"},
      {"min:iii", "for each eps some tau has P(X <= tau t) <= eps P(X <= t), t <= rho ||X||_p"},
      {"min:iv", "||sigma X ^ t||_q <= ||X ^ t||_p for every t"},
      {"min:iv=>i", "||m_n(X)||_q <= sigma^{-1} ||m_n(X)||_p on the n grid"},
      {"max:ii", "E X^q I(X > t) <= B^q t^q P(X > t) for t >= rho ||X||_p"},
      {"max:iii", "for each eps some D has D^q P(X > D t) <= eps P(X > t), t >= rho ||X||_p"},
      {"max:ii<=>iii", "B from D and D from B within the stated factors"},
      {"max:iv", "||sigma X v t||_q <= ||X v t||_p for every t"},
      {"max:iv=>i", "||M_n(X)||_q <= sigma^{-1} ||M_n(X)||_p on the n grid"},
      {"minmax:clip", "||s v sigma X ^ t||_q <= ||s v X ^ t||_p for all s <= t"},
      {"minmax:words", "||W(X)||_q <= sigma^{-1} ||W(X)||_p for every word W"},
  };
  return m;
}

std::string statement(const std::string& prefix, const std::string& id) {
  const auto it = statements().find(prefix + ":" + id);
  return it == statements().end() ? id : it->second;
}

json hyper_body(const HyperReport& r, const std::string& prefix) {
  json conditions = json::array();
  json assertions = json::array();
  for (const auto& c : r.conditions) {
    conditions.push_back(to_json(c));
    assertions.push_back(assertion(c.id, statement(prefix, c.id), c.verdict));
  }
  double lo = num::kInf, hi = 0.0;
  for (const auto& [n, v] : r.empirical.profile) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  json rep;
  rep["result"] = {{"empirical", to_json(r.empirical)}, {"sigma", number(r.sigma)}, {"conditions", conditions}};
  rep["summary"] = {{"C_empirical", number(r.empirical.C)},
                    {"C_min_over_grid", number(lo)},
                    {"profile_spread", number(hi / lo - 1.0)},
                    {"sigma", number(r.sigma)},
                    {"overall", to_string(r.overall())}};
  rep["assertions"] = assertions;
  return rep;
}

Outcome cmd_hyper(const RunConfig& c, HyperKind kind) {
  const DistributionSpec spec = require_dist(c.dist, "--dist");
  const HyperParams hp = hyper_params(c);
  json rep;
  if (kind == HyperKind::MIN) {
    rep = hyper_body(check_min_conditions(spec, hp), "min");
  } else if (kind == HyperKind::MAX) {
    try {
      rep = hyper_body(check_max_conditions(spec, hp), "max");
    } catch (const InfiniteMoment& e) {
      rep["error"] = error_json(e);
      rep["assertions"] = {assertion("finite_q_moment", "E X^q < infinity", Verdict::Fails)};
    }
  } else {
    const auto words = minmax_words(2, {2, 4, 8});
    std::vector<Word> all = words;
    if (!c.word.empty()) all.push_back(Word::parse(c.word));
    rep = hyper_body(check_minmax(spec, hp, all), "minmax");
    rep["result"]["words_checked"] = all.size();
  }
  rep["grid"] = grid_json(hp);
  rep["tolerances"] = hyper_tolerances(hp);
  return finish(rep);
}

Outcome cmd_constants(const RunConfig& c) {
  LedgerInputs in;
  in.C = c.C;
  in.p = c.p;
  in.q = c.q;
  in.lambda = c.lambda;
  in.B = c.B;
  in.D = c.D;
  in.beta = c.beta.value_or(0.5 * (c.p / c.q + 1.0));
  in.b = c.b;
  in.r = c.r.value_or(0.25);
  const ConstantsLedger l = constants_ledger(in);
  const auto& t = l.tau_delta_rho_33;
  json rep;
  rep["result"] = {
      {"inputs", {{"C", in.C}, {"p", in.p}, {"q", in.q}, {"lambda", in.lambda}, {"B", in.B}, {"D", in.D},
                  {"beta", in.beta}, {"norm_Y_p", in.norm_Y_p}, {"b", in.b}, {"r", in.r}}},
      {"alpha_21", number(l.alpha_21)},
      {"pz_lower", number(l.pz_lower)},
      {"K_32", number(l.K_32)},
      {"small_ball", {{"D", number(t.D)}, {"K", number(t.K)}, {"tau", number(t.tau)}, {"delta", number(t.delta)},
                      {"rho", number(t.rho)}, {"n", t.n}}},
      {"tail", {{"A", number(l.ABt0_44.A)}, {"B", number(l.ABt0_44.B)}, {"t0", number(l.ABt0_44.t0)}}},
      {"R_b", number(l.R_b_64)},
      {"integral_form", {{"delta", number(l.R_beta_72.delta)}, {"R", number(l.R_beta_72.R)},
                         {"beta", number(l.R_beta_72.beta)}}}};
  rep["summary"] = {{"alpha_21", number(l.alpha_21)}, {"K_32", number(l.K_32)}, {"R_b", number(l.R_b_64)}};
  return finish(rep);
}

json comparison_entry(const std::string& id, const std::string& stmt, const std::function<ComparisonVerdict()>& fn,
                      json& results) {
  try {
    const ComparisonVerdict v = fn();
    results[id] = to_json(v);
    return assertion(id, stmt, v.verdict);
  } catch (const HypothesisFailed& e) {
    results[id] = {{"error", error_json(e)}};
    return assertion(id, stmt + " (hypothesis not met)", Verdict::Inconclusive);
  } catch (const NoFiniteD& e) {
    results[id] = {{"error", error_json(e)}};
    return assertion(id, stmt, Verdict::Fails);
  } catch (const InfiniteMoment& e) {
    results[id] = {{"error", error_json(e)}};
    return assertion(id, stmt + " (moment infinite)", Verdict::Inconclusive);
  }
}

Outcome cmd_compare(const RunConfig& c) {
  const DistributionSpec X = require_dist(c.dist_x, "--dist-x");
  const DistributionSpec Y = require_dist(c.dist_y, "--dist-y");
  const HyperParams hp = hyper_params(c);
  const std::string& d = c.direction;
  if (d != "all" && d != "small-ball" && d != "tail" && d != "two-sided" && d != "thinning")
    throw DomainError("--direction must be all, small-ball, tail, two-sided or thinning");
  json results = json::object();
  json assertions = json::array();
  if (d == "all" || d == "small-ball")
    assertions.push_back(comparison_entry("small_ball", "P(X <= tau t) <= delta P(Y <= t) for t <= rho ||X||_p",
                                          [&] { return small_ball_comparison(X, Y, hp, c.lambda, c.beta); }, results));
  if (d == "all" || d == "tail")
    assertions.push_back(comparison_entry(
        "tail", "E Y^q I(Y > A t) <= B^q t^q P(X > t) and P(Y > A t) <= B^q P(X > t) for t >= t0",
        [&] { return tail_comparison(X, Y, hp, c.lambda); }, results));
  if (d == "all" || d == "two-sided")
    assertions.push_back(comparison_entry("two_sided", "P(Y <= t) >= P(D X <= t) for every t",
                                          [&] { return two_sided_comparison(X, Y, hp); }, results));
  if (d == "all" || d == "thinning")
    assertions.push_back(comparison_entry("thinning",
                                          "max of thinned copies of Y is dominated by max of copies of X",
                                          [&] { return thinning_equivalence(X, Y, hp, c.C_tail); }, results));
  json rep;
  rep["result"] = results;
  rep["assertions"] = assertions;
  rep["grid"] = grid_json(hp);
  rep["tolerances"] = hyper_tolerances(hp);
  return finish(rep);
}

Outcome cmd_small_ball(const RunConfig& c) {
  const auto sets = parse_sets(c);
  const VectorLaw law = make_law(c, sets.front().dim());
  const McOptions o = mc_options(c);
  const std::vector<double> radii = c.radii.empty() ? std::vector<double>{0.25, 0.5, 1.0, 2.0} : c.radii;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(law.dim()));
  const SmallBallEstimate est = small_ball(law, sets.front(), zero, radii, o);
  json rows = json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    json row = to_json(est.estimates[i]);
    row["t"] = radii[i];
    rows.push_back(row);
    if (i > 0 && est.estimates[i].p < est.estimates[i - 1].p) monotone = false;
  }
  json rep;
  rep["result"] = {{"law", law_json(law)}, {"set", sets.front().to_json()}, {"rows", rows}};
  rep["tolerances"] = mc_tolerances(o);
  rep["grid"] = {{"radii", radii}};
  rep["assertions"] = {assertion("monotone", "estimates nondecreasing in t", verdict_of(monotone))};
  return finish(rep);
}

Outcome cmd_kanter(const RunConfig& c) {
  const auto sets = parse_sets(c);
  const VectorLaw law = make_law(c, sets.front().dim());
  const McOptions o = mc_options(c);
  const std::vector<double> kappas = c.radii.empty() ? num::geomspace(1e-3, 1.0, 12) : c.radii;
  const KanterReport k = kanter_bound_check(law, sets.front(), default_shifts(sets.front()), kappas, o);
  json rows = json::array();
  for (const auto& r : k.rows) rows.push_back(to_json(r));
  json shifts = json::array();
  for (const auto& s : k.shifts) shifts.push_back(to_json(s));
  json rep;
  rep["result"] = {{"law", law_json(law)}, {"set", sets.front().to_json()}, {"nu_B", to_json(k.nu_B)},
                   {"shifts", shifts}, {"rows", rows}, {"samples", k.samples}, {"note", k.note}};
  rep["tolerances"] = mc_tolerances(o);
  rep["grid"] = {{"kappa", kappas}};
  rep["assertions"] = {assertion("kanter", "nu(kappa B + y) <= (3/2) kappa^{alpha/2} / sqrt(1 - nu(B))",
                                 k.inconclusive ? Verdict::Inconclusive : verdict_of(k.holds))};
  return finish(rep);
}

Outcome cmd_regularity(const RunConfig& c) {
  const auto sets = parse_sets(c);
  const VectorLaw law = make_law(c, sets.front().dim());
  const McOptions o = mc_options(c);
  const std::vector<double> ts = c.radii.empty() ? default_t_grid() : c.radii;
  const RegularityReport r = regularity_check(law, sets.front(), c.b, ts, o, c.target);
  json rows = json::array();
  for (const auto& x : r.rows) rows.push_back(to_json(x));
  json rep;
  rep["result"] = {{"law", law_json(law)},
                   {"set", sets.front().to_json()},
                   {"scale", number(r.scale)},
                   {"nu_B", to_json(r.nu_B)},
                   {"nu_half_B", to_json(r.nu_half_B)},
                   {"b", r.b},
                   {"R_b", number(r.R_b)},
                   {"R_prime", number(r.R_prime)},
                   {"rows", rows},
                   {"samples", r.samples},
                   {"note", r.note}};
  rep["exploration"] = {{"exponent_fit", number(r.exponent_fit)},
                        {"alpha_over_2", r.alpha_half},
                        {"linear_exponent", 1.0},
                        {"note", "fitted small-ball exponent; reported, not asserted"}};
  rep["tolerances"] = mc_tolerances(o);
  rep["grid"] = {{"t", ts}};
  rep["assertions"] = {assertion("regularity", "nu(tB) <= R(b) t^{alpha/2} nu(B) for t in (0, 1]", verdict_of(r.holds))};
  return finish(rep);
}

json correlation_json(const CorrelationReport& r) {
  json j = {{"alpha_scale", r.alpha_scale}, {"lhs", number(r.lhs)},       {"rhs", number(r.rhs)},
            {"std_error", number(r.std_error)}, {"marginals", r.marginals}, {"holds", r.holds},
            {"asserted", r.asserted},           {"reason", r.reason},       {"samples", r.samples}};
  if (r.has_slab_sanity)
    j["slab_sanity"] = {{"lhs", number(r.slab_lhs)}, {"rhs", number(r.slab_rhs)},
                        {"std_error", number(r.slab_std_error)}, {"holds", r.slab_holds}};
  return j;
}

Outcome cmd_correlation(const RunConfig& c) {
  const auto sets = parse_sets(c);
  RunConfig gc = c;
  gc.law = "gaussian";
  const VectorLaw law = make_law(gc, sets.front().dim());
  const McOptions o = mc_options(c);
  const CorrelationReport r = correlation_check(law, sets, c.scale, o);
  json rep;
  rep["result"] = {{"law", law_json(law)}, {"sets", sets_json(sets)}, {"correlation", correlation_json(r)}};
  rep["tolerances"] = mc_tolerances(o);
  json assertions = {assertion("correlation", "mu(a (A_1 and ... and A_l)) >= prod mu(A_i)", verdict_of(r.holds),
                               r.asserted)};
  if (r.has_slab_sanity)
    assertions.push_back(assertion("slab_sanity", "mu(S and K) >= mu(S) mu(K) for a symmetric slab S",
                                   verdict_of(r.slab_holds)));
  rep["assertions"] = assertions;
  return finish(rep);
}

Outcome cmd_slepian(const RunConfig& c) {
  const auto sets = parse_sets(c);
  const Eigen::MatrixXd cov = cov_or_identity(c, sets.front().dim());
  const McOptions o = mc_options(c);
  const SlepianReport r = slepian_sqrt2_check(cov, sets, o, c.seed);
  json rep;
  rep["result"] = {{"sets", sets_json(sets)}, {"lhs", number(r.lhs)}, {"rhs", number(r.rhs)},
                   {"se_lhs", number(r.se_lhs)}, {"se_rhs", number(r.se_rhs)}, {"ratio", number(r.ratio)},
                   {"samples", r.samples}};
  rep["tolerances"] = mc_tolerances(o);
  rep["assertions"] = {assertion("sqrt2", "E max_l ||G||_l <= sqrt(2) E max_l ||G_l||_l", verdict_of(r.holds))};
  return finish(rep);
}

Outcome cmd_min_moment_hypothesis(const RunConfig& c) {
  const auto sets = parse_sets(c);
  const Eigen::MatrixXd cov = cov_or_identity(c, sets.front().dim());
  const McOptions o = mc_options(c, 10000);
  std::vector<std::uint64_t> grid;
  for (std::uint64_t n = 1; n <= c.n_max; n *= 2) grid.push_back(n);
  const MinMomentHypothesisReport r = min_moment_hypothesis_62(cov, sets, grid, c.q, o, c.seed);
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"n", x.n}, {"norm_Y", number(x.norm_Y)}, {"norm_X", number(x.norm_X)}, {"ratio", number(x.ratio)}});
  json rep;
  rep["result"] = {{"sets", sets_json(sets)}, {"q", r.q}, {"rows", rows}, {"sup", number(r.sup)},
                   {"sup_n", r.sup_n}, {"replicates", r.replicates}};
  rep["grid"] = {{"n", grid}};
  rep["tolerances"] = {{"replicates", o.samples}};
  rep["assertions"] = {assertion("min_moment_domination", "||m_n(Y)||_q <= C ||m_n(X)||_q (reported only)",
                                 Verdict::Inconclusive, false)};
  rep["summary"] = {{"sup_ratio", number(r.sup)}, {"sup_n", r.sup_n}};
  return finish(rep);
}

Outcome cmd_integral_form(const RunConfig& c) {
  const auto sets = parse_sets(c);
  const VectorLaw law = make_law(c, sets.front().dim());
  const McOptions o = mc_options(c);
  const std::vector<double> ts = c.radii.empty() ? default_t_grid() : c.radii;
  const IntegralFormReport r = integral_equivalence_72(law, sets.front(), c.b, ts, o);
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"t", x.t}, {"integral", number(x.integral)}, {"mu_t", number(x.mu_t)}, {"ratio", number(x.ratio)}});
  json power = json::array();
  for (const auto& x : r.power_rows) power.push_back(to_json(x));
  json rep;
  rep["result"] = {{"law", law_json(law)},
                   {"set", sets.front().to_json()},
                   {"scale", number(r.scale)},
                   {"nu_B", number(r.nu_B)},
                   {"r_fit", number(r.r_fit)},
                   {"constants", {{"delta", number(r.constants.delta)}, {"R", number(r.constants.R)},
                                  {"beta", number(r.constants.beta)}}},
                   {"rows", rows},
                   {"power_rows", power},
                   {"note", r.note}};
  rep["tolerances"] = mc_tolerances(o);
  rep["grid"] = {{"t", ts}};
  rep["assertions"] = {
      assertion("integral_form", "integral_0^t mu(sB) ds <= r t mu(tB) with r < 1",
                verdict_of(r.r_fit > 0.0 && r.r_fit < 1.0)),
      assertion("power_form", "mu(tB) <= R t^beta mu(B) with the derived R, beta", verdict_of(r.holds))};
  return finish(rep);
}

Outcome cmd_explore(const RunConfig& c) {
  json rep;
  // Min-hypercontractive constant of |G| for a one-dimensional Gaussian.
  HyperParams hp = hyper_params(c);
  const HyperConstant hc = empirical_hyper_constant(dist::halfnormal(1.0), hp, Op::MIN);
  const double as_displayed = std::exp(std::lgamma(c.q) / c.q - std::lgamma(c.p) / c.p);
  const double shifted = std::exp(std::lgamma(c.q + 1.0) / c.q - std::lgamma(c.p + 1.0) / c.p);
  rep["gaussian_min_constant"] = {{"empirical", number(hc.C)},
                                  {"argmax_n", hc.argmax_n},
                                  {"gamma_q_over_gamma_p", number(as_displayed)},
                                  {"gamma_q1_over_gamma_p1", number(shifted)}};

  // Scaled correlation sweep.
  std::vector<ConvexSet> sets;
  if (!c.sets.empty()) {
    sets = parse_sets(c);
  } else {
    Eigen::VectorXd u(3);
    u << 1.0, 1.0, 0.0;
    Eigen::MatrixXd Q = Eigen::Vector3d(1.0, 4.0, 0.25).asDiagonal();
    sets = {ConvexSet::slab(u, 1.0), ConvexSet::ellipsoid(Q), ConvexSet::lpball(3, num::kInf, 0.8)};
  }
  RunConfig gc = c;
  gc.law = "gaussian";
  Eigen::MatrixXd cov;
  if (c.cov.empty() && c.sets.empty()) {
    cov = Eigen::MatrixXd::Constant(3, 3, 0.5);
    cov.diagonal().setOnes();
  } else {
    cov = cov_or_identity(c, sets.front().dim());
  }
  const VectorLaw law = VectorLaw::gaussian(cov, c.seed);
  McOptions o = mc_options(c, 100000);
  o.escalate = false;
  json sweep = json::array();
  json first_alpha = nullptr;
  for (int k = 0; k <= 10; ++k) {
    const double a = 1.0 + 0.05 * k;
    const CorrelationReport r = correlation_check(law, sets, a, o);
    sweep.push_back({{"alpha_scale", a}, {"lhs", number(r.lhs)}, {"rhs", number(r.rhs)},
                     {"std_error", number(r.std_error)}});
    if (first_alpha.is_null() && r.lhs >= r.rhs) first_alpha = a;
  }
  rep["scaled_correlation"] = {{"law", law_json(law)}, {"sets", sets_json(sets)}, {"sweep", sweep},
                               {"smallest_alpha_with_lhs_ge_rhs", first_alpha}};
  rep["tolerances"] = mc_tolerances(o);
  rep["assertions"] = {
      assertion("gaussian_min_constant", "best min-hypercontractive constant of |G| (reported only)",
                Verdict::Inconclusive, false),
      assertion("scaled_correlation", "mu(a (A_1 and ... and A_l)) >= prod mu(A_i) (reported only)",
                Verdict::Inconclusive, false)};
  rep["summary"] = {{"gaussian_min_constant", number(hc.C)}, {"smallest_alpha", first_alpha}};
  return finish(rep);
}

}  // namespace

Outcome run_subcommand(const RunConfig& c) {
  static const std::map<std::string, std::function<Outcome(const RunConfig&)>> table = {
      {"moments", cmd_moments},
      {"bounds", cmd_bounds},
      {"hyper-min", [](const RunConfig& x) { return cmd_hyper(x, HyperKind::MIN); }},
      {"hyper-max", [](const RunConfig& x) { return cmd_hyper(x, HyperKind::MAX); }},
      {"hyper-minmax", [](const RunConfig& x) { return cmd_hyper(x, HyperKind::MINMAX); }},
      {"constants", cmd_constants},
      {"compare", cmd_compare},
      {"small-ball", cmd_small_ball},
      {"kanter", cmd_kanter},
      {"regularity", cmd_regularity},
      {"correlation", cmd_correlation},
      {"slepian", cmd_slepian},
      {"hyp62", cmd_min_moment_hypothesis},
      {"integral72", cmd_integral_form},
      {"explore-conjectures", cmd_explore},
  };
  const auto it = table.find(c.subcommand);
  if (it == table.end()) throw DomainError("unknown subcommand \"" + c.subcommand + "\"");
  return it->second(c);
}

}  // namespace mmh::cli
