#include "minmax/comparison.hpp"

#include <algorithm>
#include <cmath>

#include "minmax/error.hpp"
#include "minmax/numeric.hpp"

namespace mmh {

using num::kInf;

namespace {

constexpr double kSlack = 1e-12;
constexpr double kLogTauFloor = -690.0;

bool has_mass(const LawModel& m) { return m.log_tail_at(-kInf) > -kInf; }

/// [lo, hi] in log t covering the bulk of both laws.
std::pair<double, double> joint_range(const LawModel& a, const LawModel& b) {
  double lo = kInf, hi = -kInf;
  for (const LawModel* m : {&a, &b}) {
    if (!has_mass(*m)) continue;
    const auto g = log_quantile_grid(*m, 2);
    lo = std::min(lo, g.front());
    hi = std::max(hi, g.back());
  }
  if (!(lo <= hi)) throw DomainError("both laws are identically zero");
  return {lo, hi};
}

double log_norm(const DistributionSpec& spec, double r) { return log_moment_norm(spec, r, 1e-11); }

Domination domination(const DistributionSpec& X, const DistributionSpec& Y, const HyperParams& params, Op kind) {
  params.validate();
  if (!has_mass(X.model())) throw DomainError("X is identically zero");
  for (const DistributionSpec* s : {&X, &Y})
    if (!s->moment_finite(params.q)) throw InfiniteMoment(s->name() + " has no finite moment of order q");
  const auto& grid = params.n_grid;
  std::vector<double> ratio(grid.size());
  parallel_for(grid.size(), params.threads, [&](std::size_t i) {
    const Word w = Word::single(kind, grid[i]);
    ratio[i] = std::exp(log_norm(compose_cdf(Y, w), params.q) - log_norm(compose_cdf(X, w), params.q));
  });
  Domination d;
  d.B = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    d.profile.emplace_back(grid[i], ratio[i]);
    if (ratio[i] > d.B) {
      d.B = ratio[i];
      d.argmax_n = grid[i];
    }
  }
  return d;
}

bool min_hypercontractive(const DistributionSpec& X, const HyperParams& params) {
  if (X.atom_at_zero() > 0.0 || !X.moment_finite(params.q)) return false;
  const LawModel& m = X.model();
  const double log_t0 = std::log(params.rho) + log_norm(X, params.p);
  const auto full = log_quantile_grid(m, params.t_grid_size);
  return min_tau_search(m, log_span(std::min(full.front(), log_t0), log_t0, params.t_grid_size), 0.5).found;
}

bool max_hypercontractive(const DistributionSpec& X, const HyperParams& params) {
  if (!X.moment_finite(params.q)) return false;
  const LawModel& m = X.model();
  const double log_t0 = std::log(params.rho) + log_norm(X, params.p);
  const auto full = log_quantile_grid(m, params.t_grid_size);
  return max_D_search(m, log_span(log_t0, std::max(full.back(), log_t0), params.t_grid_size), params.q, 0.5).found;
}

Witness witness_at(double x, double lhs_log, double rhs_log) {
  return Witness{std::exp(x), x, std::exp(lhs_log), std::exp(rhs_log)};
}

}  // namespace

const char* to_string(Direction d) {
  switch (d) {
    case Direction::SMALL_BALL: return "SMALL_BALL";
    case Direction::TAIL: return "TAIL";
    case Direction::TWO_SIDED: return "TWO_SIDED";
    case Direction::THINNING: return "THINNING";
  }
  return "?";
}

double ComparisonVerdict::constant(std::string_view name) const {
  for (const auto& [k, v] : constants)
    if (k == name) return v;
  return num::kNaN;
}

Domination min_domination_B(const DistributionSpec& X, const DistributionSpec& Y, const HyperParams& params) {
  return domination(X, Y, params, Op::MIN);
}

Domination max_domination_D(const DistributionSpec& X, const DistributionSpec& Y, const HyperParams& params) {
  return domination(X, Y, params, Op::MAX);
}

ComparisonVerdict small_ball_comparison(const DistributionSpec& X, const DistributionSpec& Y,
                                        const HyperParams& params, double lambda, std::optional<double> beta) {
  params.validate();
  const double p = params.p, q = params.q;
  const double b = beta.value_or(0.5 * (p / q + 1.0));
  if (!(b > p / q && b < 1.0)) throw DomainError("beta must lie in (p/q, 1)");
  if (!min_hypercontractive(X, params)) throw HypothesisFailed(X.name() + " is not min-hypercontractive");

  ComparisonVerdict v;
  v.direction = Direction::SMALL_BALL;
  const double C = empirical_hyper_constant(X, params, Op::MIN).C;
  const Domination dom = min_domination_B(X, Y, params);
  v.B_domination = dom.B;
  v.B_argmax_n = dom.argmax_n;
  // B = 0 only when Y vanishes identically; any positive B then works.
  const double B = dom.B > 0.0 ? dom.B : 1.0;
  const SmallBallConstants c = small_ball_constants(C, B, p, q, lambda, b);
  const double log_t0 = std::log(c.rho) + log_norm(X, p);
  v.constants = {{"C", C},         {"B", B},        {"lambda", lambda}, {"beta", b},
                 {"D", c.D},       {"K", c.K},      {"tau", c.tau},     {"delta", c.delta},
                 {"rho", c.rho},   {"n", c.n},      {"t0", std::exp(log_t0)}};

  const LawModel& mx = X.model();
  const LawModel& my = Y.model();
  const auto range = joint_range(mx, my);
  const std::vector<double> xs = log_span(std::min(range.first, log_t0), log_t0, params.t_grid_size);
  v.t_lo = std::exp(xs.front());
  v.t_hi = std::exp(xs.back());

  const double log_delta = std::log(c.delta);
  auto worst_at = [&](double log_tau, std::vector<Witness>* out) {
    bool ok = true;
    for (double x : xs) {
      const double lhs = mx.log_cdf_at(x + log_tau);
      if (lhs == -kInf) continue;
      const double rhs = log_delta + my.log_cdf_at(x);
      if (lhs > rhs + kSlack) {
        ok = false;
        if (out) out->push_back(witness_at(x, lhs, rhs));
        else return false;
      }
    }
    return ok;
  };
  const bool ok = worst_at(std::log(c.tau), &v.witnesses);
  if (v.witnesses.size() > 16) v.witnesses.resize(16);
  v.verdict = ok ? Verdict::Holds : Verdict::Fails;

  double tau_emp = 0.0;
  if (worst_at(0.0, nullptr)) {
    tau_emp = 1.0;
  } else if (worst_at(kLogTauFloor, nullptr)) {
    double lo = kLogTauFloor, hi = 0.0;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      (worst_at(mid, nullptr) ? lo : hi) = mid;
    }
    tau_emp = std::exp(lo);
  }
  v.constants.emplace_back("tau_empirical", tau_emp);
  v.note = "grid-certified";
  return v;
}

ComparisonVerdict tail_comparison(const DistributionSpec& X, const DistributionSpec& Y, const HyperParams& params,
                                  double lambda) {
  params.validate();
  const double p = params.p, q = params.q;
  if (!max_hypercontractive(X, params)) throw HypothesisFailed(X.name() + " is not max-hypercontractive");
  if (!Y.moment_finite(q)) throw HypothesisFailed(Y.name() + " has no finite moment of order q");

  ComparisonVerdict v;
  v.direction = Direction::TAIL;
  const double C = empirical_hyper_constant(X, params, Op::MAX).C;
  const Domination dom = max_domination_D(X, Y, params);
  v.B_domination = dom.B;
  v.B_argmax_n = dom.argmax_n;
  const double D = dom.B > 0.0 ? dom.B : 1.0;
  const double log_norm_Y = log_norm(Y, p);
  const TailConstants c = tail_constants(C, D, p, q, lambda, std::exp(log_norm_Y));
  v.constants = {{"C", C}, {"D", D}, {"lambda", lambda}, {"A", c.A}, {"B", c.B}, {"t0", c.t0}};

  const LawModel& mx = X.model();
  const LawModel& my = Y.model();
  const auto range = joint_range(mx, my);
  const double lo = c.t0 > 0.0 ? std::log(c.t0) : range.first;
  const std::vector<double> xs = log_span(lo, std::max(lo, range.second), params.t_grid_size);
  v.t_lo = std::exp(xs.front());
  v.t_hi = std::exp(xs.back());

  const double log_A = std::log(c.A);
  const double log_Bq = q * std::log(c.B);
  std::vector<double> moment_lhs(xs.size(), -kInf);
  parallel_for(xs.size(), params.threads, [&](std::size_t i) {
    const double u = xs[i] + log_A;
    const double lt = my.log_tail_at(u);
    if (lt == -kInf) return;
    moment_lhs[i] = num::log_add(q * u + lt, log_weighted_integral(my, q, u, kInf, Weight::Tail, 1e-10));
  });

  ConditionResult moment{"moment", Verdict::Holds, {}, {}, "E Y^q I(Y > A t) <= B^q t^q P(X > t)"};
  ConditionResult tail{"tail", Verdict::Holds, {}, {}, "P(Y > A t) <= B^q P(X > t)"};
  double emp_moment = -kInf, emp_tail = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double ltx = mx.log_tail_at(x);
    const double rhs_m = log_Bq + q * x + ltx;
    const double rhs_t = log_Bq + ltx;
    const double lhs_t = my.log_tail_at(x + log_A);
    if (moment_lhs[i] > rhs_m + kSlack) {
      moment.verdict = Verdict::Fails;
      moment.witnesses.push_back(witness_at(x, moment_lhs[i], rhs_m));
    }
    if (lhs_t > rhs_t + kSlack) {
      tail.verdict = Verdict::Fails;
      tail.witnesses.push_back(witness_at(x, lhs_t, rhs_t));
    }
    if (moment_lhs[i] > -kInf) emp_moment = std::max(emp_moment, moment_lhs[i] - q * x - ltx);
    if (lhs_t > -kInf) emp_tail = std::max(emp_tail, lhs_t - ltx);
  }
  v.constants.emplace_back("B_empirical_moment", emp_moment == -kInf ? 0.0 : std::exp(emp_moment / q));
  v.constants.emplace_back("B_empirical_tail", emp_tail == -kInf ? 0.0 : std::exp(emp_tail / q));
  v.verdict = moment.verdict == Verdict::Holds && tail.verdict == Verdict::Holds ? Verdict::Holds : Verdict::Fails;
  for (auto* c2 : {&moment, &tail}) {
    if (c2->witnesses.size() > 16) c2->witnesses.resize(16);
    v.witnesses.insert(v.witnesses.end(), c2->witnesses.begin(), c2->witnesses.end());
  }
  v.checks = {moment, tail};
  v.note = dom.B > 0.0 ? "grid-certified" : "grid-certified; Y vanishes, D = 1 used";
  return v;
}

ComparisonVerdict two_sided_comparison(const DistributionSpec& X, const DistributionSpec& Y,
                                       const HyperParams& params) {
  params.validate();
  if (!min_hypercontractive(X, params) || !max_hypercontractive(X, params))
    throw HypothesisFailed(X.name() + " is not both min- and max-hypercontractive");
  if (!Y.moment_finite(params.q)) throw HypothesisFailed(Y.name() + " has no finite moment of order q");

  ComparisonVerdict v;
  v.direction = Direction::TWO_SIDED;
  const Domination dmin = min_domination_B(X, Y, params);
  const Domination dmax = max_domination_D(X, Y, params);
  if (!std::isfinite(dmin.B) || !std::isfinite(dmax.B))
    throw HypothesisFailed("domination constants are not finite on the grid");
  v.B_domination = dmin.B;
  v.B_argmax_n = dmin.argmax_n;

  const LawModel& mx = X.model();
  const LawModel& my = Y.model();
  const auto range = joint_range(mx, my);
  const std::vector<double> xs = log_span(range.first, range.second, params.t_grid_size);
  v.t_lo = std::exp(xs.front());
  v.t_hi = std::exp(xs.back());

  // P(D X <= t) = P(X <= t / D) decreases in D, so the set of good D is an interval [D*, inf).
  auto holds = [&](double log_D, Witness* w) {
    for (double x : xs) {
      const double lhs = mx.log_cdf_at(x - log_D);
      const double rhs = my.log_cdf_at(x);
      if (lhs > rhs + kSlack) {
        if (w) *w = witness_at(x, rhs, lhs);
        return false;
      }
    }
    return true;
  };
  const double cap = 20.0 * std::numbers::ln2;
  Witness w;
  if (!holds(cap, &w)) {
    throw NoFiniteD("no D <= 2^20 gives P(Y <= t) >= P(D X <= t) on the grid");
  }
  double lo = -cap, hi = cap;
  if (holds(lo, nullptr)) {
    hi = lo;
  } else {
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid, nullptr) ? hi : lo) = mid;
    }
    holds(lo, &w);
    v.witnesses.push_back(w);
  }
  const double D = std::exp(hi);
  v.constants = {{"D", D}, {"B_min_domination", dmin.B}, {"D_max_domination", dmax.B}};
  v.verdict = Verdict::Holds;
  v.note = "grid-certified; the witness is the binding t just below D (lhs = P(Y <= t), rhs = P(D X <= t))";
  return v;
}

ComparisonVerdict thinning_equivalence(const DistributionSpec& X, const DistributionSpec& Y,
                                       const HyperParams& params, std::optional<double> C_tail) {
  params.validate();
  ComparisonVerdict v;
  v.direction = Direction::THINNING;
  const LawModel& mx = X.model();
  const LawModel& my = Y.model();
  const auto range = joint_range(mx, my);
  const std::vector<double> xs = log_span(range.first, range.second, params.t_grid_size);
  v.t_lo = std::exp(xs.front());
  v.t_hi = std::exp(xs.back());

  double log_fit = 0.0;
  for (double x : xs) {
    const double ly = my.log_tail_at(x);
    if (ly == -kInf) continue;
    log_fit = std::max(log_fit, ly - mx.log_tail_at(x));
  }
  const double C = C_tail.value_or(std::exp(log_fit));
  if (!(C >= 1.0)) throw DomainError("C_tail must be at least 1");
  v.constants = {{"C_tail", C}, {"C_tail_fitted", std::exp(log_fit)}};
  if (!std::isfinite(C)) {
    v.verdict = Verdict::Fails;
    v.note = "P(Y > t) / P(X > t) is unbounded on the grid";
    return v;
  }
  const double log_C = std::log(C);
  const DistributionSpec thinned = C == 1.0 ? Y : dist::atomzero(1.0 - 1.0 / C, Y);

  // (1 - P(Y >= t) / C)^n >= (1 - P(X >= t))^n wherever P(Y >= t) <= C P(X >= t).
  ConditionResult pointwise{"thinned_cdf", Verdict::Holds, {}, {}, "(1 - P(Y>=t)/C)^n >= (1 - P(X>=t))^n"};
  std::size_t applicable = 0;
  for (double x : xs) {
    const double ly = my.log_tail_at(x), lx = mx.log_tail_at(x);
    if (ly > lx + log_C + kSlack) continue;
    ++applicable;
    const double left = num::log1mexp(std::min(0.0, ly - log_C));
    const double right = num::log1mexp(std::min(0.0, lx));
    for (std::uint64_t n : params.n_grid) {
      const double dn = static_cast<double>(n);
      if (dn * left < dn * right - kSlack * std::max(1.0, dn * std::abs(right))) {
        pointwise.verdict = Verdict::Fails;
        pointwise.witnesses.push_back(witness_at(x, dn * left, dn * right));
        break;
      }
    }
  }
  pointwise.constants = {{"grid_points_applicable", static_cast<double>(applicable)}};

  const auto& grid = params.n_grid;
  const double p = params.p;
  std::vector<double> thin_p(grid.size()), x_p(grid.size());
  parallel_for(grid.size(), params.threads, [&](std::size_t i) {
    const Word w = Word::single(Op::MAX, grid[i]);
    thin_p[i] = log_norm(compose_cdf(thinned, w), p);
    x_p[i] = log_norm(compose_cdf(X, w), p);
  });
  const double log_Yp = p * log_norm(Y, p);  // log E Y^p

  ConditionResult norm{"thinned_norm", Verdict::Holds, {}, {}, "||M_n(delta Y)||_p <= ||M_n(X)||_p"};
  ConditionResult mean{"thinned_mean", Verdict::Holds, {}, {}, "E M_n(delta Y)^p >= E Y^p / C"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double n = static_cast<double>(grid[i]);
    if (thin_p[i] > x_p[i] + params.rel_tol) {
      norm.verdict = Verdict::Fails;
      norm.witnesses.push_back({n, std::log(n), std::exp(thin_p[i]), std::exp(x_p[i])});
    }
    if (p * thin_p[i] < log_Yp - log_C - params.rel_tol) {
      mean.verdict = Verdict::Fails;
      mean.witnesses.push_back({n, std::log(n), std::exp(p * thin_p[i]), std::exp(log_Yp - log_C)});
    }
  }
  ConditionResult single{"single_copy", Verdict::Holds, {}, {}, "E (delta Y)^p = E Y^p / C"};
  {
    const double left = p * log_norm(thinned, p);
    const double right = log_Yp - log_C;
    single.constants = {{"lhs", std::exp(left)}, {"rhs", std::exp(right)}};
    if (std::abs(left - right) > 1e-9) single.verdict = Verdict::Fails;
  }
  v.checks = {pointwise, norm, mean, single};

  if (max_hypercontractive(X, params) && Y.moment_finite(params.q)) {
    const ComparisonVerdict t = tail_comparison(X, Y, params);
    ConditionResult back{"tail_from_moments", t.verdict, t.constants, t.witnesses,
                         "P(Y > A t) <= B^q P(X > t) via the max-moment comparison"};
    if (const auto* tc = t.checks.size() > 1 ? &t.checks[1] : nullptr) back.verdict = tc->verdict;
    v.checks.push_back(back);
  } else {
    v.checks.push_back({"tail_from_moments", Verdict::Inconclusive, {}, {}, "X is not max-hypercontractive"});
  }

  v.verdict = Verdict::Holds;
  for (const auto& c : v.checks) {
    if (c.verdict == Verdict::Fails) v.verdict = Verdict::Fails;
    else if (c.verdict == Verdict::Inconclusive && v.verdict == Verdict::Holds) v.verdict = Verdict::Inconclusive;
  }
  v.note = "grid-certified";
  return v;
}

}  // namespace mmh
