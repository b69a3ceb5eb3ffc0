#include "minmax/hyper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "minmax/error.hpp"
#include "minmax/numeric.hpp"

namespace mmh {

using num::kInf;

namespace {

constexpr double kLogTauFloor = -690.0;     // tau >= 1e-300
constexpr double kLogSigmaFloor = -27.6;    // sigma >= 1e-12
constexpr double kCompareSlack = 1e-12;     // log-scale slack for rounding in quadrature
const std::vector<double> kMinEps = {0.5, 0.1, 0.01};
const std::vector<double> kMaxEps = {0.5, 0.1};

Witness make_witness(double log_t, double lhs, double rhs) {
  return Witness{std::exp(log_t), log_t, lhs, rhs};
}

std::string eps_label(const char* prefix, double eps) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s_eps_%g", prefix, eps);
  return buf;
}

/// Largest log sigma <= start for which holds() is true, bisected to `tol`.
/// Returns -inf when it fails all the way down to the floor. `fail_at` gets the
/// smallest failing log sigma seen above the result.
template <class Pred>
double descend(double start, const Pred& holds, double tol, double* fail_at = nullptr) {
  if (holds(start)) return start;
  double hi = start;
  double step = 0.25;
  double lo = hi - step;
  while (!holds(lo)) {
    hi = lo;
    step *= 2.0;
    lo = hi - step;
    if (lo < kLogSigmaFloor) {
      if (fail_at) *fail_at = hi;
      return -kInf;
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (fail_at) *fail_at = hi;
  return lo;
}

double log_norm(const DistributionSpec& spec, double r) { return log_moment_norm(spec, r, 1e-11); }

/// max over the grid of log(D^q P(X > D t) / P(X > t)); grid points with empty
/// tail are vacuous.
double max_tail_ratio(const LawModel& m, const std::vector<double>& xs, double q, double log_D, std::size_t* arg) {
  double worst = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double base = m.log_tail_at(xs[i]);
    if (base == -kInf) continue;
    const double v = q * log_D + m.log_tail_at(xs[i] + log_D) - base;
    if (v > worst) {
      worst = v;
      if (arg) *arg = i;
    }
  }
  return worst;
}

/// max over the grid of log(P(X <= tau t) / P(X <= t)).
double max_cdf_ratio(const LawModel& m, const std::vector<double>& xs, double log_tau, std::size_t* arg) {
  double worst = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double base = m.log_cdf_at(xs[i]);
    if (base == -kInf) continue;
    const double v = m.log_cdf_at(xs[i] + log_tau) - base;
    if (v > worst) {
      worst = v;
      if (arg) *arg = i;
    }
  }
  return worst;
}

ConditionResult implication_to_i(const HyperConstant& emp, double sigma, double rel_tol, const char* id) {
  ConditionResult c;
  c.id = id;
  if (!(sigma > 0.0)) {
    c.verdict = Verdict::Inconclusive;
    c.note = "no certified sigma";
    return c;
  }
  const double bound = 1.0 / sigma;
  c.constants = {{"C_from_sigma", bound}};
  c.verdict = Verdict::Holds;
  for (const auto& [n, ratio] : emp.profile) {
    if (ratio > bound * (1.0 + rel_tol)) {
      c.verdict = Verdict::Fails;
      c.witnesses.push_back({static_cast<double>(n), std::log(static_cast<double>(n)), ratio, bound});
    }
  }
  return c;
}

struct SigmaResult {
  double log_sigma = 0.0;
  Witness tight;
  bool bound_by_limit = false;
};

/// Pointwise sigma search: `lhs(i, log_sigma)` must be nondecreasing in sigma,
/// and the inequality at i is lhs <= rhs[i].
template <class Lhs>
SigmaResult sigma_over_points(const std::vector<double>& xs, const std::vector<double>& rhs, const Lhs& lhs,
                              double start, double tol) {
  SigmaResult res;
  res.log_sigma = start;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (res.log_sigma == -kInf) break;
    auto holds = [&](double ls) { return lhs(i, ls) <= rhs[i] + kCompareSlack; };
    double fail_at = kInf;
    const double next = descend(res.log_sigma, holds, tol, &fail_at);
    if (next < res.log_sigma) {
      res.log_sigma = next;
      const double at = std::isfinite(fail_at) ? fail_at : res.log_sigma;
      res.tight = make_witness(xs[i], std::exp(lhs(i, at)), std::exp(rhs[i]));
      res.bound_by_limit = false;
    }
  }
  return res;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(HyperKind k) {
  switch (k) {
    case HyperKind::MIN: return "MIN";
    case HyperKind::MAX: return "MAX";
    case HyperKind::MINMAX: return "MINMAX";
  }
  return "?";
}

std::vector<std::uint64_t> HyperParams::default_n_grid() {
  std::vector<std::uint64_t> g;
  for (int k = 0; k <= 30; ++k) g.push_back(std::uint64_t{1} << k);
  return g;
}

void HyperParams::validate() const {
  if (!(p > 0.0 && p < q && std::isfinite(q))) throw DomainError("need 0 < p < q < infinity");
  if (n_grid.empty()) throw DomainError("n grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw DomainError("n grid entries must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("n grid must be strictly increasing");
  }
  if (t_grid_size < 2) throw DomainError("t grid needs at least two points");
  if (!(rel_tol > 0.0 && rel_tol < 1e-2)) throw DomainError("rel_tol out of range");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
}

double ConditionResult::constant(std::string_view name) const {
  for (const auto& [k, v] : constants)
    if (k == name) return v;
  return num::kNaN;
}

const ConditionResult* HyperReport::find(std::string_view id) const {
  for (const auto& c : conditions)
    if (c.id == id) return &c;
  return nullptr;
}

Verdict HyperReport::overall() const {
  bool inconclusive = false;
  for (const auto& c : conditions) {
    if (c.verdict == Verdict::Fails) return Verdict::Fails;
    if (c.verdict == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Holds;
}

HyperConstant empirical_hyper_constant(const DistributionSpec& spec, const HyperParams& params, Op kind) {
  params.validate();
  if (spec.model().log_tail_at(-kInf) == -kInf) throw DomainError("law is identically zero");
  if (!spec.moment_finite(params.q)) throw InfiniteMoment(spec.name() + " has no finite moment of order q");
  const auto& grid = params.n_grid;
  std::vector<double> ratio(grid.size());
  parallel_for(grid.size(), params.threads, [&](std::size_t i) {
    const DistributionSpec w = compose_cdf(spec, Word::single(kind, grid[i]));
    ratio[i] = std::exp(log_norm(w, params.q) - log_norm(w, params.p));
  });
  HyperConstant out;
  out.C = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // Lyapunov gives ratio >= 1; anything below is quadrature rounding.
    const double r = std::max(1.0, ratio[i]);
    out.profile.emplace_back(grid[i], r);
    if (r > out.C) {
      out.C = r;
      out.argmax_n = grid[i];
    }
  }
  return out;
}

std::vector<double> log_span(double log_lo, double log_hi, std::size_t size) {
  if (!(log_lo < log_hi) || size < 2) return {log_hi};
  return num::linspace(log_lo, log_hi, size);
}

std::vector<double> log_quantile_grid(const LawModel& m, std::size_t size) {
  const double log_keep = m.log_tail_at(-kInf);
  const double log_atom = m.log_cdf_at(-kInf);
  const double log_level = std::log(1e-9);
  const double lo_level = log_atom == -kInf ? log_level : num::log_add(log_atom, log_level + log_keep);
  const double x_lo = m.log_quantile_cdf(lo_level);
  const double x_hi = m.log_quantile_tail(log_keep + log_level);
  if (!std::isfinite(x_hi)) throw DomainError("law has no mass above zero");
  return log_span(std::isfinite(x_lo) ? x_lo : x_hi, x_hi, size);
}

double log_clip_moment(const LawModel& m, double ls, double lt, double log_sigma, double r, double rel_tol) {
  if (!(ls < lt)) return r * lt;
  const double a = ls - log_sigma;
  const double b = lt - log_sigma;
  if (std::isfinite(lt) && m.log_tail_at(b) >= -std::numbers::ln2) {
    // Most mass is capped at t: subtract the deficit instead of adding up the tail.
    const double deficit = r * log_sigma + log_weighted_integral(m, r, a, b, Weight::Cdf, rel_tol);
    return r * lt + num::log1mexp(std::min(0.0, deficit - r * lt));
  }
  const double body = r * log_sigma + log_weighted_integral(m, r, a, b, Weight::Tail, rel_tol);
  return ls == -kInf ? body : num::log_add(r * ls, body);
}

TauSearch min_tau_search(const LawModel& m, const std::vector<double>& xs, double eps) {
  TauSearch out;
  const double target = std::log(eps) + kCompareSlack;
  std::size_t arg = 0;
  if (max_cdf_ratio(m, xs, 0.0, &arg) <= target) {
    out.found = true;
    out.log_tau = 0.0;
    return out;
  }
  const double worst = max_cdf_ratio(m, xs, kLogTauFloor, &arg);
  if (worst > target) {
    const double base = m.log_cdf_at(xs[arg]);
    out.witness = make_witness(xs[arg], std::exp(base + worst), eps * std::exp(base));
    out.log_tau = kLogTauFloor;
    return out;
  }
  double lo = kLogTauFloor, hi = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (max_cdf_ratio(m, xs, mid, nullptr) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.found = true;
  out.log_tau = lo;
  max_cdf_ratio(m, xs, hi, &arg);
  const double base = m.log_cdf_at(xs[arg]);
  out.witness = make_witness(xs[arg], std::exp(m.log_cdf_at(xs[arg] + hi)), eps * std::exp(base));
  return out;
}

DSearch max_D_search(const LawModel& m, const std::vector<double>& xs, double q, double eps) {
  DSearch out;
  const double target = std::log(eps) + kCompareSlack;
  std::size_t arg = 0;
  for (int k = 1; k <= 160; ++k) {
    const double log_D = k * std::numbers::ln2 / 8.0;
    const double worst = max_tail_ratio(m, xs, q, log_D, &arg);
    if (worst <= target) {
      out.found = true;
      out.D = std::exp(log_D);
      return out;
    }
    if (k == 160) {
      const double base = m.log_tail_at(xs[arg]);
      out.D = std::exp(log_D);
      out.witness = make_witness(xs[arg], std::exp(base + worst), eps * std::exp(base));
    }
  }
  return out;
}

HyperReport check_min_conditions(const DistributionSpec& spec, const HyperParams& params) {
  params.validate();
  HyperReport rep;
  rep.kind = HyperKind::MIN;
  rep.empirical = empirical_hyper_constant(spec, params, Op::MIN);
  const LawModel& m = spec.model();
  const double p = params.p, q = params.q;
  const double lnorm_p = log_norm(spec, p);
  const double lnorm_q = log_norm(spec, q);
  const double log_t0 = std::log(params.rho) + lnorm_p;

  const double atom = spec.atom_at_zero();
  if (atom > 0.0) {
    // P(X <= tau t) / P(X <= t) -> 1 as t -> 0 for every tau.
    for (const char* id : {"ii", "iii"}) {
      ConditionResult c;
      c.id = id;
      c.verdict = Verdict::Fails;
      c.witnesses.push_back({0.0, -kInf, atom, 0.5 * atom});
      c.note = "atom at zero";
      rep.conditions.push_back(c);
    }
    ConditionResult c;
    c.id = "iv";
    c.verdict = Verdict::Fails;
    const double keep = 1.0 - atom;
    // As t -> 0 both sides over t tend to P(X > 0)^{1/q} and P(X > 0)^{1/p}.
    c.witnesses.push_back({0.0, -kInf, std::pow(keep, 1.0 / q), std::pow(keep, 1.0 / p)});
    c.note = "atom at zero";
    rep.conditions.push_back(c);
    rep.conditions.push_back(implication_to_i(rep.empirical, 0.0, params.rel_tol, "iv=>i"));
    return rep;
  }

  const std::vector<double> full = log_quantile_grid(m, params.t_grid_size);
  const std::vector<double> low = log_span(std::min(full.front(), log_t0), log_t0, params.t_grid_size);

  {
    const TauSearch s = min_tau_search(m, low, 0.5);
    ConditionResult c;
    c.id = "ii";
    c.verdict = s.found ? Verdict::Holds : Verdict::Fails;
    c.constants = {{"tau", std::exp(s.log_tau)}, {"epsilon", 0.5}, {"rho", params.rho}, {"t0", std::exp(log_t0)}};
    if (!s.found) c.witnesses.push_back(s.witness);
    c.note = "grid-certified";
    rep.conditions.push_back(c);
  }
  {
    ConditionResult c;
    c.id = "iii";
    c.verdict = Verdict::Holds;
    for (double eps : kMinEps) {
      const TauSearch s = min_tau_search(m, low, eps);
      c.constants.emplace_back(eps_label("tau", eps), s.found ? std::exp(s.log_tau) : 0.0);
      if (!s.found) {
        c.verdict = Verdict::Fails;
        c.witnesses.push_back(s.witness);
      }
    }
    c.constants.emplace_back("rho", params.rho);
    c.note = "grid-certified";
    rep.conditions.push_back(c);
  }
  {
    std::vector<double> rhs(full.size());
    parallel_for(full.size(), params.threads,
                 [&](std::size_t i) { rhs[i] = log_clip_moment(m, -kInf, full[i], 0.0, p) / p; });
    auto lhs = [&](std::size_t i, double ls) { return log_clip_moment(m, -kInf, full[i], ls, q) / q; };
    // t -> infinity: sigma ||X||_q <= ||X||_p.
    const double limit = std::min(0.0, lnorm_p - lnorm_q);
    SigmaResult s = sigma_over_points(full, rhs, lhs, limit, 0.1 * params.rel_tol);
    if (s.log_sigma == limit) {
      s.bound_by_limit = true;
      s.tight = Witness{kInf, kInf, std::exp(lnorm_q), std::exp(lnorm_p)};
    }
    ConditionResult c;
    c.id = "iv";
    rep.sigma = s.log_sigma == -kInf ? 0.0 : std::exp(s.log_sigma);
    c.verdict = rep.sigma > 0.0 ? Verdict::Holds : Verdict::Fails;
    c.constants = {{"sigma", rep.sigma}};
    c.witnesses.push_back(s.tight);
    c.note = s.bound_by_limit ? "grid-certified; sigma set by the t -> infinity limit" : "grid-certified";
    rep.conditions.push_back(c);
  }
  rep.conditions.push_back(implication_to_i(rep.empirical, rep.sigma, params.rel_tol, "iv=>i"));
  return rep;
}

HyperReport check_max_conditions(const DistributionSpec& spec, const HyperParams& params) {
  params.validate();
  if (!spec.moment_finite(params.q)) throw InfiniteMoment(spec.name() + " has no finite moment of order q");
  HyperReport rep;
  rep.kind = HyperKind::MAX;
  rep.empirical = empirical_hyper_constant(spec, params, Op::MAX);
  const LawModel& m = spec.model();
  const double p = params.p, q = params.q;
  const double lnorm_p = log_norm(spec, p);
  const double lnorm_q = log_norm(spec, q);
  const double log_t0 = std::log(params.rho) + lnorm_p;
  const std::vector<double> full = log_quantile_grid(m, params.t_grid_size);
  const std::vector<double> high = log_span(log_t0, std::max(full.back(), log_t0), params.t_grid_size);

  double log_Bq = 0.0;
  {
    std::vector<double> v(high.size(), -kInf);
    parallel_for(high.size(), params.threads, [&](std::size_t i) {
      const double lt = m.log_tail_at(high[i]);
      if (lt == -kInf) return;
      const double excess = log_weighted_integral(m, q, high[i], kInf, Weight::Tail, 1e-10);
      v[i] = num::log_add(0.0, excess - q * high[i] - lt);
    });
    ConditionResult c;
    c.id = "ii";
    std::size_t arg = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > log_Bq) {
        log_Bq = v[i];
        arg = i;
      }
    }
    const double B = std::exp(log_Bq / q);
    c.verdict = std::isfinite(B) ? Verdict::Holds : Verdict::Fails;
    c.constants = {{"B", B}, {"rho", params.rho}, {"t0", std::exp(log_t0)}};
    if (v[arg] > -kInf) {
      const double tail = std::exp(m.log_tail_at(high[arg]));
      const double tq = std::exp(q * high[arg]);
      c.witnesses.push_back(make_witness(high[arg], std::exp(v[arg]) * tq * tail, tq * tail));
    }
    c.note = "grid-certified; B is the smallest constant valid on the grid";
    rep.conditions.push_back(c);
  }

  std::vector<DSearch> found;
  {
    ConditionResult c;
    c.id = "iii";
    c.verdict = Verdict::Holds;
    for (double eps : kMaxEps) {
      const DSearch s = max_D_search(m, high, q, eps);
      found.push_back(s);
      c.constants.emplace_back(eps_label("D", eps), s.found ? s.D : 0.0);
      if (!s.found) {
        c.verdict = Verdict::Fails;
        c.witnesses.push_back(s.witness);
      }
    }
    c.constants.emplace_back("rho", params.rho);
    c.note = "grid-certified; D searched on 2^{k/8}";
    rep.conditions.push_back(c);
  }
  {
    // (iii) -> (ii): B^q <= D^q / (1 - eps); (ii) -> (iii): D = exp(B^{2q} / (q eps)).
    ConditionResult c;
    c.id = "ii<=>iii";
    c.verdict = Verdict::Holds;
    for (std::size_t k = 0; k < kMaxEps.size(); ++k) {
      const double eps = kMaxEps[k];
      if (found[k].found) {
        const double bound = q * std::log(found[k].D) - std::log1p(-eps);
        c.constants.emplace_back(eps_label("B_from_D", eps), std::exp(bound / q));
        if (log_Bq > bound + 1e-9) {
          c.verdict = Verdict::Fails;
          c.witnesses.push_back({eps, std::log(eps), std::exp(log_Bq / q), std::exp(bound / q)});
        }
      }
      const double log_D = std::exp(2.0 * log_Bq) / (q * eps);
      c.constants.emplace_back(eps_label("log_D_from_B", eps), log_D);
      std::size_t arg = 0;
      const double worst = max_tail_ratio(m, high, q, log_D, &arg);
      if (std::isfinite(log_D) && worst > std::log(eps) + kCompareSlack) {
        c.verdict = Verdict::Fails;
        c.witnesses.push_back(make_witness(high[arg], std::exp(worst), eps));
      }
    }
    rep.conditions.push_back(c);
  }
  {
    std::vector<double> rhs(full.size());
    parallel_for(full.size(), params.threads,
                 [&](std::size_t i) { rhs[i] = log_clip_moment(m, full[i], kInf, 0.0, p) / p; });
    auto lhs = [&](std::size_t i, double ls) { return log_clip_moment(m, full[i], kInf, ls, q) / q; };
    // t -> 0: sigma ||X||_q <= ||X||_p.
    const double limit = std::min(0.0, lnorm_p - lnorm_q);
    SigmaResult s = sigma_over_points(full, rhs, lhs, limit, 0.1 * params.rel_tol);
    if (s.log_sigma == limit) {
      s.bound_by_limit = true;
      s.tight = Witness{0.0, -kInf, std::exp(lnorm_q), std::exp(lnorm_p)};
    }
    ConditionResult c;
    c.id = "iv";
    rep.sigma = s.log_sigma == -kInf ? 0.0 : std::exp(s.log_sigma);
    c.verdict = rep.sigma > 0.0 ? Verdict::Holds : Verdict::Fails;
    c.constants = {{"sigma", rep.sigma}};
    c.witnesses.push_back(s.tight);
    c.note = s.bound_by_limit ? "grid-certified; sigma set by the t -> 0 limit" : "grid-certified";
    rep.conditions.push_back(c);
  }
  rep.conditions.push_back(implication_to_i(rep.empirical, rep.sigma, params.rel_tol, "iv=>i"));
  return rep;
}

ClipSigma clip_sigma_search(const DistributionSpec& spec, const HyperParams& params, std::size_t grid) {
  params.validate();
  const LawModel& m = spec.model();
  const double p = params.p, q = params.q;
  if (!spec.moment_finite(q)) throw InfiniteMoment(spec.name() + " has no finite moment of order q");
  if (spec.atom_at_zero() > 0.0) throw NotSubregular(spec.name() + " has an atom at zero");
  const double log_t0 = std::log(params.rho) + log_norm(spec, p);
  const std::vector<double> full = log_quantile_grid(m, grid);
  const std::vector<double> low = log_span(std::min(full.front(), log_t0), log_t0, params.t_grid_size);
  const std::vector<double> high = log_span(log_t0, std::max(full.back(), log_t0), params.t_grid_size);
  for (double eps : kMinEps)
    if (!min_tau_search(m, low, eps).found) throw NotSubregular(spec.name() + " is not subregular at 0");
  for (double eps : kMaxEps)
    if (!max_D_search(m, high, q, eps).found)
      throw NotSubregular(spec.name() + " is not q-subregular at infinity");

  ClipSigma out;
  out.sigma = 1.0;
  const std::size_t n = full.size();
  out.pairs = n * (n - 1) / 2;
  if (n < 2) return out;

  const double tol = 0.1 * params.rel_tol;
  auto rhs = [&](std::size_t i, std::size_t j) { return log_clip_moment(m, full[i], full[j], 0.0, p) / p; };
  auto lhs = [&](std::size_t i, std::size_t j, double ls) { return log_clip_moment(m, full[i], full[j], ls, q) / q; };

  struct RowResult {
    double log_sigma = 0.0;
    std::size_t j = 0;
    double lhs = 0.0;
    double rhs = 0.0;
  };
  auto scan_row = [&](std::size_t i, std::size_t stride, double start) {
    RowResult r;
    r.log_sigma = start;
    for (std::size_t j = i + stride; j < n && r.log_sigma > -kInf; j += stride) {
      const double right = rhs(i, j);
      double fail_at = kInf;
      const double next = descend(
          r.log_sigma, [&](double ls) { return lhs(i, j, ls) <= right + kCompareSlack; }, tol, &fail_at);
      if (next < r.log_sigma) {
        r.log_sigma = next;
        const double at = std::isfinite(fail_at) ? fail_at : next;
        r.j = j;
        r.lhs = std::exp(lhs(i, j, at));
        r.rhs = std::exp(right);
      }
    }
    return r;
  };

  // A coarse sequential pass gives a starting sigma; rows then run
  // independently from it, so the result does not depend on the worker count.
  const std::size_t stride = std::max<std::size_t>(1, n / 20);
  double start = 0.0;
  for (std::size_t i = 0; i < n && start > -kInf; i += stride) start = std::min(start, scan_row(i, stride, start).log_sigma);

  std::vector<RowResult> rows(n);
  parallel_for(n, params.threads, [&](std::size_t i) { rows[i] = scan_row(i, 1, start); });
  double best = start;
  std::size_t arg = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].log_sigma < best) {
      best = rows[i].log_sigma;
      arg = i;
    }
  }
  out.sigma = best == -kInf ? 0.0 : std::exp(best);
  if (arg < n) {
    out.s = std::exp(full[arg]);
    out.t = std::exp(full[rows[arg].j]);
    out.lhs = rows[arg].lhs;
    out.rhs = rows[arg].rhs;
  }
  return out;
}

std::vector<Word> minmax_words(std::size_t max_pairs, const std::vector<std::uint64_t>& counts) {
  std::vector<Word> out;
  std::vector<std::vector<WordStep>> layer = {{}};
  for (std::size_t l = 1; l <= max_pairs; ++l) {
    std::vector<std::vector<WordStep>> next;
    for (const auto& base : layer) {
      for (std::uint64_t n : counts) {
        for (std::uint64_t k : counts) {
          // Written left to right as max n . min k . (previous); stored innermost-first.
          std::vector<WordStep> steps = base;
          steps.push_back({Op::MIN, k});
          steps.push_back({Op::MAX, n});
          next.push_back(steps);
        }
      }
    }
    for (const auto& s : next) out.emplace_back(s);
    layer = std::move(next);
  }
  return out;
}

IteratedReport iterated_hyper_check(const DistributionSpec& spec, const HyperParams& params,
                                    const std::vector<Word>& words, double sigma) {
  params.validate();
  if (!(sigma > 0.0 && sigma <= 1.0)) throw DomainError("sigma must lie in (0, 1]");
  IteratedReport rep;
  rep.sigma = sigma;
  rep.D = 1.0 / sigma;
  rep.words.resize(words.size());
  parallel_for(words.size(), params.threads, [&](std::size_t i) {
    const DistributionSpec w = compose_cdf(spec, words[i]);
    WordCheck& c = rep.words[i];
    c.word = words[i];
    const double lp = log_norm(w, params.p);
    const double lq = log_norm(w, params.q);
    c.norm_p = std::exp(lp);
    c.norm_q = std::exp(lq);
    c.ratio = std::exp(lq - lp);
    c.holds = c.ratio <= rep.D * (1.0 + params.rel_tol);
  });
  rep.verdict = Verdict::Holds;
  for (const auto& c : rep.words)
    if (!c.holds) rep.verdict = Verdict::Fails;
  return rep;
}

HyperReport check_minmax(const DistributionSpec& spec, const HyperParams& params, const std::vector<Word>& words) {
  HyperReport rep;
  rep.kind = HyperKind::MINMAX;
  rep.empirical = empirical_hyper_constant(spec, params, Op::MIN);
  ConditionResult clip;
  clip.id = "clip";
  ClipSigma cs;
  try {
    cs = clip_sigma_search(spec, params);
  } catch (const NotSubregular& e) {
    clip.verdict = Verdict::Fails;
    clip.note = e.what();
    rep.conditions.push_back(clip);
    return rep;
  }
  rep.sigma = cs.sigma;
  clip.verdict = cs.sigma > 0.0 ? Verdict::Holds : Verdict::Fails;
  clip.constants = {{"sigma", cs.sigma}, {"pairs", static_cast<double>(cs.pairs)}};
  clip.witnesses.push_back({cs.t, std::log(cs.t), cs.lhs, cs.rhs});
  clip.constants.emplace_back("s_at_bound", cs.s);
  clip.note = "grid-certified";
  rep.conditions.push_back(clip);
  if (!(cs.sigma > 0.0)) return rep;

  const IteratedReport it = iterated_hyper_check(spec, params, words, cs.sigma);
  ConditionResult w;
  w.id = "words";
  w.verdict = it.verdict;
  w.constants = {{"D", it.D}, {"words", static_cast<double>(it.words.size())}};
  double worst = 0.0;
  for (std::size_t i = 0; i < it.words.size(); ++i) {
    worst = std::max(worst, it.words[i].ratio);
    if (!it.words[i].holds)
      w.witnesses.push_back({static_cast<double>(i), std::log(static_cast<double>(i + 1)), it.words[i].ratio, it.D});
  }
  w.constants.emplace_back("max_ratio", worst);
  rep.conditions.push_back(w);
  return rep;
}

}  // namespace mmh
