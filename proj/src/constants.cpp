#include <cmath>

#include "minmax/error.hpp"
#include "minmax/hyper.hpp"
#include "minmax/numeric.hpp"

namespace mmh {

namespace {

void check_pq(double p, double q) {
  if (!(p > 0.0 && p < q && std::isfinite(q))) throw DomainError("need 0 < p < q < infinity");
}

void check_C(double C) {
  if (!(C >= 1.0 && std::isfinite(C))) throw DomainError("hypercontractivity constant must be >= 1");
}

}  // namespace

double lemma21_alpha(double C, double p, double q) {
  check_pq(p, q);
  check_C(C);
  return std::pow(2.0, 1.0 / (q - p)) * std::pow(C, q / (q - p));
}

double lemma21_pz(double C, double p, double q, double lambda) {
  check_pq(p, q);
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  if (C == num::kInf) return 0.0;
  check_C(C);
  return std::pow((1.0 - std::pow(lambda, p)) * std::pow(C, -p), q / (q - p));
}

double lemma32_K(double C, double p, double q) {
  check_pq(p, q);
  check_C(C);
  return std::pow(2.0, (2.0 * q - p) / (p * (q - p))) * std::pow(C, q / (q - p));
}

SmallBallConstants small_ball_constants(double C, double B, double p, double q, double lambda, double beta) {
  check_pq(p, q);
  check_C(C);
  if (!(B > 0.0 && std::isfinite(B))) throw DomainError("domination constant B must be positive");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  if (!(beta > p / q && beta < 1.0)) throw DomainError("beta must lie in (p/q, 1)");
  SmallBallConstants c;
  c.D = std::pow((1.0 - std::pow(lambda, p)) * std::pow(C, -p), q / (p * (q - p)));
  c.K = lemma32_K(C, p, q);
  c.tau = lambda * c.D / (c.K * B);
  c.delta = 0.5 * (p / (q * beta) + 1.0);
  // Smallest n with D >= beta^{2^n / (q - p)}, i.e. 2^n >= (q - p) log D / log beta.
  const double need = (q - p) * std::log(c.D) / std::log(beta);
  while (std::ldexp(1.0, c.n) < need) ++c.n;
  c.rho = std::min(B / c.D, lambda * std::pow(c.K, -c.n) / c.tau);
  return c;
}

TailConstants tail_constants(double C, double D, double p, double q, double lambda, double norm_Y_p) {
  check_pq(p, q);
  check_C(C);
  if (!(D > 0.0 && std::isfinite(D))) throw DomainError("domination constant D must be positive");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  TailConstants c;
  c.A = std::pow(2.0, (q + 1.0) / q) * C * D / lambda;
  c.B = c.A * std::pow(std::pow(C, p) / (1.0 - std::pow(lambda, p)), 1.0 / (q - p));
  c.t0 = lambda * norm_Y_p;
  return c;
}

double regularity_R(double b) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("b must lie in (0, 1)");
  return 3.0 / (b * std::sqrt(1.0 - b));
}

IntegralFormConstants integral_form_constants(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("r must lie in (0, 1)");
  IntegralFormConstants c;
  c.delta = 1.0 - std::sqrt(r);
  c.R = 1.0 / std::sqrt(r);
  c.beta = std::log(r) / (2.0 * std::log(c.delta));
  return c;
}

ConstantsLedger constants_ledger(const LedgerInputs& in) {
  ConstantsLedger l;
  l.alpha_21 = lemma21_alpha(in.C, in.p, in.q);
  l.pz_lower = lemma21_pz(in.C, in.p, in.q, in.lambda);
  l.K_32 = lemma32_K(in.C, in.p, in.q);
  l.tau_delta_rho_33 = small_ball_constants(in.C, in.B, in.p, in.q, in.lambda, in.beta);
  l.ABt0_44 = tail_constants(in.C, in.D, in.p, in.q, in.lambda, in.norm_Y_p);
  l.R_b_64 = regularity_R(in.b);
  l.R_beta_72 = integral_form_constants(in.r);
  return l;
}

bool elementary_inequality_a_holds(double x, double y, double beta, double p, double q) {
  check_pq(p, q);
  if (!(beta > 0.0 && beta < 1.0 && x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0))
    throw DomainError("need 0 < beta, x, y < 1");
  if (x < std::pow(beta, p / (q - p)) || std::pow(y, 1.0 / q) > std::pow(x, 1.0 / p))
    throw DomainError("hypotheses of the inequality are not met");
  const double lhs = 1.0 - x;
  const double rhs = p / (q * beta) * (1.0 - y);
  return lhs <= rhs * (1.0 + 1e-12) + 1e-15;
}

bool elementary_inequality_b_holds(double x, double y, double p, double q) {
  check_pq(p, q);
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0)) throw DomainError("need 0 < x, y < 1");
  if (p / q * x < y) throw DomainError("hypothesis p x / q >= y is not met");
  const double lhs = std::log1p(-x) / q;
  const double rhs = std::log1p(-y) / p;
  return lhs <= rhs + 1e-14;
}

std::vector<PZRow> paley_zygmund_check(const DistributionSpec& spec, const HyperParams& params, Op kind,
                                       const std::vector<double>& lambdas, double C) {
  params.validate();
  const auto& grid = params.n_grid;
  std::vector<double> log_norm_p(grid.size());
  parallel_for(grid.size(), params.threads, [&](std::size_t i) {
    log_norm_p[i] = log_moment_norm(compose_cdf(spec, Word::single(kind, grid[i])), params.p, 1e-11);
  });
  std::vector<PZRow> rows;
  const LawModel& m = spec.model();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double n = static_cast<double>(grid[i]);
    for (double lambda : lambdas) {
      PZRow row;
      row.n = grid[i];
      row.lambda = lambda;
      row.bound = lemma21_pz(C, params.p, params.q, lambda);
      const double x = std::log(lambda) + log_norm_p[i];
      // P(m_n > s) = P(X > s)^n and P(M_n > s) = 1 - (1 - P(X > s))^n, both in log space.
      const double lt = m.log_tail_at(x);
      const double log_prob = kind == Op::MIN ? n * lt : num::log_complement_power(lt, n);
      row.probability = std::exp(log_prob);
      row.holds = log_prob >= std::log(row.bound) - 1e-12;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace mmh
