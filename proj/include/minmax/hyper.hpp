#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "minmax/distributions.hpp"
#include "minmax/moments.hpp"
#include "minmax/parallel.hpp"

namespace mmh {

enum class Verdict { Holds, Fails, Inconclusive };
const char* to_string(Verdict v);

struct HyperParams {
  double p = 1.0;
  double q = 2.0;
  std::vector<std::uint64_t> n_grid = default_n_grid();
  std::size_t t_grid_size = 400;
  double rel_tol = 1e-8;
  double rho = 0.5;
  unsigned threads = 1;

  /// {2^0, ..., 2^30}.
  static std::vector<std::uint64_t> default_n_grid();
  /// Throws DomainError unless 0 < p < q and n_grid is strictly increasing.
  void validate() const;
};

/// A grid point where an inequality was evaluated. `at` is t (or n), and
/// `log_at` its logarithm, which stays meaningful when t underflows.
struct Witness {
  double at = 0.0;
  double log_at = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ConditionResult {
  std::string id;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::pair<std::string, double>> constants;
  std::vector<Witness> witnesses;
  std::string note;

  double constant(std::string_view name) const;
};

struct HyperConstant {
  double C = 1.0;
  std::uint64_t argmax_n = 1;
  /// (n, ||W_n||_q / ||W_n||_p) for every n on the grid.
  std::vector<std::pair<std::uint64_t, double>> profile;
};

/// max over the n grid of ||kind_n(X)||_q / ||kind_n(X)||_p.
HyperConstant empirical_hyper_constant(const DistributionSpec& spec, const HyperParams& params, Op kind);

enum class HyperKind { MIN, MAX, MINMAX };
const char* to_string(HyperKind k);

struct HyperReport {
  HyperKind kind = HyperKind::MIN;
  HyperConstant empirical;
  /// Largest grid-certified sigma for condition (iv); 0 when none was found.
  double sigma = 0.0;
  std::vector<ConditionResult> conditions;

  const ConditionResult* find(std::string_view id) const;
  Verdict overall() const;
};

HyperReport check_min_conditions(const DistributionSpec& spec, const HyperParams& params);
/// Throws InfiniteMoment when E X^q is infinite.
HyperReport check_max_conditions(const DistributionSpec& spec, const HyperParams& params);

// Building blocks shared with the comparison engines.

/// Log-spaced grid of log t between the quantiles at levels 1e-9 and 1 - 1e-9
/// (levels measured above any atom at zero).
std::vector<double> log_quantile_grid(const LawModel& model, std::size_t size);
/// Log-spaced grid of log t on [log_lo, log_hi]; a single point if they coincide.
std::vector<double> log_span(double log_lo, double log_hi, std::size_t size);

/// log E(s v sigma X ^ t)^r in log coordinates; ls may be -inf (no floor) and
/// lt +inf (no cap).
double log_clip_moment(const LawModel& model, double ls, double lt, double log_sigma, double r,
                       double rel_tol = 1e-11);

struct TauSearch {
  bool found = false;
  double log_tau = 0.0;
  Witness witness;
};
/// Largest tau with P(X <= tau t) <= eps P(X <= t) at every grid point.
TauSearch min_tau_search(const LawModel& model, const std::vector<double>& log_t, double eps);

struct DSearch {
  bool found = false;
  double D = 0.0;
  Witness witness;
};
/// Smallest D = 2^{k/8} <= 2^20 with D^q P(X > D t) <= eps P(X > t) on the grid.
DSearch max_D_search(const LawModel& model, const std::vector<double>& log_t, double q, double eps);

struct ClipSigma {
  double sigma = 0.0;
  /// Binding pair (s, t) with both sides of the inequality just above sigma.
  double s = 0.0;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::size_t pairs = 0;
};

/// Largest sigma with (E(s v sigma X ^ t)^q)^{1/q} <= (E(s v X ^ t)^p)^{1/p} on
/// the 200 x 200 quantile grid of pairs s < t. Throws NotSubregular unless X is
/// subregular at 0 and q-subregular at infinity.
ClipSigma clip_sigma_search(const DistributionSpec& spec, const HyperParams& params, std::size_t grid = 200);

struct WordCheck {
  Word word;
  double norm_p = 0.0;
  double norm_q = 0.0;
  double ratio = 0.0;
  bool holds = false;
};

struct IteratedReport {
  double sigma = 0.0;
  double D = 0.0;
  std::vector<WordCheck> words;
  Verdict verdict = Verdict::Inconclusive;
};

/// Checks ||W||_q <= sigma^{-1} ||W||_p for each word.
IteratedReport iterated_hyper_check(const DistributionSpec& spec, const HyperParams& params,
                                    const std::vector<Word>& words, double sigma);

/// Every word max n_1 . min k_1 ... max n_l . min k_l with 1 <= l <= max_pairs
/// and counts drawn from `counts`.
std::vector<Word> minmax_words(std::size_t max_pairs, const std::vector<std::uint64_t>& counts);

HyperReport check_minmax(const DistributionSpec& spec, const HyperParams& params,
                         const std::vector<Word>& words);

// Closed-form constants.

double lemma21_alpha(double C, double p, double q);
double lemma21_pz(double C, double p, double q, double lambda);
double lemma32_K(double C, double p, double q);

struct SmallBallConstants {
  double D = 0.0;
  double K = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  int n = 0;
};
/// Small-ball comparison constants for X in min H_{p,q}(C) and domination constant B.
/// beta must lie in (p/q, 1); delta is the midpoint of (p/(q beta), 1).
SmallBallConstants small_ball_constants(double C, double B, double p, double q, double lambda, double beta);

struct TailConstants {
  double A = 0.0;
  double B = 0.0;
  double t0 = 0.0;
};
TailConstants tail_constants(double C, double D, double p, double q, double lambda, double norm_Y_p);

/// 3 / (b sqrt(1 - b)).
double regularity_R(double b);

struct IntegralFormConstants {
  double delta = 0.0;
  double R = 0.0;
  double beta = 0.0;
};
/// (delta, R, beta) = (1 - sqrt r, r^{-1/2}, log r / (2 log delta)).
IntegralFormConstants integral_form_constants(double r);

struct ConstantsLedger {
  double alpha_21 = 0.0;
  double pz_lower = 0.0;
  double K_32 = 0.0;
  SmallBallConstants tau_delta_rho_33;
  TailConstants ABt0_44;
  double R_b_64 = 0.0;
  IntegralFormConstants R_beta_72;
};

struct LedgerInputs {
  double C = 2.0;
  double p = 1.0;
  double q = 2.0;
  double lambda = 0.5;
  double B = 1.0;
  double D = 1.0;
  double beta = 0.75;
  double norm_Y_p = 1.0;
  double b = 0.5;
  double r = 0.25;
};
ConstantsLedger constants_ledger(const LedgerInputs& in);

// Elementary inequalities.

/// x >= beta^{p/(q-p)} and y^{1/q} <= x^{1/p} imply 1 - x <= beta^{-1} p q^{-1} (1 - y).
/// Returns whether the conclusion holds; throws DomainError outside the hypotheses.
bool elementary_inequality_a_holds(double x, double y, double beta, double p, double q);
/// p q^{-1} x >= y implies (1 - x)^{1/q} <= (1 - y)^{1/p}.
bool elementary_inequality_b_holds(double x, double y, double p, double q);

struct PZRow {
  std::uint64_t n = 0;
  double lambda = 0.0;
  double probability = 0.0;
  double bound = 0.0;
  bool holds = false;
};
/// P(W_n > lambda ||W_n||_p) against ((1 - lambda^p) C^{-p})^{q/(q-p)} on the n grid.
std::vector<PZRow> paley_zygmund_check(const DistributionSpec& spec, const HyperParams& params, Op kind,
                                       const std::vector<double>& lambdas, double C);

// Class F and functional inequalities.

struct FunctionSample {
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> df;
  std::vector<double> d2f;
  double f0 = 0.0;
};

struct ClassFResult {
  bool member = false;
  std::optional<double> violation_at;
  std::string reason;
  double mass_needed = 0.0;
};

/// Tests 0 <= x f'(x) <= f(x) on the grid and f(0) >= integral x (f'' v 0) dx.
/// Throws GridTooCoarse when central differences of f disagree with f' by more than 1e-4.
ClassFResult class_F_membership(const FunctionSample& sample);

FunctionSample sample_function(const std::function<std::array<double, 3>(double)>& f, const std::vector<double>& x,
                               double f0);
/// Smooth version of offset + (s v x ^ t) with transition width w.
FunctionSample smooth_clip_sample(double s, double t, double w, const std::vector<double>& x, double offset = 0.0);

enum class FunctionalTag { MinAll, ConcaveSample, ClipSample };
const char* to_string(FunctionalTag tag);

struct FunctionalCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  bool holds = false;
};

/// Monte Carlo check of (E h^q(sigma X_1..X_n))^{1/q} <= E h(X_1..X_n). ClipSample
/// uses h = s v min_i x_i ^ t with (s, t) = quantiles 0.25 and 0.75 of X.
FunctionalCheck functional_hyper_check(const DistributionSpec& spec, FunctionalTag tag, std::size_t n,
                                       double sigma, double q, const SamplePlan& plan);

}  // namespace mmh
