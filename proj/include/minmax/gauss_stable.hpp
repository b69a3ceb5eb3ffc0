#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "minmax/convex_set.hpp"
#include "minmax/hyper.hpp"
#include "minmax/parallel.hpp"
#include "minmax/random.hpp"

namespace mmh {

enum class VectorLawKind { GAUSSIAN, STABLE_SUBGAUSSIAN, STABLE_INDEP };
const char* to_string(VectorLawKind k);

/// Centered law on R^d, d <= 64.
///
/// Scale convention: a one-dimensional symmetric alpha-stable S has
/// E exp(iuS) = exp(-|u|^alpha). STABLE_SUBGAUSSIAN is (2A)^{1/2} G with
/// G ~ N(0, Sigma) and A >= 0 the (alpha/2)-stable variable with Laplace
/// transform exp(-s^{alpha/2}), so E exp(i<u,X>) = exp(-(u' Sigma u)^{alpha/2}).
/// STABLE_INDEP has coordinates scale_i * S_i. At alpha = 2 both collapse to
/// GAUSSIAN(2 Sigma) and GAUSSIAN(diag(2 scale^2)).
class VectorLaw {
 public:
  static VectorLaw gaussian(const Eigen::MatrixXd& cov, std::uint64_t seed = 0);
  static VectorLaw stable_subgaussian(double alpha, const Eigen::MatrixXd& cov, std::uint64_t seed = 0);
  static VectorLaw stable_indep(double alpha, const Eigen::VectorXd& scales, std::uint64_t seed = 0);

  VectorLawKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  double alpha() const { return alpha_; }
  std::uint64_t seed() const { return seed_; }
  VectorLaw with_seed(std::uint64_t seed) const;
  /// Sigma for the Gaussian and sub-Gaussian kinds; diag(scale^2) otherwise.
  const Eigen::MatrixXd& covariance() const { return cov_; }

  void draw(RandomStream& rng, std::span<double> out) const;
  std::string scale_convention() const;

 private:
  VectorLaw() = default;

  VectorLawKind kind_ = VectorLawKind::GAUSSIAN;
  std::size_t dim_ = 0;
  double alpha_ = 2.0;
  std::uint64_t seed_ = 0;
  Eigen::MatrixXd cov_;
  std::vector<double> factor_;  // row-major d x d, factor * factor' = cov
  std::vector<double> scales_;
};

/// n draws (rows) from stream `stream` of the law's seed. Throws
/// NotPositiveSemidefinite at construction, DomainError for n > 1e9.
Eigen::MatrixXd sample(const VectorLaw& law, std::size_t n, std::uint64_t stream);

/// Sample budget of one estimate. Draws are split into fixed chunks, each with
/// its own stream, so results do not depend on `threads`.
struct McOptions {
  std::uint64_t samples = 1000000;
  unsigned threads = 1;
  /// Rerun with 10x samples when a verdict is within 8 standard errors.
  bool escalate = true;
};

/// Standard normal quantile for a two-sided 0.999 interval.
inline constexpr double kWilsonZ = 3.2905267314919255;

struct Proportion {
  std::uint64_t count = 0;
  std::uint64_t n = 0;
  double p = 0.0;
  double std_error = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
Proportion wilson(std::uint64_t count, std::uint64_t n, double z = kWilsonZ);

struct SmallBallEstimate {
  std::vector<double> radii;
  std::vector<Proportion> estimates;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// nu(t * set + y) for every t in radii from one pass: a draw x counts for t
/// when gauge(x - y) <= t.
SmallBallEstimate small_ball(const VectorLaw& law, const ConvexSet& set, const Eigen::VectorXd& y,
                             const std::vector<double>& radii, const McOptions& opts, std::uint64_t stream_base = 0);

/// Gauges of n draws, in draw order.
std::vector<double> sample_gauges(const VectorLaw& law, const ConvexSet& set, const Eigen::VectorXd& y,
                                  const McOptions& opts, std::uint64_t stream_base);

struct BoundRow {
  std::size_t shift = 0;
  double t = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool holds = true;
};

struct KanterReport {
  Proportion nu_B;
  std::vector<Eigen::VectorXd> shifts;
  std::vector<BoundRow> rows;
  std::uint64_t samples = 0;
  bool holds = true;
  bool inconclusive = false;
  std::string note;
};

/// nu(kappa B + y) <= (3/2) kappa^{alpha/2} / sqrt(1 - nu(B)) for every kappa and shift.
KanterReport kanter_bound_check(const VectorLaw& law, const ConvexSet& set, const std::vector<Eigen::VectorXd>& shifts,
                                const std::vector<double>& kappa_grid, const McOptions& opts);

/// Shifts 0, half and twice the boundary point of `set` along the first axis.
std::vector<Eigen::VectorXd> default_shifts(const ConvexSet& set);

struct RegularityReport {
  /// The checked set is scale * (input set).
  double scale = 1.0;
  Proportion nu_B;
  Proportion nu_half_B;
  double b = 0.5;
  double R_b = 0.0;
  /// 3 nu(B/2)^{-1} (1 - nu(B/2))^{-1/2} from the estimate of nu(B/2).
  double R_prime = 0.0;
  std::vector<BoundRow> rows;
  /// Least-squares slope of log nu(tB) against log t; compare with alpha/2 and 1.
  double exponent_fit = 0.0;
  double alpha_half = 0.0;
  std::uint64_t samples = 0;
  bool holds = true;
  std::string note;
};

/// nu(tB) <= R(b) t^{alpha/2} nu(B) for t in t_grid (0 < t <= 1). The set is
/// rescaled to mass `target` when given, or to 0.8 b when its mass exceeds b
/// or is below 0.01. Throws RescaleFailed when that is impossible.
RegularityReport regularity_check(const VectorLaw& law, const ConvexSet& set, double b,
                                  const std::vector<double>& t_grid, const McOptions& opts,
                                  std::optional<double> target = std::nullopt);

struct CorrelationReport {
  double alpha_scale = 1.0;
  /// mu(alpha_scale * intersection) and prod mu(A_i), on shared draws.
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;
  std::vector<double> marginals;
  bool holds = true;
  /// Whether the verdict is a theorem for this configuration and so asserted.
  bool asserted = false;
  std::string reason;
  /// With a slab S present: mu(S and rest) >= mu(S) mu(rest) at scale 1.
  bool has_slab_sanity = false;
  double slab_lhs = 0.0;
  double slab_rhs = 0.0;
  double slab_std_error = 0.0;
  bool slab_holds = true;
  std::uint64_t samples = 0;
};

CorrelationReport correlation_check(const VectorLaw& law, const std::vector<ConvexSet>& sets, double alpha_scale,
                                    const McOptions& opts);

struct SlepianReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double se_lhs = 0.0;
  double se_rhs = 0.0;
  double ratio = 0.0;
  std::uint64_t samples = 0;
  bool holds = true;
};

/// E max_l ||G||_l <= sqrt(2) E max_l ||G_l||_l + 4 stderr.
SlepianReport slepian_sqrt2_check(const Eigen::MatrixXd& cov, const std::vector<ConvexSet>& norm_sets,
                                  const McOptions& opts, std::uint64_t seed = 0);

struct MinMomentHypothesisRow {
  std::uint64_t n = 1;
  double norm_Y = 0.0;
  double norm_X = 0.0;
  double ratio = 0.0;
};

struct MinMomentHypothesisReport {
  double q = 2.0;
  std::vector<MinMomentHypothesisRow> rows;
  double sup = 0.0;
  std::uint64_t sup_n = 1;
  std::uint64_t replicates = 0;
};

/// ||m_n(Y)||_q and ||m_n(X)||_q by tournament minima over n replicates, with
/// Y = max_l ||G||_l and X = max_l ||G_l||_l. Reported, never asserted.
MinMomentHypothesisReport min_moment_hypothesis_62(const Eigen::MatrixXd& cov, const std::vector<ConvexSet>& norm_sets,
                                     const std::vector<std::uint64_t>& n_grid, double q, const McOptions& opts,
                                     std::uint64_t seed = 0);

struct IntegralFormRow {
  double t = 0.0;
  double integral = 0.0;
  double mu_t = 0.0;
  double ratio = 0.0;
};

struct IntegralFormReport {
  double scale = 1.0;
  double nu_B = 0.0;
  double b = 0.5;
  double r_fit = 0.0;
  IntegralFormConstants constants;
  std::vector<IntegralFormRow> rows;
  std::vector<BoundRow> power_rows;
  std::uint64_t samples = 0;
  bool holds = true;
  std::string note;
};

/// Integral form from gauge draws: with mu(sB) the empirical CDF of the gauges,
/// integral_0^t mu(sB) ds = mean (t - g)^+. r_fit is the sup of
/// integral / (t mu(tB)) over t_grid; the power bound mu(sB) <= R s^beta mu(B) is then checked
/// with the constants derived from r_fit.
IntegralFormReport integral_equivalence_from_gauges(std::vector<double> gauges, double b,
                                                  const std::vector<double>& t_grid);

IntegralFormReport integral_equivalence_72(const VectorLaw& law, const ConvexSet& set, double b,
                                         const std::vector<double>& t_grid, const McOptions& opts);

struct AndersonRow {
  Eigen::VectorXd shift;
  Proportion shifted;
  Proportion centered;
  bool holds = true;
};

/// nu(set + y) <= nu(set) + 4 stderr for symmetric unimodal laws.
std::vector<AndersonRow> anderson_check(const VectorLaw& law, const ConvexSet& set,
                                        const std::vector<Eigen::VectorXd>& shifts, const McOptions& opts);

}  // namespace mmh
