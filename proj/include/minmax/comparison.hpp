#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minmax/distributions.hpp"
#include "minmax/hyper.hpp"

namespace mmh {

enum class Direction { SMALL_BALL, TAIL, TWO_SIDED, THINNING };
const char* to_string(Direction d);

struct ComparisonVerdict {
  Direction direction = Direction::SMALL_BALL;
  Verdict verdict = Verdict::Inconclusive;
  /// Closed-form recipe constants followed by the empirically optimal ones.
  std::vector<std::pair<std::string, double>> constants;
  /// Interval of t where the display was checked.
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<Witness> witnesses;
  /// Domination constant of the hypothesis and the n where the sup was reached.
  double B_domination = 0.0;
  std::uint64_t B_argmax_n = 0;
  std::vector<ConditionResult> checks;
  std::string note;

  double constant(std::string_view name) const;
};

struct Domination {
  double B = 0.0;
  std::uint64_t argmax_n = 1;
  std::vector<std::pair<std::uint64_t, double>> profile;
};

/// sup over the n grid of ||m_n(Y)||_q / ||m_n(X)||_q.
Domination min_domination_B(const DistributionSpec& X, const DistributionSpec& Y, const HyperParams& params);
/// sup over the n grid of ||M_n(Y)||_q / ||M_n(X)||_q.
Domination max_domination_D(const DistributionSpec& X, const DistributionSpec& Y, const HyperParams& params);

/// P(X <= tau t) <= delta P(Y <= t) for t <= rho ||X||_p with the recipe constants.
/// beta defaults to the midpoint of (p/q, 1). Throws HypothesisFailed unless X is
/// min-hypercontractive.
ComparisonVerdict small_ball_comparison(const DistributionSpec& X, const DistributionSpec& Y,
                                        const HyperParams& params, double lambda = 0.5,
                                        std::optional<double> beta = std::nullopt);

/// E Y^q I(Y > A t) <= B^q t^q P(X > t) and P(Y > A t) <= B^q P(X > t) for t >= t0.
ComparisonVerdict tail_comparison(const DistributionSpec& X, const DistributionSpec& Y, const HyperParams& params,
                                  double lambda = 0.5);

/// Smallest D in [2^-20, 2^20] with P(Y <= t) >= P(D X <= t) on the grid. Throws
/// NoFiniteD when even 2^20 fails.
ComparisonVerdict two_sided_comparison(const DistributionSpec& X, const DistributionSpec& Y,
                                       const HyperParams& params);

/// Bernoulli thinning: with P(delta = 1) = 1/C, max of thinned copies of Y is
/// dominated by max of copies of X. C_tail defaults to the fitted
/// max(1, sup_t P(Y > t) / P(X > t)).
ComparisonVerdict thinning_equivalence(const DistributionSpec& X, const DistributionSpec& Y,
                                       const HyperParams& params, std::optional<double> C_tail = std::nullopt);

}  // namespace mmh
