#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "minmax/distributions.hpp"

namespace mmh {

enum class Op { MIN, MAX };

struct WordStep {
  Op op;
  std::uint64_t count;
  bool operator==(const WordStep&) const = default;
};

/// Iterated statistic M_{n1} m_{k1} ... applied to X. Steps are stored
/// innermost-first: steps()[0] acts on X directly.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<WordStep> innermost_first);

  /// Text form "max2.min3": factors read left to right as written in the
  /// product, so the rightmost factor acts first. "" or "id" is the identity.
  static Word parse(std::string_view text);
  static Word single(Op op, std::uint64_t count) { return Word({{op, count}}); }

  std::string to_string() const;
  const std::vector<WordStep>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }
  bool operator==(const Word&) const = default;

 private:
  std::vector<WordStep> steps_;
};

/// Law of W = word(X). Each MIN k maps F to 1 - (1 - F)^k, each MAX n maps F to
/// F^n; the result is tracked in log space on both sides.
DistributionSpec compose_cdf(const DistributionSpec& spec, const Word& word);

struct MomentQuery {
  DistributionSpec spec;
  Word word;
  double r = 1.0;
  double rel_tol = 1e-9;
};

/// ||W||_r = (E W^r)^{1/r}. Throws InfiniteMoment or NonConvergent.
double moment_norm(const MomentQuery& query);
double moment_norm(const DistributionSpec& law, double r, double rel_tol = 1e-9);
/// log ||W||_r; stays finite when the norm itself under- or overflows.
double log_moment_norm(const DistributionSpec& law, double r, double rel_tol = 1e-9);

enum class Weight { Tail, Cdf };

/// log of r * integral over (a, b) of e^{r y} P(X > e^y) dy (Weight::Tail) or
/// of e^{r y} P(X <= e^y) dy (Weight::Cdf), in log-coordinates y = log u.
/// a may be -inf; b may be +inf for Weight::Tail only.
double log_weighted_integral(const LawModel& model, double r, double a, double b, Weight weight,
                             double rel_tol = 1e-10);

/// E(s v scale*X ^ t)^r for 0 <= s <= t < infinity.
double clipped_moment(const DistributionSpec& spec, double s, double t, double scale, double r);

/// log of r * integral_s^inf u^{r-1} P(scale X > u) du, i.e. E(s v scale X)^r - s^r.
double log_clip_excess(const DistributionSpec& spec, double s, double scale, double r, double rel_tol = 1e-11);
/// log of r * integral_0^t u^{r-1} P(scale X <= u) du, i.e. t^r - E(t ^ scale X)^r.
double log_clip_deficit(const DistributionSpec& spec, double t, double scale, double r, double rel_tol = 1e-11);

struct MaxMomentBounds {
  double lower = 0.0;
  double upper = 0.0;
  double b_N = 0.0;
  /// b_N sits on an atom, so P(X > b_N) < 1/N < P(X >= b_N) strictly.
  bool at_atom = false;
};

/// Sandwich lower <= E M_N^r <= upper around the pivot b_N = tail quantile at 1/N.
MaxMomentBounds max_moment_bounds(const DistributionSpec& spec, std::uint64_t N, double r);

/// N P(M_N <= a) E X^r I(X > a), a lower bound for E M_N^r.
double max_moment_lower_at(const DistributionSpec& spec, double a, std::uint64_t N, double r);

/// E X^r I(X > t).
double truncated_upper_moment(const DistributionSpec& spec, double t, double r, double rel_tol = 1e-11);

struct TailSandwich {
  double lower = 0.0;
  double mid = 0.0;
  double upper = 0.0;
};

/// (n u/(1 + n u), 1 - (1 - u)^n, min(n u, 1)) with u = P(X > t).
TailSandwich max_tail_sandwich(const DistributionSpec& spec, double t, std::uint64_t n);
TailSandwich tail_sandwich_from_u(double u, std::uint64_t n);

}  // namespace mmh
