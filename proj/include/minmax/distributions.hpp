#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "minmax/random.hpp"

namespace mmh {

/// Law of a nonnegative random variable X expressed in log coordinates.
///
/// Every function takes or returns x = log t, and probabilities as logs, so
/// quantities such as P(min of 2^30 copies > t) or quantiles far below 1e-308
/// remain representable. Implementations must keep log_cdf_at accurate where
/// the CDF is tiny and log_tail_at accurate where the tail is tiny.
class LawModel {
 public:
  virtual ~LawModel() = default;

  /// log P(X <= e^x); x = -inf gives the log of the atom at zero.
  virtual double log_cdf_at(double x) const = 0;
  /// log P(X > e^x).
  virtual double log_tail_at(double x) const = 0;
  /// log inf{t : P(X <= t) >= e^lu}, -inf when that infimum is 0.
  virtual double log_quantile_cdf(double lu) const = 0;
  /// log inf{t : P(X > t) <= e^lv}.
  virtual double log_quantile_tail(double lv) const = 0;
  virtual double sample(RandomStream& rng) const = 0;

  /// E X^r is finite iff r < tail_index().
  virtual double tail_index() const { return std::numeric_limits<double>::infinity(); }
  virtual double atom_at_zero() const { return 0.0; }
  /// Points (as log t) where the CDF has a kink or jump.
  virtual std::vector<double> kinks() const { return {}; }
};

/// Immutable value handle on a law. Copies share the underlying model.
class DistributionSpec {
 public:
  DistributionSpec(std::string name, std::shared_ptr<const LawModel> model);

  const std::string& name() const { return name_; }
  const LawModel& model() const { return *model_; }
  const std::shared_ptr<const LawModel>& model_ptr() const { return model_; }

  double tail(double t) const;
  double cdf(double t) const;
  double log_tail(double t) const;
  double log_cdf(double t) const;
  /// inf{t : cdf(t) >= u} for u in (0, 1).
  double quantile(double u) const;
  /// inf{t : tail(t) <= v} for v in (0, 1].
  double tail_quantile(double v) const;
  double sample(RandomStream& rng) const { return model_->sample(rng); }

  bool moment_finite(double r) const { return r < model_->tail_index(); }
  double tail_index() const { return model_->tail_index(); }
  double atom_at_zero() const { return model_->atom_at_zero(); }

 private:
  std::string name_;
  std::shared_ptr<const LawModel> model_;
};

/// P(m_n > t) = tail(t)^n, evaluated as exp(n log tail(t)).
double tail_power(const DistributionSpec& spec, double t, std::uint64_t n);

/// Parses the distribution mini-language, e.g. "exp(1)", "atomzero(0.3, exp(1))".
/// Throws ParseError (with position) or DomainError.
DistributionSpec parse_spec(std::string_view text);

namespace dist {

DistributionSpec exponential(double rate);
DistributionSpec uniform(double a, double b);
DistributionSpec pareto(double beta, double xm);
DistributionSpec weibull(double shape, double scale);
DistributionSpec halfnormal(double sigma);
DistributionSpec lognormal(double mu, double sigma);
DistributionSpec constant(double c);
DistributionSpec atomzero(double p0, const DistributionSpec& base);
/// cdf(t) = 1 / log(e / t) on (0, 1]: a law that is not subregular at 0.
DistributionSpec loglight();
/// Law of |S| for a standard symmetric alpha-stable S (characteristic
/// function exp(-|u|^alpha)). alpha == 1 and alpha == 2 are closed forms
/// (|Cauchy| and half-normal with sigma sqrt(2)); otherwise the log CDF and log
/// tail are splined from an integral representation, relative error about 1e-9.
DistributionSpec stablemod(double alpha);

}  // namespace dist

}  // namespace mmh
