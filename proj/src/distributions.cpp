#include "minmax/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "minmax/error.hpp"
#include "minmax/numeric.hpp"

namespace mmh {

using num::kInf;

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

// log(-log(1 - e^lu)): log of the cumulative hazard at CDF level e^lu.
double log_hazard_from_log_cdf(double lu) {
  if (lu == -kInf) return -kInf;
  if (lu < -700.0) return lu;
  return std::log(-num::log1mexp(lu));
}

// Weibull-type law with cumulative hazard H(t) = (t/scale)^shape.
class HazardPowerModel final : public LawModel {
 public:
  HazardPowerModel(double shape, double scale) : k_(shape), log_scale_(std::log(scale)), scale_(scale) {}

  double log_hazard(double x) const { return k_ * (x - log_scale_); }

  double log_cdf_at(double x) const override {
    const double lh = log_hazard(x);
    if (lh < -700.0) return lh;
    return num::log1mexp(-std::exp(lh));
  }
  double log_tail_at(double x) const override { return -std::exp(log_hazard(x)); }
  double log_quantile_cdf(double lu) const override {
    if (lu >= 0.0) return kInf;
    return log_scale_ + log_hazard_from_log_cdf(lu) / k_;
  }
  double log_quantile_tail(double lv) const override {
    if (lv >= 0.0) return -kInf;
    return log_scale_ + std::log(-lv) / k_;
  }
  double sample(RandomStream& rng) const override {
    return scale_ * std::pow(rng.exponential(), 1.0 / k_);
  }

 private:
  double k_, log_scale_, scale_;
};

class UniformModel final : public LawModel {
 public:
  UniformModel(double a, double b) : a_(a), b_(b) {}

  double log_cdf_at(double x) const override {
    const double t = std::exp(x);
    if (t >= b_) return 0.0;
    if (t <= a_ && a_ > 0.0) return -kInf;
    const double f = (t - a_) / (b_ - a_);
    if (f > 0.5) return std::log1p(-gap_to_b(x) / (b_ - a_));
    if (a_ == 0.0) return x - std::log(b_);
    return std::log(f);
  }
  double log_tail_at(double x) const override {
    const double t = std::exp(x);
    if (t >= b_) return -kInf;
    if (t <= a_) return 0.0;
    if (t > 0.5 * (a_ + b_)) return std::log(gap_to_b(x) / (b_ - a_));
    return std::log1p(-(t - a_) / (b_ - a_));
  }
  double log_quantile_cdf(double lu) const override {
    if (lu >= 0.0) return std::log(b_);
    if (a_ == 0.0) return lu + std::log(b_);
    return std::log(a_ + std::exp(lu) * (b_ - a_));
  }
  double log_quantile_tail(double lv) const override {
    if (lv >= 0.0) return a_ > 0.0 ? std::log(a_) : -kInf;
    return std::log(b_) + std::log1p(-std::exp(lv) * (b_ - a_) / b_);
  }
  double sample(RandomStream& rng) const override { return a_ + rng.uniform() * (b_ - a_); }
  std::vector<double> kinks() const override {
    if (a_ > 0.0) return {std::log(a_), std::log(b_)};
    return {std::log(b_)};
  }

 private:
  // b - e^x without cancellation near the right end.
  double gap_to_b(double x) const { return -b_ * std::expm1(x - std::log(b_)); }

  double a_, b_;
};

class ParetoModel final : public LawModel {
 public:
  ParetoModel(double beta, double xm) : beta_(beta), xm_(xm), log_xm_(std::log(xm)) {}

  double log_tail_at(double x) const override { return x <= log_xm_ ? 0.0 : beta_ * (log_xm_ - x); }
  double log_cdf_at(double x) const override {
    if (x <= log_xm_) return -kInf;
    return num::log1mexp(log_tail_at(x));
  }
  double log_quantile_cdf(double lu) const override {
    if (lu >= 0.0) return kInf;
    return log_xm_ - num::log1mexp(lu) / beta_;
  }
  double log_quantile_tail(double lv) const override {
    if (lv >= 0.0) return -kInf;
    return log_xm_ - lv / beta_;
  }
  double sample(RandomStream& rng) const override {
    return xm_ * std::exp(rng.exponential() / beta_);
  }
  double tail_index() const override { return beta_; }
  std::vector<double> kinks() const override { return {log_xm_}; }

 private:
  double beta_, xm_, log_xm_;
};

class HalfNormalModel final : public LawModel {
 public:
  explicit HalfNormalModel(double sigma) : sigma_(sigma), log_sigma_(std::log(sigma)) {}

  double log_tail_at(double x) const override {
    if (x == -kInf) return 0.0;
    const double z = std::exp(x - log_sigma_);
    if (z < 1.0) return std::log1p(-std::erf(z / std::numbers::sqrt2));
    return std::numbers::ln2 + num::log_normal_cdf(-z);
  }
  double log_cdf_at(double x) const override {
    const double lz = x - log_sigma_;
    if (lz < -300.0) return lz + 0.5 * std::log(2.0 / std::numbers::pi);
    const double z = std::exp(lz);
    if (z < 1.0) return std::log(std::erf(z / std::numbers::sqrt2));
    return std::log1p(-std::erfc(z / std::numbers::sqrt2));
  }
  double log_quantile_cdf(double lu) const override {
    if (lu >= 0.0) return kInf;
    if (lu < -700.0) return lu + 0.5 * std::log(std::numbers::pi / 2.0) + log_sigma_;
    if (lu < -std::numbers::ln2) {
      return log_sigma_ + std::log(std::numbers::sqrt2 * boost::math::erf_inv(std::exp(lu)));
    }
    return log_sigma_ + std::log(-num::normal_quantile_from_log(num::log1mexp(lu) - std::numbers::ln2));
  }
  double log_quantile_tail(double lv) const override {
    if (lv >= 0.0) return -kInf;
    if (lv > -std::numbers::ln2) return log_quantile_cdf(num::log1mexp(lv));
    return log_sigma_ + std::log(-num::normal_quantile_from_log(lv - std::numbers::ln2));
  }
  double sample(RandomStream& rng) const override { return sigma_ * std::abs(rng.normal()); }

 private:
  double sigma_, log_sigma_;
};

class LogNormalModel final : public LawModel {
 public:
  LogNormalModel(double mu, double sigma) : mu_(mu), sigma_(sigma) {}

  double log_cdf_at(double x) const override { return num::log_normal_cdf((x - mu_) / sigma_); }
  double log_tail_at(double x) const override { return num::log_normal_cdf((mu_ - x) / sigma_); }
  double log_quantile_cdf(double lu) const override {
    if (lu >= 0.0) return kInf;
    return mu_ + sigma_ * num::normal_quantile_from_log(lu);
  }
  double log_quantile_tail(double lv) const override {
    if (lv >= 0.0) return -kInf;
    return mu_ - sigma_ * num::normal_quantile_from_log(lv);
  }
  double sample(RandomStream& rng) const override { return std::exp(mu_ + sigma_ * rng.normal()); }

 private:
  double mu_, sigma_;
};

class ConstantModel final : public LawModel {
 public:
  explicit ConstantModel(double c) : c_(c), log_c_(c > 0.0 ? std::log(c) : -kInf) {}

  double log_cdf_at(double x) const override { return x >= log_c_ ? 0.0 : -kInf; }
  double log_tail_at(double x) const override { return x >= log_c_ ? -kInf : 0.0; }
  double log_quantile_cdf(double) const override { return log_c_; }
  double log_quantile_tail(double lv) const override { return lv >= 0.0 ? -kInf : log_c_; }
  double sample(RandomStream&) const override { return c_; }
  double atom_at_zero() const override { return c_ == 0.0 ? 1.0 : 0.0; }
  std::vector<double> kinks() const override {
    if (c_ > 0.0) return {log_c_};
    return {};
  }

 private:
  double c_, log_c_;
};

class AtomZeroModel final : public LawModel {
 public:
  AtomZeroModel(double p0, std::shared_ptr<const LawModel> base)
      : p0_(p0), log_p0_(std::log(p0)), log_keep_(std::log1p(-p0)), base_(std::move(base)) {}

  double log_cdf_at(double x) const override {
    const double lt = log_tail_at(x);
    if (lt < -std::numbers::ln2) return num::log1mexp(lt);
    return num::log_add(log_p0_, log_keep_ + base_->log_cdf_at(x));
  }
  double log_tail_at(double x) const override { return log_keep_ + base_->log_tail_at(x); }
  double log_quantile_cdf(double lu) const override {
    if (lu >= 0.0) return base_->log_quantile_cdf(0.0);
    if (lu <= log_p0_) return -kInf;
    if (lu < -std::numbers::ln2) {
      // base level (u - p0) / (1 - p0)
      const double lb = lu + num::log1mexp(log_p0_ - lu) - log_keep_;
      return base_->log_quantile_cdf(lb);
    }
    return log_quantile_tail(num::log1mexp(lu));
  }
  double log_quantile_tail(double lv) const override {
    const double lb = lv - log_keep_;
    if (lb >= 0.0) return -kInf;
    return base_->log_quantile_tail(lb);
  }
  double sample(RandomStream& rng) const override {
    if (rng.uniform() < p0_) return 0.0;
    return base_->sample(rng);
  }
  double tail_index() const override { return base_->tail_index(); }
  double atom_at_zero() const override { return p0_ + (1.0 - p0_) * base_->atom_at_zero(); }
  std::vector<double> kinks() const override { return base_->kinks(); }

 private:
  double p0_, log_p0_, log_keep_;
  std::shared_ptr<const LawModel> base_;
};

// cdf(t) = 1 / (1 - log t) on (0, 1].
class LogLightModel final : public LawModel {
 public:
  double log_cdf_at(double x) const override { return x >= 0.0 ? 0.0 : -std::log1p(-x); }
  double log_tail_at(double x) const override {
    if (x >= 0.0) return -kInf;
    if (x == -kInf) return 0.0;
    return -std::log1p(-1.0 / x);
  }
  double log_quantile_cdf(double lu) const override {
    if (lu >= 0.0) return 0.0;
    return -std::expm1(-lu);
  }
  double log_quantile_tail(double lv) const override {
    if (lv >= 0.0) return -kInf;
    return -std::exp(lv - num::log1mexp(lv));
  }
  double sample(RandomStream& rng) const override {
    return std::exp(log_quantile_cdf(std::log(rng.uniform())));
  }
  std::vector<double> kinks() const override { return {0.0}; }
};

// |S| for a standard Cauchy S: P(|S| <= t) = (2/pi) atan t.
class CauchyAbsModel final : public LawModel {
 public:
  double log_cdf_at(double x) const override { return log_atan_exp(x); }
  double log_tail_at(double x) const override { return log_atan_exp(-x); }
  double log_quantile_cdf(double lu) const override {
    if (lu >= 0.0) return kInf;
    if (lu > kLogHalf) return -log_quantile_tail_raw(num::log1mexp(lu));
    return log_quantile_tail_raw(lu);
  }
  double log_quantile_tail(double lv) const override {
    if (lv >= 0.0) return -kInf;
    return -log_quantile_cdf(lv);
  }
  double sample(RandomStream& rng) const override { return std::abs(sample_symmetric_stable(rng, 1.0)); }
  double tail_index() const override { return 1.0; }

 private:
  static constexpr double kLogHalf = -0.6931471805599453;
  // log((2/pi) atan(e^x))
  static double log_atan_exp(double x) {
    const double l2pi = std::log(2.0 / std::numbers::pi);
    if (x < -700.0) return l2pi + x;
    if (x > 700.0) return std::log1p(-2.0 / std::numbers::pi * std::exp(-x));
    return l2pi + std::log(std::atan(std::exp(x)));
  }
  // log tan(pi u / 2) for u = e^lu <= 1/2.
  static double log_quantile_tail_raw(double lu) {
    if (lu < -700.0) return std::log(std::numbers::pi / 2.0) + lu;
    return std::log(std::tan(std::numbers::pi / 2.0 * std::exp(lu)));
  }
};

// |S| for symmetric alpha-stable S, alpha != 1, 2. With c = alpha / (alpha - 1),
//   (2/pi) int_0^{pi/2} exp(-x^c V(theta)) dtheta
// is P(|S| > x) for alpha > 1 and P(|S| <= x) for alpha < 1, where
//   V = (cos t / sin(alpha t))^c cos((alpha - 1) t) / cos t.
// The complementary probability comes from the power series at 0 or infinity
// when it is small. Both log probabilities are tabulated against log x and
// smoothed with cubic B-splines; the leading terms of the series take over
// beyond the table, where the next term is below double precision.
class StableModel final : public LawModel {
 public:
  explicit StableModel(double alpha) : a_(alpha), c_(alpha / (alpha - 1.0)) {
    const double pi = std::numbers::pi;
    log_A_ = std::log(2.0 / (pi * a_)) + std::lgamma(1.0 / a_);
    log_B_ = std::log(2.0 / pi * std::sin(pi * a_ / 2.0)) + std::lgamma(a_);
    const double next_left = std::lgamma(3.0 / a_) - std::lgamma(1.0 / a_) - std::log(6.0);
    const double ratio_right =
        std::exp(std::lgamma(2.0 * a_) - std::lgamma(a_)) * std::abs(std::cos(pi * a_ / 2.0));
    lo_ = -(next_left + 37.0) / 2.0;
    hi_ = (std::log(std::max(ratio_right, 1e-300)) + 37.0) / a_;
    hi_ = std::max(hi_, 5.0);
    lo_ = std::min(lo_, -5.0);
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi_ - lo_) / kStep)) + 1;
    hi_ = lo_ + kStep * static_cast<double>(n - 1);
    // Splined in log(-log P), which is close to linear at both ends.
    std::vector<double> ht(n), hc(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [t, c] = direct(lo_ + kStep * static_cast<double>(i));
      ht[i] = std::log(-t);
      hc[i] = std::log(-c);
    }
    tail_ = Spline(ht.begin(), ht.end(), lo_, kStep, 1.0, a_ / (a_ * hi_ - log_B_));
    cdf_ = Spline(hc.begin(), hc.end(), lo_, kStep, 1.0 / (log_A_ + lo_), -a_);
  }

  double log_cdf_at(double x) const override {
    if (x <= lo_) return log_A_ + x;
    if (x >= hi_) return num::log1mexp(log_B_ - a_ * x);
    return -std::exp(cdf_(x));
  }
  double log_tail_at(double x) const override {
    if (x <= lo_) return num::log1mexp(log_A_ + x);
    if (x >= hi_) return log_B_ - a_ * x;
    return -std::exp(tail_(x));
  }
  double log_quantile_cdf(double lu) const override {
    if (lu >= 0.0) return kInf;
    if (lu == -kInf) return -kInf;
    if (lu <= log_cdf_at(lo_)) return lu - log_A_;
    if (lu >= log_cdf_at(hi_)) return log_quantile_tail(num::log1mexp(lu));
    return invert([&](double x) { return log_cdf_at(x) - lu; });
  }
  double log_quantile_tail(double lv) const override {
    if (lv >= 0.0) return -kInf;
    if (lv == -kInf) return kInf;
    if (lv <= log_tail_at(hi_)) return (log_B_ - lv) / a_;
    if (lv >= log_tail_at(lo_)) return log_quantile_cdf(num::log1mexp(lv));
    return invert([&](double x) { return lv - log_tail_at(x); });
  }
  double sample(RandomStream& rng) const override { return std::abs(sample_symmetric_stable(rng, a_)); }
  double tail_index() const override { return a_; }

 private:
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  static constexpr double kStep = 0.02;

  // Root of an increasing function on [lo_, hi_].
  template <class F>
  double invert(const F& f) const {
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo_, hi_, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
  }

  static double log_sin_small(double y) { return y < -18.0 ? y : std::log(std::sin(std::exp(y))); }

  // log V at theta = e^y (left) or theta = pi/2 - e^y (right), for e^y <= pi/4.
  double log_V(double y, bool right) const {
    const double e = std::exp(y);
    double lcos, lsin_a, lcos_b;
    if (right) {
      lcos = log_sin_small(y);
      lsin_a = std::log(std::sin((2.0 - a_) * std::numbers::pi / 2.0 + a_ * e));
      lcos_b = std::log(std::cos((a_ - 1.0) * (std::numbers::pi / 2.0 - e)));
    } else {
      lcos = std::log(std::cos(e));
      lsin_a = std::log(a_) + y < -18.0 ? std::log(a_) + y : std::log(std::sin(a_ * e));
      lcos_b = std::log(std::cos((a_ - 1.0) * e));
    }
    return c_ * (lcos - lsin_a) + lcos_b - lcos;
  }

  // log of (2/pi) int_0^{pi/2} exp(-exp(c x + log V)), each half integrated in
  // the log distance to its endpoint so the transition is resolved at any x.
  double log_integral(double x) const {
    const double top = std::log(std::numbers::pi / 4.0);
    double total = 0.0;
    for (bool right : {false, true}) {
      auto w = [&](double y) { return c_ * x + log_V(y, right); };
      // w is monotone in y on each half.
      const bool up = w(top) > w(top - 1.0);
      std::vector<double> cuts = {top};
      double lowest = top;
      for (double level : {-8.0, -2.0, 0.0, 1.0, 2.0, 3.5, 5.5}) {
        double l = -1000.0, r = top;
        if ((w(l) > level) == up || (w(r) > level) != up) continue;
        for (int i = 0; i < 60; ++i) {
          const double m = 0.5 * (l + r);
          if ((w(m) > level) == up) r = m; else l = m;
        }
        cuts.push_back(0.5 * (l + r));
        lowest = std::min(lowest, 0.5 * (l + r));
      }
      cuts.push_back(lowest - 40.0);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      auto f = [&](double y) { return std::exp(y - std::exp(w(y))); };
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 8, 1e-12);
    }
    return std::min(std::log(2.0 / std::numbers::pi * total), 0.0);
  }

  // (2/(pi alpha)) sum (-1)^k Gamma((2k+1)/alpha) x^{2k+1} / (2k+1)!, as a log.
  double log_series_zero(double x) const {
    double sum = 0.0;
    double prev = kInf;
    for (int k = 0; k < 400; ++k) {
      const double lt = std::lgamma((2.0 * k + 1.0) / a_) - std::lgamma(2.0 * k + 2.0) + (2.0 * k + 1.0) * x;
      const double term = std::exp(lt);
      if (term > prev && a_ < 1.0) break;
      sum += (k % 2 == 0 ? term : -term);
      if (term < 1e-18 * std::abs(sum)) break;
      prev = term;
    }
    return std::log(2.0 / (std::numbers::pi * a_) * sum);
  }

  // (2/pi) sum_{k>=1} (-1)^{k+1} Gamma(alpha k) sin(k pi alpha / 2) x^{-alpha k} / k!, as a log.
  double log_series_inf(double x) const {
    double sum = 0.0;
    for (int k = 1; k < 400; ++k) {
      const double lt = std::lgamma(a_ * k) - std::lgamma(k + 1.0) - a_ * k * x;
      const double term = std::exp(lt) * std::sin(k * std::numbers::pi * a_ / 2.0);
      sum += (k % 2 == 1 ? term : -term);
      if (std::exp(lt) < 1e-18 * std::abs(sum)) break;
    }
    return std::log(2.0 / std::numbers::pi * sum);
  }

  // (log tail, log cdf) at log x; the smaller side comes from a series when
  // it is below 1e-3, so both logs keep their relative accuracy.
  std::pair<double, double> direct(double x) const {
    const double li = log_integral(x);
    const double small = std::log(1e-3);
    const bool near = num::log1mexp(li) < small;
    if (a_ > 1.0) {
      if (!near) return {li, num::log1mexp(li)};
      const double lc = log_series_zero(x);
      return {num::log1mexp(lc), lc};
    }
    if (!near) return {num::log1mexp(li), li};
    const double lt = log_series_inf(x);
    return {lt, num::log1mexp(lt)};
  }

  double a_, c_;
  double log_A_ = 0.0, log_B_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  Spline tail_, cdf_;
};

std::shared_ptr<const LawModel> stable_table(double alpha) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const LawModel>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[alpha];
  if (!slot) slot = std::make_shared<StableModel>(alpha);
  return slot;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

DistributionSpec::DistributionSpec(std::string name, std::shared_ptr<const LawModel> model)
    : name_(std::move(name)), model_(std::move(model)) {}

double DistributionSpec::log_tail(double t) const { return model_->log_tail_at(std::log(t)); }
double DistributionSpec::log_cdf(double t) const { return model_->log_cdf_at(std::log(t)); }
double DistributionSpec::tail(double t) const { return std::exp(log_tail(t)); }
double DistributionSpec::cdf(double t) const { return std::exp(log_cdf(t)); }
double DistributionSpec::quantile(double u) const { return std::exp(model_->log_quantile_cdf(std::log(u))); }
double DistributionSpec::tail_quantile(double v) const {
  return std::exp(model_->log_quantile_tail(std::log(v)));
}

double tail_power(const DistributionSpec& spec, double t, std::uint64_t n) {
  return std::exp(static_cast<double>(n) * spec.log_tail(t));
}

namespace dist {

DistributionSpec exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exp: rate must be positive");
  return {"exp(" + format_number(rate) + ")", std::make_shared<HazardPowerModel>(1.0, 1.0 / rate)};
}

DistributionSpec uniform(double a, double b) {
  require(a >= 0.0 && a < b && std::isfinite(b), "uniform: need 0 <= a < b");
  return {"uniform(" + format_number(a) + "," + format_number(b) + ")", std::make_shared<UniformModel>(a, b)};
}

DistributionSpec pareto(double beta, double xm) {
  require(beta > 0.0 && std::isfinite(beta), "pareto: beta must be positive");
  require(xm > 0.0 && std::isfinite(xm), "pareto: xm must be positive");
  return {"pareto(" + format_number(beta) + "," + format_number(xm) + ")", std::make_shared<ParetoModel>(beta, xm)};
}

DistributionSpec weibull(double shape, double scale) {
  require(shape > 0.0 && std::isfinite(shape), "weibull: shape must be positive");
  require(scale > 0.0 && std::isfinite(scale), "weibull: scale must be positive");
  return {"weibull(" + format_number(shape) + "," + format_number(scale) + ")",
          std::make_shared<HazardPowerModel>(shape, scale)};
}

DistributionSpec halfnormal(double sigma) {
  require(sigma > 0.0 && std::isfinite(sigma), "halfnormal: sigma must be positive");
  return {"halfnormal(" + format_number(sigma) + ")", std::make_shared<HalfNormalModel>(sigma)};
}

DistributionSpec lognormal(double mu, double sigma) {
  require(std::isfinite(mu), "lognormal: mu must be finite");
  require(sigma > 0.0 && std::isfinite(sigma), "lognormal: sigma must be positive");
  return {"lognormal(" + format_number(mu) + "," + format_number(sigma) + ")",
          std::make_shared<LogNormalModel>(mu, sigma)};
}

DistributionSpec constant(double c) {
  require(c >= 0.0 && std::isfinite(c), "constant: c must be finite and nonnegative");
  return {"constant(" + format_number(c) + ")", std::make_shared<ConstantModel>(c)};
}

DistributionSpec atomzero(double p0, const DistributionSpec& base) {
  require(p0 >= 0.0 && p0 < 1.0, "atomzero: p0 must lie in [0, 1)");
  if (p0 == 0.0) return base;
  return {"atomzero(" + format_number(p0) + "," + base.name() + ")",
          std::make_shared<AtomZeroModel>(p0, base.model_ptr())};
}

DistributionSpec loglight() { return {"loglight()", std::make_shared<LogLightModel>()}; }

DistributionSpec stablemod(double alpha) {
  require(alpha > 0.0 && alpha <= 2.0, "stablemod: alpha must lie in (0, 2]");
  const std::string name = "stablemod(" + format_number(alpha) + ")";
  if (alpha == 2.0) return {name, std::make_shared<HalfNormalModel>(std::numbers::sqrt2)};
  if (alpha == 1.0) return {name, std::make_shared<CauchyAbsModel>()};
  return {name, stable_table(alpha)};
}

}  // namespace dist

}  // namespace mmh
