#include <algorithm>
#include <cmath>

#include "minmax/error.hpp"
#include "minmax/hyper.hpp"

namespace mmh {

namespace {

double softplus(double z) { return z > 30.0 ? z : std::log1p(std::exp(z)); }
double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  double lsum = 0.0;
  double lsum_sq = 0.0;
  std::uint64_t n = 0;
};

}  // namespace

const char* to_string(FunctionalTag tag) {
  switch (tag) {
    case FunctionalTag::MinAll: return "MIN-ALL";
    case FunctionalTag::ConcaveSample: return "CONCAVE-SAMPLE";
    case FunctionalTag::ClipSample: return "CLIP-SAMPLE";
  }
  return "?";
}

FunctionSample sample_function(const std::function<std::array<double, 3>(double)>& f, const std::vector<double>& x,
                               double f0) {
  FunctionSample s;
  s.x = x;
  s.f0 = f0;
  for (double xi : x) {
    const auto v = f(xi);
    s.f.push_back(v[0]);
    s.df.push_back(v[1]);
    s.d2f.push_back(v[2]);
  }
  return s;
}

FunctionSample smooth_clip_sample(double s, double t, double w, const std::vector<double>& x, double offset) {
  if (!(0.0 <= s && s < t && w > 0.0)) throw DomainError("need 0 <= s < t and w > 0");
  // offset + s + w softplus((x - s)/w) - w softplus((x - t)/w).
  auto f = [=](double xi) {
    const double a = (xi - s) / w, b = (xi - t) / w;
    const double la = logistic(a), lb = logistic(b);
    return std::array<double, 3>{offset + s + w * softplus(a) - w * softplus(b), la - lb,
                                 (la * (1.0 - la) - lb * (1.0 - lb)) / w};
  };
  return sample_function(f, x, f(0.0)[0]);
}

ClassFResult class_F_membership(const FunctionSample& s) {
  const std::size_t n = s.x.size();
  if (n < 3 || s.f.size() != n || s.df.size() != n || s.d2f.size() != n)
    throw DomainError("function sample needs at least three consistent points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.x[i] > 0.0) || (i > 0 && !(s.x[i] > s.x[i - 1])))
      throw DomainError("grid must be positive and increasing");
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double fd = (s.f[i + 1] - s.f[i - 1]) / (s.x[i + 1] - s.x[i - 1]);
    if (std::abs(fd - s.df[i]) > 1e-4 * std::max(1.0, std::abs(s.df[i])))
      throw GridTooCoarse("finite difference disagrees with f' at x = " + std::to_string(s.x[i]));
  }

  ClassFResult out;
  for (std::size_t i = 0; i < n; ++i) {
    const double xf = s.x[i] * s.df[i];
    const double slack = 1e-12 * std::max(1.0, std::abs(s.f[i]));
    if (xf < -slack) {
      out.violation_at = s.x[i];
      out.reason = "f is decreasing";
      return out;
    }
    if (xf > s.f[i] + slack) {
      out.violation_at = s.x[i];
      out.reason = "x f'(x) exceeds f(x)";
      return out;
    }
  }
  // Trapezoid on [0, x_n]; the segment from 0 uses the first grid value.
  auto g = [&](std::size_t i) { return s.x[i] * std::max(0.0, s.d2f[i]); };
  double mass = 0.5 * s.x[0] * g(0);
  for (std::size_t i = 1; i < n; ++i) mass += 0.5 * (s.x[i] - s.x[i - 1]) * (g(i) + g(i - 1));
  out.mass_needed = mass;
  if (s.f0 < mass * (1.0 - 1e-9) - 1e-12) {
    out.violation_at = 0.0;
    out.reason = "f(0) is below the integral of x (f'' v 0)";
    return out;
  }
  out.member = true;
  return out;
}

FunctionalCheck functional_hyper_check(const DistributionSpec& spec, FunctionalTag tag, std::size_t n,
                                       double sigma, double q, const SamplePlan& plan) {
  if (n == 0) throw DomainError("need at least one coordinate");
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("sigma must lie in [0, 1]");
  if (!(q >= 1.0)) throw DomainError("q must be at least 1");
  const double s_clip = spec.quantile(0.25);
  const double t_clip = std::max(spec.quantile(0.75), s_clip);

  auto h = [&](const std::vector<double>& x, double scale) {
    switch (tag) {
      case FunctionalTag::MinAll: {
        double m = x[0];
        for (double v : x) m = std::min(m, v);
        return scale * m;
      }
      case FunctionalTag::ConcaveSample: {
        double sum = 0.0;
        for (double v : x) sum += std::sqrt(scale * v);
        return sum;
      }
      case FunctionalTag::ClipSample: {
        double m = x[0];
        for (double v : x) m = std::min(m, v);
        return std::clamp(scale * m, s_clip, t_clip);
      }
    }
    return 0.0;
  };

  const Moments acc = run_chunks(
      plan, Moments{},
      [&](RandomStream& rng, std::uint64_t count) {
        Moments m;
        std::vector<double> x(n);
        for (std::uint64_t k = 0; k < count; ++k) {
          for (auto& v : x) v = spec.sample(rng);
          const double left = std::pow(h(x, sigma), q);
          const double right = h(x, 1.0);
          m.lsum += left;
          m.lsum_sq += left * left;
          m.sum += right;
          m.sum_sq += right * right;
          ++m.n;
        }
        return m;
      },
      [](Moments& a, const Moments& b) {
        a.sum += b.sum;
        a.sum_sq += b.sum_sq;
        a.lsum += b.lsum;
        a.lsum_sq += b.lsum_sq;
        a.n += b.n;
      });

  FunctionalCheck out;
  out.samples = acc.n;
  const double N = static_cast<double>(acc.n);
  const double mean_l = acc.lsum / N;
  const double var_l = std::max(0.0, acc.lsum_sq / N - mean_l * mean_l);
  const double mean_r = acc.sum / N;
  const double var_r = std::max(0.0, acc.sum_sq / N - mean_r * mean_r);
  out.lhs = std::pow(mean_l, 1.0 / q);
  out.rhs = mean_r;
  // Delta method for m^{1/q}.
  const double dl = mean_l > 0.0 ? out.lhs / (q * mean_l) : 0.0;
  out.std_error = std::sqrt(dl * dl * var_l / N + var_r / N);
  out.holds = out.lhs <= out.rhs + 4.0 * out.std_error;
  return out;
}

}  // namespace mmh
