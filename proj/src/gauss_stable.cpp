#include "minmax/gauss_stable.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "minmax/error.hpp"
#include "minmax/numeric.hpp"

namespace mmh {

namespace {

constexpr std::size_t kMaxDim = 64;
constexpr std::uint64_t kMaxSamples = 1000000000ull;
constexpr std::uint64_t kMinSmallBallSamples = 100000ull;
constexpr std::uint64_t kEscalatedSamples = 10000000ull;
// Stream bases for the independent passes of one check; chunk counts stay far below 2^24.
constexpr std::uint64_t kStreamStride = 1ull << 24;

std::uint64_t stream_base(int purpose, std::size_t index = 0) {
  return (static_cast<std::uint64_t>(purpose) * 64 + index) * kStreamStride;
}

void check_samples(std::uint64_t n) {
  if (n == 0 || n > kMaxSamples) throw DomainError("sample count must lie in [1, 1e9]");
}

SamplePlan plan_for(const VectorLaw& law, std::uint64_t samples, unsigned threads, std::uint64_t base) {
  check_samples(samples);
  SamplePlan p;
  p.samples = samples;
  p.seed = law.seed();
  p.stream_base = base;
  p.threads = threads;
  return p;
}

/// Whether a verdict "lhs <= rhs" sits close enough to the boundary to warrant
/// a larger budget.
bool near_boundary(double lhs, double rhs, double se) { return std::abs(rhs - lhs) < 8.0 * se; }

McOptions escalated(const McOptions& o) {
  McOptions e = o;
  e.samples = kEscalatedSamples;
  e.escalate = false;
  return e;
}

bool can_escalate(const McOptions& o) { return o.escalate && o.samples < kEscalatedSamples; }

Eigen::MatrixXd symmetric_checked(const Eigen::MatrixXd& cov) {
  if (cov.rows() == 0 || cov.rows() != cov.cols() || static_cast<std::size_t>(cov.rows()) > kMaxDim)
    throw DomainError("covariance must be square with dimension in [1, 64]");
  if (!cov.allFinite()) throw NotPositiveSemidefinite("covariance has non-finite entries");
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if (!((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale))
    throw NotPositiveSemidefinite("covariance is not symmetric");
  return 0.5 * (cov + cov.transpose());
}

double gauge_minus(const ConvexSet& set, std::span<const double> x, const Eigen::VectorXd& y,
                   std::vector<double>& buf) {
  if (y.size() == 0) return set.gauge(x);
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i] - y[static_cast<Eigen::Index>(i)];
  return set.gauge(buf);
}

std::vector<double> merged_radii(std::vector<double> radii, std::initializer_list<double> extra) {
  radii.insert(radii.end(), extra.begin(), extra.end());
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

std::size_t index_of(const std::vector<double>& radii, double t) {
  return static_cast<std::size_t>(std::lower_bound(radii.begin(), radii.end(), t) - radii.begin());
}

/// Empirical quantile of gauges: the smallest s with #{g <= s} >= level * n.
double gauge_quantile(std::vector<double> g, double level) {
  const std::size_t k = std::min(g.size() - 1, static_cast<std::size_t>(std::ceil(level * g.size())) - 1);
  std::nth_element(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(k), g.end());
  return g[k];
}

/// Rescale factor s so that s * set has mass `target` under the gauge draws.
double rescale_to(const std::vector<double>& gauges, double target) {
  if (!(target > 0.0 && target < 1.0)) throw RescaleFailed("target mass must lie in (0, 1)");
  const double s = gauge_quantile(gauges, target);
  if (!(s > 0.0 && std::isfinite(s))) throw RescaleFailed("gauge quantile is not positive and finite");
  return s;
}

/// se of mean(1{g <= t} - c 1{g <= 1}) for t <= 1 on shared draws.
double nested_diff_se(double p_t, double p_1, double c, std::uint64_t n) {
  const double mean = p_t - c * p_1;
  const double second = p_t * (1.0 - c) * (1.0 - c) + (p_1 - p_t) * c * c;
  return std::sqrt(std::max(0.0, second - mean * mean) / static_cast<double>(n));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return num::kNaN;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : num::kNaN;
}

struct MeanAcc {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;
};

struct PairAcc {
  MeanAcc y, x;
};

}  // namespace

const char* to_string(VectorLawKind k) {
  switch (k) {
    case VectorLawKind::GAUSSIAN: return "GAUSSIAN";
    case VectorLawKind::STABLE_SUBGAUSSIAN: return "STABLE_SUBGAUSSIAN";
    case VectorLawKind::STABLE_INDEP: return "STABLE_INDEP";
  }
  return "?";
}

VectorLaw VectorLaw::gaussian(const Eigen::MatrixXd& cov, std::uint64_t seed) {
  const Eigen::MatrixXd S = symmetric_checked(cov);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  if (eig.info() != Eigen::Success) throw NotPositiveSemidefinite("eigen decomposition of the covariance failed");
  const auto& ev = eig.eigenvalues();
  const double tol = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -tol) throw NotPositiveSemidefinite("covariance has a negative eigenvalue");
  const Eigen::MatrixXd F = eig.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  VectorLaw law;
  law.kind_ = VectorLawKind::GAUSSIAN;
  law.dim_ = static_cast<std::size_t>(S.rows());
  law.alpha_ = 2.0;
  law.seed_ = seed;
  law.cov_ = S;
  law.factor_.resize(law.dim_ * law.dim_);
  for (std::size_t i = 0; i < law.dim_; ++i)
    for (std::size_t j = 0; j < law.dim_; ++j) law.factor_[i * law.dim_ + j] = F(i, j);
  return law;
}

VectorLaw VectorLaw::stable_subgaussian(double alpha, const Eigen::MatrixXd& cov, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
  if (alpha == 2.0) return gaussian(2.0 * symmetric_checked(cov), seed);
  VectorLaw law = gaussian(cov, seed);
  law.kind_ = VectorLawKind::STABLE_SUBGAUSSIAN;
  law.alpha_ = alpha;
  return law;
}

VectorLaw VectorLaw::stable_indep(double alpha, const Eigen::VectorXd& scales, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
  if (scales.size() == 0 || static_cast<std::size_t>(scales.size()) > kMaxDim)
    throw DomainError("dimension must lie in [1, 64]");
  if (!scales.allFinite() || scales.minCoeff() < 0.0) throw DomainError("scales must be finite and nonnegative");
  const Eigen::MatrixXd cov = scales.cwiseAbs2().asDiagonal();
  if (alpha == 2.0) return gaussian(2.0 * cov, seed);
  VectorLaw law;
  law.kind_ = VectorLawKind::STABLE_INDEP;
  law.dim_ = static_cast<std::size_t>(scales.size());
  law.alpha_ = alpha;
  law.seed_ = seed;
  law.cov_ = cov;
  law.scales_.assign(scales.data(), scales.data() + scales.size());
  return law;
}

VectorLaw VectorLaw::with_seed(std::uint64_t seed) const {
  VectorLaw out = *this;
  out.seed_ = seed;
  return out;
}

void VectorLaw::draw(RandomStream& rng, std::span<double> out) const {
  const std::size_t d = dim_;
  if (kind_ == VectorLawKind::STABLE_INDEP) {
    for (std::size_t i = 0; i < d; ++i) out[i] = scales_[i] * sample_symmetric_stable(rng, alpha_);
    return;
  }
  std::array<double, kMaxDim> z;
  for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();
  double mult = 1.0;
  if (kind_ == VectorLawKind::STABLE_SUBGAUSSIAN) mult = std::sqrt(2.0 * sample_positive_stable(rng, 0.5 * alpha_));
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    const double* row = factor_.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) s += row[j] * z[j];
    out[i] = mult * s;
  }
}

std::string VectorLaw::scale_convention() const {
  switch (kind_) {
    case VectorLawKind::GAUSSIAN: return "X ~ N(0, Sigma)";
    case VectorLawKind::STABLE_SUBGAUSSIAN:
      return "X = (2A)^{1/2} G, G ~ N(0, Sigma), E exp(-sA) = exp(-s^{alpha/2}); "
             "E exp(i<u,X>) = exp(-(u' Sigma u)^{alpha/2})";
    case VectorLawKind::STABLE_INDEP:
      return "X_i = scale_i S_i with E exp(iuS) = exp(-|u|^alpha), S_i independent";
  }
  return "";
}

Eigen::MatrixXd sample(const VectorLaw& law, std::size_t n, std::uint64_t stream) {
  check_samples(n);
  RandomStream rng(law.seed(), stream);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(n, law.dim());
  for (std::size_t k = 0; k < n; ++k) law.draw(rng, std::span<double>(out.row(k).data(), law.dim()));
  return out;
}

Proportion wilson(std::uint64_t count, std::uint64_t n, double z) {
  if (n == 0 || count > n) throw DomainError("need 0 <= count <= n with n > 0");
  Proportion r;
  r.count = count;
  r.n = n;
  const double N = static_cast<double>(n);
  r.p = static_cast<double>(count) / N;
  r.std_error = std::sqrt(r.p * (1.0 - r.p) / N);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / N;
  const double center = (r.p + z2 / (2.0 * N)) / denom;
  const double half = z * std::sqrt(r.p * (1.0 - r.p) / N + z2 / (4.0 * N * N)) / denom;
  r.lo = std::max(0.0, center - half);
  r.hi = std::min(1.0, center + half);
  return r;
}

std::vector<double> sample_gauges(const VectorLaw& law, const ConvexSet& set, const Eigen::VectorXd& y,
                                  const McOptions& opts, std::uint64_t base) {
  if (set.dim() != law.dim()) throw DomainError("set and law dimensions differ");
  if (y.size() != 0 && static_cast<std::size_t>(y.size()) != law.dim()) throw DomainError("shift dimension differs");
  const SamplePlan plan = plan_for(law, opts.samples, opts.threads, base);
  std::vector<std::vector<double>> parts(plan.chunks());
  parallel_for(parts.size(), plan.threads, [&](std::size_t k) {
    RandomStream rng(plan.seed, plan.stream_base + k);
    const std::uint64_t count = plan.chunk_size(k);
    std::vector<double> x(law.dim()), buf(law.dim());
    auto& out = parts[k];
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      law.draw(rng, x);
      out.push_back(gauge_minus(set, x, y, buf));
    }
  });
  std::vector<double> all;
  all.reserve(opts.samples);
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

SmallBallEstimate small_ball(const VectorLaw& law, const ConvexSet& set, const Eigen::VectorXd& y,
                             const std::vector<double>& radii, const McOptions& opts, std::uint64_t base) {
  if (opts.samples < kMinSmallBallSamples) throw DomainError("small-ball estimates need at least 1e5 samples");
  if (set.dim() != law.dim()) throw DomainError("set and law dimensions differ");
  if (y.size() != 0 && static_cast<std::size_t>(y.size()) != law.dim()) throw DomainError("shift dimension differs");
  if (radii.empty()) throw DomainError("need at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw DomainError("radii must be nonnegative and increasing");
  }
  const SamplePlan plan = plan_for(law, opts.samples, opts.threads, base);
  using Counts = std::vector<std::uint64_t>;
  const Counts bins = run_chunks(
      plan, Counts(radii.size() + 1, 0),
      [&](RandomStream& rng, std::uint64_t count) {
        Counts c(radii.size() + 1, 0);
        std::vector<double> x(law.dim()), buf(law.dim());
        for (std::uint64_t i = 0; i < count; ++i) {
          law.draw(rng, x);
          ++c[index_of(radii, gauge_minus(set, x, y, buf))];
        }
        return c;
      },
      [](Counts& a, const Counts& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
      });
  SmallBallEstimate est;
  est.radii = radii;
  est.samples = opts.samples;
  est.seed = law.seed();
  std::uint64_t cum = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    cum += bins[i];
    est.estimates.push_back(wilson(cum, opts.samples));
  }
  return est;
}

std::vector<Eigen::VectorXd> default_shifts(const ConvexSet& set) {
  const std::size_t d = set.dim();
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  double g = 0.0;
  for (std::size_t i = 0; i < d && !(g > 0.0); ++i) {
    dir.setZero();
    dir[static_cast<Eigen::Index>(i)] = 1.0;
    g = set.gauge(dir);
  }
  if (!(g > 0.0)) throw DomainError("set contains every coordinate axis");
  const Eigen::VectorXd boundary = dir / g;
  return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)), 0.5 * boundary, 2.0 * boundary};
}

KanterReport kanter_bound_check(const VectorLaw& law, const ConvexSet& set, const std::vector<Eigen::VectorXd>& shifts,
                                const std::vector<double>& kappa_grid, const McOptions& opts) {
  if (kappa_grid.empty()) throw DomainError("need at least one kappa");
  std::vector<double> kappas = kappa_grid;
  std::sort(kappas.begin(), kappas.end());
  if (!(kappas.front() >= 0.0)) throw DomainError("kappa must be nonnegative");
  kappas.erase(std::unique(kappas.begin(), kappas.end()), kappas.end());

  KanterReport rep;
  rep.shifts = shifts;
  rep.samples = opts.samples;
  const double half_alpha = 0.5 * law.alpha();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(law.dim()));
  const auto base = small_ball(law, set, zero, {1.0}, opts, stream_base(1));
  rep.nu_B = base.estimates[0];
  if (!(rep.nu_B.p + 4.0 * rep.nu_B.std_error < 1.0)) {
    rep.inconclusive = true;
    rep.note = "nu(B) is not below 1 with margin; the bound is void";
    return rep;
  }
  const double root = std::sqrt(1.0 - rep.nu_B.p);
  bool close = false;
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    const auto est = small_ball(law, set, shifts[s], kappas, opts, stream_base(2, s));
    for (std::size_t i = 0; i < kappas.size(); ++i) {
      BoundRow row;
      row.shift = s;
      row.t = kappas[i];
      row.estimate = est.estimates[i].p;
      row.bound = 1.5 * std::pow(kappas[i], half_alpha) / root;
      // The bound uses the estimate of nu(B): propagate its error.
      const double dbound = row.bound / (2.0 * (1.0 - rep.nu_B.p)) * rep.nu_B.std_error;
      row.std_error = std::hypot(est.estimates[i].std_error, dbound);
      row.holds = row.estimate <= row.bound + 4.0 * row.std_error;
      if (near_boundary(row.estimate, row.bound, row.std_error)) close = true;
      rep.holds = rep.holds && row.holds;
      rep.rows.push_back(row);
    }
  }
  if (close && can_escalate(opts)) {
    KanterReport again = kanter_bound_check(law, set, shifts, kappa_grid, escalated(opts));
    again.note = "escalated to " + std::to_string(kEscalatedSamples) + " samples near the boundary";
    return again;
  }
  return rep;
}

RegularityReport regularity_check(const VectorLaw& law, const ConvexSet& set, double b,
                                  const std::vector<double>& t_grid, const McOptions& opts,
                                  std::optional<double> target) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("b must lie in (0, 1)");
  if (t_grid.empty()) throw DomainError("need at least one t");
  for (double t : t_grid)
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("t must lie in (0, 1]");

  RegularityReport rep;
  rep.b = b;
  rep.R_b = regularity_R(b);
  rep.alpha_half = 0.5 * law.alpha();
  rep.samples = opts.samples;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(law.dim()));

  const std::vector<double> gauges = sample_gauges(law, set, zero, opts, stream_base(3));
  const double mass = static_cast<double>(std::count_if(gauges.begin(), gauges.end(), [](double g) { return g <= 1.0; })) /
                      static_cast<double>(gauges.size());
  if (target) {
    if (!(*target <= b)) throw RescaleFailed("target mass exceeds b");
    rep.scale = rescale_to(gauges, *target);
  } else if (mass > b || mass < 0.01) {
    rep.scale = rescale_to(gauges, 0.8 * b);
  }
  const ConvexSet B = rep.scale == 1.0 ? set : set.scaled(rep.scale);

  const std::vector<double> radii = merged_radii(t_grid, {0.5, 1.0});
  const auto est = small_ball(law, B, zero, radii, opts, stream_base(4));
  rep.nu_B = est.estimates[index_of(radii, 1.0)];
  rep.nu_half_B = est.estimates[index_of(radii, 0.5)];
  if (rep.nu_B.p > b + 4.0 * rep.nu_B.std_error) throw RescaleFailed("nu(B) could not be brought under b");
  if (rep.nu_B.p < 0.01) rep.note = "nu(B) is below 0.01; the bound degenerates";
  if (rep.nu_half_B.p > 0.0 && rep.nu_half_B.p < 1.0)
    rep.R_prime = 3.0 / rep.nu_half_B.p / std::sqrt(1.0 - rep.nu_half_B.p);

  bool close = false;
  std::vector<double> lx, ly;
  for (double t : t_grid) {
    const Proportion& e = est.estimates[index_of(radii, t)];
    BoundRow row;
    row.t = t;
    row.estimate = e.p;
    const double c = rep.R_b * std::pow(t, rep.alpha_half);
    row.bound = c * rep.nu_B.p;
    row.std_error = nested_diff_se(e.p, rep.nu_B.p, c, est.samples);
    row.holds = row.estimate <= row.bound + 4.0 * row.std_error;
    if (near_boundary(row.estimate, row.bound, row.std_error)) close = true;
    rep.holds = rep.holds && row.holds;
    rep.rows.push_back(row);
    if (e.count >= 30) {
      lx.push_back(std::log(t));
      ly.push_back(std::log(e.p));
    }
  }
  rep.exponent_fit = fit_slope(lx, ly);
  if (close && can_escalate(opts)) {
    RegularityReport again = regularity_check(law, set, b, t_grid, escalated(opts), target);
    again.note = "escalated to " + std::to_string(kEscalatedSamples) + " samples near the boundary";
    return again;
  }
  return rep;
}

CorrelationReport correlation_check(const VectorLaw& law, const std::vector<ConvexSet>& sets, double alpha_scale,
                                    const McOptions& opts) {
  constexpr std::size_t kMaxSets = 8;
  if (law.kind() != VectorLawKind::GAUSSIAN) throw DomainError("correlation checks need a Gaussian law");
  if (sets.empty() || sets.size() > kMaxSets) throw DomainError("need between 1 and 8 sets");
  if (!(alpha_scale >= 1.0 && std::isfinite(alpha_scale))) throw DomainError("alpha_scale must be >= 1");
  for (const auto& s : sets)
    if (s.dim() != law.dim()) throw DomainError("set and law dimensions differ");
  const std::size_t l = sets.size();

  std::size_t slab = l;
  std::size_t non_slabs = 0;
  for (std::size_t i = 0; i < l; ++i) {
    if (sets[i].kind() == SetKind::SLAB) {
      if (slab == l) slab = i;
    } else {
      ++non_slabs;
    }
  }

  struct Acc {
    std::uint64_t n = 0;
    double cap = 0.0;                 // all gauges <= alpha_scale
    double cap1 = 0.0;                // all gauges <= 1
    double rest = 0.0;                // all but the slab <= 1
    std::array<double, kMaxSets> ind{};
    std::array<double, kMaxSets> cap_ind{};
    std::array<std::array<double, kMaxSets>, kMaxSets> pair{};
  };
  const SamplePlan plan = plan_for(law, opts.samples, opts.threads, stream_base(5));
  const Acc acc = run_chunks(
      plan, Acc{},
      [&](RandomStream& rng, std::uint64_t count) {
        Acc a;
        std::vector<double> x(law.dim());
        std::array<double, kMaxSets> in{};
        for (std::uint64_t k = 0; k < count; ++k) {
          law.draw(rng, x);
          double gmax = 0.0, grest = 0.0;
          for (std::size_t i = 0; i < l; ++i) {
            const double g = sets[i].gauge(x);
            gmax = std::max(gmax, g);
            if (i != slab) grest = std::max(grest, g);
            in[i] = g <= 1.0 ? 1.0 : 0.0;
          }
          const double c = gmax <= alpha_scale ? 1.0 : 0.0;
          a.cap += c;
          a.cap1 += gmax <= 1.0 ? 1.0 : 0.0;
          a.rest += grest <= 1.0 ? 1.0 : 0.0;
          for (std::size_t i = 0; i < l; ++i) {
            a.ind[i] += in[i];
            a.cap_ind[i] += c * in[i];
            for (std::size_t j = 0; j < l; ++j) a.pair[i][j] += in[i] * in[j];
          }
          ++a.n;
        }
        return a;
      },
      [&](Acc& a, const Acc& b) {
        a.n += b.n;
        a.cap += b.cap;
        a.cap1 += b.cap1;
        a.rest += b.rest;
        for (std::size_t i = 0; i < l; ++i) {
          a.ind[i] += b.ind[i];
          a.cap_ind[i] += b.cap_ind[i];
          for (std::size_t j = 0; j < l; ++j) a.pair[i][j] += b.pair[i][j];
        }
      });

  CorrelationReport rep;
  rep.alpha_scale = alpha_scale;
  rep.samples = acc.n;
  const double N = static_cast<double>(acc.n);
  std::vector<double> p(l);
  for (std::size_t i = 0; i < l; ++i) p[i] = acc.ind[i] / N;
  rep.marginals = p;
  const double pc = acc.cap / N;
  rep.lhs = pc;
  rep.rhs = std::accumulate(p.begin(), p.end(), 1.0, std::multiplies<>());
  // Delta method for mean(cap) - prod mean(I_i).
  std::vector<double> grad(l);
  for (std::size_t j = 0; j < l; ++j) {
    grad[j] = 1.0;
    for (std::size_t i = 0; i < l; ++i)
      if (i != j) grad[j] *= p[i];
  }
  double var = pc * (1.0 - pc);
  for (std::size_t j = 0; j < l; ++j) {
    var -= 2.0 * grad[j] * (acc.cap_ind[j] / N - pc * p[j]);
    for (std::size_t k = 0; k < l; ++k) var += grad[j] * grad[k] * (acc.pair[j][k] / N - p[j] * p[k]);
  }
  rep.std_error = std::sqrt(std::max(0.0, var) / N);
  rep.holds = rep.lhs >= rep.rhs - 4.0 * rep.std_error;

  if (l == 1) {
    rep.asserted = true;
    rep.reason = "single set: monotonicity under scaling";
  } else if (non_slabs <= 1) {
    rep.asserted = true;
    rep.reason = "all sets but at most one are symmetric slabs (Khatri-Sidak)";
  } else if (law.dim() == 2) {
    rep.asserted = true;
    rep.reason = "dimension two (Pitt)";
  } else {
    rep.reason = "open conjecture for this configuration; reported, not asserted";
  }

  if (slab < l && l >= 2) {
    rep.has_slab_sanity = true;
    const double ps = p[slab], pr = acc.rest / N, psr = acc.cap1 / N;
    rep.slab_lhs = psr;
    rep.slab_rhs = ps * pr;
    // Gradient (1, -pr, -ps) on (SR, S, R), using SR * S = SR * R = SR.
    const double v = psr * (1.0 - psr) + pr * pr * ps * (1.0 - ps) + ps * ps * pr * (1.0 - pr) -
                     2.0 * pr * (psr - psr * ps) - 2.0 * ps * (psr - psr * pr) + 2.0 * pr * ps * (psr - ps * pr);
    rep.slab_std_error = std::sqrt(std::max(0.0, v) / N);
    rep.slab_holds = rep.slab_lhs >= rep.slab_rhs - 4.0 * rep.slab_std_error;
  }

  const bool close = near_boundary(rep.rhs, rep.lhs, rep.std_error) ||
                     (rep.has_slab_sanity && near_boundary(rep.slab_rhs, rep.slab_lhs, rep.slab_std_error));
  if (close && can_escalate(opts)) return correlation_check(law, sets, alpha_scale, escalated(opts));
  return rep;
}

SlepianReport slepian_sqrt2_check(const Eigen::MatrixXd& cov, const std::vector<ConvexSet>& norm_sets,
                                  const McOptions& opts, std::uint64_t seed) {
  if (norm_sets.empty() || norm_sets.size() > 16) throw DomainError("need between 1 and 16 norms");
  const VectorLaw law = VectorLaw::gaussian(cov, seed);
  for (const auto& s : norm_sets)
    if (s.dim() != law.dim()) throw DomainError("set and law dimensions differ");
  const SamplePlan plan = plan_for(law, opts.samples, opts.threads, stream_base(6));
  const PairAcc acc = run_chunks(
      plan, PairAcc{},
      [&](RandomStream& rng, std::uint64_t count) {
        PairAcc a;
        std::vector<double> g(law.dim());
        for (std::uint64_t k = 0; k < count; ++k) {
          law.draw(rng, g);
          double y = 0.0;
          for (const auto& s : norm_sets) y = std::max(y, s.gauge(g));
          double x = 0.0;
          for (const auto& s : norm_sets) {
            law.draw(rng, g);
            x = std::max(x, s.gauge(g));
          }
          a.y.sum += y;
          a.y.sum_sq += y * y;
          a.x.sum += x;
          a.x.sum_sq += x * x;
          ++a.y.n;
          ++a.x.n;
        }
        return a;
      },
      [](PairAcc& a, const PairAcc& b) {
        for (auto [p, q] : {std::pair{&a.y, &b.y}, std::pair{&a.x, &b.x}}) {
          p->sum += q->sum;
          p->sum_sq += q->sum_sq;
          p->n += q->n;
        }
      });
  SlepianReport rep;
  const double N = static_cast<double>(acc.y.n);
  rep.samples = acc.y.n;
  rep.lhs = acc.y.sum / N;
  rep.rhs = acc.x.sum / N;
  rep.se_lhs = std::sqrt(std::max(0.0, acc.y.sum_sq / N - rep.lhs * rep.lhs) / N);
  rep.se_rhs = std::sqrt(std::max(0.0, acc.x.sum_sq / N - rep.rhs * rep.rhs) / N);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : num::kNaN;
  const double se = std::sqrt(rep.se_lhs * rep.se_lhs + 2.0 * rep.se_rhs * rep.se_rhs);
  rep.holds = rep.lhs <= std::numbers::sqrt2 * rep.rhs + 4.0 * se;
  return rep;
}

MinMomentHypothesisReport min_moment_hypothesis_62(const Eigen::MatrixXd& cov, const std::vector<ConvexSet>& norm_sets,
                                     const std::vector<std::uint64_t>& n_grid, double q, const McOptions& opts,
                                     std::uint64_t seed) {
  if (norm_sets.empty() || norm_sets.size() > 16) throw DomainError("need between 1 and 16 norms");
  if (!(q > 0.0 && std::isfinite(q))) throw DomainError("q must be positive and finite");
  const VectorLaw law = VectorLaw::gaussian(cov, seed);
  for (const auto& s : norm_sets)
    if (s.dim() != law.dim()) throw DomainError("set and law dimensions differ");
  MinMomentHypothesisReport rep;
  rep.q = q;
  rep.replicates = opts.samples;
  for (std::size_t idx = 0; idx < n_grid.size(); ++idx) {
    const std::uint64_t n = n_grid[idx];
    if (n == 0) throw DomainError("n must be positive");
    const SamplePlan plan = plan_for(law, opts.samples, opts.threads, stream_base(7, idx));
    const PairAcc acc = run_chunks(
        plan, PairAcc{},
        [&](RandomStream& rng, std::uint64_t count) {
          PairAcc a;
          std::vector<double> g(law.dim());
          for (std::uint64_t k = 0; k < count; ++k) {
            double my = num::kInf, mx = num::kInf;
            for (std::uint64_t j = 0; j < n; ++j) {
              law.draw(rng, g);
              double y = 0.0;
              for (const auto& s : norm_sets) y = std::max(y, s.gauge(g));
              double x = 0.0;
              for (const auto& s : norm_sets) {
                law.draw(rng, g);
                x = std::max(x, s.gauge(g));
              }
              my = std::min(my, y);
              mx = std::min(mx, x);
            }
            a.y.sum += std::pow(my, q);
            a.x.sum += std::pow(mx, q);
            ++a.y.n;
          }
          return a;
        },
        [](PairAcc& a, const PairAcc& b) {
          a.y.sum += b.y.sum;
          a.x.sum += b.x.sum;
          a.y.n += b.y.n;
        });
    MinMomentHypothesisRow row;
    row.n = n;
    const double N = static_cast<double>(acc.y.n);
    row.norm_Y = std::pow(acc.y.sum / N, 1.0 / q);
    row.norm_X = std::pow(acc.x.sum / N, 1.0 / q);
    row.ratio = row.norm_X > 0.0 ? row.norm_Y / row.norm_X : num::kNaN;
    if (row.ratio > rep.sup) {
      rep.sup = row.ratio;
      rep.sup_n = n;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

IntegralFormReport integral_equivalence_from_gauges(std::vector<double> gauges, double b,
                                                  const std::vector<double>& t_grid) {
  if (gauges.empty()) throw DomainError("need gauge draws");
  if (!(b > 0.0 && b < 1.0)) throw DomainError("b must lie in (0, 1)");
  for (double t : t_grid)
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("t must lie in (0, 1]");
  std::sort(gauges.begin(), gauges.end());
  const double N = static_cast<double>(gauges.size());
  std::vector<double> prefix(gauges.size() + 1, 0.0);
  for (std::size_t i = 0; i < gauges.size(); ++i) prefix[i + 1] = prefix[i] + gauges[i];
  auto count_le = [&](double t) {
    return static_cast<std::size_t>(std::upper_bound(gauges.begin(), gauges.end(), t) - gauges.begin());
  };

  IntegralFormReport rep;
  rep.b = b;
  rep.samples = gauges.size();
  rep.nu_B = static_cast<double>(count_le(1.0)) / N;
  if (rep.nu_B > b) rep.note = "nu(B) exceeds b";
  for (double t : t_grid) {
    const std::size_t c = count_le(t);
    IntegralFormRow row;
    row.t = t;
    row.mu_t = static_cast<double>(c) / N;
    row.integral = (static_cast<double>(c) * t - prefix[c]) / N;
    row.ratio = row.mu_t > 0.0 ? row.integral / (t * row.mu_t) : num::kNaN;
    if (row.mu_t > 0.0) rep.r_fit = std::max(rep.r_fit, row.ratio);
    rep.rows.push_back(row);
  }
  if (!(rep.r_fit > 0.0 && rep.r_fit < 1.0)) {
    rep.holds = false;
    rep.note = "no draw falls in the smallest balls; r cannot be fitted";
    return rep;
  }
  rep.constants = integral_form_constants(rep.r_fit);
  for (double t : t_grid) {
    BoundRow row;
    row.t = t;
    row.estimate = static_cast<double>(count_le(t)) / N;
    const double c = rep.constants.R * std::pow(t, rep.constants.beta);
    row.bound = c * rep.nu_B;
    row.std_error = nested_diff_se(row.estimate, rep.nu_B, c, gauges.size());
    row.holds = row.estimate <= row.bound + 4.0 * row.std_error;
    rep.holds = rep.holds && row.holds;
    rep.power_rows.push_back(row);
  }
  return rep;
}

IntegralFormReport integral_equivalence_72(const VectorLaw& law, const ConvexSet& set, double b,
                                         const std::vector<double>& t_grid, const McOptions& opts) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(law.dim()));
  std::vector<double> gauges = sample_gauges(law, set, zero, opts, stream_base(8));
  const double mass = static_cast<double>(std::count_if(gauges.begin(), gauges.end(), [](double g) { return g <= 1.0; })) /
                      static_cast<double>(gauges.size());
  double scale = 1.0;
  if (mass > b) {
    scale = rescale_to(gauges, 0.8 * b);
    for (double& g : gauges) g /= scale;
  }
  IntegralFormReport rep = integral_equivalence_from_gauges(std::move(gauges), b, t_grid);
  rep.scale = scale;
  return rep;
}

std::vector<AndersonRow> anderson_check(const VectorLaw& law, const ConvexSet& set,
                                        const std::vector<Eigen::VectorXd>& shifts, const McOptions& opts) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(law.dim()));
  const Proportion centered = small_ball(law, set, zero, {1.0}, opts, stream_base(9)).estimates[0];
  std::vector<AndersonRow> rows;
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    AndersonRow row;
    row.shift = shifts[s];
    row.centered = centered;
    row.shifted = small_ball(law, set, shifts[s], {1.0}, opts, stream_base(10, s)).estimates[0];
    row.holds = row.shifted.p <= centered.p + 4.0 * std::hypot(centered.std_error, row.shifted.std_error);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mmh
