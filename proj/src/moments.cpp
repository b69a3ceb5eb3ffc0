#include "minmax/moments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "minmax/error.hpp"
#include "minmax/numeric.hpp"
#include "minmax/quadrature.hpp"

namespace mmh {

using num::kInf;

// ---------------------------------------------------------------- words

Word::Word(std::vector<WordStep> innermost_first) : steps_(std::move(innermost_first)) {
  for (const auto& s : steps_)
    if (s.count < 1) throw DomainError("word counts must be >= 1");
}

Word Word::parse(std::string_view text) {
  std::vector<WordStep> outer_first;
  if (text.empty() || text == "id") return Word();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dot = std::min(text.find('.', pos), text.size());
    const std::string_view token = text.substr(pos, dot - pos);
    Op op;
    if (token.starts_with("max")) {
      op = Op::MAX;
    } else if (token.starts_with("min")) {
      op = Op::MIN;
    } else {
      throw ParseError(pos, "word factor must start with 'max' or 'min'");
    }
    std::uint64_t count = 0;
    const char* first = token.data() + 3;
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last || count < 1)
      throw ParseError(pos + 3, "word factor needs a positive integer count");
    outer_first.push_back({op, count});
    pos = dot + 1;
  }
  std::reverse(outer_first.begin(), outer_first.end());
  return Word(std::move(outer_first));
}

std::string Word::to_string() const {
  if (steps_.empty()) return "id";
  std::string out;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    if (!out.empty()) out += '.';
    out += (it->op == Op::MAX ? "max" : "min") + std::to_string(it->count);
  }
  return out;
}

// ---------------------------------------------------------------- composition

namespace {

constexpr double kLogHalf = -std::numbers::ln2;

class ComposedModel final : public LawModel {
 public:
  ComposedModel(std::shared_ptr<const LawModel> base, Op op, std::uint64_t count)
      : base_(std::move(base)), op_(op), count_(count), k_(static_cast<double>(count)) {}

  double log_cdf_at(double x) const override {
    if (op_ == Op::MAX) return k_ * base_->log_cdf_at(x);
    const double lc = base_->log_cdf_at(x);
    if (lc < kLogHalf) return num::log_complement_power(lc, k_);
    return num::log1mexp(k_ * base_->log_tail_at(x));
  }

  double log_tail_at(double x) const override {
    if (op_ == Op::MIN) return k_ * base_->log_tail_at(x);
    const double lt = base_->log_tail_at(x);
    if (lt < kLogHalf) return num::log_complement_power(lt, k_);
    return num::log1mexp(k_ * base_->log_cdf_at(x));
  }

  double log_quantile_cdf(double lu) const override {
    if (op_ == Op::MAX) return base_->log_quantile_cdf(lu / k_);
    if (lu >= 0.0) return base_->log_quantile_cdf(0.0);
    if (lu < kLogHalf) return base_->log_quantile_cdf(num::log_complement_power(lu, 1.0 / k_));
    return base_->log_quantile_tail(num::log1mexp(lu) / k_);
  }

  double log_quantile_tail(double lv) const override {
    if (op_ == Op::MIN) return base_->log_quantile_tail(lv / k_);
    if (lv >= 0.0) return base_->log_quantile_tail(0.0);
    if (lv < kLogHalf) return base_->log_quantile_tail(num::log_complement_power(lv, 1.0 / k_));
    return base_->log_quantile_cdf(num::log1mexp(lv) / k_);
  }

  double sample(RandomStream& rng) const override {
    if (count_ > kTournamentLimit) return std::exp(log_quantile_cdf(std::log(rng.uniform())));
    double best = base_->sample(rng);
    for (std::uint64_t i = 1; i < count_; ++i) {
      const double v = base_->sample(rng);
      best = op_ == Op::MIN ? std::min(best, v) : std::max(best, v);
    }
    return best;
  }

  double tail_index() const override {
    return op_ == Op::MIN ? k_ * base_->tail_index() : base_->tail_index();
  }

  double atom_at_zero() const override {
    const double a = base_->atom_at_zero();
    if (op_ == Op::MAX) return std::pow(a, k_);
    return -std::expm1(k_ * std::log1p(-a));
  }

  std::vector<double> kinks() const override { return base_->kinks(); }

 private:
  static constexpr std::uint64_t kTournamentLimit = 4096;

  std::shared_ptr<const LawModel> base_;
  Op op_;
  std::uint64_t count_;
  double k_;
};

}  // namespace

DistributionSpec compose_cdf(const DistributionSpec& spec, const Word& word) {
  if (word.empty()) return spec;
  std::shared_ptr<const LawModel> model = spec.model_ptr();
  for (const auto& step : word.steps()) {
    if (step.count == 1) continue;
    model = std::make_shared<ComposedModel>(model, step.op, step.count);
  }
  return DistributionSpec(word.to_string() + ":" + spec.name(), model);
}

// ---------------------------------------------------------------- tail integrals

namespace {

// Splits each cut interval until g varies by a bounded amount across every
// piece that can matter, so Gauss-Kronrod nodes cannot step over a spike.
template <class G>
std::vector<double> refine_cuts(const G& g, const std::vector<double>& cuts, double& peak) {
  std::vector<double> out;
  std::vector<double> values(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    values[i] = g(cuts[i]);
    peak = std::max(peak, values[i]);
  }
  auto split = [&](auto&& self, double a, double ga, double b, double gb, int depth) -> void {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    const double top = std::max({ga, gb, gm});
    const double bottom = std::min({ga, gb, gm});
    peak = std::max(peak, top);
    const bool relevant = top > peak - 750.0;
    if (depth < 60 && relevant && top - bottom > 40.0 && m > a && m < b) {
      self(self, a, ga, m, gm, depth + 1);
      self(self, m, gm, b, gb, depth + 1);
      return;
    }
    out.push_back(b);
  };
  out.push_back(cuts[0]);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    split(split, cuts[i], values[i], cuts[i + 1], values[i + 1], 0);
  }
  return out;
}

// Integral of exp(g) over consecutive cuts, returned as a log.
template <class G>
double integrate_log(const G& g, const std::vector<double>& raw_cuts, double rel_tol, double log_abs_tol = -kInf) {
  if (raw_cuts.size() < 2) return -kInf;
  double shift = -kInf;
  const std::vector<double> cuts = refine_cuts(g, raw_cuts, shift);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    for (int j = 1; j < 8; ++j) shift = std::max(shift, g(cuts[i] + (cuts[i + 1] - cuts[i]) * j / 8.0));
  }
  if (shift == -kInf) return -kInf;
  double abs_tol = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    abs_tol = std::min(1e300, std::exp(log_abs_tol - shift));
    double seen = shift;
    auto f = [&](double x) {
      const double v = g(x);
      if (v > seen) seen = v;
      return std::exp(v - shift);
    };
    const auto res = quad::integrate(f, cuts, {rel_tol, abs_tol, 100000});
    if (std::isfinite(res.value) && seen <= shift + 600.0) {
      if (!res.converged) {
        // Integrand values carry rounding noise of order eps * |g|; a tolerance
        // below that floor cannot be certified, so settle for the floor.
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(shift);
        if (!(res.error <= std::max(10.0 * rel_tol, floor) * std::abs(res.value) + abs_tol))
          throw NonConvergent("adaptive quadrature exhausted its panel budget");
      }
      return res.value > 0.0 ? std::log(res.value) + shift : -kInf;
    }
    shift = seen;
  }
  throw NonConvergent("integrand scale could not be stabilised");
}

std::vector<double> cut_points(const LawModel& m, double a, double b) {
  std::vector<double> pts = {a, b};
  for (double k : m.kinks())
    if (k > a && k < b) pts.push_back(k);
  const double log_keep = m.log_tail_at(-kInf);
  const double log_atom = m.log_cdf_at(-kInf);
  auto add = [&](double x) {
    if (std::isfinite(x) && x > a && x < b) pts.push_back(x);
  };
  add(m.log_quantile_tail(log_keep + kLogHalf));
  for (int j = 1; j <= 14; ++j) {
    const double lv = -j * std::numbers::ln10;
    add(m.log_quantile_tail(log_keep + lv));
    if (lv > log_atom) add(m.log_quantile_cdf(lv));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<double> restrict_cuts(const std::vector<double>& cuts, double a, double b) {
  std::vector<double> out = {a};
  for (double c : cuts)
    if (c > a && c < b) out.push_back(c);
  out.push_back(b);
  return out;
}

}  // namespace

double log_weighted_integral(const LawModel& m, double r, double a, double b, Weight weight, double rel_tol) {
  if (!(r > 0.0)) throw DomainError("moment exponent must be positive");
  if (weight == Weight::Cdf && b == kInf) throw DomainError("cdf-weighted integral needs a finite upper limit");
  if (!(a < b)) return -kInf;

  const double log_r = std::log(r);
  const double quad_tol = std::max(1e-13, rel_tol * 1e-2);
  const double log_small = std::log(1e-3 * rel_tol);
  const double log_quad = std::log(quad_tol);
  const double log_keep = m.log_tail_at(-kInf);  // log P(X > 0)
  if (weight == Weight::Tail && log_keep == -kInf) return -kInf;

  // Finite working window [lo, hi] inside (a, b).
  double lo = a;
  if (lo == -kInf) {
    if (weight == Weight::Tail) {
      const double x_med = m.log_quantile_tail(log_keep + kLogHalf);
      lo = x_med + std::log(0.5e-3 * rel_tol) / r;
      if (b < kInf) lo = std::min(lo, b - 1.0);
    } else {
      lo = b - 30.0 / r;
    }
  }
  double hi = b;
  if (hi == kInf) {
    const double x_far = m.log_quantile_tail(log_keep + std::log(1e-14));
    hi = std::max(lo, std::isfinite(x_far) ? x_far : lo);
  }

  const auto all_cuts = cut_points(m, std::min(lo, hi) - 1e300, hi + 1e300);
  // Each piece is integrated in u = y - c with c its right end, so r y never
  // carries the absolute rounding of a huge |y| into the integrand.
  auto piece = [&](double from, double to, double log_abs_tol) {
    const double c = to;
    auto g = [&](double u) {
      const double lp = weight == Weight::Tail ? m.log_tail_at(c + u) : m.log_cdf_at(c + u);
      if (lp == -kInf) return -kInf;
      return log_r + r * u + lp;
    };
    std::vector<double> cuts = restrict_cuts(all_cuts, from, to);
    for (double& x : cuts) x -= c;
    cuts.back() = 0.0;
    return integrate_log(g, cuts, quad_tol, log_abs_tol - r * c) + r * c;
  };
  double total = piece(lo, hi, -kInf);

  // Left remainder: integrand <= e^{r y} P(.) with P bounded by its value at lo.
  if (a == -kInf) {
    for (int it = 0;; ++it) {
      const double lp = weight == Weight::Tail ? log_keep : m.log_cdf_at(lo);
      const double bound = r * lo + lp;
      if (bound == -kInf || bound <= log_small + total) break;
      if (it > 200) throw NonConvergent("left remainder of tail integral does not vanish");
      const double gap = total == -kInf ? 30.0 : bound - log_small - total;
      const double next = lo - std::max(1.0, gap / r + 1.0);
      total = num::log_add(total, piece(next, lo, log_quad + total));
      lo = next;
    }
  }

  // Right extension with a geometric remainder estimate.
  if (b == kInf) {
    double x = hi;
    double prev = kInf, prev_ratio = num::kNaN;
    int unit_panels = 0, consecutive_unit = 0;
    for (int it = 0;; ++it) {
      if (m.log_tail_at(x) == -kInf) break;
      const double h = x < -2.0 * std::numbers::ln2 ? -0.5 * x : std::numbers::ln2;
      const bool unit = h == std::numbers::ln2;
      const double nx = x + h;
      const double part = piece(x, nx, log_quad + total);
      total = num::log_add(total, part);
      x = nx;
      if (unit) {
        ++unit_panels;
        ++consecutive_unit;
      } else {
        consecutive_unit = 0;
      }
      if (part == -kInf) break;
      if (prev < kInf) {
        const double ratio = std::exp(part - prev);
        if (ratio < 1.0) {
          const double log_rem = part + std::log(ratio) - std::log1p(-ratio);
          if (ratio < 0.5 && log_rem <= log_small + total) {
            total = num::log_add(total, log_rem);
            break;
          }
          if (consecutive_unit >= 3 && std::isfinite(prev_ratio)) {
            const double drift = std::abs(ratio - prev_ratio);
            const double log_unc = part + std::log(drift + 1e-300) - 2.0 * std::log1p(-ratio);
            if (log_unc <= std::log(0.1 * rel_tol) + total) {
              total = num::log_add(total, log_rem);
              break;
            }
          }
        }
        prev_ratio = ratio;
      }
      prev = part;
      if (unit_panels > 64 || it > 400)
        throw NonConvergent("tail integral has not settled by 2^64 times the far quantile");
    }
  }
  return total;
}

double log_moment_norm(const DistributionSpec& law, double r, double rel_tol) {
  if (!(r > 0.0)) throw DomainError("moment exponent must be positive");
  if (!law.moment_finite(r))
    throw InfiniteMoment("E X^" + std::to_string(r) + " is infinite for " + law.name());
  if (law.model().log_tail_at(-kInf) == -kInf) return -kInf;
  return log_weighted_integral(law.model(), r, -kInf, kInf, Weight::Tail, rel_tol) / r;
}

double moment_norm(const DistributionSpec& law, double r, double rel_tol) {
  return std::exp(log_moment_norm(law, r, rel_tol));
}

double moment_norm(const MomentQuery& q) {
  if (!(q.rel_tol > 0.0 && q.rel_tol <= 1e-3)) throw DomainError("rel_tol must lie in (0, 1e-3]");
  return moment_norm(compose_cdf(q.spec, q.word), q.r, q.rel_tol);
}

// ---------------------------------------------------------------- clips

double clipped_moment(const DistributionSpec& spec, double s, double t, double scale, double r) {
  if (!(s >= 0.0 && s <= t)) throw DomainError("clipped_moment needs 0 <= s <= t");
  if (!std::isfinite(t)) throw DomainError("clipped_moment needs a finite upper clip t");
  if (!(scale > 0.0)) throw DomainError("clipped_moment needs scale > 0");
  const double base = std::pow(s, r);
  if (s == t) return base;
  const double ls = std::log(scale);
  const double a = s > 0.0 ? std::log(s) - ls : -kInf;
  const double li = log_weighted_integral(spec.model(), r, a, std::log(t) - ls, Weight::Tail, 1e-10);
  return base + std::exp(r * ls + li);
}

double log_clip_excess(const DistributionSpec& spec, double s, double scale, double r, double rel_tol) {
  const double ls = std::log(scale);
  const double a = s > 0.0 ? std::log(s) - ls : -kInf;
  if (!spec.moment_finite(r)) return kInf;
  return r * ls + log_weighted_integral(spec.model(), r, a, kInf, Weight::Tail, rel_tol);
}

double log_clip_deficit(const DistributionSpec& spec, double t, double scale, double r, double rel_tol) {
  const double ls = std::log(scale);
  return r * ls + log_weighted_integral(spec.model(), r, -kInf, std::log(t) - ls, Weight::Cdf, rel_tol);
}

// ---------------------------------------------------------------- sandwiches

double truncated_upper_moment(const DistributionSpec& spec, double t, double r, double rel_tol) {
  if (!spec.moment_finite(r)) return kInf;
  const double head = t > 0.0 ? std::exp(r * std::log(t) + spec.log_tail(t)) : 0.0;
  const double a = t > 0.0 ? std::log(t) : -kInf;
  return head + std::exp(log_weighted_integral(spec.model(), r, a, kInf, Weight::Tail, rel_tol));
}

MaxMomentBounds max_moment_bounds(const DistributionSpec& spec, std::uint64_t N, double r) {
  if (N < 1) throw DomainError("N must be >= 1");
  if (!spec.moment_finite(r)) throw InfiniteMoment("E X^r is infinite for " + spec.name());
  MaxMomentBounds out;
  const double Nd = static_cast<double>(N);
  out.b_N = N == 1 ? 0.0 : spec.tail_quantile(1.0 / Nd);
  if (out.b_N > 0.0) {
    const double left = spec.tail(std::nextafter(out.b_N, 0.0));
    out.at_atom = left - spec.tail(out.b_N) > 1e-12 && spec.tail(out.b_N) < 1.0 / Nd && left > 1.0 / Nd;
  }
  const double a = out.b_N > 0.0 ? std::log(out.b_N) : -kInf;
  const double integral = std::exp(log_weighted_integral(spec.model(), r, a, kInf, Weight::Tail, 1e-11));
  out.upper = std::pow(out.b_N, r) + Nd * integral;
  out.lower = 0.5 * out.upper;
  return out;
}

double max_moment_lower_at(const DistributionSpec& spec, double a, std::uint64_t N, double r) {
  const double p = std::exp(static_cast<double>(N) * spec.log_cdf(a));
  if (p == 0.0) return 0.0;
  return static_cast<double>(N) * p * truncated_upper_moment(spec, a, r);
}

TailSandwich tail_sandwich_from_u(double u, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  TailSandwich s;
  const double nu = nd * u;
  s.lower = nu / (1.0 + nu);
  s.mid = u <= 0.0 ? 0.0 : std::exp(num::log_complement_power(std::log(u), nd));
  s.upper = std::min(nu, 1.0);
  const double slack = 8.0 * std::numeric_limits<double>::epsilon();
  if (s.lower > s.mid * (1.0 + slack) || s.mid > s.upper * (1.0 + slack))
    throw std::logic_error("max tail sandwich violated");
  return s;
}

TailSandwich max_tail_sandwich(const DistributionSpec& spec, double t, std::uint64_t n) {
  return tail_sandwich_from_u(spec.tail(t), n);
}

}  // namespace mmh
