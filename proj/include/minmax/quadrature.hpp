#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with a largest-error-first
// panel queue. Panel ordering is fixed so results are bitwise reproducible.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

namespace mmh::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_panels = 100000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  std::size_t order;
  bool operator<(const Panel& o) const {
    // Max-heap on error; ties broken by creation order for determinism.
    if (error != o.error) return error < o.error;
    return order > o.order;
  }
};

template <class F>
Panel gk15(F& f, double a, double b, std::size_t order) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  resk *= half;
  resg *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon()))
    err = std::max(err, floor);
  return Panel{a, b, resk, err, order};
}

}  // namespace detail

/// Integrate f over the union of consecutive intervals [cuts[i], cuts[i+1]].
/// `cuts` must be sorted and finite.
template <class F>
Result integrate(F&& f, std::span<const double> cuts, const Options& opt = {}) {
  Result out;
  if (cuts.size() < 2) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Panel> heap;
  std::size_t order = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    heap.push(detail::gk15(f, cuts[i], cuts[i + 1], order++));
  }
  auto totals = [&heap]() {
    // Recomputed from scratch to keep summation order independent of history.
    std::vector<detail::Panel> all;
    auto copy = heap;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    double v = 0.0, e = 0.0;
    for (const auto& p : all) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };
  if (heap.empty()) {
    out.converged = true;
    return out;
  }
  auto [value, error] = totals();
  std::size_t panels = heap.size();
  std::size_t steps = 0;
  auto tolerance = [&opt](double v) { return std::max(opt.abs_tol, opt.rel_tol * std::abs(v)); };
  while (panels < opt.max_panels && steps++ < 2 * opt.max_panels) {
    if (error <= tolerance(value)) {
      // Running sums drift; confirm against a fresh summation before stopping.
      std::tie(value, error) = totals();
      if (error <= tolerance(value)) break;
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in floating point.
      heap.push(detail::Panel{worst.a, worst.b, worst.value, 0.0, worst.order});
      error -= worst.error;
    } else {
      auto left = detail::gk15(f, worst.a, mid, order++);
      auto right = detail::gk15(f, mid, worst.b, order++);
      value += left.value + right.value - worst.value;
      error += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
      ++panels;
    }
  }
  auto [v, e] = totals();
  out.value = v;
  out.error = e;
  out.panels = panels;
  out.converged = e <= tolerance(v) * 1.0000001;
  return out;
}

}  // namespace mmh::quad
