#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <doctest.h>

#include "minmax/error.hpp"
#include "minmax/gauss_stable.hpp"
#include "minmax/numeric.hpp"

using namespace mmh;

namespace {

const boost::math::normal_distribution<> N01;

double Phi(double x) { return boost::math::cdf(N01, x); }

McOptions quick(std::uint64_t n = 200000, unsigned threads = 1) {
  McOptions o;
  o.samples = n;
  o.threads = threads;
  o.escalate = false;
  return o;
}

ConvexSet ball2() { return ConvexSet::lpball(2, 2.0, 1.0); }

}  // namespace

TEST_CASE("samplers") {
  const int n = 1000000;
  const auto g1 = VectorLaw::gaussian(Eigen::MatrixXd::Identity(1, 1), 4);
  const Eigen::MatrixXd x = sample(g1, n, 0);
  CHECK(std::abs(x.col(0).mean()) <= 4.0 / std::sqrt(double(n)));

  // alpha = 2 sub-Gaussian is N(0, 2 Sigma): E X^2 = 2 with Var(X^2) = 8.
  const auto s2 = VectorLaw::stable_subgaussian(2.0, Eigen::MatrixXd::Identity(2, 2), 4);
  const Eigen::MatrixXd y = sample(s2, n, 0);
  CHECK(std::abs(y.col(1).squaredNorm() / n - 2.0) <= 4.0 * std::sqrt(8.0 / n));
  CHECK(s2.kind() == VectorLawKind::GAUSSIAN);

  // Independent alpha = 1 coordinates are standard Cauchy: P(|X| > 1) = 1/2, median 0.
  const auto c = VectorLaw::stable_indep(1.0, Eigen::VectorXd::Ones(2), 9);
  const Eigen::MatrixXd z = sample(c, n, 0);
  for (int k = 0; k < 2; ++k) {
    const double above = (z.col(k).array().abs() > 1.0).cast<double>().mean();
    const double positive = (z.col(k).array() > 0.0).cast<double>().mean();
    CHECK(std::abs(above - 0.5) <= 4.0 * 0.5 / std::sqrt(double(n)));
    CHECK(std::abs(positive - 0.5) <= 4.0 * 0.5 / std::sqrt(double(n)));
  }

  // Sub-Gaussian alpha = 1 marginal <u, X> is Cauchy with scale (u' Sigma u)^{1/2}.
  const auto sg = VectorLaw::stable_subgaussian(1.0, Eigen::MatrixXd::Identity(2, 2), 5);
  const Eigen::MatrixXd w = sample(sg, n, 0);
  const double above = (w.col(0).array().abs() > 1.0).cast<double>().mean();
  CHECK(std::abs(above - 0.5) <= 4.0 * 0.5 / std::sqrt(double(n)));

  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(VectorLaw::gaussian(bad), NotPositiveSemidefinite);
  CHECK_THROWS_AS(VectorLaw::stable_subgaussian(2.5, Eigen::MatrixXd::Identity(2, 2)), DomainError);
}

TEST_CASE("Wilson interval") {
  const auto p = wilson(500, 1000);
  CHECK(p.p == doctest::Approx(0.5));
  CHECK(p.lo < 0.5);
  CHECK(p.hi > 0.5);
  CHECK(p.hi - 0.5 == doctest::Approx(0.5 - p.lo));
  const auto z = wilson(0, 1000);
  CHECK(z.lo == 0.0);
  CHECK(z.hi > 0.0);
}

TEST_CASE("small ball of the standard Gaussian in the plane") {
  const auto g = VectorLaw::gaussian(Eigen::MatrixXd::Identity(2, 2), 1);
  const std::vector<double> radii = {0.0, 0.25, 0.5, 1.0, 2.0};
  const auto est = small_ball(g, ball2(), Eigen::VectorXd::Zero(2), radii, quick());
  CHECK(est.estimates[0].p == 0.0);
  for (std::size_t i = 1; i < radii.size(); ++i) {
    const double exact = 1.0 - std::exp(-radii[i] * radii[i] / 2);
    CHECK(est.estimates[i].lo <= exact);
    CHECK(exact <= est.estimates[i].hi);
  }
  const auto big = small_ball(g, ConvexSet::lpball(2, 2.0, 1e6), Eigen::VectorXd::Zero(2), {1.0}, quick());
  CHECK(big.estimates[0].p == 1.0);

  CHECK_THROWS_AS(small_ball(g, ball2(), Eigen::VectorXd::Zero(2), {1.0}, quick(1000)), DomainError);
  CHECK_THROWS_AS(small_ball(g, ball2(), Eigen::VectorXd::Zero(2), {1.0, 0.5}, quick()), DomainError);
}

TEST_CASE("results do not depend on the thread count") {
  const auto law = VectorLaw::stable_subgaussian(1.2, Eigen::MatrixXd::Identity(3, 3), 77);
  const auto set = ConvexSet::lpball(3, 1.0, 1.0);
  const std::vector<double> radii = {0.1, 0.5, 1.0};
  const auto a = small_ball(law, set, Eigen::VectorXd::Zero(3), radii, quick(300000, 1));
  const auto b = small_ball(law, set, Eigen::VectorXd::Zero(3), radii, quick(300000, 3));
  for (std::size_t i = 0; i < radii.size(); ++i) CHECK(a.estimates[i].count == b.estimates[i].count);
}

TEST_CASE("shifted small-ball bound") {
  // N(0, I_2), unit disc, kappa = 1/2: estimate 1 - e^{-1/8}, bound (3/2)(1/2) / sqrt(e^{-1/2}).
  const auto g = VectorLaw::gaussian(Eigen::MatrixXd::Identity(2, 2), 2);
  Eigen::VectorXd far(2);
  far << 50.0, 0.0;
  const auto k = kanter_bound_check(g, ball2(), {Eigen::VectorXd::Zero(2), far}, {1e-4, 0.5}, quick());
  CHECK(k.holds);
  for (const auto& row : k.rows) {
    if (row.shift == 0 && row.t == 0.5) {
      CHECK(std::abs(row.estimate - (1 - std::exp(-0.125))) <= 4 * row.std_error);
      CHECK(row.bound == doctest::Approx(0.75 / std::sqrt(std::exp(-0.5))).epsilon(1e-3));
    }
    if (row.shift == 1) CHECK(row.estimate == 0.0);
    if (row.t == 1e-4) CHECK(row.bound < 1e-3);
  }
  const auto sh = default_shifts(ball2());
  CHECK(sh.size() == 3);
  CHECK(sh[0].norm() == 0.0);
}

TEST_CASE("regularity in one dimension") {
  // B = [-a, a] with nu(B) = 1/2 under N(0, 1): nu(tB) = 2 Phi(t a) - 1.
  const double a = boost::math::quantile(N01, 0.75);
  const auto g = VectorLaw::gaussian(Eigen::MatrixXd::Identity(1, 1), 3);
  const auto ts = num::geomspace(1e-2, 1.0, 10);
  const auto r = regularity_check(g, ConvexSet::lpball(1, 2.0, a), 0.6, ts, quick(), 0.5);
  CHECK(r.holds);
  CHECK(r.R_b == doctest::Approx(regularity_R(0.6)));
  for (const auto& row : r.rows) CHECK(std::abs(row.estimate - (2 * Phi(row.t * a * r.scale) - 1)) <= 4.5 * row.std_error);
  CHECK(r.exponent_fit == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(regularity_check(g, ball2(), 0.5, ts, quick()), DomainError);
}

TEST_CASE("correlation") {
  const auto g = VectorLaw::gaussian(Eigen::MatrixXd::Identity(2, 2), 6);
  Eigen::VectorXd e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  const auto r = correlation_check(g, {ConvexSet::slab(e1, 1.0), ConvexSet::slab(e2, 1.0)}, 1.0, quick(1000000));
  const double m = 2 * Phi(1) - 1;
  CHECK(std::abs(r.lhs - m * m) <= 4 * r.std_error + 4 * std::sqrt(m * m * (1 - m * m) / 1e6));
  CHECK(std::abs(r.rhs - m * m) <= 0.01);
  CHECK(r.holds);
  CHECK(r.asserted);

  const auto one = correlation_check(g, {ball2()}, 1.3, quick());
  CHECK(one.holds);
  CHECK(one.lhs >= one.rhs);
  CHECK_THROWS_AS(correlation_check(g, {ball2()}, 0.5, quick()), DomainError);
}

TEST_CASE("Slepian and the min-moment profile") {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  const auto one = slepian_sqrt2_check(I, {ball2()}, quick(), 1);
  // Same law on both sides, estimated from separate draws.
  CHECK(std::abs(one.lhs - one.rhs) <= 4 * std::hypot(one.se_lhs, one.se_rhs));
  CHECK(one.holds);
  const auto same = slepian_sqrt2_check(I, {ball2(), ball2(), ball2()}, quick(), 1);
  CHECK(same.ratio <= 1.0);

  McOptions o = quick(20000);
  const auto h = min_moment_hypothesis_62(I, {ball2()}, {1, 2, 4, 8}, 2.0, o, 1);
  for (const auto& row : h.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("integral form") {
  // mu(sB) = s on [0, 1]: integral_0^t s ds = t^2 / 2 = (1/2) t mu(tB).
  std::vector<double> g;
  for (int i = 0; i < 100000; ++i) g.push_back((i + 0.5) / 100000.0);
  const auto r = integral_equivalence_from_gauges(g, 0.99, num::geomspace(0.05, 1.0, 10));
  CHECK(r.r_fit == doctest::Approx(0.5).epsilon(1e-3));
  const auto c = integral_form_constants(r.r_fit);
  CHECK(r.constants.R == doctest::Approx(c.R));

  // One-dimensional Gaussian: mu(sB) ~ c s near 0, so the ratio tends to 1/2.
  const auto law = VectorLaw::gaussian(Eigen::MatrixXd::Identity(1, 1), 8);
  auto gauges = sample_gauges(law, ConvexSet::lpball(1, 2.0, 1.0), Eigen::VectorXd::Zero(1), quick(1000000), 0);
  const auto small = integral_equivalence_from_gauges(gauges, 0.99, {0.02});
  CHECK(small.rows[0].ratio == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("convex sets") {
  RandomStream rng(3, 0);
  Eigen::VectorXd u(3);
  u << 1, -2, 0.5;
  Eigen::MatrixXd Q(3, 3);
  Q << 2, 0.3, 0, 0.3, 1, 0.1, 0, 0.1, 0.5;
  const std::vector<ConvexSet> sets = {
      ConvexSet::slab(u, 0.7), ConvexSet::ellipsoid(Q), ConvexSet::lpball(3, 1.0, 2.0),
      ConvexSet::lpball(3, 3.5, 1.0), ConvexSet::lpball(3, num::kInf, 0.5),
      ConvexSet::intersection({ConvexSet::slab(u, 0.7), ConvexSet::ellipsoid(Q)})};
  for (const auto& s : sets) {
    CAPTURE(s.describe());
    const auto sanity = check_set(s, rng);
    CHECK(sanity.symmetric);
    CHECK(sanity.convex);
    CHECK(sanity.boundary_error <= 1e-9);
    const auto back = ConvexSet::from_json(s.to_json());
    Eigen::VectorXd x(3);
    x << 0.3, -0.2, 0.9;
    CHECK(back.gauge(x) == doctest::Approx(s.gauge(x)).epsilon(1e-14));
    CHECK(s.scaled(2.0).gauge(x) == doctest::Approx(s.gauge(x) / 2));
  }
  CHECK(ConvexSet::lpball(2, 2.0, 1.0).gauge(Eigen::Vector2d(3, 4)) == doctest::Approx(5.0));
  CHECK_THROWS_AS(ConvexSet::intersection({}), DomainError);
  CHECK_THROWS_AS(ConvexSet::ellipsoid(-Eigen::MatrixXd::Identity(2, 2)), DomainError);
  CHECK_THROWS_AS(ConvexSet::from_json(nlohmann::json{{"kind", "cube"}}), DomainError);
}

TEST_CASE("Anderson monotonicity") {
  Eigen::MatrixXd S(2, 2);
  S << 1, 0.6, 0.6, 2;
  const auto g = VectorLaw::gaussian(S, 10);
  std::vector<Eigen::VectorXd> shifts;
  RandomStream rng(10, 1);
  for (int i = 0; i < 4; ++i) shifts.push_back(Eigen::Vector2d(rng.normal(), rng.normal()));
  for (const auto& row : anderson_check(g, ConvexSet::lpball(2, 1.0, 1.0), shifts, quick())) CHECK(row.holds);
}
