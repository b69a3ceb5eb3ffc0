#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "minmax/random.hpp"

namespace mmh {

enum class SetKind { SLAB, ELLIPSOID, LPBALL, INTERSECTION };
const char* to_string(SetKind k);

/// Symmetric convex body in R^d described by its gauge (Minkowski functional).
/// Membership is gauge(x) <= 1. Values are cheap to copy.
class ConvexSet {
 public:
  /// {x : |<x, u>| <= width}.
  static ConvexSet slab(const Eigen::VectorXd& u, double width);
  /// {x : x' Q x <= 1}; Q symmetric positive definite.
  static ConvexSet ellipsoid(const Eigen::MatrixXd& Q);
  /// {x : ||x||_p <= radius}; p in [1, inf].
  static ConvexSet lpball(std::size_t dim, double p, double radius);
  static ConvexSet intersection(const std::vector<ConvexSet>& parts);

  /// {"kind": "slab", "u": [...], "width": w}
  /// {"kind": "ellipsoid", "dimension": d, "Q": [row-major]} (or nested rows)
  /// {"kind": "lpball", "dimension": d, "p": p or "inf", "radius": r}
  /// {"kind": "intersection", "sets": [...]}
  static ConvexSet from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  SetKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  double gauge(std::span<const double> x) const;
  double gauge(const Eigen::VectorXd& x) const { return gauge(std::span<const double>(x.data(), x.size())); }
  bool contains(std::span<const double> x) const { return gauge(x) <= 1.0; }
  bool contains(const Eigen::VectorXd& x) const { return gauge(x) <= 1.0; }

  /// s * set, s > 0.
  ConvexSet scaled(double s) const;
  std::string describe() const;

 private:
  ConvexSet() = default;

  SetKind kind_ = SetKind::LPBALL;
  std::size_t dim_ = 0;
  std::vector<double> u_;  // slab normal, already divided by width
  std::vector<double> q_;  // ellipsoid matrix, row-major
  double p_ = 2.0;
  double radius_ = 1.0;
  std::vector<ConvexSet> parts_;
};

struct SetSanity {
  bool symmetric = true;
  bool convex = true;
  /// Largest |gauge(x / gauge(x)) - 1| seen.
  double boundary_error = 0.0;
};

/// Random checks: symmetry and gauge normalisation on `points` Gaussian
/// directions, midpoint convexity on `points` pairs of members.
SetSanity check_set(const ConvexSet& set, RandomStream& rng, std::size_t points = 10000);

}  // namespace mmh
