#include "minmax/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "minmax/error.hpp"
#include "minmax/numeric.hpp"

namespace mmh {

namespace {

constexpr std::size_t kMaxDim = 64;

void check_dim(std::size_t d) {
  if (d == 0 || d > kMaxDim) throw DomainError("dimension must lie in [1, 64]");
}

double json_number(const nlohmann::json& v, const char* what) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return num::kInf;
  }
  if (!v.is_number()) throw DomainError(std::string(what) + " must be a number");
  return v.get<double>();
}

}  // namespace

const char* to_string(SetKind k) {
  switch (k) {
    case SetKind::SLAB: return "slab";
    case SetKind::ELLIPSOID: return "ellipsoid";
    case SetKind::LPBALL: return "lpball";
    case SetKind::INTERSECTION: return "intersection";
  }
  return "?";
}

ConvexSet ConvexSet::slab(const Eigen::VectorXd& u, double width) {
  check_dim(static_cast<std::size_t>(u.size()));
  if (!(width > 0.0 && std::isfinite(width))) throw DomainError("slab width must be positive");
  if (!(u.norm() > 0.0) || !u.allFinite()) throw DomainError("slab normal must be a nonzero finite vector");
  ConvexSet s;
  s.kind_ = SetKind::SLAB;
  s.dim_ = static_cast<std::size_t>(u.size());
  s.u_.assign(u.data(), u.data() + u.size());
  for (double& v : s.u_) v /= width;
  return s;
}

ConvexSet ConvexSet::ellipsoid(const Eigen::MatrixXd& Q) {
  check_dim(static_cast<std::size_t>(Q.rows()));
  if (Q.rows() != Q.cols()) throw DomainError("ellipsoid matrix must be square");
  if (!Q.allFinite() || !Q.isApprox(Q.transpose(), 1e-12)) throw DomainError("ellipsoid matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) throw DomainError("ellipsoid matrix must be positive definite");
  ConvexSet s;
  s.kind_ = SetKind::ELLIPSOID;
  s.dim_ = static_cast<std::size_t>(Q.rows());
  s.q_.resize(s.dim_ * s.dim_);
  for (std::size_t i = 0; i < s.dim_; ++i)
    for (std::size_t j = 0; j < s.dim_; ++j) s.q_[i * s.dim_ + j] = 0.5 * (Q(i, j) + Q(j, i));
  return s;
}

ConvexSet ConvexSet::lpball(std::size_t dim, double p, double radius) {
  check_dim(dim);
  if (!(p >= 1.0)) throw DomainError("lp ball needs p >= 1");
  if (!(radius > 0.0 && std::isfinite(radius))) throw DomainError("lp ball radius must be positive and finite");
  ConvexSet s;
  s.kind_ = SetKind::LPBALL;
  s.dim_ = dim;
  s.p_ = p;
  s.radius_ = radius;
  return s;
}

ConvexSet ConvexSet::intersection(const std::vector<ConvexSet>& parts) {
  if (parts.empty()) throw DomainError("intersection of no sets is the whole space");
  ConvexSet s;
  s.kind_ = SetKind::INTERSECTION;
  s.dim_ = parts.front().dim();
  for (const auto& p : parts)
    if (p.dim() != s.dim_) throw DomainError("intersected sets must share a dimension");
  s.parts_ = parts;
  return s;
}

ConvexSet ConvexSet::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw DomainError("set specification needs a \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "slab") {
    const auto u = j.at("u").get<std::vector<double>>();
    return slab(Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size())),
                j.contains("width") ? json_number(j.at("width"), "width") : 1.0);
  }
  if (kind == "ellipsoid") {
    const auto& q = j.at("Q");
    std::vector<double> flat;
    std::size_t d = 0;
    if (!q.empty() && q.front().is_array()) {
      d = q.size();
      for (const auto& row : q) {
        if (row.size() != d) throw DomainError("ellipsoid matrix rows must have equal length");
        for (const auto& v : row) flat.push_back(json_number(v, "Q entry"));
      }
    } else {
      for (const auto& v : q) flat.push_back(json_number(v, "Q entry"));
      d = j.contains("dimension") ? j.at("dimension").get<std::size_t>()
                                  : static_cast<std::size_t>(std::lround(std::sqrt(flat.size())));
      if (d * d != flat.size()) throw DomainError("ellipsoid matrix size does not match its dimension");
    }
    check_dim(d);
    Eigen::MatrixXd Q(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) Q(r, c) = flat[r * d + c];
    return ellipsoid(Q);
  }
  if (kind == "lpball") {
    return lpball(j.at("dimension").get<std::size_t>(), j.contains("p") ? json_number(j.at("p"), "p") : 2.0,
                  j.contains("radius") ? json_number(j.at("radius"), "radius") : 1.0);
  }
  if (kind == "intersection") {
    std::vector<ConvexSet> parts;
    for (const auto& s : j.at("sets")) parts.push_back(from_json(s));
    return intersection(parts);
  }
  throw DomainError("unknown set kind \"" + kind + "\"");
}

nlohmann::json ConvexSet::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind_);
  switch (kind_) {
    case SetKind::SLAB:
      j["u"] = u_;
      j["width"] = 1.0;
      break;
    case SetKind::ELLIPSOID:
      j["dimension"] = dim_;
      j["Q"] = q_;
      break;
    case SetKind::LPBALL:
      j["dimension"] = dim_;
      if (std::isinf(p_)) j["p"] = "inf";
      else j["p"] = p_;
      j["radius"] = radius_;
      break;
    case SetKind::INTERSECTION: {
      auto arr = nlohmann::json::array();
      for (const auto& p : parts_) arr.push_back(p.to_json());
      j["sets"] = arr;
      break;
    }
  }
  return j;
}

double ConvexSet::gauge(std::span<const double> x) const {
  if (x.size() != dim_) throw DomainError("point dimension does not match the set");
  switch (kind_) {
    case SetKind::SLAB: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) s += u_[i] * x[i];
      return std::abs(s);
    }
    case SetKind::ELLIPSOID: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        double row = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) row += q_[i * dim_ + k] * x[k];
        s += x[i] * row;
      }
      return std::sqrt(std::max(0.0, s));
    }
    case SetKind::LPBALL: {
      if (std::isinf(p_)) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m / radius_;
      }
      // Scale by the largest coordinate so |x|^p neither overflows nor underflows.
      double m = 0.0;
      for (double v : x) m = std::max(m, std::abs(v));
      if (m == 0.0) return 0.0;
      double s = 0.0;
      if (p_ == 2.0) {
        for (double v : x) s += (v / m) * (v / m);
        return m * std::sqrt(s) / radius_;
      }
      for (double v : x) s += std::pow(std::abs(v) / m, p_);
      return m * std::pow(s, 1.0 / p_) / radius_;
    }
    case SetKind::INTERSECTION: {
      double g = 0.0;
      for (const auto& p : parts_) g = std::max(g, p.gauge(x));
      return g;
    }
  }
  return num::kNaN;
}

ConvexSet ConvexSet::scaled(double s) const {
  if (!(s > 0.0 && std::isfinite(s))) throw DomainError("scale must be positive and finite");
  ConvexSet out = *this;
  switch (kind_) {
    case SetKind::SLAB:
      for (double& v : out.u_) v /= s;
      break;
    case SetKind::ELLIPSOID:
      for (double& v : out.q_) v /= s * s;
      break;
    case SetKind::LPBALL:
      out.radius_ *= s;
      break;
    case SetKind::INTERSECTION:
      for (auto& p : out.parts_) p = p.scaled(s);
      break;
  }
  return out;
}

std::string ConvexSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case SetKind::SLAB: os << "slab(d=" << dim_ << ")"; break;
    case SetKind::ELLIPSOID: os << "ellipsoid(d=" << dim_ << ")"; break;
    case SetKind::LPBALL: os << "lpball(d=" << dim_ << ", p=" << p_ << ", r=" << radius_ << ")"; break;
    case SetKind::INTERSECTION:
      os << "intersection(";
      for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? ", " : "") << parts_[i].describe();
      os << ")";
      break;
  }
  return os.str();
}

SetSanity check_set(const ConvexSet& set, RandomStream& rng, std::size_t points) {
  SetSanity out;
  const std::size_t d = set.dim();
  std::vector<double> x(d), neg(d), y(d), mid(d);
  for (std::size_t k = 0; k < points; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = rng.normal();
      neg[i] = -x[i];
    }
    const double g = set.gauge(x);
    if (std::abs(g - set.gauge(neg)) > 1e-12 * std::max(1.0, g)) out.symmetric = false;
    if (g > 0.0 && std::isfinite(g)) {
      for (std::size_t i = 0; i < d; ++i) y[i] = x[i] / g;
      out.boundary_error = std::max(out.boundary_error, std::abs(set.gauge(y) - 1.0));
    }
  }
  // Midpoints of two members stay members.
  for (std::size_t k = 0; k < points; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    const double gx = set.gauge(x), gy = set.gauge(y);
    if (!(gx > 0.0 && gy > 0.0)) continue;
    const double ux = std::pow(rng.uniform(), 1.0 / d) / gx;
    const double uy = std::pow(rng.uniform(), 1.0 / d) / gy;
    for (std::size_t i = 0; i < d; ++i) mid[i] = 0.5 * (ux * x[i] + uy * y[i]);
    if (set.gauge(mid) > 1.0 + 1e-12) out.convex = false;
  }
  return out;
}

}  // namespace mmh
