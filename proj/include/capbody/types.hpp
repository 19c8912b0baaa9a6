#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace capbody {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Thrown when an internal invariant that the algorithms guarantee by
// construction is observed to fail.  Maps to CLI exit code 3.
class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

#define CAPBODY_REQUIRE(cond, msg)                  \
  do {                                              \
    if (!(cond)) throw ::capbody::internal_error(msg); \
  } while (0)

// Numerical slack used throughout.  `predicate` separates true/false of
// boolean geometric predicates; `geometry` is the coarser slack used for
// constructed data (margins, boundary avoidance).  predicate <= geometry.
struct Tolerance {
  double predicate = 1e-9;
  double geometry = 1e-7;

  void validate() const {
    if (!(predicate > 0.0) || !(predicate <= geometry) || !(geometry < 1e-3))
      throw std::invalid_argument(
          "tolerance must satisfy 0 < predicate <= geometry < 1e-3");
  }
};

// A point of the unit sphere S^{d-1} in E^d, d >= 2.  The norm is checked at
// construction; use normalized() to build one from an arbitrary vector.
class UnitVector {
 public:
  explicit UnitVector(Vector v) : v_(std::move(v)) {
    if (v_.size() < 2)
      throw std::invalid_argument("unit vector needs dimension >= 2");
    const double norm = v_.norm();
    if (std::abs(norm - 1.0) > 1e-9)
      throw std::invalid_argument("vector is not unit length");
    v_ /= norm;  // remove the residual drift so chained ops stay stable
  }

  static UnitVector normalized(const Vector& v) {
    const double norm = v.norm();
    if (!(norm > 1e-14))
      throw std::invalid_argument("cannot normalize a (near-)zero vector");
    return UnitVector(Vector(v / norm));
  }

  const Vector& vec() const { return v_; }
  Eigen::Index dim() const { return v_.size(); }
  double dot(const UnitVector& o) const { return v_.dot(o.v_); }
  UnitVector operator-() const { return UnitVector(Vector(-v_)); }

 private:
  Vector v_;
};

// Spherical cap { p : dist(center, p) < radius } (open) or <= (closed),
// with geodesic radius in (0, pi).
struct SphericalCap {
  SphericalCap(UnitVector c, double r, bool is_open)
      : center(std::move(c)), radius(r), open(is_open) {
    if (!(r > 0.0) || !(r < M_PI))
      throw std::invalid_argument("cap radius must lie in (0, pi)");
  }

  UnitVector center;
  double radius;
  bool open;
};

inline SphericalCap open_cap(UnitVector c, double r) {
  return SphericalCap(std::move(c), r, true);
}
inline SphericalCap closed_cap(UnitVector c, double r) {
  return SphericalCap(std::move(c), r, false);
}

// Closed Euclidean ball, radius > 0.
struct EuclideanBall {
  EuclideanBall(Vector c, double r) : center(std::move(c)), radius(r) {
    if (!(r > 0.0)) throw std::invalid_argument("ball radius must be > 0");
  }

  Vector center;
  double radius;
};

// A finite set of candidate illumination directions in E^d.
struct DirectionSet {
  int dim = 0;
  std::vector<UnitVector> directions;

  void push(UnitVector u) {
    if (static_cast<int>(u.dim()) != dim)
      throw std::invalid_argument("direction dimension mismatch");
    directions.push_back(std::move(u));
  }
  int size() const { return static_cast<int>(directions.size()); }
};

}  // namespace capbody
