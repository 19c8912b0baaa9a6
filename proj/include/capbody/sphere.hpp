#pragma once

#include "capbody/types.hpp"

#include <optional>

namespace capbody {

// Geodesic distance on the unit sphere, in [0, pi].
double angular_distance(const UnitVector& a, const UnitVector& b);

// Signed containment depth: cap.radius - dist(center, p).  Positive means p
// is inside by that angular amount, negative outside.
double cap_margin(const SphericalCap& cap, const UnitVector& p);

// Membership honoring the open/closed flag.  Within the +-tol.predicate band
// around the boundary, closed caps answer yes and open caps answer no, so
// the predicate is deterministic on near-boundary input.
bool cap_contains(const SphericalCap& cap, const UnitVector& p,
                  const Tolerance& tol = {});

// Overlap depth of two caps: r1 + r2 - dist(c1, c2).
double caps_overlap(const SphericalCap& a, const SphericalCap& b);

// Nonempty intersection.  Requires both radii < pi/2 (the regime every
// construction here works in); tangency counts only if both caps are closed.
bool caps_intersect(const SphericalCap& a, const SphericalCap& b,
                    const Tolerance& tol = {});

// Orthonormal frame of the equator hyperplane axis^perp: basis is
// d x (d-1) with orthonormal columns.  Maps the equator subsphere S^{d-2}
// between ambient and intrinsic coordinates.
struct EquatorFrame {
  UnitVector axis;
  Matrix basis;

  Vector to_intrinsic(const Vector& ambient) const {
    return basis.transpose() * ambient;
  }
  Vector to_ambient(const Vector& intrinsic) const {
    return basis * intrinsic;
  }
};

EquatorFrame equator_frame(const UnitVector& axis);

// Intersection of a cap with the equator of `axis`, expressed as a cap of
// the unit subsphere of axis^perp (intrinsic dimension d-1).
struct EquatorialSlice {
  SphericalCap cap;        // intrinsic: center has dimension d-1
  EquatorFrame frame;      // embeds intrinsic coordinates back into E^d
  double theta = 0.0;      // dist(cap center, axis) of the sliced cap
};

struct SliceOutcome {
  enum class Kind { nonempty, empty, degenerate_axis };
  Kind kind;
  std::optional<EquatorialSlice> slice;  // set iff kind == nonempty
};

// Requires cap.radius < pi/2.  degenerate_axis is reported when the cap
// center is within tol.geometry of +-axis (the slice direction w' is then
// numerically undefined), distinct from a genuinely empty slice.
SliceOutcome equatorial_slice(const SphericalCap& cap, const UnitVector& axis,
                              const Tolerance& tol = {});

// Affine tangent hyperplane H = { x : <x, s> = -1 } used by the
// stereographic projection from pole s.  Intrinsic coordinates are taken in
// an orthonormal basis of s^perp with origin -s.
struct TangentFrame {
  UnitVector pole;
  Matrix basis;  // d x (d-1), orthonormal columns spanning pole^perp

  Vector to_intrinsic(const Vector& ambient) const {
    return basis.transpose() * (ambient + pole.vec());
  }
  Vector to_ambient(const Vector& intrinsic) const {
    return basis * intrinsic - pole.vec();
  }
};

TangentFrame tangent_frame(const UnitVector& pole);

// Stereographic projection from pole s onto H, and its inverse.  `p` must
// keep angular distance > tol.geometry from s.
Vector stereographic_project(const UnitVector& s, const UnitVector& p,
                             const Tolerance& tol = {});
UnitVector stereographic_lift(const UnitVector& s, const Vector& x_in_h);

// Image of a cap whose closure avoids s (by >= tol.geometry) under the
// projection: a ball of H given in ambient coordinates.
EuclideanBall cap_image_ball(const UnitVector& s, const SphericalCap& cap,
                             const Tolerance& tol = {});

// Preimage of a ball of H (ambient coordinates, radius >= tol.geometry):
// the cap whose projection it is.  Returned with the open flag given.
SphericalCap ball_preimage_cap(const UnitVector& s, const EuclideanBall& ball,
                               bool open, const Tolerance& tol = {});

// Rank of the direction set as a matrix of columns.
int rank_of(const std::vector<UnitVector>& dirs, double threshold = 1e-9);

// Orthonormal basis of the orthogonal complement of span(dirs).
std::vector<UnitVector> span_complement(const std::vector<UnitVector>& dirs,
                                        int dim, double threshold = 1e-9);

// True iff pos(dirs) = E^d: rank d and some strictly positive combination of
// the directions vanishes (decided by a small LP on the min coefficient).
bool positive_hull_full(const std::vector<UnitVector>& dirs, int dim,
                        const Tolerance& tol = {});

// Directions whose addition makes pos(dirs) = E^d: an orthonormal basis of
// the span complement plus one balancing direction (so d - rank + 1 vectors,
// or just the balancer when the span is already full).  Empty if nothing is
// needed.  Deterministic.
std::vector<UnitVector> positive_hull_completion(
    const std::vector<UnitVector>& dirs, int dim, const Tolerance& tol = {});

}  // namespace capbody
