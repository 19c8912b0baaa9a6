#pragma once

#include "capbody/covering.hpp"
#include "capbody/sphere.hpp"
#include "capbody/types.hpp"

#include <cstdint>
#include <vector>

namespace capbody {

// A finite point set together with, per input set, the index of a point
// lying (strictly, for open sets) inside it.
struct PiercingSolution {
  std::vector<Vector> points;
  std::vector<int> witness;
  bool optimal = false;
  double min_margin = 0.0;
};

// Minimum piercing of open circular arcs (caps of S^1).  Exact: candidates
// are arc centers plus right endpoints nudged inward by a quarter of the
// smallest positive endpoint gap, which realizes some optimal solution.
PiercingSolution pierce_arcs_exact(const std::vector<SphericalCap>& arcs,
                                   const Tolerance& tol = {});

// Minimum piercing of open caps of S^2, n <= 20.  Exact set cover over
// candidates built from cap centers and pairwise boundary-circle crossings
// nudged inward along the tangent-gradient bisector.
PiercingSolution pierce_caps_exact(const std::vector<SphericalCap>& caps,
                                   const Tolerance& tol = {});

// Pierces pairwise-intersecting closed balls of E^m with the point set
// {c0} u {c0 + sqrt(3) r0 u_k}: B0 the smallest ball, u_k the centers of a
// verified covering of S^{m-1} at radius <= pi/6.  Output size is exactly
// 1 + |cover| regardless of input order.
PiercingSolution pierce_balls_danzer(const std::vector<EuclideanBall>& balls,
                                     const CoveringSpec& cover,
                                     const Tolerance& tol = {});

// Split of a cap family by a stereographic pole s: caps containing s are
// already pierced by the direction s; the rest project to balls of the
// tangent hyperplane H (given both in ambient and in frame-intrinsic
// coordinates, index-aligned with `reduced`).
struct StereographicReduction {
  std::vector<int> pierced_by_pole;
  std::vector<int> reduced;
  std::vector<EuclideanBall> balls_ambient;
  std::vector<EuclideanBall> balls_intrinsic;
  TangentFrame frame;
};

// Requires s to avoid every cap boundary by > tol.geometry (callers retry
// with a fresh pole otherwise).
StereographicReduction reduce_caps_via_stereographic(
    const std::vector<SphericalCap>& caps, const UnitVector& s,
    const Tolerance& tol = {});

// Exact minimum set cover over bitmask candidates (n_elements <= 64);
// deterministic branch and bound.  Returns indices into `masks`.
std::vector<int> exact_set_cover(const std::vector<std::uint64_t>& masks,
                                 int n_elements);

}  // namespace capbody
