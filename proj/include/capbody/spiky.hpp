#pragma once

#include "capbody/sphere.hpp"
#include "capbody/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace capbody {

enum class Symmetry { none, origin, unconditional };

// Union of a unit ball with finitely many spikes conv(B^d u {x_i}).
// Vertices are stored explicitly, including all symmetry images.
struct SpikyBall {
  int dim = 0;
  Symmetry symmetry = Symmetry::none;
  std::vector<Vector> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
};

// The two caps attached to a vertex x: the base cap (trace of the spike's
// interior on the sphere, radius alpha = arccos(1/|x|) around x/|x|) and the
// piercing cap (directions illuminating x: radius pi/2 - alpha around
// -x/|x|).  Both open.
struct VertexCapPair {
  int vertex_index = -1;
  SphericalCap base;
  SphericalCap piercing;
};

VertexCapPair vertex_cap(const Vector& x, const Tolerance& tol = {});
std::vector<VertexCapPair> vertex_caps(const SpikyBall& ball,
                                       const Tolerance& tol = {});
std::vector<SphericalCap> piercing_caps(const SpikyBall& ball,
                                        const Tolerance& tol = {});

// Smallest value over lambda in [0,1] of the spike membership quadratic
// g(lambda) = |q - lambda x|^2 - (1 - lambda)^2.  q lies in conv(B u {x})
// iff the minimum is <= 0.
double spike_quadratic_min(const Vector& q, const Vector& x);

// Closed membership in the spike of x, with a +-tol.predicate band.
bool point_in_spike(const Vector& q, const Vector& x,
                    const Tolerance& tol = {});

// True iff vertex i is swallowed by no other spike.
bool is_vertex(const SpikyBall& ball, int i, const Tolerance& tol = {});

// Pairwise internal disjointness of caps; tangency allowed within
// tol.predicate.
bool is_packing(const std::vector<SphericalCap>& caps,
                const Tolerance& tol = {});

// Pairwise strict intersection of the open piercing caps (the criterion for
// illumination by 2 directions per vertex-pair).
bool is_two_illuminable(const SpikyBall& ball, const Tolerance& tol = {});

// Convexity via the pairwise segment criterion: for every vertex pair the
// segment [x_i, x_j] stays inside spike_i u spike_j.  Sufficiency: a point
// of conv(B u X) with support {i, j, ...} rewrites through a segment point
// into a combination with smaller support, so covering all pairwise
// segments covers the hull.
bool is_convex(const SpikyBall& ball, const Tolerance& tol = {});

// Margin with which direction d illuminates the vertex of `pair` (positive
// = strictly inside the open piercing cap by that angle).
double illumination_margin(const VertexCapPair& pair, const UnitVector& d);
bool illuminates_vertex(const VertexCapPair& pair, const UnitVector& d,
                        const Tolerance& tol = {});

struct IlluminationReport {
  bool verdict = false;
  bool hull_full = false;
  double min_margin = 0.0;          // worst best-direction margin over vertices
  std::vector<int> witness;         // per vertex: direction index or -1
  std::vector<double> margins;      // per vertex: best margin
};

// Full check that `dirs` illuminates `ball`: every vertex strictly pierced
// with margin >= tol.geometry, and the directions positively span E^d.
IlluminationReport verify_illumination(const SpikyBall& ball,
                                       const DirectionSet& dirs,
                                       const Tolerance& tol = {});

// Structural validation (norms, symmetry closure, vertexhood).  Returns a
// reason string if something is wrong.
std::optional<std::string> check_instance(const SpikyBall& ball,
                                          const Tolerance& tol = {});
void validate_instance(const SpikyBall& ball, const Tolerance& tol = {});

enum class GenKind {
  two_illuminable,
  symmetric_cap_body,
  unconditional_cap_body,
  planar_lifted,
};

// Seeded rejection-sampling generators.  n counts vertices for
// two_illuminable, +- pairs for symmetric_cap_body, sign-flip orbits for
// unconditional_cap_body and lifted disks for planar_lifted.
SpikyBall gen_instance(GenKind kind, int dim, int n, std::uint64_t seed,
                       const Tolerance& tol = {});

}  // namespace capbody
