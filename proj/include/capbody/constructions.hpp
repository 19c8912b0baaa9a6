#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capbody/covering.hpp"
#include "capbody/spiky.hpp"
#include "capbody/types.hpp"

namespace capbody {

// Output of an illumination construction: the direction set, the full
// verification report it passed, and bookkeeping about how it was built.
struct ConstructionResult {
  DirectionSet directions;
  IlluminationReport report;
  std::string method;
  int stated_bound = 0;      // size guarantee of the method used
  int piercing_count = 0;    // directions spent on piercing before completion
  int cover_size = 0;        // sphere-cover size consumed, when one was used
  double phi = 0.0;          // tilt angle, for the tilted-axes method
  bool two_d_sufficient = false;  // unconditional: +/- e_j alone verified
};

// Plane: optimal piercing of the arc family plus a minimal positive-spanning
// completion; at most three directions for a 2-illuminable spiky ball.
ConstructionResult illuminate_2d(const SpikyBall& ball,
                                 const Tolerance& tol = Tolerance());

// Space: optimal piercing of the cap family (at most four points for
// pairwise-intersecting caps) plus completion; at most five directions.
ConstructionResult illuminate_3d(const SpikyBall& ball,
                                 const Tolerance& tol = Tolerance());

// Dimension >= 4: stereographic reduction of the piercing caps to balls in a
// tangent hyperplane, smallest-ball piercing driven by a pi/6 cover of the
// equatorial sphere, lift back, completion.  At most 3 + cover size.
// A pre-verified cover of S^(d-2) with radius pi/6 may be supplied; otherwise
// one is built (table lookup or greedy search).
ConstructionResult illuminate_general(const SpikyBall& ball,
                                      std::uint64_t seed,
                                      const Tolerance& tol = Tolerance(),
                                      const CoveringSpec* cover = nullptr);

// Origin-symmetric cap body, dimension >= 3: both poles of the widest
// piercing cap plus a pi/4 cover of the equator rotated clear of the slice
// boundaries.  Exactly 2 + cover size directions.
ConstructionResult illuminate_symmetric(const SpikyBall& ball,
                                        std::uint64_t seed,
                                        const Tolerance& tol = Tolerance(),
                                        const CoveringSpec* cover = nullptr);

// Unconditionally symmetric cap body: the 2d signed coordinate directions
// when they verify, otherwise 4d tilted axes with a halving tilt angle.
ConstructionResult illuminate_unconditional(const SpikyBall& ball,
                                            const Tolerance& tol = Tolerance());

// Dispatch on symmetry class and dimension.
ConstructionResult illuminate(const SpikyBall& ball, std::uint64_t seed,
                              const Tolerance& tol = Tolerance(),
                              const CoveringSpec* cover = nullptr);

// A piercing cap is "k-spanning" when its center sits at (+/-1, ..., +/-1)/sqrt(k)
// on a k-coordinate support and its radius is arccos(1/sqrt(k)): the cap is
// tangent to every signed axis direction of its support, so axis directions
// graze it without entering.
struct KSpanningSignature {
  int k = 0;
  std::vector<int> support;  // ascending coordinate indices
  std::vector<int> signs;    // +1/-1 per support coordinate
};

std::optional<KSpanningSignature> classify_k_spanning(
    const SphericalCap& cap, const Tolerance& tol = Tolerance());

SphericalCap cap_from_signature(const KSpanningSignature& sig, int dim);

// Whether some signed multiple of `axis` lies strictly inside the cap.
bool escape_test(const SphericalCap& cap, const UnitVector& axis,
                 const Tolerance& tol = Tolerance());

// The 4d tilted axes: for each coordinate j both tilt polarities
// cos(phi) e_j +/- (sin(phi)/sqrt(d-1)) sum_{l != j} e_l and their negatives.
std::vector<UnitVector> build_uv_vectors(int dim, double phi);

}  // namespace capbody
