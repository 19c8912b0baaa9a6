#pragma once

#include "capbody/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace capbody {

enum class VerifyStatus { unverified, probabilistic, certified };

// Centers of equal caps of the given angular radius intended to cover
// S^{sphere_dim} (centers live in E^{sphere_dim + 1}).
struct CoveringSpec {
  int sphere_dim = 0;
  double radius = 0.0;
  std::vector<UnitVector> centers;
  VerifyStatus verified = VerifyStatus::unverified;

  int size() const { return static_cast<int>(centers.size()); }
};

struct CoverReport {
  VerifyStatus status = VerifyStatus::unverified;
  double min_margin = 0.0;   // worst-case slack alpha - dist observed
  std::int64_t checked_points = 0;
  std::string note;
  std::optional<Vector> uncovered_witness;
};

// Hand-verified table entries (circle covers by 4 caps of pi/4 and 6 of
// pi/6).  Returned pre-certified; nullopt when no table entry matches.
std::optional<CoveringSpec> known_cover(int sphere_dim, double alpha,
                                        const Tolerance& tol = {});

// Checks the covering claim.  sphere_dim 1: exact cyclic-gap certification.
// sphere_dim 2: subdivided-icosahedron mesh with per-triangle circumradius
// accounting (certified when every mesh point is covered with margin >= the
// mesh resolution rho).  sphere_dim >= 3: seeded sampling, at best
// `probabilistic`.
CoverReport verify_cover(const CoveringSpec& spec, const Tolerance& tol = {});

// verify_cover + stamps the status into the spec.
CoverReport certify_cover(CoveringSpec& spec, const Tolerance& tol = {});

// Seeded cover search: greedy seeding on a working mesh, minimax refinement,
// then drop-and-repair descent; the best certified result over a few
// restarts is returned (already passed through certify_cover).
CoveringSpec greedy_cover(int sphere_dim, double alpha, std::uint64_t seed,
                          int candidate_count = 600,
                          const Tolerance& tol = {});

// Applies a seeded random rotation to the cover so that every rotated
// center avoids the boundaries of all constraint caps by >= tol.geometry.
// The covering property and verification status are rotation-invariant.
CoveringSpec rotate_cover_generic(const CoveringSpec& spec,
                                  const std::vector<SphericalCap>& avoid,
                                  std::uint64_t seed,
                                  const Tolerance& tol = {});

}  // namespace capbody
