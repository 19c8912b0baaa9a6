#include <doctest.h>

#include <cmath>

#include "capbody/covering.hpp"
#include "capbody/rng.hpp"
#include "capbody/sphere.hpp"
#include "oracles.hpp"

using namespace capbody;

TEST_CASE("built-in circle covers are certified") {
  const Tolerance tol;
  const auto quarter = known_cover(1, M_PI / 4.0, tol);
  REQUIRE(quarter.has_value());
  CHECK(quarter->size() == 4);
  CHECK(quarter->verified == VerifyStatus::certified);

  const auto sixth = known_cover(1, M_PI / 6.0, tol);
  REQUIRE(sixth.has_value());
  CHECK(sixth->size() == 6);
  CHECK(sixth->verified == VerifyStatus::certified);

  CHECK_FALSE(known_cover(2, M_PI / 6.0, tol).has_value());
  CHECK_FALSE(known_cover(1, 0.5, tol).has_value());
}

TEST_CASE("circle verification rejects a genuine hole") {
  const Tolerance tol;
  CoveringSpec spec;
  spec.sphere_dim = 1;
  spec.radius = M_PI / 4.0;
  for (double ang : {0.0, M_PI / 2.0, M_PI}) {
    Vector v(2);
    v << std::cos(ang), std::sin(ang);
    spec.centers.push_back(UnitVector(v));
  }
  const CoverReport report = verify_cover(spec, tol);
  CHECK(report.status == VerifyStatus::unverified);
  REQUIRE(report.uncovered_witness.has_value());
  // The witness really is uncovered.
  const UnitVector w = UnitVector::normalized(*report.uncovered_witness);
  double best = M_PI;
  for (const auto& c : spec.centers)
    best = std::min(best, angular_distance(c, w));
  CHECK(best > spec.radius + tol.predicate);
}

TEST_CASE("sphere verification rejects a genuine hole") {
  const Tolerance tol;
  CoveringSpec spec;
  spec.sphere_dim = 2;
  spec.radius = 0.8;
  // Vertices of a regular tetrahedron: covering radius acos(1/3) ~ 1.23.
  const double s = 1.0 / std::sqrt(3.0);
  for (auto [x, y, z] : {std::tuple{s, s, s},
                         {s, -s, -s},
                         {-s, s, -s},
                         {-s, -s, s}}) {
    Vector v(3);
    v << x, y, z;
    spec.centers.push_back(UnitVector(v));
  }
  const CoverReport report = verify_cover(spec, tol);
  CHECK(report.status == VerifyStatus::unverified);
  REQUIRE(report.uncovered_witness.has_value());
  const UnitVector w = UnitVector::normalized(*report.uncovered_witness);
  double best = M_PI;
  for (const auto& c : spec.centers)
    best = std::min(best, angular_distance(c, w));
  CHECK(best > spec.radius + tol.predicate);
}

TEST_CASE("greedy circle cover reaches the optimal count") {
  const Tolerance tol;
  const CoveringSpec c4 = greedy_cover(1, M_PI / 4.0, 1, 600, tol);
  CHECK(c4.size() == 4);
  CHECK(c4.verified == VerifyStatus::certified);

  const CoveringSpec c6 = greedy_cover(1, M_PI / 6.0 + 1e-9, 1, 600, tol);
  CHECK(c6.size() == 6);
  CHECK(c6.verified == VerifyStatus::certified);
}

TEST_CASE("greedy sphere covers certify and stay small") {
  const Tolerance tol;

  const CoveringSpec wide = greedy_cover(2, 0.9, 7, 400, tol);
  CHECK(wide.verified == VerifyStatus::certified);
  CHECK(wide.size() <= 8);
  CHECK(oracles::covering_radius_mc(wide.centers, 3, 200000, 11) <
        0.9 + 1e-9);

  const CoveringSpec quarter = greedy_cover(2, M_PI / 4.0, 7, 600, tol);
  CHECK(quarter.verified == VerifyStatus::certified);
  CHECK(quarter.size() <= 13);
  CHECK(oracles::covering_radius_mc(quarter.centers, 3, 200000, 12) <
        M_PI / 4.0 + 1e-9);
}

TEST_CASE("higher-dimensional covers are at least probabilistic") {
  const Tolerance tol;
  const CoveringSpec spec = greedy_cover(3, 1.1, 3, 300, tol);
  CHECK(spec.verified != VerifyStatus::unverified);
  CHECK(spec.sphere_dim == 3);
  for (const auto& c : spec.centers) CHECK(c.dim() == 4);
  CHECK(oracles::covering_radius_mc(spec.centers, 4, 200000, 13) <
        1.1 + 1e-6);
}

TEST_CASE("greedy covers are deterministic in the seed") {
  const Tolerance tol;
  const CoveringSpec a = greedy_cover(2, 1.0, 42, 300, tol);
  const CoveringSpec b = greedy_cover(2, 1.0, 42, 300, tol);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.centers.size(); ++i)
    CHECK((a.centers[i].vec() - b.centers[i].vec()).norm() == 0.0);
}

TEST_CASE("rotating a cover clear of forbidden boundaries") {
  const Tolerance tol;
  const CoveringSpec base = *known_cover(1, M_PI / 4.0, tol);

  // Avoid caps whose boundary passes exactly through one of the base
  // centers, so the identity rotation would be rejected.
  std::vector<SphericalCap> avoid;
  Rng rng(606);
  for (int i = 0; i < 5; ++i) {
    const UnitVector c = rng.unit_vector(2);
    const double r =
        angular_distance(c, base.centers[static_cast<size_t>(i % 4)]);
    if (r > 0.05 && r < M_PI - 0.05)
      avoid.push_back(open_cap(c, r));
  }
  REQUIRE(!avoid.empty());

  const CoveringSpec turned = rotate_cover_generic(base, avoid, 5, tol);
  CHECK(turned.size() == base.size());
  CHECK(turned.verified == VerifyStatus::certified);
  for (const auto& u : turned.centers)
    for (const auto& cap : avoid)
      CHECK(std::abs(angular_distance(cap.center, u) - cap.radius) >
            tol.geometry);
  // Still a genuine cover after the rotation.
  const CoverReport report = verify_cover(turned, tol);
  CHECK(report.status == VerifyStatus::certified);
}
