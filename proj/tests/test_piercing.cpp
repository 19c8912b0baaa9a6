#include <doctest.h>

#include <cmath>

#include "capbody/piercing.hpp"
#include "capbody/rng.hpp"
#include "oracles.hpp"

using namespace capbody;

namespace {

SphericalCap arc(double center_angle, double radius) {
  Vector v(2);
  v << std::cos(center_angle), std::sin(center_angle);
  return open_cap(UnitVector(v), radius);
}

void check_pierces_all(const PiercingSolution& sol,
                       const std::vector<SphericalCap>& caps) {
  REQUIRE(sol.witness.size() == caps.size());
  for (size_t i = 0; i < caps.size(); ++i) {
    const int w = sol.witness[i];
    REQUIRE(w >= 0);
    REQUIRE(w < static_cast<int>(sol.points.size()));
    const UnitVector p =
        UnitVector::normalized(sol.points[static_cast<size_t>(w)]);
    CHECK(cap_margin(caps[i], p) > 0.0);
  }
}

}  // namespace

TEST_CASE("exact set cover matches brute force") {
  Rng rng(314);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(0, 8));
    const int m = 5 + static_cast<int>(rng.uniform_int(0, 9));
    std::vector<std::uint64_t> masks(static_cast<size_t>(m), 0);
    for (auto& mask : masks)
      for (int e = 0; e < n; ++e)
        if (rng.uniform() < 0.35) mask |= std::uint64_t{1} << e;
    // Guarantee feasibility.
    for (int e = 0; e < n; ++e)
      masks[rng.uniform_int(0, static_cast<std::uint64_t>(m - 1))] |=
          std::uint64_t{1} << e;
    const auto picked = exact_set_cover(masks, n);
    std::uint64_t got = 0;
    for (int i : picked) got |= masks[static_cast<size_t>(i)];
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    CHECK(got == full);
    CHECK(static_cast<int>(picked.size()) ==
          oracles::set_cover_brute(masks, n));
  }
  CHECK_THROWS_AS(exact_set_cover({0x1, 0x2}, 3), internal_error);
}

TEST_CASE("arc piercing: common point collapses to one") {
  const Tolerance tol;
  const std::vector<SphericalCap> caps = {arc(0.0, 0.5), arc(0.3, 0.4),
                                          arc(-0.2, 0.45)};
  const PiercingSolution sol = pierce_arcs_exact(caps, tol);
  CHECK(sol.optimal);
  CHECK(sol.points.size() == 1);
  check_pierces_all(sol, caps);
}

TEST_CASE("arc piercing: opposite pairs need two points") {
  const Tolerance tol;
  const std::vector<SphericalCap> caps = {arc(0.0, 0.4), arc(0.2, 0.4),
                                          arc(M_PI, 0.4), arc(M_PI - 0.3, 0.4)};
  const PiercingSolution sol = pierce_arcs_exact(caps, tol);
  CHECK(sol.points.size() == 2);
  check_pierces_all(sol, caps);
}

TEST_CASE("arc piercing is optimal against a dense grid") {
  const Tolerance tol;
  Rng rng(777);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 5));
    std::vector<SphericalCap> caps;
    for (int i = 0; i < n; ++i)
      caps.push_back(arc(rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.2, 1.2)));
    const PiercingSolution sol = pierce_arcs_exact(caps, tol);
    check_pierces_all(sol, caps);

    // No strictly smaller piercing set exists among a dense angle grid.
    const int grid = 1440;
    const auto pierced_by = [&](double ang) {
      std::uint64_t mask = 0;
      Vector v(2);
      v << std::cos(ang), std::sin(ang);
      const UnitVector u(v);
      for (int i = 0; i < n; ++i)
        if (cap_margin(caps[static_cast<size_t>(i)], u) > 1e-9)
          mask |= std::uint64_t{1} << i;
      return mask;
    };
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    if (sol.points.size() >= 2) {
      bool single = false;
      for (int g = 0; g < grid && !single; ++g)
        single = pierced_by(2.0 * M_PI * g / grid) == full;
      CHECK_FALSE(single);
    }
    if (sol.points.size() >= 3) {
      std::vector<std::uint64_t> masks(static_cast<size_t>(grid));
      for (int g = 0; g < grid; ++g)
        masks[static_cast<size_t>(g)] = pierced_by(2.0 * M_PI * g / grid);
      bool pair = false;
      for (int g1 = 0; g1 < grid && !pair; ++g1)
        for (int g2 = g1 + 1; g2 < grid && !pair; ++g2)
          pair = (masks[static_cast<size_t>(g1)] |
                  masks[static_cast<size_t>(g2)]) == full;
      CHECK_FALSE(pair);
    }
  }
}

TEST_CASE("cap piercing on the 2-sphere") {
  const Tolerance tol;

  SUBCASE("common intersection collapses to one point") {
    std::vector<SphericalCap> caps;
    Rng rng(5);
    for (int i = 0; i < 5; ++i) {
      const UnitVector c = rng.unit_in_cap(UnitVector::normalized(Vector::Unit(3, 2)), 0.25);
      caps.push_back(open_cap(c, 0.6));
    }
    const PiercingSolution sol = pierce_caps_exact(caps, tol);
    CHECK(sol.optimal);
    CHECK(sol.points.size() == 1);
    check_pierces_all(sol, caps);
  }

  SUBCASE("antipodal clusters need two points") {
    std::vector<SphericalCap> caps = {
        open_cap(UnitVector::normalized(Vector::Unit(3, 2)), 0.4),
        open_cap(UnitVector::normalized(Vector(Vector::Unit(3, 2) * -1.0)), 0.4),
    };
    const PiercingSolution sol = pierce_caps_exact(caps, tol);
    CHECK(sol.points.size() == 2);
    check_pierces_all(sol, caps);
  }

  SUBCASE("random families: correct and grid-optimal") {
    Rng rng(99);
    const auto grid = oracles::fibonacci_sphere(1600);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 3 + static_cast<int>(rng.uniform_int(0, 4));
      std::vector<SphericalCap> caps;
      for (int i = 0; i < n; ++i)
        caps.push_back(open_cap(rng.unit_vector(3), rng.uniform(0.5, 1.3)));
      const PiercingSolution sol = pierce_caps_exact(caps, tol);
      check_pierces_all(sol, caps);

      std::vector<std::uint64_t> masks;
      masks.reserve(grid.size());
      for (const auto& g : grid) {
        std::uint64_t mask = 0;
        const UnitVector u = UnitVector::normalized(g);
        for (int i = 0; i < n; ++i)
          if (cap_margin(caps[static_cast<size_t>(i)], u) > 1e-9)
            mask |= std::uint64_t{1} << i;
        masks.push_back(mask);
      }
      const std::uint64_t full = (std::uint64_t{1} << n) - 1;
      if (sol.points.size() >= 2) {
        bool single = false;
        for (const auto m : masks)
          if (m == full) {
            single = true;
            break;
          }
        CHECK_FALSE(single);
      }
      if (sol.points.size() >= 3) {
        bool pair = false;
        for (size_t i = 0; i < masks.size() && !pair; ++i) {
          if (masks[i] == 0) continue;
          for (size_t j = i + 1; j < masks.size() && !pair; ++j)
            pair = (masks[i] | masks[j]) == full;
        }
        CHECK_FALSE(pair);
      }
    }
  }
}

TEST_CASE("smallest-ball piercing with a hexagonal direction cover") {
  const Tolerance tol;
  const CoveringSpec cover = *known_cover(1, M_PI / 6.0, tol);
  REQUIRE(cover.verified == VerifyStatus::certified);
  REQUIRE(cover.size() == 6);

  SUBCASE("worked example with three unit disks") {
    Vector c1(2), c2(2), c3(2);
    c1 << 0.0, 0.0;
    c2 << 2.0, 0.0;
    c3 << 1.0, 1.7;
    const std::vector<EuclideanBall> balls = {
        EuclideanBall(c1, 1.0), EuclideanBall(c2, 1.0), EuclideanBall(c3, 1.0)};
    const PiercingSolution sol = pierce_balls_danzer(balls, cover, tol);
    CHECK(sol.points.size() == 7);  // center + 6 satellites
    CHECK_FALSE(sol.optimal);
    CHECK(sol.min_margin >= -tol.predicate);
    for (size_t i = 0; i < balls.size(); ++i) {
      const int w = sol.witness[i];
      REQUIRE(w >= 0);
      CHECK((sol.points[static_cast<size_t>(w)] - balls[i].center).norm() <=
            balls[i].radius + tol.predicate);
    }
    // The satellite at angle 0 sits at sqrt(3) and reaches the second disk.
    CHECK((sol.points[1] - c2).norm() == doctest::Approx(2.0 - std::sqrt(3.0)));
  }

  SUBCASE("random pairwise-intersecting families are pierced") {
    Rng rng(2718);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 6));
      std::vector<EuclideanBall> balls;
      for (int i = 0; i < n; ++i) {
        Vector c(2);
        c << rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9);
        balls.emplace_back(c, rng.uniform(1.0, 2.0));
      }
      const PiercingSolution sol = pierce_balls_danzer(balls, cover, tol);
      for (size_t i = 0; i < balls.size(); ++i) {
        const int w = sol.witness[i];
        REQUIRE(w >= 0);
        CHECK((sol.points[static_cast<size_t>(w)] - balls[i].center).norm() <=
              balls[i].radius + tol.predicate);
      }
    }
  }

  SUBCASE("validation") {
    Vector a = Vector::Zero(2), b = Vector::Zero(2);
    b[0] = 5.0;
    const std::vector<EuclideanBall> disjoint = {EuclideanBall(a, 1.0),
                                                 EuclideanBall(b, 1.0)};
    CHECK_THROWS_AS(pierce_balls_danzer(disjoint, cover, tol),
                    std::invalid_argument);

    const CoveringSpec wide = *known_cover(1, M_PI / 4.0, tol);
    const std::vector<EuclideanBall> pair = {EuclideanBall(a, 1.0)};
    CHECK_THROWS_AS(pierce_balls_danzer(pair, wide, tol),
                    std::invalid_argument);

    CoveringSpec unverified = cover;
    unverified.verified = VerifyStatus::unverified;
    CHECK_THROWS_AS(pierce_balls_danzer(pair, unverified, tol),
                    std::invalid_argument);
  }
}

TEST_CASE("stereographic reduction splits and transports membership") {
  const Tolerance tol;
  Rng rng(4242);
  int families = 0;
  while (families < 8) {
    const int d = 4 + static_cast<int>(rng.uniform_int(0, 2));
    const UnitVector s = rng.unit_vector(d);
    std::vector<SphericalCap> caps;
    for (int i = 0; i < 6; ++i)
      caps.push_back(open_cap(rng.unit_vector(d), rng.uniform(0.3, 1.0)));
    bool clear = true;
    for (const auto& cap : caps)
      clear = clear &&
              std::abs(angular_distance(s, cap.center) - cap.radius) > 0.05;
    if (!clear) continue;
    ++families;

    const StereographicReduction red =
        reduce_caps_via_stereographic(caps, s, tol);
    CHECK(red.pierced_by_pole.size() + red.reduced.size() == caps.size());
    for (int i : red.pierced_by_pole)
      CHECK(cap_margin(caps[static_cast<size_t>(i)], s) > 0.0);
    REQUIRE(red.balls_ambient.size() == red.reduced.size());
    REQUIRE(red.balls_intrinsic.size() == red.reduced.size());

    for (size_t k = 0; k < red.reduced.size(); ++k) {
      const auto& cap = caps[static_cast<size_t>(red.reduced[k])];
      CHECK(cap_margin(cap, s) < 0.0);
      // Ambient and intrinsic coordinates describe the same ball.
      const Vector back = red.frame.to_ambient(red.balls_intrinsic[k].center);
      CHECK((back - red.balls_ambient[k].center).norm() < 1e-9);
      CHECK(red.balls_intrinsic[k].radius ==
            doctest::Approx(red.balls_ambient[k].radius));
      // Membership transport via sampling.
      for (int t = 0; t < 25; ++t) {
        const UnitVector q = rng.unit_in_cap(cap.center, cap.radius * 0.97);
        const Vector qx = stereographic_project(s, q, tol);
        CHECK((qx - red.balls_ambient[k].center).norm() <=
              red.balls_ambient[k].radius + 1e-7);
      }
    }
  }

  // A pole on a cap boundary is rejected.
  const UnitVector pole = UnitVector::normalized(Vector::Unit(4, 0));
  const double r = 0.8;
  const UnitVector c = UnitVector::normalized(
      std::cos(r) * Vector::Unit(4, 0) + std::sin(r) * Vector::Unit(4, 1));
  CHECK_THROWS_AS(
      reduce_caps_via_stereographic({open_cap(c, r)}, pole, tol),
      std::invalid_argument);
}
