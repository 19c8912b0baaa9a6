#include <doctest.h>

#include <cmath>

#include "capbody/rng.hpp"
#include "capbody/simplex.hpp"
#include "capbody/sphere.hpp"
#include "oracles.hpp"

using namespace capbody;

namespace {

UnitVector axis_vec(int dim, int j, double sign = 1.0) {
  Vector v = Vector::Zero(dim);
  v[j] = sign;
  return UnitVector(v);
}

UnitVector from_angle(double t) {
  Vector v(2);
  v << std::cos(t), std::sin(t);
  return UnitVector(v);
}

}  // namespace

TEST_CASE("angular distance basics") {
  const auto e1 = axis_vec(3, 0), e2 = axis_vec(3, 1);
  CHECK(angular_distance(e1, e2) == doctest::Approx(M_PI_2).epsilon(1e-12));
  CHECK(angular_distance(e1, e1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(angular_distance(e1, -e1) == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK_THROWS_AS(angular_distance(e1, axis_vec(4, 0)), std::invalid_argument);
}

TEST_CASE("cap membership honors the open/closed band") {
  const Tolerance tol;
  const auto c = axis_vec(3, 2);
  const double r = 0.7;
  const auto boundary = UnitVector::normalized(
      std::cos(r) * c.vec() + std::sin(r) * axis_vec(3, 0).vec());
  CHECK(cap_contains(closed_cap(c, r), boundary, tol));
  CHECK_FALSE(cap_contains(open_cap(c, r), boundary, tol));
  const auto inside = UnitVector::normalized(
      std::cos(r - 0.1) * c.vec() + std::sin(r - 0.1) * axis_vec(3, 0).vec());
  CHECK(cap_contains(open_cap(c, r), inside, tol));
  const auto outside = UnitVector::normalized(
      std::cos(r + 0.1) * c.vec() + std::sin(r + 0.1) * axis_vec(3, 0).vec());
  CHECK_FALSE(cap_contains(closed_cap(c, r), outside, tol));
  CHECK(cap_margin(open_cap(c, r), inside) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("cap intersection predicate") {
  const Tolerance tol;
  const auto a = from_angle(0.0), b = from_angle(0.5);
  CHECK(caps_intersect(open_cap(a, 0.3), open_cap(b, 0.3), tol));
  CHECK_FALSE(caps_intersect(open_cap(a, 0.2), open_cap(b, 0.2), tol));
  // Exact tangency: only closed-closed touches.
  CHECK(caps_intersect(closed_cap(a, 0.25), closed_cap(b, 0.25), tol));
  CHECK_FALSE(caps_intersect(open_cap(a, 0.25), open_cap(b, 0.25), tol));
  CHECK_FALSE(caps_intersect(open_cap(a, 0.25), closed_cap(b, 0.25), tol));
  CHECK_THROWS_AS(caps_intersect(open_cap(a, M_PI_2), open_cap(b, 0.2), tol),
                  std::domain_error);
}

TEST_CASE("equatorial slice matches the spherical right-triangle relation") {
  const Tolerance tol;
  const auto axis = axis_vec(3, 2);

  SUBCASE("center on the equator keeps its radius") {
    const auto out = equatorial_slice(open_cap(axis_vec(3, 0), 0.3), axis, tol);
    REQUIRE(out.kind == SliceOutcome::Kind::nonempty);
    CHECK(out.slice->cap.radius == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(out.slice->cap.open);
  }

  SUBCASE("tilted center: gamma = acos(cos beta / sin theta)") {
    const double theta = M_PI / 3.0, beta = 0.7;  // cos(beta) < sin(theta)
    const auto center = UnitVector::normalized(
        std::cos(theta) * axis.vec() + std::sin(theta) * axis_vec(3, 0).vec());
    const auto out = equatorial_slice(open_cap(center, beta), axis, tol);
    REQUIRE(out.kind == SliceOutcome::Kind::nonempty);
    const double gamma = std::acos(std::cos(beta) / std::sin(theta));
    CHECK(out.slice->cap.radius == doctest::Approx(gamma).epsilon(1e-10));
    // Boundary consistency: points of the equator at intrinsic distance
    // gamma from the slice center are at ambient distance beta from the cap
    // center.
    const auto& frame = out.slice->frame;
    const Vector u0 = out.slice->cap.center.vec();
    Vector perp(2);
    perp << -u0[1], u0[0];
    const Vector on_boundary =
        frame.to_ambient(std::cos(gamma) * u0 + std::sin(gamma) * perp);
    CHECK(angular_distance(UnitVector::normalized(on_boundary), center) ==
          doctest::Approx(beta).epsilon(1e-9));
  }

  SUBCASE("cap too far from the equator is empty") {
    const double theta = 0.3, beta = 0.2;  // beta < pi/2 - theta
    const auto center = UnitVector::normalized(
        std::cos(theta) * axis.vec() + std::sin(theta) * axis_vec(3, 0).vec());
    CHECK(equatorial_slice(open_cap(center, beta), axis, tol).kind ==
          SliceOutcome::Kind::empty);
  }

  SUBCASE("cap centered on the axis is degenerate") {
    CHECK(equatorial_slice(open_cap(axis, 0.4), axis, tol).kind ==
          SliceOutcome::Kind::degenerate_axis);
    CHECK(equatorial_slice(open_cap(-axis, 0.4), axis, tol).kind ==
          SliceOutcome::Kind::degenerate_axis);
  }

  SUBCASE("radius >= pi/2 is rejected") {
    CHECK_THROWS_AS(
        equatorial_slice(open_cap(axis_vec(3, 0), M_PI_2), axis, tol),
        std::domain_error);
  }
}

TEST_CASE("stereographic projection round trip and cap image") {
  const Tolerance tol;
  Rng rng(123);
  for (int d : {3, 4, 6}) {
    const UnitVector s = rng.unit_vector(d);
    for (int it = 0; it < 30; ++it) {
      UnitVector p = rng.unit_vector(d);
      if (angular_distance(p, s) < 0.2) continue;
      const Vector x = stereographic_project(s, p, tol);
      CHECK(std::abs(x.dot(s.vec()) + 1.0) < 1e-9);  // lands on H
      const UnitVector back = stereographic_lift(s, x);
      CHECK(angular_distance(back, p) < 1e-9);
    }
  }
}

TEST_CASE("cap image ball and ball preimage cap invert each other") {
  const Tolerance tol;
  Rng rng(77);
  int tested = 0;
  while (tested < 25) {
    const int d = 3 + static_cast<int>(rng.uniform_int(0, 2));
    const UnitVector s = rng.unit_vector(d);
    const UnitVector c = rng.unit_vector(d);
    const double r = rng.uniform(0.1, 1.0);
    if (angular_distance(s, c) < r + 0.1) continue;  // cap must avoid pole
    const SphericalCap cap = open_cap(c, r);
    const EuclideanBall ball = cap_image_ball(s, cap, tol);
    const SphericalCap rebuilt = ball_preimage_cap(s, ball, true, tol);
    CHECK(angular_distance(rebuilt.center, cap.center) < 1e-7);
    CHECK(rebuilt.radius == doctest::Approx(cap.radius).epsilon(1e-7));
    // Membership transport: points of the cap project into the ball.
    for (int k = 0; k < 40; ++k) {
      const UnitVector q = rng.unit_in_cap(c, r * 0.98);
      const Vector qx = stereographic_project(s, q, tol);
      CHECK((qx - ball.center).norm() <= ball.radius + 1e-7);
    }
    const UnitVector far = rng.unit_vector(d);
    if (angular_distance(far, c) > r + 0.05 &&
        angular_distance(far, s) > 0.05) {
      const Vector fx = stereographic_project(s, far, tol);
      CHECK((fx - ball.center).norm() >= ball.radius - 1e-7);
    }
    ++tested;
  }
}

TEST_CASE("positive hull decision") {
  const Tolerance tol;

  SUBCASE("signed axes span positively") {
    for (int d : {2, 3, 5}) {
      std::vector<UnitVector> dirs;
      for (int j = 0; j < d; ++j) {
        dirs.push_back(axis_vec(d, j, 1.0));
        dirs.push_back(axis_vec(d, j, -1.0));
      }
      CHECK(positive_hull_full(dirs, d, tol));
    }
  }

  SUBCASE("plain axes do not") {
    for (int d : {2, 3, 5}) {
      std::vector<UnitVector> dirs;
      for (int j = 0; j < d; ++j) dirs.push_back(axis_vec(d, j));
      CHECK_FALSE(positive_hull_full(dirs, d, tol));
    }
  }

  SUBCASE("simplex directions span positively") {
    for (int d : {2, 3, 6}) {
      std::vector<UnitVector> dirs;
      Vector sum = Vector::Zero(d);
      for (int j = 0; j < d; ++j) {
        dirs.push_back(axis_vec(d, j));
        sum += dirs.back().vec();
      }
      dirs.push_back(UnitVector::normalized(-sum));
      CHECK(positive_hull_full(dirs, d, tol));
    }
  }

  SUBCASE("a set inside one open halfspace never spans") {
    Rng rng(5);
    const int d = 4;
    const UnitVector n = rng.unit_vector(d);
    std::vector<UnitVector> dirs;
    while (dirs.size() < 10) {
      const UnitVector u = rng.unit_vector(d);
      if (u.dot(n) > 0.05) dirs.push_back(u);
    }
    CHECK_FALSE(positive_hull_full(dirs, d, tol));
  }

  SUBCASE("fewer than d+1 directions never span") {
    Rng rng(9);
    std::vector<UnitVector> dirs;
    for (int k = 0; k < 4; ++k) dirs.push_back(rng.unit_vector(4));
    CHECK_FALSE(positive_hull_full(dirs, 4, tol));
  }
}

TEST_CASE("positive hull completion is minimal on full-rank input") {
  const Tolerance tol;
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform_int(0, 3));
    std::vector<UnitVector> dirs;
    for (int k = 0; k < d; ++k) dirs.push_back(rng.unit_vector(d));
    if (rank_of(dirs) < d) continue;
    if (positive_hull_full(dirs, d, tol)) continue;
    const auto added = positive_hull_completion(dirs, d, tol);
    CHECK(added.size() == 1);  // a single balancer completes full-rank sets
    auto all = dirs;
    for (const auto& u : added) all.push_back(u);
    CHECK(positive_hull_full(all, d, tol));
  }
}

TEST_CASE("positive hull completion repairs rank-deficient input") {
  const Tolerance tol;
  const int d = 4;
  std::vector<UnitVector> dirs = {axis_vec(d, 0), axis_vec(d, 1)};
  const auto added = positive_hull_completion(dirs, d, tol);
  CHECK(static_cast<int>(added.size()) == d - 2 + 1);
  auto all = dirs;
  for (const auto& u : added) all.push_back(u);
  CHECK(positive_hull_full(all, d, tol));

  std::vector<UnitVector> full = {axis_vec(3, 0),  axis_vec(3, 1),
                                  axis_vec(3, 2),  axis_vec(3, 0, -1.0),
                                  axis_vec(3, 1, -1.0), axis_vec(3, 2, -1.0)};
  CHECK(positive_hull_completion(full, 3, tol).empty());
}

TEST_CASE("span complement is orthonormal and orthogonal to the input") {
  std::vector<UnitVector> dirs = {axis_vec(5, 0), axis_vec(5, 2)};
  const auto comp = span_complement(dirs, 5);
  REQUIRE(comp.size() == 3);
  for (size_t i = 0; i < comp.size(); ++i) {
    for (const auto& u : dirs) CHECK(std::abs(comp[i].dot(u)) < 1e-9);
    for (size_t j = i + 1; j < comp.size(); ++j)
      CHECK(std::abs(comp[i].dot(comp[j])) < 1e-9);
  }
}

TEST_CASE("linear program corner cases") {
  SUBCASE("bounded optimum") {
    Matrix a(1, 2);
    a << 1.0, 1.0;
    Vector b(1);
    b << 1.0;
    Vector c(2);
    c << 1.0, 2.0;
    const LpResult r = solve_lp_max(a, b, c);
    REQUIRE(r.status == LpResult::Status::optimal);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("infeasible") {
    Matrix a(1, 2);
    a << -1.0, -1.0;
    Vector b(1);
    b << 1.0;
    Vector c(2);
    c << 1.0, 0.0;
    CHECK(solve_lp_max(a, b, c).status == LpResult::Status::infeasible);
  }
  SUBCASE("unbounded") {
    Matrix a(1, 2);
    a << 1.0, -1.0;
    Vector b(1);
    b << 0.0;
    Vector c(2);
    c << 1.0, 0.0;
    CHECK(solve_lp_max(a, b, c).status == LpResult::Status::unbounded);
  }
  SUBCASE("degenerate equality system") {
    Matrix a(2, 2);
    a << 1.0, 1.0, 2.0, 2.0;  // redundant second row
    Vector b(2);
    b << 1.0, 2.0;
    Vector c(2);
    c << 3.0, 1.0;
    const LpResult r = solve_lp_max(a, b, c);
    REQUIRE(r.status == LpResult::Status::optimal);
    CHECK(r.value == doctest::Approx(3.0).epsilon(1e-9));
  }
}
