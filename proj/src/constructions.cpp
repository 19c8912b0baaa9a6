#include "capbody/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "capbody/piercing.hpp"
#include "capbody/rng.hpp"
#include "capbody/sphere.hpp"

namespace capbody {

namespace {

double wrap_to_pi(double t) {
  while (t > M_PI) t -= 2.0 * M_PI;
  while (t < -M_PI) t += 2.0 * M_PI;
  return t;
}

// Move each piercing point of `sol` to the deepest position inside the arcs
// assigned to it (exact 1-center: the midpoint of the intersection interval).
void recenter_arc_points(PiercingSolution& sol,
                         const std::vector<SphericalCap>& arcs) {
  for (size_t t = 0; t < sol.points.size(); ++t) {
    const double psi = std::atan2(sol.points[t][1], sol.points[t][0]);
    double lo = -M_PI, hi = M_PI;
    bool any = false;
    for (size_t i = 0; i < arcs.size(); ++i) {
      if (sol.witness[i] != static_cast<int>(t)) continue;
      const auto& c = arcs[i].center.vec();
      const double rel = wrap_to_pi(std::atan2(c[1], c[0]) - psi);
      lo = std::max(lo, rel - arcs[i].radius);
      hi = std::min(hi, rel + arcs[i].radius);
      any = true;
    }
    if (!any || !(lo < hi)) continue;
    const double ang = psi + (lo + hi) / 2.0;
    Vector p(2);
    p << std::cos(ang), std::sin(ang);
    sol.points[t] = p;
  }
}

// Greedy deepening on the sphere: pull the point toward the center of its
// currently shallowest assigned cap, keeping the best position seen.
void deepen_cap_points(PiercingSolution& sol,
                       const std::vector<SphericalCap>& caps) {
  for (size_t t = 0; t < sol.points.size(); ++t) {
    std::vector<int> mine;
    for (size_t i = 0; i < caps.size(); ++i)
      if (sol.witness[i] == static_cast<int>(t))
        mine.push_back(static_cast<int>(i));
    if (mine.empty()) continue;
    const auto margin_at = [&](const UnitVector& p) {
      double m = M_PI;
      int worst = mine.front();
      for (int i : mine) {
        const double mi = cap_margin(caps[static_cast<size_t>(i)], p);
        if (mi < m) {
          m = mi;
          worst = i;
        }
      }
      return std::pair<double, int>(m, worst);
    };
    UnitVector p = UnitVector::normalized(sol.points[t]);
    UnitVector best = p;
    double best_margin = margin_at(p).first;
    for (int it = 0; it < 48; ++it) {
      const auto [m, worst] = margin_at(p);
      const double gamma = 0.3 * std::exp(-it / 12.0) + 0.01;
      const Vector pulled =
          p.vec() + gamma * (caps[static_cast<size_t>(worst)].center.vec() -
                             p.vec());
      if (pulled.norm() < 1e-12) break;
      p = UnitVector::normalized(pulled);
      const double mp = margin_at(p).first;
      if (mp > best_margin) {
        best_margin = mp;
        best = p;
      }
    }
    sol.points[t] = best.vec();
  }
}

void require_two_illuminable(const SpikyBall& ball, const Tolerance& tol) {
  if (!is_two_illuminable(ball, tol))
    throw std::invalid_argument(
        "instance is not 2-illuminable (piercing caps do not pairwise "
        "intersect)");
}

void check_cover_for(const CoveringSpec& cover, int sphere_dim, double alpha,
                     const Tolerance& tol) {
  if (cover.sphere_dim != sphere_dim)
    throw std::invalid_argument("cover is for the wrong sphere dimension");
  if (cover.radius > alpha + tol.predicate)
    throw std::invalid_argument("cover radius exceeds the required angle");
  if (cover.verified == VerifyStatus::unverified)
    throw std::invalid_argument("cover has not been verified");
}

ConstructionResult finish_with_completion(const SpikyBall& ball,
                                          DirectionSet dirs,
                                          std::string method, int stated,
                                          int cover_size,
                                          const Tolerance& tol) {
  ConstructionResult res;
  res.piercing_count = dirs.size();
  for (auto& u : positive_hull_completion(dirs.directions, ball.dim, tol))
    dirs.push(std::move(u));
  res.directions = std::move(dirs);
  res.report = verify_illumination(ball, res.directions, tol);
  res.method = std::move(method);
  res.stated_bound = stated;
  res.cover_size = cover_size;
  return res;
}

}  // namespace

ConstructionResult illuminate_2d(const SpikyBall& ball, const Tolerance& tol) {
  tol.validate();
  if (ball.dim != 2)
    throw std::invalid_argument("planar construction needs dimension 2");
  require_two_illuminable(ball, tol);
  const auto caps = piercing_caps(ball, tol);
  PiercingSolution sol = pierce_arcs_exact(caps, tol);
  recenter_arc_points(sol, caps);
  DirectionSet dirs;
  dirs.dim = 2;
  for (const auto& p : sol.points) dirs.push(UnitVector::normalized(p));
  return finish_with_completion(ball, std::move(dirs), "arc-piercing", 3, 0,
                                tol);
}

ConstructionResult illuminate_3d(const SpikyBall& ball, const Tolerance& tol) {
  tol.validate();
  if (ball.dim != 3)
    throw std::invalid_argument("spatial construction needs dimension 3");
  require_two_illuminable(ball, tol);
  const auto caps = piercing_caps(ball, tol);
  PiercingSolution sol = pierce_caps_exact(caps, tol);
  deepen_cap_points(sol, caps);
  DirectionSet dirs;
  dirs.dim = 3;
  for (const auto& p : sol.points) dirs.push(UnitVector::normalized(p));
  return finish_with_completion(ball, std::move(dirs), "cap-piercing", 5, 0,
                                tol);
}

ConstructionResult illuminate_general(const SpikyBall& ball,
                                      std::uint64_t seed, const Tolerance& tol,
                                      const CoveringSpec* cover) {
  tol.validate();
  const int d = ball.dim;
  if (d < 4)
    throw std::invalid_argument(
        "stereographic construction needs dimension >= 4");
  require_two_illuminable(ball, tol);
  const auto caps = piercing_caps(ball, tol);

  CoveringSpec owned;
  if (cover == nullptr) {
    owned = greedy_cover(d - 2, M_PI / 6.0, Rng::derive(seed, 0x515), 600, tol);
    cover = &owned;
  }
  check_cover_for(*cover, d - 2, M_PI / 6.0, tol);

  for (int attempt = 0; attempt < 60; ++attempt) {
    Rng rng(Rng::derive(seed, 0xA11CE + static_cast<std::uint64_t>(attempt)));
    const UnitVector s = rng.unit_vector(d);
    // Prefer poles with generous clearance from every cap boundary: the
    // projection is badly conditioned near a boundary.
    double clearance = M_PI;
    for (const auto& cap : caps)
      clearance = std::min(
          clearance, std::abs(angular_distance(s, cap.center) - cap.radius));
    if (clearance <= (attempt < 40 ? 0.05 : tol.geometry)) continue;

    std::optional<StereographicReduction> red;
    try {
      red.emplace(reduce_caps_via_stereographic(caps, s, tol));
    } catch (const std::invalid_argument&) {
      continue;
    }
    DirectionSet dirs;
    dirs.dim = d;
    if (!red->pierced_by_pole.empty()) dirs.push(s);
    if (!red->balls_intrinsic.empty()) {
      PiercingSolution sol;
      try {
        sol = pierce_balls_danzer(red->balls_intrinsic, *cover, tol);
      } catch (const std::exception&) {
        continue;
      }
      bool lifted_all = true;
      for (const auto& q : sol.points) {
        try {
          dirs.push(stereographic_lift(s, red->frame.to_ambient(q)));
        } catch (const std::exception&) {
          lifted_all = false;
          break;
        }
      }
      if (!lifted_all) continue;
    }
    ConstructionResult res = finish_with_completion(
        ball, std::move(dirs), "stereographic-reduction", 3 + cover->size(),
        cover->size(), tol);
    if (res.report.verdict) return res;
  }
  throw std::runtime_error(
      "stereographic construction found no pole that verifies");
}

ConstructionResult illuminate_symmetric(const SpikyBall& ball,
                                        std::uint64_t seed,
                                        const Tolerance& tol,
                                        const CoveringSpec* cover) {
  tol.validate();
  const int d = ball.dim;
  if (d < 3)
    throw std::invalid_argument("equator construction needs dimension >= 3");
  if (ball.symmetry == Symmetry::none)
    throw std::invalid_argument(
        "equator construction needs an origin-symmetric instance");
  const auto caps = piercing_caps(ball, tol);
  if (caps.empty()) throw std::invalid_argument("instance has no vertices");

  size_t widest = 0;
  for (size_t i = 1; i < caps.size(); ++i)
    if (caps[i].radius > caps[widest].radius + 1e-15) widest = i;
  const UnitVector axis = caps[widest].center;

  const EquatorFrame frame = equator_frame(axis);
  std::vector<SphericalCap> slices;  // intrinsic caps on S^{d-2}
  for (size_t i = 0; i < caps.size(); ++i) {
    const SliceOutcome out = equatorial_slice(caps[i], axis, tol);
    if (out.kind == SliceOutcome::Kind::degenerate_axis) {
      const double polar_margin = std::max(cap_margin(caps[i], axis),
                                           cap_margin(caps[i], -axis));
      if (polar_margin <= tol.predicate)
        throw std::invalid_argument(
            "axis-aligned piercing cap not pierced by the axis; instance is "
            "not a symmetric cap body");
      continue;  // handled by +-axis
    }
    if (out.kind == SliceOutcome::Kind::empty)
      throw std::invalid_argument(
          "piercing cap misses the equator; instance is not a symmetric cap "
          "body");
    const SphericalCap& slice = out.slice->cap;
    if (slice.radius < M_PI / 4.0 - tol.predicate)
      throw std::invalid_argument(
          "equatorial slice narrower than pi/4; instance is not a symmetric "
          "cap body");
    slices.push_back(slice);
  }

  CoveringSpec owned;
  if (cover == nullptr) {
    if (d == 3) {
      owned = *known_cover(1, M_PI / 4.0, tol);
    } else {
      owned =
          greedy_cover(d - 2, M_PI / 4.0, Rng::derive(seed, 0x5E7), 600, tol);
    }
    cover = &owned;
  }
  check_cover_for(*cover, d - 2, M_PI / 4.0, tol);

  for (int attempt = 0; attempt < 60; ++attempt) {
    CoveringSpec rotated;
    try {
      rotated = rotate_cover_generic(
          *cover, slices, Rng::derive(seed, 0xEC0 + attempt), tol);
    } catch (const std::runtime_error&) {
      continue;
    }
    DirectionSet dirs;
    dirs.dim = d;
    dirs.push(axis);
    dirs.push(-axis);
    for (const auto& c : rotated.centers)
      dirs.push(UnitVector::normalized(frame.to_ambient(c.vec())));
    ConstructionResult res;
    res.directions = std::move(dirs);
    res.report = verify_illumination(ball, res.directions, tol);
    res.method = "equator-cover";
    res.stated_bound = 2 + cover->size();
    res.cover_size = cover->size();
    res.piercing_count = res.directions.size();
    if (res.report.verdict) return res;
  }
  throw std::runtime_error(
      "equator construction found no cover rotation that verifies");
}

ConstructionResult illuminate_unconditional(const SpikyBall& ball,
                                            const Tolerance& tol) {
  tol.validate();
  const int d = ball.dim;
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (ball.symmetry != Symmetry::unconditional)
    throw std::invalid_argument(
        "tilted-axes construction needs an unconditional instance");

  DirectionSet axes;
  axes.dim = d;
  for (int j = 0; j < d; ++j) {
    Vector e = Vector::Zero(d);
    e[j] = 1.0;
    axes.push(UnitVector(e));
    axes.push(UnitVector(Vector(-e)));
  }
  ConstructionResult res;
  res.report = verify_illumination(ball, axes, tol);
  if (res.report.verdict) {
    res.directions = std::move(axes);
    res.method = "signed-axes";
    res.stated_bound = 2 * d;
    res.piercing_count = 2 * d;
    res.two_d_sufficient = true;
    return res;
  }

  for (double phi = M_PI / 8.0; phi > 1e-7; phi /= 2.0) {
    DirectionSet dirs;
    dirs.dim = d;
    for (auto& u : build_uv_vectors(d, phi)) dirs.push(std::move(u));
    IlluminationReport report = verify_illumination(ball, dirs, tol);
    if (report.verdict) {
      res.directions = std::move(dirs);
      res.report = std::move(report);
      res.method = "tilted-axes";
      res.stated_bound = 4 * d;
      res.piercing_count = 4 * d;
      res.phi = phi;
      return res;
    }
  }
  throw std::runtime_error(
      "no tilt angle verified; vertex margins may be below the geometric "
      "tolerance");
}

ConstructionResult illuminate(const SpikyBall& ball, std::uint64_t seed,
                              const Tolerance& tol, const CoveringSpec* cover) {
  switch (ball.symmetry) {
    case Symmetry::unconditional:
      return illuminate_unconditional(ball, tol);
    case Symmetry::origin:
      return illuminate_symmetric(ball, seed, tol, cover);
    case Symmetry::none:
      break;
  }
  if (ball.dim == 2) return illuminate_2d(ball, tol);
  if (ball.dim == 3) return illuminate_3d(ball, tol);
  return illuminate_general(ball, seed, tol, cover);
}

std::optional<KSpanningSignature> classify_k_spanning(const SphericalCap& cap,
                                                      const Tolerance& tol) {
  const Vector& c = cap.center.vec();
  KSpanningSignature sig;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (std::abs(c[j]) > tol.geometry) {
      sig.support.push_back(static_cast<int>(j));
      sig.signs.push_back(c[j] > 0 ? 1 : -1);
    }
  }
  sig.k = static_cast<int>(sig.support.size());
  if (sig.k < 2) return std::nullopt;
  const double level = 1.0 / std::sqrt(static_cast<double>(sig.k));
  for (int idx : sig.support)
    if (std::abs(std::abs(c[idx]) - level) > tol.geometry) return std::nullopt;
  if (std::abs(cap.radius - std::acos(level)) > tol.geometry)
    return std::nullopt;
  return sig;
}

SphericalCap cap_from_signature(const KSpanningSignature& sig, int dim) {
  const int k = sig.k;
  if (k < 2 || k > dim || sig.support.size() != static_cast<size_t>(k) ||
      sig.signs.size() != static_cast<size_t>(k))
    throw std::invalid_argument("invalid spanning signature");
  Vector c = Vector::Zero(dim);
  const double level = 1.0 / std::sqrt(static_cast<double>(k));
  for (int i = 0; i < k; ++i) {
    const int j = sig.support[static_cast<size_t>(i)];
    if (j < 0 || j >= dim || c[j] != 0.0)
      throw std::invalid_argument("invalid spanning support");
    if (sig.signs[static_cast<size_t>(i)] != 1 &&
        sig.signs[static_cast<size_t>(i)] != -1)
      throw std::invalid_argument("signs must be +-1");
    c[j] = sig.signs[static_cast<size_t>(i)] * level;
  }
  return open_cap(UnitVector(c), std::acos(level));
}

bool escape_test(const SphericalCap& cap, const UnitVector& axis,
                 const Tolerance& tol) {
  if (axis.dim() != cap.center.dim())
    throw std::invalid_argument("dimension mismatch");
  return std::abs(axis.dot(cap.center)) >
         std::cos(cap.radius) + tol.predicate;
}

std::vector<UnitVector> build_uv_vectors(int dim, double phi) {
  if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(phi > 0.0) || !(phi < M_PI / 4.0))
    throw std::invalid_argument("tilt angle must lie in (0, pi/4)");
  const double off = std::sin(phi) / std::sqrt(static_cast<double>(dim - 1));
  std::vector<UnitVector> out;
  out.reserve(static_cast<size_t>(4 * dim));
  for (int j = 0; j < dim; ++j) {
    Vector u = Vector::Constant(dim, off);
    u[j] = std::cos(phi);
    Vector v = Vector::Constant(dim, -off);
    v[j] = std::cos(phi);
    out.push_back(UnitVector(u));
    out.push_back(UnitVector(Vector(-u)));
    out.push_back(UnitVector(v));
    out.push_back(UnitVector(Vector(-v)));
  }
  return out;
}

}  // namespace capbody
