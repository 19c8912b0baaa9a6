#include "capbody/spiky.hpp"

#include "capbody/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace capbody {

namespace {

UnitVector direction_of(const Vector& x) { return UnitVector::normalized(x); }

bool near_same_point(const Vector& a, const Vector& b, double eps = 1e-9) {
  return (a - b).norm() <= eps;
}

bool vertex_present(const std::vector<Vector>& vs, const Vector& x) {
  for (const auto& v : vs)
    if (near_same_point(v, x)) return true;
  return false;
}

}  // namespace

VertexCapPair vertex_cap(const Vector& x, const Tolerance& tol) {
  const double len = x.norm();
  if (!(len > 1.0 + tol.geometry))
    throw std::invalid_argument("spike vertex must lie outside the unit ball");
  UnitVector y = direction_of(x);
  const double alpha = std::acos(1.0 / len);
  return VertexCapPair{-1, open_cap(y, alpha),
                       open_cap(-y, M_PI_2 - alpha)};
}

std::vector<VertexCapPair> vertex_caps(const SpikyBall& ball,
                                       const Tolerance& tol) {
  std::vector<VertexCapPair> out;
  out.reserve(ball.vertices.size());
  for (int i = 0; i < ball.size(); ++i) {
    VertexCapPair p = vertex_cap(ball.vertices[i], tol);
    p.vertex_index = i;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SphericalCap> piercing_caps(const SpikyBall& ball,
                                        const Tolerance& tol) {
  std::vector<SphericalCap> out;
  out.reserve(ball.vertices.size());
  for (const auto& pair : vertex_caps(ball, tol)) out.push_back(pair.piercing);
  return out;
}

double spike_quadratic_min(const Vector& q, const Vector& x) {
  if (q.size() != x.size()) throw std::invalid_argument("dimension mismatch");
  const double a = x.squaredNorm() - 1.0;
  if (!(a > 0.0))
    throw std::invalid_argument("spike vertex must lie outside the unit ball");
  const double b = q.dot(x) - 1.0;
  const double c = q.squaredNorm() - 1.0;
  const double lambda = std::clamp(b / a, 0.0, 1.0);
  return a * lambda * lambda - 2.0 * b * lambda + c;
}

bool point_in_spike(const Vector& q, const Vector& x, const Tolerance& tol) {
  return spike_quadratic_min(q, x) <= tol.predicate;
}

bool is_vertex(const SpikyBall& ball, int i, const Tolerance& tol) {
  for (int j = 0; j < ball.size(); ++j) {
    if (j == i) continue;
    if (point_in_spike(ball.vertices[i], ball.vertices[j], tol)) return false;
  }
  return true;
}

bool is_packing(const std::vector<SphericalCap>& caps, const Tolerance& tol) {
  for (size_t i = 0; i < caps.size(); ++i)
    for (size_t j = i + 1; j < caps.size(); ++j)
      if (caps_overlap(caps[i], caps[j]) > tol.predicate) return false;
  return true;
}

bool is_two_illuminable(const SpikyBall& ball, const Tolerance& tol) {
  const auto caps = piercing_caps(ball, tol);
  for (size_t i = 0; i < caps.size(); ++i)
    for (size_t j = i + 1; j < caps.size(); ++j)
      if (!caps_intersect(caps[i], caps[j], tol)) return false;
  return true;
}

bool is_convex(const SpikyBall& ball, const Tolerance& tol) {
  const int n = ball.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vector& xi = ball.vertices[i];
      const Vector& xj = ball.vertices[j];
      const auto at = [&](double t) { return Vector((1 - t) * xi + t * xj); };
      const auto in_i = [&](double t) {
        return point_in_spike(at(t), xi, tol);
      };
      const auto in_j = [&](double t) {
        return point_in_spike(at(t), xj, tol);
      };
      // Departure parameter from spike_i (membership along the segment is an
      // interval starting at 0 because the spike is convex).
      double exit_i = 1.0;
      if (!in_i(1.0)) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 70; ++it) {
          const double mid = 0.5 * (lo + hi);
          (in_i(mid) ? lo : hi) = mid;
        }
        exit_i = lo;
      }
      double entry_j = 0.0;
      if (!in_j(0.0)) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 70; ++it) {
          const double mid = 0.5 * (lo + hi);
          (in_j(mid) ? hi : lo) = mid;
        }
        entry_j = hi;
      }
      if (exit_i + tol.geometry < entry_j) return false;
    }
  return true;
}

double illumination_margin(const VertexCapPair& pair, const UnitVector& d) {
  return cap_margin(pair.piercing, d);
}

bool illuminates_vertex(const VertexCapPair& pair, const UnitVector& d,
                        const Tolerance& tol) {
  return illumination_margin(pair, d) > tol.predicate;
}

IlluminationReport verify_illumination(const SpikyBall& ball,
                                       const DirectionSet& dirs,
                                       const Tolerance& tol) {
  if (dirs.dim != ball.dim)
    throw std::invalid_argument("direction/instance dimension mismatch");
  IlluminationReport report;
  report.witness.assign(ball.size(), -1);
  report.margins.assign(ball.size(), -M_PI);
  const auto pairs = vertex_caps(ball, tol);
  bool all = true;
  double min_margin = M_PI;
  for (int v = 0; v < ball.size(); ++v) {
    double best = -M_PI;
    int best_idx = -1;
    for (int k = 0; k < dirs.size(); ++k) {
      const double m = illumination_margin(pairs[v], dirs.directions[k]);
      if (m > best) {
        best = m;
        best_idx = k;
      }
    }
    report.margins[v] = best;
    min_margin = std::min(min_margin, best);
    if (best >= tol.geometry) {
      report.witness[v] = best_idx;
    } else {
      all = false;
    }
  }
  report.min_margin = ball.size() ? min_margin : 0.0;
  report.hull_full = positive_hull_full(dirs.directions, ball.dim, tol);
  report.verdict = all && report.hull_full;
  return report;
}

std::optional<std::string> check_instance(const SpikyBall& ball,
                                          const Tolerance& tol) {
  if (ball.dim < 2) return "dimension must be >= 2";
  for (const auto& x : ball.vertices) {
    if (x.size() != ball.dim) return "vertex with wrong dimension";
    if (!x.allFinite()) return "vertex with non-finite coordinates";
    if (!(x.norm() > 1.0 + tol.geometry))
      return "vertex not strictly outside the unit ball";
  }
  for (int i = 0; i < ball.size(); ++i)
    for (int j = i + 1; j < ball.size(); ++j)
      if (near_same_point(ball.vertices[i], ball.vertices[j]))
        return "duplicate vertices";
  if (ball.symmetry == Symmetry::origin ||
      ball.symmetry == Symmetry::unconditional) {
    for (const auto& x : ball.vertices)
      if (!vertex_present(ball.vertices, Vector(-x)))
        return "vertex set not closed under negation";
  }
  if (ball.symmetry == Symmetry::unconditional) {
    for (const auto& x : ball.vertices)
      for (int l = 0; l < ball.dim; ++l) {
        Vector flipped = x;
        flipped[l] = -flipped[l];
        if (!vertex_present(ball.vertices, flipped))
          return "vertex set not closed under coordinate sign flips";
      }
  }
  for (int i = 0; i < ball.size(); ++i)
    if (!is_vertex(ball, i, tol)) return "vertex swallowed by another spike";
  return std::nullopt;
}

void validate_instance(const SpikyBall& ball, const Tolerance& tol) {
  if (auto reason = check_instance(ball, tol))
    throw std::invalid_argument("invalid instance: " + *reason);
}

namespace {

SpikyBall gen_two_illuminable(int dim, int n, std::uint64_t seed,
                              const Tolerance& tol) {
  if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
  if (n < 1) throw std::invalid_argument("need n >= 1 vertices");
  const double anchor_radius = 0.85;
  for (int restart = 0; restart < 60; ++restart) {
    // Relax the minimum vertex separation on later restarts: sequential
    // random packing can jam near the density limit for large n.
    const double sep =
        (dim == 2 ? std::min(0.05, 1.3 / std::max(n, 2)) : 0.05) *
        std::pow(0.9, restart);
    Rng rng(Rng::derive(seed, restart));
    const UnitVector anchor = rng.unit_vector(dim);
    std::vector<Vector> vertices;
    std::vector<UnitVector> ys;
    std::vector<double> alphas;
    int proposals = 0;
    while (static_cast<int>(vertices.size()) < n && proposals < 10000) {
      ++proposals;
      const UnitVector y = rng.unit_in_cap(anchor, anchor_radius);
      const double u = rng.uniform();
      const double len = 1.08 + 1.8 * u * u * u;
      const double alpha = std::acos(1.0 / len);
      bool ok = true;
      for (size_t j = 0; j < ys.size() && ok; ++j) {
        const double d = angular_distance(y, ys[j]);
        if (d < sep) ok = false;
        // strict pairwise overlap of the open piercing caps, with margin
        if (d > (M_PI_2 - alpha) + (M_PI_2 - alphas[j]) - 0.03) ok = false;
      }
      if (!ok) continue;
      Vector x = len * y.vec();
      for (size_t j = 0; j < vertices.size() && ok; ++j) {
        if (spike_quadratic_min(x, vertices[j]) < 1e-4) ok = false;
        if (spike_quadratic_min(vertices[j], x) < 1e-4) ok = false;
      }
      if (!ok) continue;
      vertices.push_back(std::move(x));
      ys.push_back(y);
      alphas.push_back(alpha);
    }
    if (static_cast<int>(vertices.size()) < n) continue;
    SpikyBall ball{dim, Symmetry::none, std::move(vertices)};
    if (!check_instance(ball, tol) && is_two_illuminable(ball, tol))
      return ball;
  }
  throw std::runtime_error(
      "two_illuminable generator: rejection budget exhausted");
}

SpikyBall gen_symmetric(int dim, int n_pairs, std::uint64_t seed,
                        const Tolerance& tol) {
  if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
  if (n_pairs < 1) throw std::invalid_argument("need n >= 1 vertex pairs");
  for (int restart = 0; restart < 80; ++restart) {
    Rng rng(Rng::derive(seed, restart));
    const double shrink = std::pow(0.93, restart / 4);
    double sep_target =
        (dim == 2 ? 0.75 * M_PI / n_pairs : 0.85) * shrink;
    std::vector<UnitVector> ys;
    int proposals = 0;
    while (static_cast<int>(ys.size()) < n_pairs && proposals < 6000) {
      ++proposals;
      const UnitVector y = rng.unit_vector(dim);
      bool ok = true;
      for (const auto& prev : ys) {
        const double d = angular_distance(y, prev);
        if (std::min(d, M_PI - d) < sep_target) {
          ok = false;
          break;
        }
      }
      if (ok) ys.push_back(y);
    }
    if (static_cast<int>(ys.size()) < n_pairs) continue;

    // Half the minimum incident (antipode-folded) distance bounds each
    // alpha; scaling by < 1 keeps the packing strict.
    std::vector<double> alphas(n_pairs);
    bool feasible = true;
    for (int i = 0; i < n_pairs && feasible; ++i) {
      double incident = M_PI;  // distance to own antipode
      for (int j = 0; j < n_pairs; ++j) {
        if (j == i) continue;
        const double d = angular_distance(ys[i], ys[j]);
        incident = std::min(incident, std::min(d, M_PI - d));
      }
      alphas[i] = 0.75 * (0.4 + 0.6 * rng.uniform()) * incident / 2.0;
      if (alphas[i] < 0.08) feasible = false;
    }
    if (!feasible) continue;

    std::vector<Vector> vertices;
    for (int i = 0; i < n_pairs; ++i) {
      const double len = 1.0 / std::cos(alphas[i]);
      vertices.emplace_back(len * ys[i].vec());
      vertices.emplace_back(-len * ys[i].vec());
    }
    SpikyBall ball{dim, Symmetry::origin, std::move(vertices)};
    if (check_instance(ball, tol)) continue;
    std::vector<SphericalCap> base;
    for (const auto& p : vertex_caps(ball, tol)) base.push_back(p.base);
    if (!is_packing(base, tol)) continue;
    if (!is_convex(ball, tol)) continue;
    return ball;
  }
  throw std::runtime_error(
      "symmetric_cap_body generator: rejection budget exhausted");
}

SpikyBall gen_unconditional(int dim, int n_orbits, std::uint64_t seed,
                            const Tolerance& tol) {
  if (dim < 3) throw std::invalid_argument("dimension must be >= 3");
  if (n_orbits < 1) throw std::invalid_argument("need n >= 1 orbits");
  for (int restart = 0; restart < 120; ++restart) {
    Rng rng(Rng::derive(seed, restart));

    // Sign-flip orbits of balanced sparse patterns: support S, entries
    // +-1/sqrt(|S|).
    std::vector<std::vector<int>> supports;
    std::set<std::vector<int>> seen;
    bool ok = true;
    for (int i = 0; i < n_orbits && ok; ++i) {
      const double u = rng.uniform();
      const int k = std::min(dim, u < 0.3 ? 1 : (u < 0.75 ? 2 : 3));
      std::vector<int> coords(dim);
      for (int l = 0; l < dim; ++l) coords[l] = l;
      for (int l = 0; l < k; ++l) {
        const int pick =
            l + static_cast<int>(rng.uniform_int(0, dim - 1 - l));
        std::swap(coords[l], coords[pick]);
      }
      std::vector<int> support(coords.begin(), coords.begin() + k);
      std::sort(support.begin(), support.end());
      if (!seen.insert(support).second) ok = false;
      supports.push_back(std::move(support));
    }
    if (!ok) continue;

    const auto k_of = [&](int i) {
      return static_cast<int>(supports[i].size());
    };
    // Closest approach between the i-th and j-th orbit families (i == j:
    // within the orbit).
    const auto family_distance = [&](int i, int j) {
      if (i == j)
        return k_of(i) == 1 ? M_PI
                            : std::acos(1.0 - 2.0 / k_of(i));
      std::vector<int> common;
      std::set_intersection(supports[i].begin(), supports[i].end(),
                            supports[j].begin(), supports[j].end(),
                            std::back_inserter(common));
      const double cosv = static_cast<double>(common.size()) /
                          std::sqrt(double(k_of(i)) * k_of(j));
      return std::acos(std::clamp(cosv, -1.0, 1.0));
    };

    const bool want_spanning = rng.uniform() < 0.35;
    int spanning = -1;
    if (want_spanning)
      for (int i = 0; i < n_orbits; ++i)
        if (k_of(i) >= 2) {
          spanning = i;
          break;
        }

    std::vector<double> alphas(n_orbits, 0.0);
    if (spanning >= 0) alphas[spanning] = std::asin(1.0 / std::sqrt(k_of(spanning)));
    bool feasible = true;
    for (int i = 0; i < n_orbits && feasible; ++i) {
      if (i == spanning) continue;
      double budget = family_distance(i, i) / 2.0;
      for (int j = 0; j < n_orbits; ++j) {
        if (j == i) continue;
        const double d = family_distance(i, j);
        budget = std::min(budget, alphas[j] > 0.0 ? d - alphas[j] - 0.02
                                                  : d / 2.0 - 0.01);
      }
      alphas[i] = 0.85 * budget;
      if (alphas[i] < 0.12) feasible = false;
    }
    if (feasible && spanning >= 0) {
      // The exact orbit is tangent within itself; re-check it against the
      // others after their alphas settled.
      for (int j = 0; j < n_orbits; ++j) {
        if (j == spanning) continue;
        if (alphas[spanning] + alphas[j] >
            family_distance(spanning, j) - 0.01)
          feasible = false;
      }
    }
    if (!feasible) continue;

    std::vector<Vector> vertices;
    for (int i = 0; i < n_orbits; ++i) {
      const int k = k_of(i);
      const double len = 1.0 / std::cos(alphas[i]);
      const double mag = len / std::sqrt(double(k));
      for (int mask = 0; mask < (1 << k); ++mask) {
        Vector x = Vector::Zero(dim);
        for (int l = 0; l < k; ++l)
          x[supports[i][l]] = (mask >> l & 1) ? -mag : mag;
        vertices.push_back(std::move(x));
      }
    }
    SpikyBall ball{dim, Symmetry::unconditional, std::move(vertices)};
    if (check_instance(ball, tol)) continue;
    std::vector<SphericalCap> base;
    for (const auto& p : vertex_caps(ball, tol)) base.push_back(p.base);
    if (!is_packing(base, tol)) continue;
    if (!is_convex(ball, tol)) continue;
    return ball;
  }
  throw std::runtime_error(
      "unconditional_cap_body generator: rejection budget exhausted");
}

SpikyBall gen_planar_lifted(int dim, int n, std::uint64_t seed,
                            const Tolerance& tol) {
  if (dim < 3)
    throw std::invalid_argument("planar_lifted needs dimension >= 3");
  if (n < 1) throw std::invalid_argument("need n >= 1 disks");
  Vector pole = Vector::Zero(dim);
  pole[dim - 1] = 1.0;
  const UnitVector s(pole);
  const TangentFrame frame = tangent_frame(s);
  for (int restart = 0; restart < 80; ++restart) {
    Rng rng(Rng::derive(seed, restart));
    std::vector<Vector> centers;  // intrinsic coordinates in H
    std::vector<double> radii;
    int proposals = 0;
    while (static_cast<int>(centers.size()) < n && proposals < 4000) {
      ++proposals;
      const double rad = 0.5 * std::pow(rng.uniform(), 1.0 / (dim - 1));
      Vector c = rad * rng.unit_vector(dim - 1).vec();
      const double r = rng.uniform(0.5, 0.8);
      bool ok = true;
      for (size_t j = 0; j < centers.size(); ++j) {
        const double d = (c - centers[j]).norm();
        if (d < 0.1) ok = false;                     // distinct directions
        if (d > r + radii[j] - 0.05) ok = false;     // strict pairwise overlap
      }
      if (!ok) continue;
      centers.push_back(std::move(c));
      radii.push_back(r);
    }
    if (static_cast<int>(centers.size()) < n) continue;

    std::vector<Vector> vertices;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      EuclideanBall disk(frame.to_ambient(centers[i]), radii[i]);
      SphericalCap cap = ball_preimage_cap(s, disk, true, tol);
      if (cap.radius >= M_PI_2 - 0.05 || cap.radius < 0.05) {
        ok = false;
        break;
      }
      // Read the lifted disk as a piercing cap C(-y, pi/2 - alpha).
      const double len = 1.0 / std::sin(cap.radius);
      vertices.emplace_back(-len * cap.center.vec());
    }
    if (!ok) continue;
    SpikyBall ball{dim, Symmetry::none, std::move(vertices)};
    if (!check_instance(ball, tol) && is_two_illuminable(ball, tol))
      return ball;
  }
  throw std::runtime_error(
      "planar_lifted generator: rejection budget exhausted");
}

}  // namespace

SpikyBall gen_instance(GenKind kind, int dim, int n, std::uint64_t seed,
                       const Tolerance& tol) {
  switch (kind) {
    case GenKind::two_illuminable:
      return gen_two_illuminable(dim, n, seed, tol);
    case GenKind::symmetric_cap_body:
      return gen_symmetric(dim, n, seed, tol);
    case GenKind::unconditional_cap_body:
      return gen_unconditional(dim, n, seed, tol);
    case GenKind::planar_lifted:
      return gen_planar_lifted(dim, n, seed, tol);
  }
  throw std::invalid_argument("unknown generator kind");
}

}  // namespace capbody
