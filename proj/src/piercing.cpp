#include "capbody/piercing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace capbody {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

double circle_distance(double a, double b) {
  const double d = std::abs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

struct CoverSearch {
  const std::vector<std::uint64_t>* masks;
  std::uint64_t full;
  int n;
  std::vector<int> best;
  std::vector<int> chosen;

  void dfs(std::uint64_t remaining) {
    if (remaining == 0) {
      if (best.empty() || chosen.size() < best.size()) best = chosen;
      return;
    }
    if (!best.empty() && chosen.size() + 1 >= best.size()) {
      // Even one more candidate cannot beat the incumbent unless it finishes
      // the cover; scan for a finisher only.
      for (size_t c = 0; c < masks->size(); ++c)
        if (((*masks)[c] & remaining) == remaining) {
          chosen.push_back(static_cast<int>(c));
          dfs(0);
          chosen.pop_back();
          return;
        }
      return;
    }
    // Lower bound: ceil(|remaining| / best single-candidate coverage).
    int max_cover = 0;
    for (const auto m : *masks)
      max_cover = std::max(max_cover, std::popcount(m & remaining));
    if (max_cover == 0) return;  // uncoverable element on this branch
    const int lb = (std::popcount(remaining) + max_cover - 1) / max_cover;
    if (!best.empty() &&
        chosen.size() + static_cast<size_t>(lb) >= best.size())
      return;

    // Branch on the uncovered element with the fewest candidates.
    int elem = -1, fewest = -1;
    for (int e = 0; e < n; ++e) {
      if (!(remaining >> e & 1)) continue;
      int cnt = 0;
      for (const auto m : *masks) cnt += (m >> e) & 1;
      if (elem < 0 || cnt < fewest) {
        elem = e;
        fewest = cnt;
      }
    }
    std::vector<int> covering;
    for (size_t c = 0; c < masks->size(); ++c)
      if ((*masks)[c] >> elem & 1) covering.push_back(static_cast<int>(c));
    std::stable_sort(covering.begin(), covering.end(), [&](int a, int b) {
      return std::popcount((*masks)[a] & remaining) >
             std::popcount((*masks)[b] & remaining);
    });
    for (const int c : covering) {
      chosen.push_back(c);
      dfs(remaining & ~(*masks)[c]);
      chosen.pop_back();
    }
  }
};

}  // namespace

std::vector<int> exact_set_cover(const std::vector<std::uint64_t>& masks,
                                 int n_elements) {
  if (n_elements < 0 || n_elements > 64)
    throw std::invalid_argument("exact_set_cover supports up to 64 elements");
  const std::uint64_t full =
      n_elements == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_elements) - 1;
  if (full == 0) return {};

  // Greedy incumbent (also an upper bound for the search).
  std::vector<int> greedy;
  std::uint64_t remaining = full;
  while (remaining != 0) {
    int pick = -1, gain = 0;
    for (size_t c = 0; c < masks.size(); ++c) {
      const int g = std::popcount(masks[c] & remaining);
      if (g > gain) {
        gain = g;
        pick = static_cast<int>(c);
      }
    }
    if (pick < 0) throw internal_error("set cover instance is infeasible");
    greedy.push_back(pick);
    remaining &= ~masks[pick];
  }

  CoverSearch search{&masks, full, n_elements, greedy, {}};
  search.dfs(full);
  std::vector<int> out = search.best;
  std::sort(out.begin(), out.end());
  return out;
}

PiercingSolution pierce_arcs_exact(const std::vector<SphericalCap>& arcs,
                                   const Tolerance& tol) {
  const int n = static_cast<int>(arcs.size());
  if (n > 64)
    throw std::invalid_argument("arc piercing supports up to 64 arcs");
  PiercingSolution sol;
  sol.optimal = true;
  if (n == 0) return sol;
  std::vector<double> theta(n), rad(n);
  for (int i = 0; i < n; ++i) {
    if (arcs[i].center.dim() != 2)
      throw std::invalid_argument("arcs must live on S^1");
    if (!(arcs[i].radius < M_PI_2))
      throw std::domain_error("arc radius must be < pi/2");
    theta[i] = std::atan2(arcs[i].center.vec()[1], arcs[i].center.vec()[0]);
    rad[i] = arcs[i].radius;
  }

  const auto margin_at = [&](double phi, int i) {
    return rad[i] - circle_distance(phi, theta[i]);
  };

  // Candidate positions: arc centers plus right endpoints nudged inward by
  // a quarter of the smallest positive endpoint gap.  Any piercing point
  // slides right onto such a candidate without losing an arc, so the
  // candidate set realizes an optimal solution.
  std::vector<double> endpoints;
  for (int i = 0; i < n; ++i) {
    endpoints.push_back(wrap_angle(theta[i] - rad[i]));
    endpoints.push_back(wrap_angle(theta[i] + rad[i]));
  }
  std::sort(endpoints.begin(), endpoints.end());
  double min_gap = kTwoPi;
  for (size_t k = 0; k < endpoints.size(); ++k) {
    const double next =
        k + 1 < endpoints.size() ? endpoints[k + 1] : endpoints[0] + kTwoPi;
    const double gap = next - endpoints[k];
    if (gap > 1e-12) min_gap = std::min(min_gap, gap);
  }
  double delta = min_gap / 4.0;
  for (int i = 0; i < n; ++i) delta = std::min(delta, rad[i] / 2.0);

  std::vector<double> candidates;
  for (int i = 0; i < n; ++i) candidates.push_back(theta[i]);
  for (int i = 0; i < n; ++i)
    candidates.push_back(wrap_angle(theta[i] + rad[i] - delta));

  std::vector<std::uint64_t> masks(candidates.size(), 0);
  for (size_t c = 0; c < candidates.size(); ++c)
    for (int i = 0; i < n; ++i)
      if (margin_at(candidates[c], i) > tol.predicate)
        masks[c] |= std::uint64_t{1} << i;

  const std::vector<int> chosen = exact_set_cover(masks, n);
  for (const int c : chosen) {
    Vector p(2);
    p << std::cos(candidates[c]), std::sin(candidates[c]);
    sol.points.push_back(std::move(p));
  }
  sol.witness.assign(n, -1);
  sol.min_margin = M_PI;
  for (int i = 0; i < n; ++i) {
    double best = -M_PI;
    for (size_t k = 0; k < chosen.size(); ++k) {
      const double m = margin_at(candidates[chosen[k]], i);
      if (m > best) {
        best = m;
        sol.witness[i] = static_cast<int>(k);
      }
    }
    CAPBODY_REQUIRE(best > 0.0, "arc piercing produced a non-strict witness");
    sol.min_margin = std::min(sol.min_margin, best);
  }
  return sol;
}

PiercingSolution pierce_caps_exact(const std::vector<SphericalCap>& caps,
                                   const Tolerance& tol) {
  const int n = static_cast<int>(caps.size());
  if (n > 20)
    throw std::invalid_argument("exact cap piercing is limited to 20 caps");
  PiercingSolution sol;
  sol.optimal = true;
  if (n == 0) return sol;
  for (const auto& cap : caps) {
    if (cap.center.dim() != 3)
      throw std::invalid_argument("cap piercing expects caps of S^2");
    if (!(cap.radius < M_PI_2))
      throw std::domain_error("cap radius must be < pi/2");
  }

  using V3 = Eigen::Vector3d;
  std::vector<V3> centers(n);
  for (int i = 0; i < n; ++i) centers[i] = caps[i].center.vec();

  std::vector<V3> candidates;
  for (int i = 0; i < n; ++i) candidates.push_back(centers[i]);
  // Boundary-circle crossings, nudged inward along the bisector of the two
  // inward gradients (two scales, in case the lens is thin).
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double g = centers[i].dot(centers[j]);
      if (std::abs(g) > 1.0 - 1e-12) continue;
      const double denom = 1.0 - g * g;
      const double a = (std::cos(caps[i].radius) - g * std::cos(caps[j].radius)) / denom;
      const double b = (std::cos(caps[j].radius) - g * std::cos(caps[i].radius)) / denom;
      const V3 cross = centers[i].cross(centers[j]);
      const double t2 =
          (1.0 - a * a - b * b - 2.0 * a * b * g) / cross.squaredNorm();
      if (t2 < -1e-15) continue;  // boundary circles do not meet
      const double t = std::sqrt(std::max(0.0, t2));
      for (const double sign : {1.0, -1.0}) {
        V3 p = a * centers[i] + b * centers[j] + sign * t * cross;
        const double norm = p.norm();
        if (norm < 1e-9) continue;
        p /= norm;
        V3 gi = centers[i] - centers[i].dot(p) * p;
        V3 gj = centers[j] - centers[j].dot(p) * p;
        if (gi.norm() > 1e-12) gi.normalize();
        if (gj.norm() > 1e-12) gj.normalize();
        V3 bis = gi + gj;
        if (bis.norm() < 1e-9) bis = gi;
        if (bis.norm() < 1e-12) continue;
        bis.normalize();
        for (const double eta : {1e-4, 1e-6}) {
          candidates.push_back((p + eta * bis).normalized());
        }
        if (t == 0.0) break;  // tangent circles: one crossing only
      }
    }

  const auto margin_of = [&](const V3& p, int i) {
    const double d =
        std::acos(std::clamp(centers[i].dot(p), -1.0, 1.0));
    return caps[i].radius - d;
  };

  struct Entry {
    std::uint64_t mask = 0;
    double quality = -M_PI;  // min margin over covered caps
    int index = -1;
  };
  std::vector<Entry> unique;
  for (size_t c = 0; c < candidates.size(); ++c) {
    std::uint64_t mask = 0;
    double quality = M_PI;
    for (int i = 0; i < n; ++i) {
      const double m = margin_of(candidates[c], i);
      if (m > tol.predicate) {
        mask |= std::uint64_t{1} << i;
        quality = std::min(quality, m);
      }
    }
    if (mask == 0) continue;
    bool merged = false;
    for (auto& e : unique)
      if (e.mask == mask) {
        if (quality > e.quality) {
          e.quality = quality;
          e.index = static_cast<int>(c);
        }
        merged = true;
        break;
      }
    if (!merged)
      unique.push_back(Entry{mask, quality, static_cast<int>(c)});
  }

  std::vector<std::uint64_t> masks;
  for (const auto& e : unique) masks.push_back(e.mask);
  const std::vector<int> chosen = exact_set_cover(masks, n);
  for (const int c : chosen) {
    Vector p(3);
    p = candidates[unique[c].index];
    sol.points.push_back(std::move(p));
  }
  sol.witness.assign(n, -1);
  sol.min_margin = M_PI;
  for (int i = 0; i < n; ++i) {
    double best = -M_PI;
    for (size_t k = 0; k < chosen.size(); ++k) {
      const double m = margin_of(candidates[unique[chosen[k]].index], i);
      if (m > best) {
        best = m;
        sol.witness[i] = static_cast<int>(k);
      }
    }
    CAPBODY_REQUIRE(best > 0.0, "cap piercing produced a non-strict witness");
    sol.min_margin = std::min(sol.min_margin, best);
  }
  return sol;
}

PiercingSolution pierce_balls_danzer(const std::vector<EuclideanBall>& balls,
                                     const CoveringSpec& cover,
                                     const Tolerance& tol) {
  if (balls.empty())
    throw std::invalid_argument("need at least one ball to pierce");
  const Eigen::Index m = balls[0].center.size();
  for (const auto& b : balls)
    if (b.center.size() != m)
      throw std::invalid_argument("balls with mixed dimensions");
  if (cover.sphere_dim != static_cast<int>(m) - 1)
    throw std::invalid_argument("cover dimension must match S^{m-1}");
  if (!(cover.radius <= M_PI / 6.0 + tol.predicate))
    throw std::invalid_argument("cover radius must be <= pi/6");
  if (cover.verified == VerifyStatus::unverified)
    throw std::invalid_argument("cover must be verified before use");
  for (size_t i = 0; i < balls.size(); ++i)
    for (size_t j = i + 1; j < balls.size(); ++j) {
      const double gap = (balls[i].center - balls[j].center).norm() -
                         balls[i].radius - balls[j].radius;
      if (gap > tol.predicate)
        throw std::invalid_argument("balls " + std::to_string(i) + " and " +
                                    std::to_string(j) + " do not intersect");
    }

  // Smallest ball, ties broken lexicographically so the output does not
  // depend on input order.
  size_t smallest = 0;
  for (size_t i = 1; i < balls.size(); ++i) {
    const double dr = balls[i].radius - balls[smallest].radius;
    if (dr < -1e-15) {
      smallest = i;
    } else if (std::abs(dr) <= 1e-15) {
      for (Eigen::Index k = 0; k < m; ++k) {
        const double dc = balls[i].center[k] - balls[smallest].center[k];
        if (dc < 0) {
          smallest = i;
          break;
        }
        if (dc > 0) break;
      }
    }
  }
  const Vector& c0 = balls[smallest].center;
  const double r0 = balls[smallest].radius;

  PiercingSolution sol;
  sol.optimal = false;
  sol.points.push_back(c0);
  for (const auto& u : cover.centers) {
    if (u.dim() != m)
      throw std::invalid_argument("cover center dimension mismatch");
    sol.points.emplace_back(c0 + std::sqrt(3.0) * r0 * u.vec());
  }

  sol.witness.assign(balls.size(), -1);
  sol.min_margin = balls[0].radius;
  for (size_t i = 0; i < balls.size(); ++i) {
    double best = -1e300;
    for (size_t k = 0; k < sol.points.size(); ++k) {
      const double margin =
          balls[i].radius - (sol.points[k] - balls[i].center).norm();
      if (margin > best) {
        best = margin;
        sol.witness[i] = static_cast<int>(k);
      }
    }
    CAPBODY_REQUIRE(best >= -tol.predicate,
                    "ball family escaped the piercing construction");
    sol.min_margin = std::min(sol.min_margin, best);
  }
  return sol;
}

StereographicReduction reduce_caps_via_stereographic(
    const std::vector<SphericalCap>& caps, const UnitVector& s,
    const Tolerance& tol) {
  StereographicReduction red{{}, {}, {}, {}, tangent_frame(s)};
  for (size_t i = 0; i < caps.size(); ++i) {
    const double d = angular_distance(s, caps[i].center);
    if (std::abs(d - caps[i].radius) <= tol.geometry)
      throw std::invalid_argument(
          "pole too close to a cap boundary; retry with a fresh pole");
    if (d < caps[i].radius) {
      red.pierced_by_pole.push_back(static_cast<int>(i));
    } else {
      red.reduced.push_back(static_cast<int>(i));
      EuclideanBall ambient = cap_image_ball(s, caps[i], tol);
      red.balls_intrinsic.emplace_back(red.frame.to_intrinsic(ambient.center),
                                       ambient.radius);
      red.balls_ambient.push_back(std::move(ambient));
    }
  }
  return red;
}

}  // namespace capbody
