#include "capbody/covering.hpp"

#include "capbody/rng.hpp"
#include "capbody/sphere.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>

namespace capbody {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// ---------------------------------------------------------------------------
// Subdivided-icosahedron probe mesh for S^2.
//
// Probes are the spherical circumcenters of the subdivision triangles and
// rho is the largest circumradius.  Every point of the sphere lies in the
// radial image of some triangle, i.e. p = (aA + bB + cC)/|...| with
// a,b,c >= 0, and then <u,p> = cos(R) (a+b+c)/|aA+bB+cC| >= cos(R) for the
// circumcenter u.  So every sphere point is within rho of some probe, and
// "all probes within alpha - rho of the centers" certifies the covering.
// ---------------------------------------------------------------------------
struct ProbeMesh {
  Matrix probes;  // N x 3
  double rho = 0.0;
};

std::shared_ptr<const ProbeMesh> icosphere_probes(int frequency) {
  static std::map<int, std::shared_ptr<const ProbeMesh>> cache;
  if (auto it = cache.find(frequency); it != cache.end()) return it->second;

  using V3 = Eigen::Vector3d;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<V3> verts = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) v.normalize();
  static const int faces[20][3] = {
      {0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10},  {0, 10, 11},
      {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6},  {7, 1, 8},
      {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},   {3, 8, 9},
      {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},   {9, 8, 1}};

  const int f = frequency;
  auto mesh = std::make_shared<ProbeMesh>();
  mesh->probes.resize(20 * f * f, 3);
  Eigen::Index row = 0;
  double min_cos = 1.0;

  const auto emit = [&](const V3& a, const V3& b, const V3& c) {
    Eigen::Matrix3d m;
    m.row(0) = a;
    m.row(1) = b;
    m.row(2) = c;
    V3 u = m.partialPivLu().solve(V3::Ones());
    u.normalize();
    min_cos = std::min({min_cos, u.dot(a), u.dot(b), u.dot(c)});
    mesh->probes.row(row++) = u;
  };

  for (const auto& face : faces) {
    const V3 &A = verts[face[0]], &B = verts[face[1]], &C = verts[face[2]];
    const auto lattice = [&](int i, int j) {
      return V3(((f - i - j) * A + i * B + j * C).normalized());
    };
    for (int i = 0; i < f; ++i)
      for (int j = 0; j < f - i; ++j) {
        emit(lattice(i, j), lattice(i + 1, j), lattice(i, j + 1));
        if (i + j < f - 1)
          emit(lattice(i + 1, j), lattice(i + 1, j + 1), lattice(i, j + 1));
      }
  }
  CAPBODY_REQUIRE(row == mesh->probes.rows(), "icosphere probe count drift");
  mesh->rho = std::acos(std::clamp(min_cos, -1.0, 1.0));
  cache[frequency] = mesh;
  return mesh;
}

Matrix centers_matrix(const std::vector<UnitVector>& centers, int dim) {
  Matrix c(dim, static_cast<Eigen::Index>(centers.size()));
  for (size_t k = 0; k < centers.size(); ++k) {
    if (centers[k].dim() != dim)
      throw std::invalid_argument("cover center dimension mismatch");
    c.col(static_cast<Eigen::Index>(k)) = centers[k].vec();
  }
  return c;
}

// Worst coverage cosine (min over probes of max over centers of the dot
// product) plus the offending probe row; chunked to bound memory.
std::pair<double, Eigen::Index> worst_coverage(const Matrix& probes,
                                               const Matrix& centers) {
  const Eigen::Index n = probes.rows();
  double worst = 1.0;
  Eigen::Index worst_row = 0;
  const Eigen::Index chunk = 65536;
  for (Eigen::Index start = 0; start < n; start += chunk) {
    const Eigen::Index len = std::min(chunk, n - start);
    const Matrix dots = probes.middleRows(start, len) * centers;
    for (Eigen::Index r = 0; r < len; ++r) {
      const double best = dots.row(r).maxCoeff();
      if (best < worst) {
        worst = best;
        worst_row = start + r;
      }
    }
  }
  return {worst, worst_row};
}

// Minimax refinement at fixed size: each center chases the worst probe of
// its cell with a decaying step; centers with empty cells teleport to the
// globally worst probe.  Returns the best configuration encountered.
Matrix refine_minimax(const Matrix& probes, Matrix centers, int iters) {
  const Eigen::Index n = probes.rows();
  const Eigen::Index k = centers.cols();
  Matrix best = centers;
  double best_worst = worst_coverage(probes, centers).first;
  const Eigen::Index chunk = 65536;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> cell_min(k, 2.0);
    std::vector<Eigen::Index> cell_arg(k, -1);
    double global_min = 2.0;
    Eigen::Index global_arg = 0;
    for (Eigen::Index start = 0; start < n; start += chunk) {
      const Eigen::Index len = std::min(chunk, n - start);
      const Matrix dots = probes.middleRows(start, len) * centers;
      for (Eigen::Index r = 0; r < len; ++r) {
        Eigen::Index arg = 0;
        const double v = dots.row(r).maxCoeff(&arg);
        if (v < cell_min[arg]) {
          cell_min[arg] = v;
          cell_arg[arg] = start + r;
        }
        if (v < global_min) {
          global_min = v;
          global_arg = start + r;
        }
      }
    }
    const double gamma = 0.5 * std::exp(-it / 25.0) + 0.02;
    for (Eigen::Index j = 0; j < k; ++j) {
      Vector target = cell_arg[j] >= 0 ? Vector(probes.row(cell_arg[j]))
                                       : Vector(probes.row(global_arg));
      Vector moved = centers.col(j) + gamma * (target - centers.col(j));
      const double norm = moved.norm();
      if (norm > 1e-12) centers.col(j) = moved / norm;
    }
    const double w = worst_coverage(probes, centers).first;
    if (w > best_worst) {
      best_worst = w;
      best = centers;
    }
  }
  return best;
}

CoveringSpec spec_from_matrix(int sphere_dim, double alpha, const Matrix& c) {
  CoveringSpec spec;
  spec.sphere_dim = sphere_dim;
  spec.radius = alpha;
  for (Eigen::Index j = 0; j < c.cols(); ++j)
    spec.centers.push_back(UnitVector::normalized(c.col(j)));
  return spec;
}

CoverReport verify_circle(const CoveringSpec& spec, const Tolerance& tol) {
  CoverReport report;
  std::vector<double> angles;
  for (const auto& c : spec.centers)
    angles.push_back(std::atan2(c.vec()[1], c.vec()[0]));
  std::sort(angles.begin(), angles.end());
  double max_gap = 0.0, gap_mid = 0.0;
  for (size_t i = 0; i < angles.size(); ++i) {
    const double next =
        i + 1 < angles.size() ? angles[i + 1] : angles[0] + kTwoPi;
    const double gap = next - angles[i];
    if (gap > max_gap) {
      max_gap = gap;
      gap_mid = angles[i] + gap / 2.0;
    }
  }
  report.checked_points = static_cast<std::int64_t>(angles.size());
  report.min_margin = spec.radius - max_gap / 2.0;
  if (max_gap <= 2.0 * spec.radius + tol.predicate) {
    report.status = VerifyStatus::certified;
    report.note = "exact cyclic-gap certification";
  } else {
    report.status = VerifyStatus::unverified;
    report.note = "largest gap exceeds 2*alpha: not a covering";
    Vector w(2);
    w << std::cos(gap_mid), std::sin(gap_mid);
    report.uncovered_witness = std::move(w);
  }
  return report;
}

CoverReport verify_sphere2(const CoveringSpec& spec, const Tolerance& tol) {
  CoverReport report;
  const Matrix centers = centers_matrix(spec.centers, 3);
  for (const int f : {64, 128, 256}) {
    const auto mesh = icosphere_probes(f);
    const auto [worst_cos, worst_row] = worst_coverage(mesh->probes, centers);
    const double worst = std::acos(std::clamp(worst_cos, -1.0, 1.0));
    report.checked_points = mesh->probes.rows();
    report.min_margin = spec.radius - mesh->rho - worst;
    if (worst > spec.radius + tol.predicate) {
      report.status = VerifyStatus::unverified;
      report.note = "uncovered probe point found";
      report.uncovered_witness = Vector(mesh->probes.row(worst_row));
      return report;
    }
    if (worst <= spec.radius - mesh->rho - tol.predicate) {
      report.status = VerifyStatus::certified;
      report.note =
          "mesh certification at subdivision " + std::to_string(f);
      return report;
    }
  }
  report.status = VerifyStatus::unverified;
  report.note = "mesh resolution insufficient for certification";
  return report;
}

CoverReport verify_sampled(const CoveringSpec& spec, const Tolerance& tol) {
  CoverReport report;
  const int dim = spec.sphere_dim + 1;
  const Matrix centers = centers_matrix(spec.centers, dim);
  Rng rng(987654321u + static_cast<std::uint64_t>(spec.sphere_dim));
  const int n_samples = 1000000;
  double worst = 1.0;
  Vector worst_point;
  for (int i = 0; i < n_samples; ++i) {
    const Vector p = rng.unit_vector(dim).vec();
    const double best = (p.transpose() * centers).maxCoeff();
    if (best < worst) {
      worst = best;
      worst_point = p;
    }
  }
  const double worst_dist = std::acos(std::clamp(worst, -1.0, 1.0));
  report.checked_points = n_samples;
  report.min_margin = spec.radius - worst_dist;
  if (worst_dist > spec.radius + tol.predicate) {
    report.status = VerifyStatus::unverified;
    report.note = "uncovered sample found";
    report.uncovered_witness = std::move(worst_point);
  } else {
    report.status = VerifyStatus::probabilistic;
    report.note = "sampled verification only (sphere_dim >= 3)";
  }
  return report;
}

}  // namespace

std::optional<CoveringSpec> known_cover(int sphere_dim, double alpha,
                                        const Tolerance& tol) {
  if (sphere_dim != 1) return std::nullopt;
  int count = 0;
  if (std::abs(alpha - M_PI / 4.0) <= tol.predicate) count = 4;
  if (std::abs(alpha - M_PI / 6.0) <= tol.predicate) count = 6;
  if (count == 0) return std::nullopt;
  CoveringSpec spec;
  spec.sphere_dim = 1;
  spec.radius = alpha;
  for (int j = 0; j < count; ++j) {
    Vector v(2);
    v << std::cos(kTwoPi * j / count), std::sin(kTwoPi * j / count);
    spec.centers.push_back(UnitVector(v));
  }
  certify_cover(spec, tol);
  CAPBODY_REQUIRE(spec.verified == VerifyStatus::certified,
                  "table cover failed its own certification");
  return spec;
}

CoverReport verify_cover(const CoveringSpec& spec, const Tolerance& tol) {
  if (spec.sphere_dim < 1)
    throw std::invalid_argument("sphere_dim must be >= 1");
  if (!(spec.radius > 0.0) || !(spec.radius < M_PI))
    throw std::invalid_argument("cover radius must lie in (0, pi)");
  if (spec.centers.empty())
    throw std::invalid_argument("cover has no centers");
  for (const auto& c : spec.centers)
    if (c.dim() != spec.sphere_dim + 1)
      throw std::invalid_argument("cover center dimension mismatch");
  if (spec.sphere_dim == 1) return verify_circle(spec, tol);
  if (spec.sphere_dim == 2) return verify_sphere2(spec, tol);
  return verify_sampled(spec, tol);
}

CoverReport certify_cover(CoveringSpec& spec, const Tolerance& tol) {
  CoverReport report = verify_cover(spec, tol);
  spec.verified = report.status;
  return report;
}

CoveringSpec greedy_cover(int sphere_dim, double alpha, std::uint64_t seed,
                          int candidate_count, const Tolerance& tol) {
  if (sphere_dim < 1)
    throw std::invalid_argument("sphere_dim must be >= 1");
  if (!(alpha > 1e-3) || !(alpha < M_PI_2 + 1e-9))
    throw std::invalid_argument("cover radius must lie in (0, pi/2]");

  // S^1: the descent endpoint is the equally spaced optimum; build it
  // directly and certify with the exact gap criterion.
  if (sphere_dim == 1) {
    const int k = std::max(3, static_cast<int>(std::ceil(M_PI / alpha - 1e-12)));
    CoveringSpec spec;
    spec.sphere_dim = 1;
    spec.radius = alpha;
    for (int j = 0; j < k; ++j) {
      Vector v(2);
      v << std::cos(kTwoPi * j / k), std::sin(kTwoPi * j / k);
      spec.centers.push_back(UnitVector(v));
    }
    certify_cover(spec, tol);
    return spec;
  }

  const int dim = sphere_dim + 1;
  Matrix probes;
  double rho_work = 0.0;
  if (sphere_dim == 2) {
    const auto mesh = icosphere_probes(40);
    probes = mesh->probes;
    rho_work = mesh->rho;
  } else {
    Rng mesh_rng(Rng::derive(seed, 0xABCDEF));
    probes.resize(30000, dim);
    for (Eigen::Index r = 0; r < probes.rows(); ++r)
      probes.row(r) = mesh_rng.unit_vector(dim).vec().transpose();
    rho_work = 0.0;  // sampled probes: no deterministic resolution bound
  }
  const double alpha_work = alpha - rho_work - 1e-3;
  const double cos_work = std::cos(alpha_work);

  std::optional<CoveringSpec> best;
  double best_margin = -1.0;
  for (int restart = 0; restart < 2; ++restart) {
    Rng rng(Rng::derive(seed, 1 + restart));

    // Candidate pool and greedy max-coverage seeding over probe bitsets.
    Matrix cand(dim, candidate_count);
    for (int c = 0; c < candidate_count; ++c)
      cand.col(c) = rng.unit_vector(dim).vec();
    const Eigen::Index n = probes.rows();
    const size_t words = (static_cast<size_t>(n) + 63) / 64;
    std::vector<std::vector<std::uint64_t>> covered(
        candidate_count, std::vector<std::uint64_t>(words, 0));
    {
      const Eigen::Index chunk = 65536;
      for (Eigen::Index start = 0; start < n; start += chunk) {
        const Eigen::Index len = std::min(chunk, n - start);
        const Matrix dots = probes.middleRows(start, len) * cand;
        for (Eigen::Index r = 0; r < len; ++r)
          for (int c = 0; c < candidate_count; ++c)
            if (dots(r, c) >= cos_work) {
              const size_t idx = static_cast<size_t>(start + r);
              covered[c][idx / 64] |= std::uint64_t{1} << (idx % 64);
            }
      }
    }
    std::vector<std::uint64_t> uncovered(words, ~std::uint64_t{0});
    if (n % 64) uncovered[words - 1] = (std::uint64_t{1} << (n % 64)) - 1;
    std::vector<Eigen::Index> chosen;
    auto popcount_and = [&](const std::vector<std::uint64_t>& a) {
      long total = 0;
      for (size_t w = 0; w < words; ++w)
        total += std::popcount(a[w] & uncovered[w]);
      return total;
    };
    long remaining = static_cast<long>(n);
    while (remaining > 0) {
      int pick = -1;
      long gain = 0;
      for (int c = 0; c < candidate_count; ++c) {
        const long g = popcount_and(covered[c]);
        if (g > gain) {
          gain = g;
          pick = c;
        }
      }
      if (pick < 0) break;  // residual holes: patched below by teleporting
      chosen.push_back(pick);
      for (size_t w = 0; w < words; ++w) uncovered[w] &= ~covered[pick][w];
      remaining -= gain;
    }
    Matrix centers(dim, static_cast<Eigen::Index>(chosen.size()));
    for (size_t j = 0; j < chosen.size(); ++j)
      centers.col(static_cast<Eigen::Index>(j)) = cand.col(chosen[j]);
    while (remaining > 0) {
      // Cover leftovers with the probes themselves.
      Eigen::Index hole = -1;
      for (size_t w = 0; w < words && hole < 0; ++w)
        if (uncovered[w])
          hole = static_cast<Eigen::Index>(w * 64 + std::countr_zero(uncovered[w]));
      if (hole < 0) break;
      centers.conservativeResize(Eigen::NoChange, centers.cols() + 1);
      centers.col(centers.cols() - 1) = probes.row(hole).transpose();
      const Matrix dots = probes * centers.col(centers.cols() - 1);
      remaining = 0;
      for (Eigen::Index r = 0; r < n; ++r) {
        const size_t idx = static_cast<size_t>(r);
        if ((uncovered[idx / 64] >> (idx % 64)) & 1) {
          if (dots(r, 0) >= cos_work)
            uncovered[idx / 64] &= ~(std::uint64_t{1} << (idx % 64));
          else
            ++remaining;
        }
      }
    }

    centers = refine_minimax(probes, centers, 80);

    // Drop-and-repair descent: remove a center, re-refine, keep the smaller
    // configuration while the working target still holds.
    for (;;) {
      if (centers.cols() <= 2) break;
      const double current = worst_coverage(probes, centers).first;
      if (current < cos_work) break;
      // Removal cost per center: worst second-best coverage over its cell.
      std::vector<double> removal_cos(centers.cols(), 1.0);
      {
        const Eigen::Index chunk = 65536;
        for (Eigen::Index start = 0; start < n; start += chunk) {
          const Eigen::Index len = std::min(chunk, n - start);
          const Matrix dots = probes.middleRows(start, len) * centers;
          for (Eigen::Index r = 0; r < len; ++r) {
            Eigen::Index arg = 0;
            dots.row(r).maxCoeff(&arg);
            double second = -1.0;
            for (Eigen::Index c = 0; c < dots.cols(); ++c)
              if (c != arg) second = std::max(second, dots(r, c));
            removal_cos[arg] = std::min(removal_cos[arg], second);
          }
        }
      }
      std::vector<Eigen::Index> order(centers.cols());
      for (Eigen::Index j = 0; j < centers.cols(); ++j) order[j] = j;
      std::stable_sort(order.begin(), order.end(),
                       [&](Eigen::Index a, Eigen::Index b) {
                         return removal_cos[a] > removal_cos[b];
                       });
      bool accepted = false;
      for (int attempt = 0; attempt < std::min<Eigen::Index>(4, centers.cols());
           ++attempt) {
        Matrix trial(dim, centers.cols() - 1);
        Eigen::Index w = 0;
        for (Eigen::Index j = 0; j < centers.cols(); ++j)
          if (j != order[attempt]) trial.col(w++) = centers.col(j);
        trial = refine_minimax(probes, trial, 60);
        if (worst_coverage(probes, trial).first >= cos_work) {
          centers = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }

    // Final polish and certification at full resolution.
    if (sphere_dim == 2) {
      const auto fine = icosphere_probes(128);
      centers = refine_minimax(fine->probes, centers, 100);
    } else {
      centers = refine_minimax(probes, centers, 100);
    }
    CoveringSpec spec = spec_from_matrix(sphere_dim, alpha, centers);
    CoverReport report = certify_cover(spec, tol);
    if (report.status == VerifyStatus::unverified) {
      // Patch the reported hole once, then retry the certification.
      if (report.uncovered_witness) {
        spec.centers.push_back(
            UnitVector::normalized(*report.uncovered_witness));
        report = certify_cover(spec, tol);
      }
    }
    if (report.status == VerifyStatus::unverified) continue;
    const bool better =
        !best || spec.size() < best->size() ||
        (spec.size() == best->size() && report.min_margin > best_margin);
    if (better) {
      best = spec;
      best_margin = report.min_margin;
    }
  }
  if (!best)
    throw std::runtime_error("greedy_cover failed to produce a verified cover");
  return *best;
}

CoveringSpec rotate_cover_generic(const CoveringSpec& spec,
                                  const std::vector<SphericalCap>& avoid,
                                  std::uint64_t seed, const Tolerance& tol) {
  const int dim = spec.sphere_dim + 1;
  for (const auto& cap : avoid)
    if (cap.center.dim() != dim)
      throw std::invalid_argument("constraint cap dimension mismatch");
  for (int attempt = 0; attempt < 400; ++attempt) {
    Rng rng(Rng::derive(seed, attempt));
    const Matrix q = rng.rotation(dim);
    CoveringSpec rotated = spec;
    bool ok = true;
    for (size_t k = 0; k < spec.centers.size() && ok; ++k) {
      rotated.centers[k] =
          UnitVector::normalized(q * spec.centers[k].vec());
      for (const auto& cap : avoid) {
        const double d = angular_distance(rotated.centers[k], cap.center);
        if (std::abs(d - cap.radius) <= tol.geometry) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return rotated;
  }
  throw std::runtime_error(
      "rotate_cover_generic could not avoid the constraint boundaries");
}

}  // namespace capbody
