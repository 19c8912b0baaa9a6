#include "capbody/sphere.hpp"

#include "capbody/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace capbody {

namespace {

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

void check_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

double angular_distance(const UnitVector& a, const UnitVector& b) {
  check_same_dim(a.dim(), b.dim());
  // 2 atan2(|a-b|, |a+b|) equals acos(<a,b>) but stays fully conditioned
  // near both 0 and pi, where acos loses half the significant digits.
  return 2.0 * std::atan2((a.vec() - b.vec()).norm(),
                          (a.vec() + b.vec()).norm());
}

double cap_margin(const SphericalCap& cap, const UnitVector& p) {
  return cap.radius - angular_distance(cap.center, p);
}

bool cap_contains(const SphericalCap& cap, const UnitVector& p,
                  const Tolerance& tol) {
  const double m = cap_margin(cap, p);
  return cap.open ? m > tol.predicate : m >= -tol.predicate;
}

double caps_overlap(const SphericalCap& a, const SphericalCap& b) {
  return a.radius + b.radius - angular_distance(a.center, b.center);
}

bool caps_intersect(const SphericalCap& a, const SphericalCap& b,
                    const Tolerance& tol) {
  if (!(a.radius < M_PI_2) || !(b.radius < M_PI_2))
    throw std::domain_error("caps_intersect expects radii < pi/2");
  const double overlap = caps_overlap(a, b);
  const bool both_closed = !a.open && !b.open;
  return both_closed ? overlap >= -tol.predicate : overlap > tol.predicate;
}

EquatorFrame equator_frame(const UnitVector& axis) {
  const Eigen::Index d = axis.dim();
  // Householder QR of the single axis column; the trailing Q columns form an
  // orthonormal basis of the complement.
  Eigen::HouseholderQR<Matrix> qr(axis.vec());
  Matrix q = qr.householderQ();
  EquatorFrame f{axis, q.rightCols(d - 1)};
  return f;
}

SliceOutcome equatorial_slice(const SphericalCap& cap, const UnitVector& axis,
                              const Tolerance& tol) {
  check_same_dim(cap.center.dim(), axis.dim());
  if (!(cap.radius < M_PI_2))
    throw std::domain_error("equatorial_slice expects cap radius < pi/2");
  if (axis.dim() < 3)
    throw std::invalid_argument("equatorial_slice needs ambient dim >= 3");

  const double cos_theta = clamp1(cap.center.dot(axis));
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  if (sin_theta <= tol.geometry)
    return {SliceOutcome::Kind::degenerate_axis, std::nullopt};

  const double cos_beta = std::cos(cap.radius);
  const double cos_gamma = cos_beta / sin_theta;
  if (cos_gamma >= 1.0 - 1e-15)
    return {SliceOutcome::Kind::empty, std::nullopt};

  Vector w_perp =
      (cap.center.vec() - cos_theta * axis.vec()) / sin_theta;
  EquatorFrame frame = equator_frame(axis);
  Vector intrinsic = frame.to_intrinsic(w_perp);
  EquatorialSlice s{
      SphericalCap(UnitVector::normalized(intrinsic), std::acos(cos_gamma),
                   cap.open),
      frame, std::acos(cos_theta)};
  return {SliceOutcome::Kind::nonempty, std::move(s)};
}

TangentFrame tangent_frame(const UnitVector& pole) {
  EquatorFrame e = equator_frame(pole);
  return TangentFrame{pole, e.basis};
}

Vector stereographic_project(const UnitVector& s, const UnitVector& p,
                             const Tolerance& tol) {
  check_same_dim(s.dim(), p.dim());
  if (angular_distance(s, p) <= tol.geometry)
    throw std::invalid_argument("stereographic pole excluded from domain");
  const double t = 2.0 / (1.0 - s.dot(p));
  return s.vec() + t * (p.vec() - s.vec());
}

UnitVector stereographic_lift(const UnitVector& s, const Vector& x_in_h) {
  check_same_dim(s.dim(), x_in_h.size());
  if (std::abs(s.vec().dot(x_in_h) + 1.0) > 1e-6)
    throw std::invalid_argument("lift argument must lie on <x,s> = -1");
  const Vector u = x_in_h - s.vec();
  const double n2 = u.squaredNorm();
  return UnitVector::normalized(s.vec() + (4.0 / n2) * u);
}

EuclideanBall cap_image_ball(const UnitVector& s, const SphericalCap& cap,
                             const Tolerance& tol) {
  check_same_dim(s.dim(), cap.center.dim());
  if (angular_distance(s, cap.center) < cap.radius + tol.geometry)
    throw std::invalid_argument(
        "cap closure must avoid the stereographic pole");

  // Diametral boundary points of the cap in the symmetry plane span(s, c):
  // the plane is preserved by the projection, so their images are diametral
  // for the image ball.
  const Vector& c = cap.center.vec();
  Vector t = s.vec() - s.dot(cap.center) * c;
  double n = t.norm();
  if (n < 1e-12) {
    // s == -c: any tangent direction works; pick a deterministic one.
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      Vector e = Vector::Zero(c.size());
      e[j] = 1.0;
      t = e - e.dot(c) * c;
      n = t.norm();
      if (n > 0.1) break;
    }
  }
  t /= n;
  const double cb = std::cos(cap.radius), sb = std::sin(cap.radius);
  const UnitVector b_plus = UnitVector::normalized(cb * c + sb * t);
  const UnitVector b_minus = UnitVector::normalized(cb * c - sb * t);
  const Vector p_plus = stereographic_project(s, b_plus, tol);
  const Vector p_minus = stereographic_project(s, b_minus, tol);
  return EuclideanBall(Vector((p_plus + p_minus) / 2.0),
                       (p_plus - p_minus).norm() / 2.0);
}

SphericalCap ball_preimage_cap(const UnitVector& s, const EuclideanBall& ball,
                               bool open, const Tolerance& tol) {
  check_same_dim(s.dim(), ball.center.size());
  if (ball.radius < tol.geometry)
    throw std::invalid_argument("ball too small to lift robustly");
  if (std::abs(s.vec().dot(ball.center) + 1.0) > 1e-6)
    throw std::invalid_argument("ball center must lie on <x,s> = -1");

  // Diametral points of the ball along the trace of the symmetry plane.
  Vector e = ball.center + s.vec();  // lies in s^perp
  double n = e.norm();
  if (n < 1e-12) {
    e = tangent_frame(s).basis.col(0);
    n = 1.0;
  }
  e /= n;
  const UnitVector p_plus =
      stereographic_lift(s, Vector(ball.center + ball.radius * e));
  const UnitVector p_minus =
      stereographic_lift(s, Vector(ball.center - ball.radius * e));
  Vector mid = p_plus.vec() + p_minus.vec();
  if (mid.norm() < 1e-9)
    throw std::domain_error(
        "ball lifts to a hemisphere; cap center is undefined");
  UnitVector y = UnitVector::normalized(mid);
  double r = angular_distance(y, p_plus);
  // Orient: the lifted ball center must fall strictly inside.
  const UnitVector q = stereographic_lift(s, ball.center);
  if (angular_distance(y, q) > r) {
    y = -y;
    r = M_PI - r;
  }
  return SphericalCap(y, r, open);
}

int rank_of(const std::vector<UnitVector>& dirs, double threshold) {
  if (dirs.empty()) return 0;
  const Eigen::Index d = dirs[0].dim();
  Matrix m(d, static_cast<Eigen::Index>(dirs.size()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) = dirs[j].vec();
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > threshold * sv[0]) ++rank;
  return rank;
}

std::vector<UnitVector> span_complement(const std::vector<UnitVector>& dirs,
                                        int dim, double threshold) {
  Matrix m = Matrix::Zero(dim, std::max<size_t>(dirs.size(), 1));
  for (size_t j = 0; j < dirs.size(); ++j) m.col(j) = dirs[j].vec();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > threshold * std::max(sv[0], 1e-300)) ++rank;
  std::vector<UnitVector> out;
  for (Eigen::Index j = rank; j < dim; ++j)
    out.push_back(UnitVector::normalized(svd.matrixU().col(j)));
  return out;
}

bool positive_hull_full(const std::vector<UnitVector>& dirs, int dim,
                        const Tolerance& tol) {
  const int n = static_cast<int>(dirs.size());
  if (n < dim + 1) return false;
  for (const auto& u : dirs) check_same_dim(u.dim(), dim);
  if (rank_of(dirs) < dim) return false;

  // pos(dirs) = E^d iff some strictly positive combination vanishes.  With
  // lambda_k = eps + mu_k, mu >= 0, sum(lambda) = 1, maximize eps: full iff
  // the optimum is strictly positive.
  Vector sum = Vector::Zero(dim);
  for (const auto& u : dirs) sum += u.vec();
  Matrix A = Matrix::Zero(dim + 1, n + 2);
  Vector b = Vector::Zero(dim + 1);
  Vector c = Vector::Zero(n + 2);
  for (int k = 0; k < n; ++k) {
    A.col(k).head(dim) = dirs[k].vec();
    A(dim, k) = 1.0;
  }
  A.col(n).head(dim) = sum;
  A(dim, n) = static_cast<double>(n);
  A.col(n + 1) = -A.col(n);
  b[dim] = 1.0;
  c[n] = 1.0;
  c[n + 1] = -1.0;
  LpResult lp = solve_lp_max(A, b, c);
  return lp.status == LpResult::Status::optimal && lp.value > tol.predicate;
}

std::vector<UnitVector> positive_hull_completion(
    const std::vector<UnitVector>& dirs, int dim, const Tolerance& tol) {
  if (positive_hull_full(dirs, dim, tol)) return {};

  std::vector<UnitVector> additions = span_complement(dirs, dim);
  std::vector<UnitVector> all = dirs;
  all.insert(all.end(), additions.begin(), additions.end());

  // With full rank, any strictly positive combination sits in the interior
  // of the hull, so balancing against the (possibly jittered) sum finishes.
  for (int attempt = 0; attempt < 12; ++attempt) {
    Vector sum = Vector::Zero(dim);
    for (size_t k = 0; k < all.size(); ++k) {
      const double w =
          attempt == 0
              ? 1.0
              : 1.0 + 0.1 * std::fmod(0.618033988749895 * (attempt * 131 +
                                                           17 * (k + 1)),
                                      1.0);
      sum += w * all[k].vec();
    }
    if (sum.norm() < 1e-9) continue;
    UnitVector balancer = UnitVector::normalized(Vector(-sum));
    std::vector<UnitVector> candidate = all;
    candidate.push_back(balancer);
    if (positive_hull_full(candidate, dim, tol)) {
      additions.push_back(balancer);
      return additions;
    }
  }
  throw internal_error("positive hull completion failed to converge");
}

}  // namespace capbody
