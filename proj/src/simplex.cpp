#include "capbody/simplex.hpp"

#include <cmath>
#include <vector>

namespace capbody {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-9;

// Tableau simplex on T (m+1 rows, n+1 cols); last row is the objective in
// reduced form (maximization), last column the rhos.  `basis[i]` is the
// variable basic in row i.  Returns false on unboundedness.
bool run_simplex(Matrix& T, std::vector<int>& basis, long max_iters) {
  const Eigen::Index m = T.rows() - 1;
  const Eigen::Index n = T.cols() - 1;
  long iter = 0;
  for (;; ++iter) {
    if (iter > max_iters)
      throw internal_error("simplex iteration limit exceeded");
    const bool bland = iter > 4 * max_iters / 5;

    // Entering column: most positive reduced cost (Dantzig), or the lowest
    // eligible index once the Bland anti-cycling fallback kicks in.
    Eigen::Index enter = -1;
    double best = kCostEps;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double rc = T(m, j);
      if (rc > best) {
        enter = j;
        best = rc;
        if (bland) break;
      }
    }
    if (enter < 0) return true;  // optimal

    // Ratio test; ties broken toward the smallest basic variable index so the
    // pivot sequence is deterministic and cycling-resistant.
    Eigen::Index leave = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = T(i, enter);
      if (a > kPivotEps) {
        const double ratio = T(i, n) / a;
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded

    // Pivot.
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    basis[leave] = static_cast<int>(enter);
  }
}

}  // namespace

LpResult solve_lp_max(const Matrix& A, const Vector& b, const Vector& c) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("LP dimension mismatch");

  // Phase 1: artificial basis, minimize the artificial mass.
  Matrix T = Matrix::Zero(m + 1, n + m + 1);
  T.block(0, 0, m, n) = A;
  Vector rhs = b;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (rhs[i] < 0) {
      T.row(i).head(n) = -T.row(i).head(n);
      rhs[i] = -rhs[i];
    }
    T(i, n + i) = 1.0;
    T(i, n + m) = rhs[i];
  }
  std::vector<int> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = static_cast<int>(n + i);
  // Objective: maximize -sum(artificials) expressed in reduced form.
  for (Eigen::Index j = 0; j < n + m + 1; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) s += T(i, j);
    T(m, j) = (j >= n && j < n + m) ? s - 1.0 : s;
  }
  const long budget = 400 * static_cast<long>(n + m + 8);
  if (!run_simplex(T, basis, budget))
    throw internal_error("phase-1 LP reported unbounded");
  if (T(m, n + m) > 1e-7) {
    LpResult r;
    r.status = LpResult::Status::infeasible;
    return r;
  }

  // Drive leftover artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    Eigen::Index piv = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(T(i, j)) > 1e-8) {
        piv = j;
        break;
      }
    if (piv < 0) continue;  // redundant row; harmless to leave in place
    T.row(i) /= T(i, piv);
    for (Eigen::Index k = 0; k <= m; ++k) {
      if (k == i) continue;
      const double f = T(k, piv);
      if (f != 0.0) T.row(k) -= f * T.row(i);
    }
    basis[i] = static_cast<int>(piv);
  }

  // Phase 2 objective over the phase-1 basis.
  Matrix T2 = Matrix::Zero(m + 1, n + 1);
  T2.block(0, 0, m, n) = T.block(0, 0, m, n);
  T2.col(n).head(m) = T.col(n + m).head(m);
  for (Eigen::Index j = 0; j < n; ++j) T2(m, j) = c[j];
  T2(m, n) = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] >= n) continue;  // stuck artificial on a redundant row
    const double cb = c[basis[i]];
    if (cb != 0.0) T2.row(m) -= cb * T2.row(i);
  }

  LpResult r;
  if (!run_simplex(T2, basis, budget)) {
    r.status = LpResult::Status::unbounded;
    return r;
  }
  r.status = LpResult::Status::optimal;
  r.x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] < n) r.x[basis[i]] = T2(i, n);
  r.value = -T2(m, n);
  return r;
}

}  // namespace capbody
