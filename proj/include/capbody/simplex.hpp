#pragma once

#include "capbody/types.hpp"

namespace capbody {

// Dense two-phase simplex for small linear programs:
//   maximize c^T x  subject to  A x = b,  x >= 0.
// Self-contained on purpose: the positive-hull tests sit on the hot path of
// every verification and must not depend on an external solver.
struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  Vector x;
  double value = 0.0;
};

LpResult solve_lp_max(const Matrix& A, const Vector& b, const Vector& c);

}  // namespace capbody
