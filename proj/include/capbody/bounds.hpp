#pragma once

#include <vector>

#include "capbody/types.hpp"

namespace capbody {

// Which estimate of the normalized cap measure feeds the density bound.
enum class OmegaVariant { exact, lower_bound };

// Normalized measure of a spherical cap of angular radius alpha on S^m:
// the integral of sin^(m-1) over [0, alpha] divided by the same integral
// over [0, pi].  Computed with relative-error adaptive quadrature so that
// the tiny values reached for large m keep full relative accuracy.
double omega(int m, double alpha);

// Closed-form lower bound sin(alpha)^m / sqrt(2*pi*(m+1)) <= omega(m, alpha).
double omega_lower_bound(int m, double alpha);

// Size bound for covering S^m by caps of radius alpha, valid for m >= 3:
// (1/Omega) * (1/2 + 2*ln(ln m)/ln(m) + 5/ln(m)) * m * ln(m).
double dumer_bound(int m, double alpha, OmegaVariant variant);

// Illumination bounds for bodies in dimension d >= 5: a fixed start-up count
// plus a covering bound on the equatorial sphere S^(d-2).
double spiky_bound(int d, OmegaVariant variant = OmegaVariant::lower_bound);
double capbody_bound(int d, OmegaVariant variant = OmegaVariant::lower_bound);

// Ratios against the comparison curves 2^(d+1) d^1.5 ln d and 2^d.
double f_ratio(int d);
double g_ratio(int d);

struct BoundsRow {
  int d = 0;
  double omega_pi6 = 0.0;   // omega(d-2, pi/6)
  double omega_pi4 = 0.0;   // omega(d-2, pi/4)
  double dumer_pi6 = 0.0;   // dumer_bound(d-2, pi/6, exact)
  double dumer_pi4 = 0.0;   // dumer_bound(d-2, pi/4, exact)
  double spiky = 0.0;       // spiky_bound(d)  (lower-bound variant)
  double capbody = 0.0;     // capbody_bound(d)  (lower-bound variant)
  double f_ratio = 0.0;
  double g_ratio = 0.0;
};

std::vector<BoundsRow> ratio_curves(int d_min, int d_max);

// First window start d such that every ratio on [d, d+window] is below one,
// plus diagnostics about the window.
struct ThresholdScan {
  int d = 0;
  bool monotone_decreasing = false;
  double max_ratio = 0.0;
};

ThresholdScan scan_spiky_threshold(int window = 200, int d_limit = 400);
ThresholdScan scan_capbody_threshold(int window = 200, int d_limit = 400);

}  // namespace capbody
