#include "capbody/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace capbody {

namespace {

// Adaptive Simpson with a relative error target.  The absolute tolerance is
// derived from a coarse composite estimate so integrals spanning dozens of
// orders of magnitude keep the same relative accuracy.
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(std::function<double(double)> f, double rel_tol)
      : f_(std::move(f)), rel_tol_(rel_tol) {}

  double integrate(double a, double b) const {
    const int coarse_n = 128;  // even
    const double h = (b - a) / coarse_n;
    double rough = f_(a) + f_(b);
    for (int i = 1; i < coarse_n; ++i)
      rough += f_(a + i * h) * (i % 2 ? 4.0 : 2.0);
    rough *= h / 3.0;
    const double abs_tol = std::max(1e-300, rel_tol_ * std::abs(rough));

    const double m = (a + b) / 2.0;
    const double fa = f_(a), fb = f_(b), fm = f_(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return recurse(a, b, fa, fm, fb, whole, abs_tol, 0);
  }

 private:
  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) const {
    const double m = (a + b) / 2.0;
    const double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
    const double flm = f_(lm), frm = f_(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= 48 || std::abs(delta) <= 15.0 * tol)
      return left + right + delta / 15.0;
    return recurse(a, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
           recurse(m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
  }

  std::function<double(double)> f_;
  double rel_tol_;
};

double sine_power_integral(int power, double upper) {
  AdaptiveSimpson quad(
      [power](double t) { return std::pow(std::sin(t), power); }, 1e-13);
  return quad.integrate(0.0, upper);
}

void check_cap_angle(double alpha, double max_angle) {
  if (!(alpha > 0.0) || !(alpha < max_angle))
    throw std::invalid_argument("cap angle out of range");
}

}  // namespace

double omega(int m, double alpha) {
  if (m < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  check_cap_angle(alpha, M_PI + 1e-15);  // alpha = pi is the full sphere
  return sine_power_integral(m - 1, alpha) / sine_power_integral(m - 1, M_PI);
}

double omega_lower_bound(int m, double alpha) {
  if (m < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  check_cap_angle(alpha, M_PI_2 + 1e-15);
  return std::pow(std::sin(alpha), m) / std::sqrt(2.0 * M_PI * (m + 1));
}

double dumer_bound(int m, double alpha, OmegaVariant variant) {
  if (m < 3)
    throw std::invalid_argument("density bound requires sphere dimension >= 3");
  check_cap_angle(alpha, M_PI_2);
  const double w = variant == OmegaVariant::exact ? omega(m, alpha)
                                                  : omega_lower_bound(m, alpha);
  const double lm = std::log(static_cast<double>(m));
  const double factor = 0.5 + 2.0 * std::log(lm) / lm + 5.0 / lm;
  return factor * m * lm / w;
}

namespace {

void check_body_dim(int d) {
  if (d < 5)
    throw std::invalid_argument(
        "illumination bounds require dimension >= 5, got " + std::to_string(d));
}

}  // namespace

double spiky_bound(int d, OmegaVariant variant) {
  check_body_dim(d);
  return 3.0 + dumer_bound(d - 2, M_PI / 6.0, variant);
}

double capbody_bound(int d, OmegaVariant variant) {
  check_body_dim(d);
  return 2.0 + dumer_bound(d - 2, M_PI / 4.0, variant);
}

double f_ratio(int d) {
  check_body_dim(d);
  const double comparison =
      std::pow(2.0, d + 1) * std::pow(static_cast<double>(d), 1.5) *
      std::log(static_cast<double>(d));
  return spiky_bound(d, OmegaVariant::lower_bound) / comparison;
}

double g_ratio(int d) {
  check_body_dim(d);
  return capbody_bound(d, OmegaVariant::lower_bound) / std::pow(2.0, d);
}

std::vector<BoundsRow> ratio_curves(int d_min, int d_max) {
  check_body_dim(d_min);
  if (d_max < d_min)
    throw std::invalid_argument("empty dimension range for ratio_curves");
  std::vector<BoundsRow> rows;
  rows.reserve(static_cast<size_t>(d_max - d_min + 1));
  for (int d = d_min; d <= d_max; ++d) {
    BoundsRow row;
    row.d = d;
    row.omega_pi6 = omega(d - 2, M_PI / 6.0);
    row.omega_pi4 = omega(d - 2, M_PI / 4.0);
    row.dumer_pi6 = dumer_bound(d - 2, M_PI / 6.0, OmegaVariant::exact);
    row.dumer_pi4 = dumer_bound(d - 2, M_PI / 4.0, OmegaVariant::exact);
    row.spiky = spiky_bound(d);
    row.capbody = capbody_bound(d);
    row.f_ratio = capbody::f_ratio(d);
    row.g_ratio = capbody::g_ratio(d);
    rows.push_back(row);
  }
  return rows;
}

namespace {

ThresholdScan scan_threshold(const std::function<double(int)>& ratio,
                             int window, int d_limit) {
  if (window < 1 || d_limit < 5)
    throw std::invalid_argument("invalid threshold scan parameters");
  std::vector<double> memo(static_cast<size_t>(d_limit + window + 2),
                           std::numeric_limits<double>::quiet_NaN());
  const auto value = [&](int d) {
    double& slot = memo[static_cast<size_t>(d)];
    if (std::isnan(slot)) slot = ratio(d);
    return slot;
  };
  for (int d = 5; d <= d_limit; ++d) {
    ThresholdScan scan;
    scan.d = d;
    scan.monotone_decreasing = true;
    scan.max_ratio = 0.0;
    bool all_below = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int t = d; t <= d + window; ++t) {
      const double r = value(t);
      scan.max_ratio = std::max(scan.max_ratio, r);
      if (!(r < 1.0)) {
        all_below = false;
        break;
      }
      if (!(r < prev)) scan.monotone_decreasing = false;
      prev = r;
    }
    if (all_below) return scan;
  }
  throw std::runtime_error("no sub-one ratio window found within the scan limit");
}

}  // namespace

ThresholdScan scan_spiky_threshold(int window, int d_limit) {
  return scan_threshold([](int d) { return f_ratio(d); }, window, d_limit);
}

ThresholdScan scan_capbody_threshold(int window, int d_limit) {
  return scan_threshold([](int d) { return g_ratio(d); }, window, d_limit);
}

}  // namespace capbody
