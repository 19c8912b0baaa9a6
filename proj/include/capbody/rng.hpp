#pragma once

#include "capbody/types.hpp"

#include <cstdint>
#include <random>

namespace capbody {

// Deterministic random source.  All distributions are hand-rolled on top of
// the (standard-specified) mt19937_64 stream, because std::*_distribution is
// implementation-defined and would break byte-identical reproducibility of
// seeded outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Derived stream for sub-tasks: (seed, index) -> new deterministic seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    return seed ^ (index * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
  }

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1): top 53 bits of the stream.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], rejection-sampled to avoid modulo bias.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return eng_();  // full range
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return lo + x % span;
  }

  // Standard normal via Box-Muller (no cached spare: one fresh pair per call
  // keeps the call sequence trivially reproducible).
  double normal() {
    double u1 = uniform();
    if (u1 < 0x1.0p-100) u1 = 0x1.0p-100;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vector gaussian(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal();
    return v;
  }

  // Uniform point of S^{dim-1}.
  UnitVector unit_vector(int dim) {
    for (;;) {
      Vector g = gaussian(dim);
      const double n = g.norm();
      if (n > 1e-6) return UnitVector(Vector(g / n));
    }
  }

  // Point of the open cap around `center` of angular radius `radius`.
  // Area-uniform for small radii; adequate (and deterministic) in general.
  UnitVector unit_in_cap(const UnitVector& center, double radius) {
    const int d = static_cast<int>(center.dim());
    for (;;) {
      const double t =
          radius * std::pow(uniform(), 1.0 / std::max(1, d - 1));
      Vector g = gaussian(d);
      Vector tangent = g - g.dot(center.vec()) * center.vec();
      const double n = tangent.norm();
      if (n < 1e-8) continue;
      Vector p = std::cos(t) * center.vec() + std::sin(t) * (tangent / n);
      return UnitVector::normalized(p);
    }
  }

  // Haar-ish random rotation: QR of a Gaussian matrix with the sign fix that
  // makes the factorization canonical.  Deterministic given the stream.
  Matrix rotation(int dim) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j)
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace capbody
