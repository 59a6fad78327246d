#ifndef TORSION_FORGE_RNG_HPP
#define TORSION_FORGE_RNG_HPP

// Seeded randomness. Every random quantity in the project is drawn from a
// std::mt19937_64 through the helpers below; doubles are built from the raw
// 64-bit output so streams are identical across standard libraries.

#include "torsion_forge/linalg.hpp"

#include <cstdint>
#include <random>

namespace tforge {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  long long integer(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(engine_() % span);
  }
  cplx complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
  CMatrix matrix(Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex(scale);
    return m;
  }
  CMatrix real_matrix(Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = uniform(-scale, scale);
    return m;
  }
  /// I + scale * X, invertible for the small scales used here in practice.
  CMatrix near_identity(Eigen::Index n, double scale = 0.3) { return identity(n) + matrix(n, n, scale); }
  /// Complex symmetric I + scale * (X + X^T) / 2.
  CMatrix symmetric_near_identity(Eigen::Index n, double scale = 0.3) {
    CMatrix x = matrix(n, n, scale);
    return identity(n) + 0.5 * (x + x.transpose());
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tforge

#endif  // TORSION_FORGE_RNG_HPP
