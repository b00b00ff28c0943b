#pragma once
// Counter-based seed splitting. Every trial / Monte Carlo chunk gets its own
// generator derived from (master seed, stream index), so results do not depend
// on how work is scheduled across threads.

#include "algdist/core.hpp"

#include <cstdint>
#include <random>

namespace algdist {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x5851f42d4c957f2dULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::uint64_t stream) : engine_(derive_seed(master, stream)) {}

  Rng split(std::uint64_t stream) { return Rng(engine_(), stream); }

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  // Standard complex Gaussian: E|z|^2 = 1.
  Complex cnormal() {
    constexpr double s = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }
  std::uint64_t bits() { return engine_(); }

  CVector gaussian_vector(int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = cnormal();
    return v;
  }
  CMatrix gaussian_matrix(int rows, int cols) {
    CMatrix m(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) m(r, c) = cnormal();
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace algdist
