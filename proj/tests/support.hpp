#pragma once

#include <cmath>
#include <random>

#include "lattrans/matrix3.hpp"

namespace lattrans::testing {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed = 20240611) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  /// Entries uniform in [-1, 1], resampled until det > 0 and reasonably
  /// conditioned.
  Matrix3d basis() {
    while (true) {
      Matrix3d m;
      for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = uniform(-1, 1);
      if (det(m) > 0.05) return m;
    }
  }

  Matrix3d any_matrix() {
    Matrix3d m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = uniform(-1, 1);
    return m;
  }

  /// Uniform rotation from a normalized Gaussian quaternion.
  Matrix3d rotation() {
    std::normal_distribution<double> n;
    Eigen::Quaterniond q(n(rng_), n(rng_), n(rng_), n(rng_));
    q.normalize();
    return q.toRotationMatrix();
  }

  SymMatrix3d spd() {
    const Matrix3d m = basis();
    return SymMatrix3d::gram(m);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace lattrans::testing
