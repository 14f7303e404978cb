#pragma once

// The strain pseudometrics d_r(F, G) = |(FᵀF)^{r/2} - (GᵀG)^{r/2}|, r ≠ 0.
//
// d_r only sees the Gram matrices, so it is invariant under rotations from
// the left of either argument; the induced metric on rotation classes is
// therefore d_r itself and no minimization over SO(3) is ever needed.

#include <algorithm>
#include <array>
#include <cmath>

#include "lattrans/matrix3.hpp"

namespace lattrans {

class StrainMetric {
 public:
  /// Throws InvalidArgument for r == 0 or non-finite r.
  explicit StrainMetric(double r);

  double r() const { return r_; }
  double exponent() const { return std::abs(r_); }
  /// Negative exponents bound μ⁻¹ rather than μ in the optimizer.
  bool inverse_side() const { return r_ < 0; }

  friend bool operator==(const StrainMetric&, const StrainMetric&) = default;

 private:
  double r_;
};

/// Two distances are equal when |a - b| <= 1e-9·(1 + m).
inline constexpr double kTieTolerance = 1e-9;

inline double tie_tolerance(double m_min) { return kTieTolerance * (1.0 + std::abs(m_min)); }
inline bool distances_tie(double a, double b) {
  return std::abs(a - b) <= tie_tolerance(std::min(a, b));
}

double d_r(const Matrix3d& f, const Matrix3d& g, const StrainMetric& m);

/// √Σ(ν_iʳ - 1)² from the singular values of H.
double d_r_to_identity(const Matrix3d& h, const StrainMetric& m);

double distance_from_stretches(const SingularTriple<double>& nu, const StrainMetric& m);

/// Same as distance_from_stretches, taking the eigenvalues of HᵀH (= ν²).
inline double distance_from_gram_eigenvalues(const std::array<double, 3>& ev, const StrainMetric& m) {
  const double half = 0.5 * m.r();
  double sum = 0;
  for (double lambda : ev) {
    const double p = (half == 1.0) ? lambda : std::pow(lambda, half);
    sum += (p - 1.0) * (p - 1.0);
  }
  return std::sqrt(sum);
}

/// |Hf|ˢ/|f|ˢ - 1, a lower bound on d_s(H, I) for s > 0.
double key_lemma_lower_bound(const Matrix3d& h, const Vector3d& f, const StrainMetric& m);

}  // namespace lattrans
