#include "lattrans/metrics.hpp"

#include <string>

#include "lattrans/errors.hpp"

namespace lattrans {

StrainMetric::StrainMetric(double r) : r_(r) {
  if (!std::isfinite(r) || r == 0.0)
    throw InvalidArgument("strain metric exponent must be finite and nonzero, got " + std::to_string(r));
}

double d_r(const Matrix3d& f, const Matrix3d& g, const StrainMetric& m) {
  if (is_singular(f) || is_singular(g)) throw SingularMatrix();
  const double p = 0.5 * m.r();
  const auto pf = spd_power(SymMatrix3d::gram(f), p);
  const auto pg = spd_power(SymMatrix3d::gram(g), p);
  return (pf - pg).frobenius();
}

double distance_from_stretches(const SingularTriple<double>& nu, const StrainMetric& m) {
  double sum = 0;
  for (double v : nu.values) {
    const double p = std::pow(v, m.r()) - 1.0;
    sum += p * p;
  }
  return std::sqrt(sum);
}

double d_r_to_identity(const Matrix3d& h, const StrainMetric& m) {
  return distance_from_stretches(singular_values(h), m);
}

double key_lemma_lower_bound(const Matrix3d& h, const Vector3d& f, const StrainMetric& m) {
  if (m.inverse_side()) throw InvalidArgument("key lemma bound needs a positive exponent");
  const double nf = f.norm();
  if (nf == 0.0) throw ZeroVector();
  if (is_singular(h)) throw SingularMatrix();
  return std::pow((h * f).norm() / nf, m.r()) - 1.0;
}

}  // namespace lattrans
