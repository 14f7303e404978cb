#pragma once

// Fixed-size 3x3 real linear algebra on top of Eigen's dense types.
//
// Every operation is a free function templated on the scalar type and
// accepting any Eigen 3x3 expression, so `det(G * mu * F.inverse())` works
// without materializing temporaries by hand. Symmetric matrices get their own
// storage type (SymMatrix3) which keeps a single triangle, so symmetry is
// exact by construction.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <type_traits>

#include <Eigen/Dense>

#include "lattrans/errors.hpp"

namespace lattrans {

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

using Matrix3d = Matrix3<double>;
using Vector3d = Vector3<double>;

namespace detail {

template <typename Derived>
constexpr void assert_3x3() {
  static_assert(Derived::RowsAtCompileTime == 3 && Derived::ColsAtCompileTime == 3,
                "expected a 3x3 matrix expression");
}

template <typename Scalar>
constexpr Scalar jacobi_tolerance() {
  return std::max<Scalar>(Scalar(1e-14), Scalar(4) * std::numeric_limits<Scalar>::epsilon());
}

}  // namespace detail

/// Symmetric 3x3 matrix stored as its upper triangle (xx, yy, zz, xy, xz, yz).
template <typename Scalar>
class SymMatrix3 {
 public:
  SymMatrix3() { v_.fill(Scalar(0)); }
  SymMatrix3(Scalar xx, Scalar yy, Scalar zz, Scalar xy, Scalar xz, Scalar yz)
      : v_{xx, yy, zz, xy, xz, yz} {}

  static SymMatrix3 identity() { return SymMatrix3(1, 1, 1, 0, 0, 0); }
  static SymMatrix3 diagonal(Scalar a, Scalar b, Scalar c) { return SymMatrix3(a, b, c, 0, 0, 0); }

  /// Reads the upper triangle of `m`; the lower triangle is ignored.
  template <typename Derived>
  static SymMatrix3 from_upper(const Eigen::MatrixBase<Derived>& m) {
    detail::assert_3x3<Derived>();
    return SymMatrix3(m(0, 0), m(1, 1), m(2, 2), m(0, 1), m(0, 2), m(1, 2));
  }

  /// The Gram matrix mᵀm (the right Cauchy-Green tensor of a deformation).
  template <typename Derived>
  static SymMatrix3 gram(const Eigen::MatrixBase<Derived>& expr) {
    detail::assert_3x3<Derived>();
    const Matrix3<Scalar> m = expr;
    auto dot = [&m](int i, int j) { return m.col(i).dot(m.col(j)); };
    return SymMatrix3(dot(0, 0), dot(1, 1), dot(2, 2), dot(0, 1), dot(0, 2), dot(1, 2));
  }

  Scalar operator()(int i, int j) const {
    if (i == j) return v_[static_cast<std::size_t>(i)];
    if (i > j) std::swap(i, j);
    return v_[static_cast<std::size_t>(i + j + 2)];  // (0,1)->3 (0,2)->4 (1,2)->5
  }

  Matrix3<Scalar> dense() const {
    Matrix3<Scalar> m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  Scalar frobenius() const {
    const auto& v = v_;
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] +
                     Scalar(2) * (v[3] * v[3] + v[4] * v[4] + v[5] * v[5]));
  }

  Scalar trace() const { return v_[0] + v_[1] + v_[2]; }

  SymMatrix3 operator+(const SymMatrix3& o) const {
    SymMatrix3 r;
    for (std::size_t i = 0; i < 6; ++i) r.v_[i] = v_[i] + o.v_[i];
    return r;
  }
  SymMatrix3 operator-(const SymMatrix3& o) const {
    SymMatrix3 r;
    for (std::size_t i = 0; i < 6; ++i) r.v_[i] = v_[i] - o.v_[i];
    return r;
  }
  SymMatrix3 operator*(Scalar s) const {
    SymMatrix3 r;
    for (std::size_t i = 0; i < 6; ++i) r.v_[i] = v_[i] * s;
    return r;
  }

  const std::array<Scalar, 6>& packed() const { return v_; }

 private:
  std::array<Scalar, 6> v_;
};

using SymMatrix3d = SymMatrix3<double>;

/// Principal stretches ν₁ ≥ ν₂ ≥ ν₃.
template <typename Scalar>
struct SingularTriple {
  std::array<Scalar, 3> values{};

  Scalar max() const { return values[0]; }
  Scalar min() const { return values[2]; }
  Scalar product() const { return values[0] * values[1] * values[2]; }
  Scalar operator[](std::size_t i) const { return values[i]; }
};

template <typename Scalar>
struct Norms {
  Scalar frobenius;
  Scalar spectral;
  Scalar col_max;  // ‖·‖_{2,∞}, the largest column length
};

/// Eigenvalues in descending order; column i of `vectors` belongs to values[i].
template <typename Scalar>
struct SymEigen {
  Vector3<Scalar> values;
  Matrix3<Scalar> vectors;
};

template <typename Derived>
typename Derived::Scalar det(const Eigen::MatrixBase<Derived>& expr) {
  detail::assert_3x3<Derived>();
  const Matrix3<typename Derived::Scalar> m = expr;
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

template <typename Derived>
typename Derived::Scalar frobenius_norm(const Eigen::MatrixBase<Derived>& expr) {
  detail::assert_3x3<Derived>();
  return expr.norm();
}

template <typename Derived>
typename Derived::Scalar column_max_norm(const Eigen::MatrixBase<Derived>& expr) {
  detail::assert_3x3<Derived>();
  return expr.colwise().norm().maxCoeff();
}

/// |det m| <= 1e-12 · |m|_F³.
template <typename Derived>
bool is_singular(const Eigen::MatrixBase<Derived>& expr) {
  detail::assert_3x3<Derived>();
  using Scalar = typename Derived::Scalar;
  const Matrix3<Scalar> m = expr;
  const Scalar f = m.norm();
  return !(std::abs(det(m)) > Scalar(1e-12) * f * f * f);
}

/// Adjugate over determinant.
template <typename Derived>
Matrix3<typename Derived::Scalar> inverse(const Eigen::MatrixBase<Derived>& expr) {
  detail::assert_3x3<Derived>();
  using Scalar = typename Derived::Scalar;
  const Matrix3<Scalar> m = expr;
  if (is_singular(m)) throw SingularMatrix();
  Matrix3<Scalar> adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return adj / det(m);
}

namespace detail {

// Cyclic Jacobi on a dense symmetric working copy. Stops once the
// off-diagonal Frobenius mass drops below tol·|S|_F.
template <typename Scalar, bool WithVectors>
void jacobi(Scalar a[3][3], Scalar v[3][3]) {
  if constexpr (WithVectors) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) v[i][j] = (i == j) ? Scalar(1) : Scalar(0);
  }
  Scalar norm2 = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) norm2 += a[i][j] * a[i][j];
  const Scalar tol = jacobi_tolerance<Scalar>();
  const Scalar limit = tol * tol * norm2;

  constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    const Scalar off = Scalar(2) * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]);
    if (off <= limit) break;
    for (const auto& pq : pairs) {
      const int p = pq[0], q = pq[1];
      const Scalar apq = a[p][q];
      if (apq == Scalar(0)) continue;
      const Scalar theta = (a[q][q] - a[p][p]) / (Scalar(2) * apq);
      Scalar t;
      if (std::abs(theta) > Scalar(1e150)) {
        t = Scalar(1) / (Scalar(2) * theta);
      } else {
        t = Scalar(1) / (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        if (theta < 0) t = -t;
      }
      const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
      const Scalar s = t * c;
      const int r = 3 - p - q;
      const Scalar arp = a[r][p], arq = a[r][q];
      a[r][p] = a[p][r] = c * arp - s * arq;
      a[r][q] = a[q][r] = s * arp + c * arq;
      a[p][p] -= t * apq;
      a[q][q] += t * apq;
      a[p][q] = a[q][p] = Scalar(0);
      if constexpr (WithVectors) {
        for (int k = 0; k < 3; ++k) {
          const Scalar vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

template <typename Scalar>
void load(const SymMatrix3<Scalar>& s, Scalar a[3][3]) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = s(i, j);
}

}  // namespace detail

template <typename Scalar>
SymEigen<Scalar> sym_eigen(const SymMatrix3<Scalar>& s) {
  Scalar a[3][3], v[3][3];
  detail::load(s, a);
  detail::jacobi<Scalar, true>(a, v);

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&a](int i, int j) { return a[i][i] > a[j][j]; });
  SymEigen<Scalar> out;
  for (int c = 0; c < 3; ++c) {
    const int src = order[static_cast<std::size_t>(c)];
    out.values(c) = a[src][src];
    for (int r = 0; r < 3; ++r) out.vectors(r, c) = v[r][src];
  }
  return out;
}

/// Eigenvalues only, descending. Same iteration as sym_eigen without the
/// eigenvector bookkeeping; used on the optimizer's hot path.
template <typename Scalar>
std::array<Scalar, 3> sym_eigenvalues(const SymMatrix3<Scalar>& s) {
  Scalar a[3][3], v[3][3];
  detail::load(s, a);
  detail::jacobi<Scalar, false>(a, v);
  std::array<Scalar, 3> ev{a[0][0], a[1][1], a[2][2]};
  std::sort(ev.begin(), ev.end(), std::greater<Scalar>());
  return ev;
}

/// Square roots of the eigenvalues of mᵀm, descending.
template <typename Derived>
SingularTriple<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& expr) {
  detail::assert_3x3<Derived>();
  using Scalar = typename Derived::Scalar;
  const Matrix3<Scalar> m = expr;
  if (is_singular(m)) throw SingularMatrix();
  const auto ev = sym_eigenvalues(SymMatrix3<Scalar>::gram(m));
  SingularTriple<Scalar> out;
  for (std::size_t i = 0; i < 3; ++i) out.values[i] = std::sqrt(std::max(ev[i], Scalar(0)));
  return out;
}

template <typename Derived>
Norms<typename Derived::Scalar> norms(const Eigen::MatrixBase<Derived>& expr) {
  detail::assert_3x3<Derived>();
  using Scalar = typename Derived::Scalar;
  const Matrix3<Scalar> m = expr;
  const auto ev = sym_eigenvalues(SymMatrix3<Scalar>::gram(m));
  return {m.norm(), std::sqrt(std::max(ev[0], Scalar(0))), column_max_norm(m)};
}

/// S^p for symmetric positive-definite S, as V·diag(λᵖ)·Vᵀ.
template <typename Scalar>
SymMatrix3<Scalar> spd_power(const SymMatrix3<Scalar>& s, Scalar p) {
  const auto eig = sym_eigen(s);
  const Scalar floor = detail::jacobi_tolerance<Scalar>() * s.frobenius();
  if (!(eig.values(2) > floor)) throw NotPositiveDefinite();
  Vector3<Scalar> w;
  for (int i = 0; i < 3; ++i) w(i) = std::pow(eig.values(i), p);
  const Matrix3<Scalar>& v = eig.vectors;
  auto entry = [&](int i, int j) {
    return v(i, 0) * v(j, 0) * w(0) + v(i, 1) * v(j, 1) * w(1) + v(i, 2) * v(j, 2) * w(2);
  };
  return SymMatrix3<Scalar>(entry(0, 0), entry(1, 1), entry(2, 2), entry(0, 1), entry(0, 2),
                            entry(1, 2));
}

/// The SPD factor √(HᵀH) of the polar decomposition H = R·√(HᵀH).
template <typename Derived>
SymMatrix3<typename Derived::Scalar> polar_stretch(const Eigen::MatrixBase<Derived>& expr) {
  detail::assert_3x3<Derived>();
  using Scalar = typename Derived::Scalar;
  const Matrix3<Scalar> h = expr;
  if (is_singular(h)) throw SingularMatrix();
  return spd_power(SymMatrix3<Scalar>::gram(h), Scalar(0.5));
}

}  // namespace lattrans
