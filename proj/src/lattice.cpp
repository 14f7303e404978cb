#include "lattrans/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lattrans {

std::optional<Centring> parse_centring(const std::string& s) {
  if (s == "P" || s == "p") return Centring::P;
  if (s == "C" || s == "c") return Centring::C;
  if (s == "I" || s == "i") return Centring::I;
  if (s == "F" || s == "f") return Centring::F;
  return std::nullopt;
}

char centring_symbol(Centring c) {
  switch (c) {
    case Centring::P: return 'P';
    case Centring::C: return 'C';
    case Centring::I: return 'I';
    case Centring::F: return 'F';
  }
  return '?';
}

PrimitiveBasis primitive_from_centred(const Matrix3d& basis, Centring centring) {
  if (!(det(basis) > 0) || is_singular(basis)) throw NotRightHanded();
  const Vector3d a = basis.col(0), b = basis.col(1), c = basis.col(2);
  PrimitiveBasis out;
  switch (centring) {
    case Centring::P:
      out.basis = basis;
      break;
    case Centring::C:
      out.basis << (a - b) / 2, (a + b) / 2, c;
      break;
    case Centring::I:
      out.basis << (-a + b + c) / 2, (a - b + c) / 2, (a + b - c) / 2;
      break;
    case Centring::F:
      out.basis << (b + c) / 2, (a + c) / 2, (a + b) / 2;
      break;
  }
  if (det(out.basis) < 0) {
    out.basis.col(0).swap(out.basis.col(1));
    out.columns_swapped = true;
  }
  return out;
}

Matrix3d triclinic_to_primitive(const TriclinicParams& p) {
  if (!(p.a > 0 && p.b > 0 && p.c > 0))
    throw InvalidArgument("triclinic cell lengths must be positive");
  for (double angle : {p.alpha, p.beta, p.gamma})
    if (!(angle > 0 && angle < 180))
      throw InfeasibleAngles("triclinic angles must lie strictly between 0 and 180 degrees");

  constexpr double deg = std::numbers::pi / 180.0;
  const double ca = std::cos(p.alpha * deg), cb = std::cos(p.beta * deg);
  const double cg = std::cos(p.gamma * deg), sg = std::sin(p.gamma * deg);
  const double sb = std::sin(p.beta * deg);
  const double t = (ca - cb * cg) / sg;
  const double radicand = sb * sb - t * t;
  if (!(radicand > 1e-12))
    throw InfeasibleAngles("angles (alpha, beta, gamma) do not describe a 3D cell");

  Matrix3d f;
  f << p.a, p.b * cg, p.c * cb,
       0.0, p.b * sg, p.c * t,
       0.0, 0.0, p.c * std::sqrt(radicand);
  return f;
}

double atom_density(const Matrix3d& basis) {
  const double d = det(basis);
  if (!(d > 0)) throw NotRightHanded();
  return 1.0 / d;
}

PointGroup24::PointGroup24() {
  std::size_t n = 0;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      IntMatrix3 m = IntMatrix3::Zero();
      for (int col = 0; col < 3; ++col)
        m(perm[static_cast<std::size_t>(col)], col) = (signs >> col) & 1 ? -1 : 1;
      if (auto u = UnimodularMatrix::try_from(m)) elements_[n++] = *u;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(elements_.begin(), elements_.end());
}

const PointGroup24& PointGroup24::instance() {
  static const PointGroup24 group;
  return group;
}

bool PointGroup24::contains(const UnimodularMatrix& m) const {
  return std::binary_search(elements_.begin(), elements_.end(), m);
}

std::optional<UnimodularMatrix> same_lattice(const Matrix3d& f, const Matrix3d& g) {
  if (is_singular(f) || is_singular(g)) throw SingularMatrix();
  return UnimodularMatrix::try_round(inverse(f) * g, 1e-6);
}

PrimitiveBasis LatticeSpec::resolve(bool allow_column_swap) const {
  Matrix3d conventional;
  bool swapped = false;
  if (const auto* basis = std::get_if<Matrix3d>(&cell)) {
    conventional = *basis;
    if (is_singular(conventional)) throw SingularMatrix();
    if (det(conventional) < 0) {
      if (!allow_column_swap) throw NotRightHanded("basis is left-handed (det < 0)");
      conventional.col(0).swap(conventional.col(1));
      swapped = true;
    }
  } else {
    conventional = triclinic_to_primitive(std::get<TriclinicParams>(cell));
  }
  PrimitiveBasis out = primitive_from_centred(conventional, centring);
  out.columns_swapped = out.columns_swapped || swapped;
  return out;
}

}  // namespace lattrans
