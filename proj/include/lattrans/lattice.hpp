#pragma once

// Bravais lattice descriptions. A lattice is generated by the columns of a
// basis matrix with positive determinant; conventional centred cells and
// triclinic parameter sets are converted to such a primitive basis.

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "lattrans/matrix3.hpp"
#include "lattrans/unimodular.hpp"

namespace lattrans {

enum class Centring { P, C, I, F };

std::optional<Centring> parse_centring(const std::string& s);
char centring_symbol(Centring c);

/// Lengths in Å, angles in degrees: α = ∠(b,c), β = ∠(a,c), γ = ∠(a,b).
struct TriclinicParams {
  double a = 1, b = 1, c = 1;
  double alpha = 90, beta = 90, gamma = 90;
};

struct PrimitiveBasis {
  Matrix3d basis;
  bool columns_swapped = false;  // columns 1 and 2 were exchanged to make det > 0
};

/// The primitive cell generating the same lattice as a centred cell with
/// edges {a, b, c} (the columns of `basis`):
///   P: {a, b, c}
///   C: {(a-b)/2, (a+b)/2, c}
///   I: {(-a+b+c)/2, (a-b+c)/2, (a+b-c)/2}
///   F: {(b+c)/2, (a+c)/2, (a+b)/2}
PrimitiveBasis primitive_from_centred(const Matrix3d& basis, Centring centring);

/// Upper-triangular basis with |f₁| = a, |f₂| = b, |f₃| = c,
/// ∠(f₁,f₂) = γ, ∠(f₁,f₃) = β, ∠(f₂,f₃) = α.
Matrix3d triclinic_to_primitive(const TriclinicParams& p);

/// Lattice points per unit volume, 1/det.
double atom_density(const Matrix3d& basis);

/// The rotation group of the cube: the 24 signed permutation matrices with
/// det +1, stored in lexicographic order.
class PointGroup24 {
 public:
  static const PointGroup24& instance();

  const std::array<UnimodularMatrix, 24>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(const UnimodularMatrix& m) const;

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

 private:
  PointGroup24();
  std::array<UnimodularMatrix, 24> elements_;
};

inline const PointGroup24& point_group_24() { return PointGroup24::instance(); }

/// μ with G = F·μ when both bases generate the same lattice; an entry counts
/// as integral within 1e-6.
std::optional<UnimodularMatrix> same_lattice(const Matrix3d& f, const Matrix3d& g);

/// User-facing lattice description: a direct basis (columns are lattice
/// vectors) or triclinic parameters, plus the centring of that cell.
struct LatticeSpec {
  std::variant<Matrix3d, TriclinicParams> cell = Matrix3d::Identity();
  Centring centring = Centring::P;

  /// Converts to a primitive basis. A left-handed direct basis is rejected
  /// with NotRightHanded unless `allow_column_swap`, in which case columns 1
  /// and 2 are exchanged first.
  PrimitiveBasis resolve(bool allow_column_swap = false) const;
};

}  // namespace lattrans
