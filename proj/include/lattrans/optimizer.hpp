#pragma once

// Optimal lattice transformations.
//
// Every lattice transformation from L(F) to L(G) has the form H_μ = G·μ·F⁻¹
// with μ ∈ SL(3,ℤ). The optimizer minimizes d_r(H_μ, I) over μ. For s = |r|
// every minimizer satisfies
//
//   r > 0:  ‖μ‖ˢ    <= (‖F‖ˢ / ν_min(G)ˢ)·(m₀ + 1)
//   r < 0:  ‖μ⁻¹‖ˢ  <= (‖G‖ˢ / ν_min(F)ˢ)·(m₀ + 1)
//
// with ‖·‖ the column max norm and m₀ = d_r(H_μ₀, I) for any incumbent μ₀
// (the identity by default). A unimodular μ outside SL^k has a column of
// length at least √((k+1)² + 1), which turns the bound into a finite radius k
// and reduces the problem to an exhaustive search over SL^k (or SL^-k).

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "lattrans/matrix3.hpp"
#include "lattrans/metrics.hpp"
#include "lattrans/unimodular.hpp"

namespace lattrans {

/// Relative tolerance on HᵀH for grouping transformations into classes.
inline constexpr double kClassTolerance = 1e-6;
inline constexpr std::size_t kDefaultLevelCap = 64;

enum class BoundSide { direct, inverse };

struct SearchBound {
  int k = 1;
  double m0 = 0;         // d_r(H_μ₀, I) of the incumbent
  double raw_bound = 0;  // right-hand side, bounds ‖μ‖ˢ (or ‖μ⁻¹‖ˢ)
  double exponent = 1;   // s = |r|
  BoundSide side = BoundSide::direct;

  /// The bound on the column max norm itself, raw_bound^(1/s).
  double radius() const;
};

/// Finite search radius from the bound above. Throws SingularMatrix or
/// NotRightHanded for invalid bases.
SearchBound compute_bound(const Matrix3d& f, const Matrix3d& g, const StrainMetric& m,
                          const std::optional<UnimodularMatrix>& incumbent = std::nullopt);

struct SolveOptions {
  std::optional<int> k_override;  // search exactly this radius
  std::optional<int> k_cap;       // never search beyond this radius
  std::optional<UnimodularMatrix> incumbent;
  int max_k = kDefaultMaxK;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::size_t level_cap = kDefaultLevelCap;
  bool prune = true;  // skip candidates whose key-lemma bound exceeds every retained level
};

struct Minimizer {
  UnimodularMatrix mu;
  Matrix3d h;  // G·μ·F⁻¹
  double distance = 0;
};

struct EquivalenceClass {
  SymMatrix3d stretch;  // √(HᵀH) of the first member
  SingularTriple<double> principal_stretches;
  std::vector<std::size_t> members;  // indices into the input list
};

struct DistanceLevel {
  double distance = 0;      // smallest member
  std::uint64_t multiplicity = 0;
  double max_distance = 0;  // largest member, within tie tolerance of `distance`
};

struct OptimalityReport {
  StrainMetric metric{1.0};
  SearchBound bound;
  int k_used = 1;
  bool certified = true;  // false when the searched radius is below bound.k
  std::vector<Minimizer> minimizers;  // lexicographic in μ
  std::vector<EquivalenceClass> classes;
  double m_min = 0;
  std::optional<double> m_second;
  double gap = std::numeric_limits<double>::infinity();
  // The next level starts within tie tolerance of the largest ground-level
  // value, so the split between the two depends on rounding.
  bool unresolved_tie = false;
  std::vector<DistanceLevel> levels;  // lowest distinct levels, ascending
  std::uint64_t evaluated = 0;
  std::uint64_t pruned = 0;
};

OptimalityReport solve(const Matrix3d& f, const Matrix3d& g, const StrainMetric& m,
                       const SolveOptions& opts = {});

/// Distinct values of d_r(H_μ, I) over SL^k (SL^-k for r < 0) with their
/// multiplicities, ascending; at most `level_cap` levels.
std::vector<DistanceLevel> ranked_distances(const Matrix3d& f, const Matrix3d& g,
                                            const StrainMetric& m, int k, unsigned threads = 0,
                                            std::size_t level_cap = kDefaultLevelCap);

/// Partitions transformations by HᵀH: H₁ ~ H₂ iff
/// ‖H₁ᵀH₁ - H₂ᵀH₂‖_F <= tol·(1 + ‖H₁ᵀH₁‖_F), comparing against each class's
/// first member. Classes appear in order of their first member.
std::vector<EquivalenceClass> group_classes(const std::vector<Matrix3d>& hs,
                                            double tol = kClassTolerance);

struct OrbitResult {
  std::vector<UnimodularMatrix> members;  // sorted, distinct
  std::size_t dropped = 0;                // (P, Q) pairs with a non-integral conjugate
};

/// μ_PQ = G⁻¹PG·μ₀·F⁻¹QF over P, Q in the cubic rotation group, keeping only
/// pairs whose conjugates are integral.
OrbitResult p24_orbit(const UnimodularMatrix& mu0, const Matrix3d& f, const Matrix3d& g);

}  // namespace lattrans
