#pragma once

// Reproductions for the cubic and tetragonal steel phases and the
// Terephthalic Acid polymorphs, with closed-form cross-checks.

#include <array>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lattrans/matrix3.hpp"
#include "lattrans/metrics.hpp"
#include "lattrans/optimizer.hpp"
#include "lattrans/unimodular.hpp"

namespace lattrans {

// ---- standard lattices ------------------------------------------------------

/// ½(0 1 1; 1 0 1; 1 1 0), det 1/4.
Matrix3d fcc_basis();
/// λ·2^{-1/3}·½(-1 1 1; 1 -1 1; 1 1 -1); det(bcc_basis(1)) = 1/4.
Matrix3d bcc_basis(double lambda = 1.0);
/// diag(A, A, C)·bcc_basis(1). Throws InvalidArgument unless A, C > 0.
Matrix3d bct_basis(double a, double c);

// ---- closed forms -----------------------------------------------------------

/// The Bain stretch λ·(2^{-1/3}, 2^{1/6}, 2^{1/6}), ascending.
std::array<double, 3> bain_stretches(double lambda = 1.0);

/// d_r of the Bain strain scaled by λ:
/// √(((2^{-1/3}λ)ʳ - 1)² + 2((2^{1/6}λ)ʳ - 1)²).
double bain_distance(double lambda, const StrainMetric& m);

/// Range of λ for which the scaled Bain strain is claimed optimal:
/// λ > 0.84 (r = 1), λ > 0.64 (r = 2), λ < 1.19 (r = -2). Throws
/// InvalidArgument for other exponents.
bool in_bain_window(double lambda, const StrainMetric& m);

/// Second-lowest d_r over fcc → λ·bcc, r ∈ {1, 2}:
///   r = 1: 2^{-3/2}√(25·2^{1/3}λ² - 4·2^{2/3}(4+√17)λ + 24)
///   r = 2: 2^{-3}√(305·2^{2/3}λ⁴ - 400·2^{1/3}λ² + 192)
double excited_state(double lambda, const StrainMetric& m);

/// max over μ ∈ SL¹ of |μ·fcc⁻¹|_F, by enumeration (equals 3^{3/2}).
double sl1_max_frobenius();

/// d_r(diag(2^{1/6}A, 2^{1/6}A, 2^{-1/3}C), I), the Bain-type distance for
/// fcc → bct(A, C).
double bct_bain_distance(double a, double c, const StrainMetric& m);

/// The lattice spanned by a non-optimal fcc → bcc Bain correspondence after
/// the tetragonal distortion: 2^{-4/3}(-A A 0; A A 0; -C -C -2C).
Matrix3d bct_competitor_basis(double a, double c);

/// d_r(competitor·fcc⁻¹, I)² - m_AC,r², r ∈ {1, 2}, as closed products:
///   r = 1: (C - A)(2^{-2/3}(A + C) - 2^{7/6} + 2^{2/3})
///   r = 2: 2^{-4/3}(C - A)(A + C)(3A² + 3C² - 2·2^{2/3})
double bct_competitor_excess(double a, double c, const StrainMetric& m);

/// Stretch of the fcc → bct transformation reported for C <= A:
/// (2^{1/6}(A+C)/2, 2^{1/6}(A-C)/2, 0; ·, 2^{1/6}(A+C)/2, 0; 0, 0, 2^{-1/3}A).
/// Informational only; never asserted optimal.
SymMatrix3d bct_alternative_stretch(double a, double c);

// ---- verification reports ---------------------------------------------------

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::string name;
  std::vector<Check> checks;
  std::vector<OptimalityReport> solves;

  bool passed() const;
  std::string diagnostics() const;  // one line per check
  /// Throws VerificationFailed carrying diagnostics() if any check failed.
  void require() const;
};

/// solve(fcc, bcc, r) for r ∈ {1, 2, -2}: 72 minimizers, 3 classes of 24
/// with diagonal Bain stretches, m_min against the closed form within 1e-12.
/// Throws VerificationFailed.
VerificationReport verify_bain(const StrainMetric& m);

/// fcc → λ·bcc. Inside the window the Bain assertions are made against the
/// λ-scaled closed form; outside it the optimum is reported unchecked.
/// Throws VerificationFailed.
VerificationReport bain_with_volume(double lambda, const StrainMetric& m,
                                    const SolveOptions& opts = {});

/// Terephthalic Acid form I → form II from triclinic cell parameters,
/// r = 1, 2 and -2. Throws VerificationFailed.
VerificationReport terephthalic_case(unsigned threads = 0);

Matrix3d terephthalic_form_one();
Matrix3d terephthalic_form_two();

// ---- fcc → bct stability ----------------------------------------------------

struct BctFlags {
  bool hypothesis = false;  // C >= A > 0.75
  bool d1_sl1 = false;
  bool d1_outside = false;
  bool d2_sl1 = false;
  bool d2_outside = false;
  bool extended_d1 = false;
  bool extended_d2 = false;

  bool certified_d1() const { return (d1_sl1 && d1_outside) || extended_d1; }
  bool certified_d2() const { return (d2_sl1 && d2_outside) || extended_d2; }
  friend bool operator==(const BctFlags&, const BctFlags&) = default;
};

/// Lower bounds on d_r(H_μ, I) over non-Bain μ ∈ SL¹, r = 1 and 2; the best
/// of the reference-point estimates that were tried.
struct BctLowerBounds {
  double d1 = -std::numeric_limits<double>::infinity();
  double d2 = -std::numeric_limits<double>::infinity();
};

/// Sufficient conditions for the Bain-type correspondence to stay optimal in
/// fcc → bct(A, C). Everything is false outside C >= A > 0.75.
BctFlags bct_stability_flags(double a, double c, BctLowerBounds* bounds = nullptr);

struct RegionScanOptions {
  double a_min = 0.7, a_max = 1.8;
  double c_min = 0.7, c_max = 1.8;
  double step = 0.005;
  int iterations = 0;  // refinement passes seeded by certified neighbours
  unsigned threads = 0;
};

struct RegionCell {
  double a = 0, c = 0;
  BctFlags flags;
  friend bool operator==(const RegionCell&, const RegionCell&) = default;
};

struct RegionScanResult {
  RegionScanOptions options;
  std::size_t a_count = 0, c_count = 0;
  std::vector<RegionCell> cells;  // A-major: index = ia·c_count + ic

  const RegionCell& at(std::size_t ia, std::size_t ic) const { return cells[ia * c_count + ic]; }
};

/// Throws InvalidArgument for a non-positive step or an empty range.
RegionScanResult bct_region_scan(const RegionScanOptions& opts = {});

/// Certified (i)+(ii) cells whose straight path to (1, 1) crosses an
/// uncertified cell satisfying the hypothesis, per metric.
struct MonotonicityReport {
  std::size_t checked = 0;
  std::size_t violations_d1 = 0;
  std::size_t violations_d2 = 0;
};
MonotonicityReport check_monotonicity(const RegionScanResult& scan);

/// Comma-separated table, '#' metadata line, then the column header.
void write_region_table(std::ostream& out, const RegionScanResult& scan);
/// Inverse of write_region_table. Throws InvalidArgument on malformed input.
RegionScanResult read_region_table(std::istream& in);

}  // namespace lattrans
