#pragma once

// Integer matrices of determinant one and the bounded sets
//   SL^k  = { μ : det μ = 1, |μ_mn| <= k }
//   SL^-k = { μ : det μ = 1, |(μ⁻¹)_mn| <= k }.
//
// Enumeration is streaming: callers pass a visitor and fold on the fly.
// Work is partitioned by the first row, and each partition yields its
// matrices in lexicographic row-major order, so concatenating partitions in
// index order gives the global lexicographic order.

#include <algorithm>
#include <array>
#include <atomic>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "lattrans/errors.hpp"
#include "lattrans/matrix3.hpp"

namespace lattrans {

using IntMatrix3 = Eigen::Matrix<std::int64_t, 3, 3>;
using IntVector3 = Eigen::Matrix<std::int64_t, 3, 1>;

inline constexpr int kDefaultMaxK = 8;
inline constexpr int kMaterializeMaxK = 3;

std::int64_t int_det(const IntMatrix3& m);

class UnimodularMatrix {
 public:
  UnimodularMatrix() : m_(IntMatrix3::Identity()) {}

  static UnimodularMatrix identity() { return UnimodularMatrix(); }

  /// Throws NotUnimodular unless det == +1.
  static UnimodularMatrix from_matrix(const IntMatrix3& m);
  static UnimodularMatrix from_rows(const std::array<std::int64_t, 9>& row_major);
  static std::optional<UnimodularMatrix> try_from(const IntMatrix3& m);

  /// Rounds a real matrix to the nearest integers when every entry is within
  /// `tol` of an integer and the result has det +1.
  static std::optional<UnimodularMatrix> try_round(const Matrix3d& m, double tol = 1e-6);

  const IntMatrix3& matrix() const { return m_; }
  std::int64_t operator()(int i, int j) const { return m_(i, j); }
  Matrix3d real() const { return m_.cast<double>(); }
  std::array<std::int64_t, 9> entries() const;
  std::int64_t max_abs() const { return m_.cwiseAbs().maxCoeff(); }
  bool is_orthogonal() const { return (m_.transpose() * m_ - IntMatrix3::Identity()).isZero(); }

  UnimodularMatrix operator*(const UnimodularMatrix& o) const { return UnimodularMatrix(m_ * o.m_); }

  friend bool operator==(const UnimodularMatrix& a, const UnimodularMatrix& b) {
    return a.m_ == b.m_;
  }
  /// Lexicographic on row-major entries.
  friend std::strong_ordering operator<=>(const UnimodularMatrix& a, const UnimodularMatrix& b) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (a.m_(i, j) != b.m_(i, j)) return a.m_(i, j) <=> b.m_(i, j);
    return std::strong_ordering::equal;
  }

  std::string to_string() const;

 private:
  explicit UnimodularMatrix(const IntMatrix3& m) : m_(m) {}
  friend struct UnimodularAccess;

  IntMatrix3 m_;
};

// Unchecked construction for enumerators that guarantee det == 1 themselves.
struct UnimodularAccess {
  static UnimodularMatrix make(const IntMatrix3& m) { return UnimodularMatrix(m); }
};

/// Exact integer inverse (the adjugate, since det == 1).
UnimodularMatrix integer_inverse(const UnimodularMatrix& mu);

struct EnumerationStats {
  int k = 0;
  std::uint64_t count = 0;
  std::uint64_t candidates_examined = 0;

  EnumerationStats& operator+=(const EnumerationStats& o) {
    count += o.count;
    candidates_examined += o.candidates_examined;
    return *this;
  }
};

/// Throws BudgetExceeded unless 1 <= k <= max_k.
void check_radius(int k, int max_k = kDefaultMaxK);

/// Number of first-row partitions, (2k+1)³.
inline std::size_t partition_count(int k) {
  const auto n = static_cast<std::size_t>(2 * k + 1);
  return n * n * n;
}

inline IntVector3 partition_row(int k, std::size_t index) {
  const auto n = static_cast<std::size_t>(2 * k + 1);
  return IntVector3(static_cast<std::int64_t>(index / (n * n)) - k,
                    static_cast<std::int64_t>((index / n) % n) - k,
                    static_cast<std::int64_t>(index % n) - k);
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Visits every member of SL^k whose first row is partition `index`, in
/// lexicographic order. Rows 1 and 2 are free; det is linear in row 3,
/// det = r₃·(r₁×r₂), so row 3 is solved from r₃·c = 1 by iterating two
/// coordinates and solving for the last one with a nonzero coefficient.
template <typename Visit>
EnumerationStats for_each_slk_partition(int k, std::size_t index, Visit&& visit) {
  EnumerationStats stats{k, 0, 0};
  const std::int64_t kk = k;
  IntMatrix3 m;
  const IntVector3 r1 = partition_row(k, index);
  if (r1.isZero()) return stats;
  m.row(0) = r1.transpose();

  for (std::int64_t a = -kk; a <= kk; ++a)
    for (std::int64_t b = -kk; b <= kk; ++b)
      for (std::int64_t c = -kk; c <= kk; ++c) {
        const IntVector3 r2(a, b, c);
        const IntVector3 n = r1.cross(r2);
        if (n.isZero()) continue;
        if (std::gcd(std::gcd(std::abs(n(0)), std::abs(n(1))), std::abs(n(2))) != 1) continue;
        m.row(1) = r2.transpose();

        auto emit = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
          m(2, 0) = x;
          m(2, 1) = y;
          m(2, 2) = z;
          ++stats.count;
          visit(UnimodularAccess::make(m));
        };

        if (n(2) != 0) {
          for (std::int64_t x = -kk; x <= kk; ++x)
            for (std::int64_t y = -kk; y <= kk; ++y) {
              ++stats.candidates_examined;
              const std::int64_t num = 1 - n(0) * x - n(1) * y;
              if (num % n(2) != 0) continue;
              const std::int64_t z = num / n(2);
              if (z < -kk || z > kk) continue;
              emit(x, y, z);
            }
        } else if (n(1) != 0) {
          for (std::int64_t x = -kk; x <= kk; ++x) {
            ++stats.candidates_examined;
            const std::int64_t num = 1 - n(0) * x;
            if (num % n(1) != 0) continue;
            const std::int64_t y = num / n(1);
            if (y < -kk || y > kk) continue;
            for (std::int64_t z = -kk; z <= kk; ++z) emit(x, y, z);
          }
        } else {
          // gcd == 1 forces n(0) == ±1.
          ++stats.candidates_examined;
          const std::int64_t x = n(0);
          for (std::int64_t y = -kk; y <= kk; ++y)
            for (std::int64_t z = -kk; z <= kk; ++z) emit(x, y, z);
        }
      }
  return stats;
}

/// Streams SL^k in lexicographic row-major order.
template <typename Visit>
EnumerationStats for_each_slk(int k, Visit&& visit, int max_k = kDefaultMaxK) {
  check_radius(k, max_k);
  EnumerationStats total{k, 0, 0};
  for (std::size_t p = 0; p < partition_count(k); ++p) total += for_each_slk_partition(k, p, visit);
  return total;
}

/// Brute force over all (2k+1)⁹ integer tuples; oracle use only (k <= 2).
template <typename Visit>
EnumerationStats for_each_slk_naive(int k, Visit&& visit) {
  check_radius(k, 2);
  EnumerationStats stats{k, 0, 0};
  const std::int64_t n = 2 * k + 1;
  std::int64_t total = 1;
  for (int i = 0; i < 9; ++i) total *= n;
  IntMatrix3 m;
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t c = code;
    for (int i = 8; i >= 0; --i) {
      m(i / 3, i % 3) = c % n - k;
      c /= n;
    }
    ++stats.candidates_examined;
    if (int_det(m) == 1) {
      ++stats.count;
      visit(UnimodularAccess::make(m));
    }
  }
  return stats;
}

/// Streams SL^-k: the exact inverse of each SL^k member, in the order of
/// their inverses.
template <typename Visit>
EnumerationStats for_each_sl_neg_k(int k, Visit&& visit, int max_k = kDefaultMaxK) {
  return for_each_slk(k, [&](const UnimodularMatrix& mu) { visit(integer_inverse(mu)); }, max_k);
}

/// Runs `visit(acc, mu)` over SL^k on `threads` workers, one accumulator per
/// first-row partition. Returns the accumulators in partition order, so any
/// merge that walks them front to back is independent of scheduling.
template <typename Acc, typename MakeAcc, typename Visit>
std::vector<Acc> fold_slk_partitions(int k, unsigned threads, MakeAcc make_acc, Visit visit,
                                     int max_k = kDefaultMaxK) {
  check_radius(k, max_k);
  const std::size_t parts = partition_count(k);
  std::vector<Acc> accs;
  accs.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) accs.push_back(make_acc());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t p = next.fetch_add(1); p < parts; p = next.fetch_add(1)) {
      Acc& acc = accs[p];
      for_each_slk_partition(k, p, [&](const UnimodularMatrix& mu) { visit(acc, mu); });
    }
  };
  const unsigned n = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(parts));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return accs;
}

/// Materialized SL^k for small k (k <= 3).
std::vector<UnimodularMatrix> enumerate_slk(int k);
std::vector<UnimodularMatrix> enumerate_slk_naive(int k);
std::vector<UnimodularMatrix> enumerate_sl_neg_k(int k);

/// Cardinality of SL^k, optionally by brute force.
EnumerationStats count_slk(int k, unsigned threads = 0, bool naive = false,
                           int max_k = kDefaultMaxK);

}  // namespace lattrans
