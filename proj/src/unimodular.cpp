#include "lattrans/unimodular.hpp"

#include <cmath>
#include <sstream>

namespace lattrans {

std::int64_t int_det(const IntMatrix3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

UnimodularMatrix UnimodularMatrix::from_matrix(const IntMatrix3& m) {
  const std::int64_t d = int_det(m);
  if (d != 1) throw NotUnimodular("integer matrix has determinant " + std::to_string(d) + ", expected 1");
  return UnimodularMatrix(m);
}

UnimodularMatrix UnimodularMatrix::from_rows(const std::array<std::int64_t, 9>& row_major) {
  IntMatrix3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = row_major[static_cast<std::size_t>(i)];
  return from_matrix(m);
}

std::optional<UnimodularMatrix> UnimodularMatrix::try_from(const IntMatrix3& m) {
  if (int_det(m) != 1) return std::nullopt;
  return UnimodularMatrix(m);
}

std::optional<UnimodularMatrix> UnimodularMatrix::try_round(const Matrix3d& m, double tol) {
  IntMatrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v) || std::abs(v) > 1e15) return std::nullopt;
      const double nearest = std::round(v);
      if (std::abs(v - nearest) > tol) return std::nullopt;
      r(i, j) = static_cast<std::int64_t>(nearest);
    }
  return try_from(r);
}

std::array<std::int64_t, 9> UnimodularMatrix::entries() const {
  std::array<std::int64_t, 9> out{};
  for (int i = 0; i < 9; ++i) out[static_cast<std::size_t>(i)] = m_(i / 3, i % 3);
  return out;
}

std::string UnimodularMatrix::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < 3; ++i) {
    if (i) os << "; ";
    os << m_(i, 0) << ' ' << m_(i, 1) << ' ' << m_(i, 2);
  }
  os << ')';
  return os.str();
}

UnimodularMatrix integer_inverse(const UnimodularMatrix& mu) {
  const IntMatrix3& m = mu.matrix();
  IntMatrix3 adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return UnimodularAccess::make(adj);
}

void check_radius(int k, int max_k) {
  if (k < 1) throw InvalidArgument("search radius k must be >= 1, got " + std::to_string(k));
  if (k > max_k)
    throw BudgetExceeded("search radius k=" + std::to_string(k) + " exceeds the limit " +
                         std::to_string(max_k));
}

std::vector<UnimodularMatrix> enumerate_slk(int k) {
  check_radius(k, kMaterializeMaxK);
  std::vector<UnimodularMatrix> out;
  for_each_slk(k, [&out](const UnimodularMatrix& mu) { out.push_back(mu); });
  return out;
}

std::vector<UnimodularMatrix> enumerate_slk_naive(int k) {
  std::vector<UnimodularMatrix> out;
  for_each_slk_naive(k, [&out](const UnimodularMatrix& mu) { out.push_back(mu); });
  return out;
}

std::vector<UnimodularMatrix> enumerate_sl_neg_k(int k) {
  check_radius(k, kMaterializeMaxK);
  std::vector<UnimodularMatrix> out;
  for_each_sl_neg_k(k, [&out](const UnimodularMatrix& mu) { out.push_back(mu); });
  return out;
}

EnumerationStats count_slk(int k, unsigned threads, bool naive, int max_k) {
  if (naive) return for_each_slk_naive(k, [](const UnimodularMatrix&) {});
  // Counting goes through the partition fold so --threads applies.
  check_radius(k, max_k);
  const std::size_t parts = partition_count(k);
  std::vector<EnumerationStats> per(parts);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t p = next.fetch_add(1); p < parts; p = next.fetch_add(1))
      per[p] = for_each_slk_partition(k, p, [](const UnimodularMatrix&) {});
  };
  const unsigned n = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(parts));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  EnumerationStats total{k, 0, 0};
  for (const auto& s : per) total += s;
  return total;
}

}  // namespace lattrans
