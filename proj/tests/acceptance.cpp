// Acceptance run: one PASS/FAIL line per criterion, with supporting detail
// indented below it. Exit status is the number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lattrans/applications.hpp"
#include "lattrans/cli.hpp"
#include "lattrans/lattice.hpp"
#include "lattrans/metrics.hpp"
#include "lattrans/optimizer.hpp"
#include "lattrans/unimodular.hpp"
#include "support.hpp"

using namespace lattrans;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) passed = false;
    notes.push_back((ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { notes.push_back("      " + what); }
};

template <typename... Parts>
std::string str(const Parts&... parts) {
  std::ostringstream os;
  os << std::setprecision(12);
  (os << ... << parts);
  return os.str();
}

const UnimodularMatrix kBainMu = UnimodularMatrix::from_rows({1, 1, 1, 0, 1, 0, 0, 1, 1});

bool bain_spectrum(const EquivalenceClass& c, double lambda, double tol) {
  auto expected = bain_stretches(lambda);
  std::array<double, 3> got{c.principal_stretches[2], c.principal_stretches[1],
                            c.principal_stretches[0]};
  for (std::size_t i = 0; i < 3; ++i)
    if (std::abs(got[i] - expected[i]) > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------

Outcome sl_cardinalities() {
  Outcome o;
  const std::array<std::uint64_t, 6> published{3480, 67704, 640824, 2597208, 10460024, 28940280};
  for (int k = 1; k <= 6; ++k) {
    const auto start = Clock::now();
    const auto stats = count_slk(k);
    const double t = seconds_since(start);
    const auto want = published[static_cast<std::size_t>(k - 1)];
    o.expect(stats.count == want, str("k=", k, " count ", stats.count, " expected ", want));
    if (k <= 3) o.expect(t < 1.0, str("k=", k, " time ", t, " s (limit 1 s)"));
    if (k == 6) o.expect(t < 120.0, str("k=6 time ", t, " s (limit 120 s)"));
  }
  return o;
}

Outcome bain_reproduction() {
  Outcome o;
  const auto start = Clock::now();
  for (double r : {1.0, 2.0, -2.0}) {
    const StrainMetric m(r);
    const auto rep = solve(fcc_basis(), bcc_basis(), m);
    o.expect(rep.minimizers.size() == 72, str("r=", r, " minimizers ", rep.minimizers.size()));
    o.expect(rep.classes.size() == 3, str("r=", r, " classes ", rep.classes.size()));
    bool spectra = true;
    for (const auto& c : rep.classes) spectra = spectra && c.members.size() == 24 && bain_spectrum(c, 1, 1e-9);
    o.expect(spectra, str("r=", r, " class sizes 24 with spectrum (2^-1/3, 2^1/6, 2^1/6)"));
    const double closed = bain_distance(1, m);
    o.expect(std::abs(rep.m_min - closed) <= 1e-12,
             str("r=", r, " m_min ", rep.m_min, " closed form ", closed));
  }
  const double t = seconds_since(start);
  o.expect(t < 5.0, str("total time ", t, " s (limit 5 s)"));
  return o;
}

Outcome excited_states() {
  Outcome o;
  const std::array<std::pair<double, double>, 2> cases{{{1.0, 0.70}, {2.0, 1.64}}};
  for (const auto& [r, approx] : cases) {
    const StrainMetric m(r);
    const auto levels = ranked_distances(fcc_basis(), bcc_basis(), m, 2);
    const double found = levels.at(1).distance;
    const double closed = excited_state(1, m);
    o.expect(std::abs(found - approx) < 5e-3, str("r=", r, " level 1 = ", found, " (about ", approx, ")"));
    o.expect(std::abs(found - closed) <= 1e-9, str("r=", r, " closed form ", closed));
  }
  return o;
}

Outcome terephthalic() {
  Outcome o;
  const auto start = Clock::now();
  const auto rep = terephthalic_case();
  const double t = seconds_since(start);
  for (const auto& c : rep.checks) o.expect(c.passed, c.name + (c.detail.empty() ? "" : ": " + c.detail));
  o.expect(t < 60.0, str("total time ", t, " s (limit 60 s)"));
  return o;
}

Outcome point_group() {
  Outcome o;
  const auto& g = point_group_24();
  o.expect(g.size() == 24, str("size ", g.size()));
  std::vector<UnimodularMatrix> orthogonal;
  for (const auto& mu : enumerate_slk(1))
    if (mu.is_orthogonal()) orthogonal.push_back(mu);
  o.expect(std::equal(orthogonal.begin(), orthogonal.end(), g.begin(), g.end()),
           str("equals the ", orthogonal.size(), " orthogonal elements of SL^1"));
  return o;
}

Outcome property_suites() {
  Outcome o;
  constexpr int kSamples = 10000;
  testing::Sampler s;

  std::size_t axiom = 0, star = 0;
  const std::array<double, 3> exponents{1.0, 2.0, -2.0};
  for (int i = 0; i < kSamples; ++i) {
    const StrainMetric m(exponents[static_cast<std::size_t>(i) % 3]);
    const Matrix3d f = s.basis(), g = s.basis(), h = s.basis();
    const double fg = d_r(f, g, m);
    const double tol = 1e-10 * (1 + fg);
    if (fg < 0 || d_r(f, f, m) > 1e-10 || std::abs(fg - d_r(g, f, m)) > tol ||
        fg > d_r(f, h, m) + d_r(h, g, m) + tol)
      ++axiom;
    // Zero exactly on rotated copies, positive once a stretch is applied.
    const double scale = spd_power(SymMatrix3d::gram(f), 0.5 * m.r()).frobenius();
    Matrix3d stretched = f;
    stretched.col(i % 3) *= 1.01;
    if (d_r(s.rotation() * f, f, m) > 1e-10 * (1 + scale) || !(d_r(stretched, f, m) > 1e-6)) ++star;
  }
  o.expect(axiom == 0, str("pseudometric axioms: ", axiom, " violations in ", kSamples));
  o.expect(star == 0, str("zero distance iff rotated: ", star, " violations in ", kSamples));

  std::size_t unitary = 0, submult = 0, lemma = 0;
  for (int i = 0; i < kSamples; ++i) {
    const Matrix3d a = s.any_matrix(), b = s.any_matrix(), c = s.any_matrix();
    const Matrix3d ras = s.rotation() * a * s.rotation();
    const auto na = norms(a), nras = norms(ras);
    if (std::abs(na.frobenius - nras.frobenius) > 1e-10 * (1 + na.frobenius) ||
        std::abs(na.spectral - nras.spectral) > 1e-10 * (1 + na.spectral))
      ++unitary;
    const auto nb = norms(b), nc = norms(c), nabc = norms(Matrix3d(a * b * c));
    const double fro = na.frobenius * nb.frobenius * nc.frobenius;
    const double spec = na.spectral * nb.spectral * nc.spectral;
    if (nabc.frobenius > fro + 1e-10 * (1 + fro) || nabc.spectral > spec + 1e-10 * (1 + spec)) ++submult;

    const StrainMetric m(i % 2 ? 1.0 : 2.0);
    const Matrix3d h = s.basis();
    const Vector3d v = s.any_matrix().col(0);
    if (v.norm() < 1e-6) continue;
    if (key_lemma_lower_bound(h, v, m) > d_r_to_identity(h, m) + 1e-10) ++lemma;
  }
  o.expect(unitary == 0, str("unitary invariance: ", unitary, " violations in ", kSamples));
  o.expect(submult == 0, str("sub-multiplicativity: ", submult, " violations in ", kSamples));
  o.expect(lemma == 0, str("key-lemma bound: ", lemma, " violations in ", kSamples));

  for (int k : {1, 2}) {
    const auto fast = enumerate_slk(k);
    const auto slow = enumerate_slk_naive(k);
    o.expect(fast == slow, str("pruned and naive SL^", k, " agree (", fast.size(), " matrices)"));
  }

  const Matrix3d tere_one = terephthalic_form_one(), tere_two = terephthalic_form_two();
  const std::array<std::pair<Matrix3d, Matrix3d>, 3> pairs{
      {{fcc_basis(), bcc_basis()}, {tere_one, tere_two}, {fcc_basis(), bct_basis(0.95, 1.1)}}};
  for (const auto& [f, g] : pairs) {
    for (double r : {1.0, -2.0}) {
      SolveOptions one, many;
      one.threads = 1;
      many.threads = 4;
      const auto a = structured_report(solve(f, g, StrainMetric(r), one), f, g);
      const auto b = structured_report(solve(f, g, StrainMetric(r), many), f, g);
      o.expect(a == b, str("structured output identical for 1 and 4 workers (r=", r, ", ",
                           a.size(), " bytes)"));
    }
  }
  return o;
}

Outcome region_scan() {
  Outcome o;
  RegionScanOptions opts;
  opts.a_min = opts.c_min = 0.75;
  opts.a_max = opts.c_max = 1.7;
  opts.step = 0.005;
  const auto start = Clock::now();
  const auto scan = bct_region_scan(opts);
  o.note(str("grid ", scan.a_count, " x ", scan.c_count, " in ", seconds_since(start), " s"));

  const double k = sl1_max_frobenius();
  o.expect(std::abs(k - std::pow(3.0, 1.5)) <= 1e-12, str("max |mu F^-1| over SL^1 = ", k));

  const StrainMetric d1(1), d2(2);
  const double excited1 = excited_state(1, d1), excited2 = excited_state(1, d2);
  const Matrix3d b = bcc_basis();
  const Matrix3d btb = b.transpose() * b;
  std::size_t mismatches = 0, certified1 = 0, certified2 = 0;
  bool unit = false;
  for (const auto& cell : scan.cells) {
    const double a = cell.a, c = cell.c;
    const bool hyp = c >= a && a > 0.75;
    const Matrix3d bac = bct_basis(a, c);
    const double m1 = bct_bain_distance(a, c, d1), m2 = bct_bain_distance(a, c, d2);
    BctFlags want;
    want.hypothesis = hyp;
    if (hyp) {
      want.d1_sl1 = excited1 - k * (bac - b).norm() >= m1;
      want.d1_outside = std::pow(2.0, 2.0 / 3.0) * a - 1 > m1;
      want.d2_sl1 = excited2 - k * k * (Matrix3d(bac.transpose() * bac) - btb).norm() >= m2;
      want.d2_outside = std::pow(2.0, 4.0 / 3.0) * a - 1 > m2;
    }
    const auto& f = cell.flags;
    if (f.hypothesis != want.hypothesis || f.d1_sl1 != want.d1_sl1 || f.d1_outside != want.d1_outside ||
        f.d2_sl1 != want.d2_sl1 || f.d2_outside != want.d2_outside ||
        (!hyp && (f.extended_d1 || f.extended_d2)))
      ++mismatches;
    certified1 += f.certified_d1();
    certified2 += f.certified_d2();
    if (std::abs(a - 1) < 1e-12 && std::abs(c - 1) < 1e-12)
      unit = f.certified_d1() && f.certified_d2();
  }
  o.expect(unit, "cell (1, 1) certified for d1 and d2");
  o.expect(mismatches == 0, str("anchor inequalities reproduced on every cell: ", mismatches, " mismatches"));
  o.note(str("certified cells: d1 ", certified1, ", d2 ", certified2, " of ", scan.cells.size()));
  const auto mono = check_monotonicity(scan);
  o.note(str("monotone towards (1, 1): ", mono.violations_d1, " d1 and ", mono.violations_d2,
             " d2 exceptions among ", mono.checked, " cells"));
  o.note("figure shapes are qualitative only and not compared");
  return o;
}

Outcome volume_scaled_bain() {
  Outcome o;
  struct Window {
    double r, lo, hi;
  };
  // Open ends are capped at λ = 1.5 (above) and 0.6 (below).
  const std::array<Window, 3> windows{{{1.0, 0.84, 1.5}, {2.0, 0.64, 1.5}, {-2.0, 0.6, 1.19}}};
  for (const auto& w : windows) {
    const StrainMetric m(w.r);
    std::size_t good = 0;
    for (int i = 0; i < 20; ++i) {
      const double lambda = w.lo + (i + 0.5) * (w.hi - w.lo) / 20;
      const auto rep = solve(fcc_basis(), bcc_basis(lambda), m);
      const double closed = bain_distance(lambda, m);
      bool spectra = rep.classes.size() == 3;
      for (const auto& c : rep.classes) spectra = spectra && bain_spectrum(c, lambda, 1e-9);
      const bool ok = rep.minimizers.size() == 72 && spectra && std::abs(rep.m_min - closed) <= 1e-10;
      if (ok) {
        ++good;
      } else {
        o.expect(false, str("r=", w.r, " lambda=", lambda, ": m_min ", rep.m_min, " vs Bain ", closed,
                            ", ", rep.minimizers.size(), " minimizers"));
      }
    }
    o.expect(good == 20, str("r=", w.r, ": ", good, " of 20 samples in (", w.lo, ", ", w.hi, ") are Bain"));
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "SL^k cardinalities", sl_cardinalities},
      {2, "Bain reproduction", bain_reproduction},
      {3, "excited states", excited_states},
      {4, "Terephthalic Acid", terephthalic},
      {5, "point group", point_group},
      {6, "property suites", property_suites},
      {7, "region scan", region_scan},
      {8, "volume-scaled Bain", volume_scaled_bain},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    const Outcome o = c.run();
    const double t = seconds_since(start);
    std::cout << "criterion " << c.id << " (" << c.title << "): " << (o.passed ? "PASS" : "FAIL")
              << std::fixed << std::setprecision(2) << "  [" << t << " s]\n"
              << std::defaultfloat;
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
    if (!o.passed) ++failed;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed\n"
                       : std::string("acceptance: all criteria passed\n"));
  return failed;
}
