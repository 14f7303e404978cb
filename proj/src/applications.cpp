#include "lattrans/applications.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "lattrans/errors.hpp"
#include "lattrans/lattice.hpp"

namespace lattrans {

namespace {

const double kCbrt2 = std::cbrt(2.0);
const double kTwoSixth = std::pow(2.0, 1.0 / 6.0);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string fmt_triple(const std::array<double, 3>& v) {
  return "(" + fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]) + ")";
}

std::array<double, 3> ascending(const SingularTriple<double>& t) {
  std::array<double, 3> v = t.values;
  std::sort(v.begin(), v.end());
  return v;
}

bool close_triple(const std::array<double, 3>& a, const std::array<double, 3>& b, double tol) {
  for (std::size_t i = 0; i < 3; ++i)
    if (!(std::abs(a[i] - b[i]) <= tol)) return false;
  return true;
}

void check_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
}

void add(VerificationReport& rep, std::string name, bool ok, std::string detail) {
  rep.checks.push_back({std::move(name), ok, std::move(detail)});
}

// Checks shared by the cubic reproductions: 72 minimizers in 3 classes of 24
// whose stretches are the diagonal axis permutations of λ·Bain.
void check_bain_structure(VerificationReport& rep, const OptimalityReport& sol, double lambda,
                          const StrainMetric& m, double m_tol) {
  add(rep, "minimizers", sol.minimizers.size() == 72,
      "expected 72, found " + std::to_string(sol.minimizers.size()));
  add(rep, "classes", sol.classes.size() == 3,
      "expected 3, found " + std::to_string(sol.classes.size()));

  bool sizes_ok = sol.classes.size() == 3;
  for (const auto& c : sol.classes) sizes_ok = sizes_ok && c.members.size() == 24;
  add(rep, "class sizes", sizes_ok, "each class holds 24 minimizers");

  const auto expected = bain_stretches(lambda);
  bool stretch_ok = sol.classes.size() == 3;
  std::array<bool, 3> short_axis_seen{};
  std::string detail;
  for (const auto& c : sol.classes) {
    const Matrix3d s = c.stretch.dense();
    const double off = std::max({std::abs(s(0, 1)), std::abs(s(0, 2)), std::abs(s(1, 2))});
    std::array<double, 3> diag{s(0, 0), s(1, 1), s(2, 2)};
    const auto shortest = std::min_element(diag.begin(), diag.end()) - diag.begin();
    auto sorted = diag;
    std::sort(sorted.begin(), sorted.end());
    const bool ok = off <= 1e-9 && close_triple(sorted, expected, 1e-9);
    stretch_ok = stretch_ok && ok;
    short_axis_seen[static_cast<std::size_t>(shortest)] = true;
    detail += fmt_triple(diag) + " ";
  }
  stretch_ok = stretch_ok && short_axis_seen[0] && short_axis_seen[1] && short_axis_seen[2];
  add(rep, "class stretches", stretch_ok,
      detail + "vs permutations of diag" + fmt_triple(expected));

  const double closed = bain_distance(lambda, m);
  add(rep, "m_min", std::abs(sol.m_min - closed) <= m_tol,
      "found " + fmt(sol.m_min) + ", closed form " + fmt(closed));
  add(rep, "certified radius", sol.certified,
      "searched k=" + std::to_string(sol.k_used) + ", bound k=" + std::to_string(sol.bound.k));
}

}  // namespace

// ---- standard lattices ------------------------------------------------------

Matrix3d fcc_basis() {
  Matrix3d f;
  f << 0, 1, 1,
       1, 0, 1,
       1, 1, 0;
  return 0.5 * f;
}

Matrix3d bcc_basis(double lambda) {
  check_positive(lambda, "lambda");
  Matrix3d b;
  b << -1, 1, 1,
       1, -1, 1,
       1, 1, -1;
  return (lambda / kCbrt2 * 0.5) * b;
}

Matrix3d bct_basis(double a, double c) {
  check_positive(a, "A");
  check_positive(c, "C");
  return Vector3d(a, a, c).asDiagonal() * bcc_basis(1.0);
}

// ---- closed forms -----------------------------------------------------------

std::array<double, 3> bain_stretches(double lambda) {
  return {lambda / kCbrt2, lambda * kTwoSixth, lambda * kTwoSixth};
}

double bain_distance(double lambda, const StrainMetric& m) {
  const auto nu = bain_stretches(lambda);
  const double a = std::pow(nu[0], m.r()) - 1.0;
  const double b = std::pow(nu[1], m.r()) - 1.0;
  return std::sqrt(a * a + 2.0 * b * b);
}

bool in_bain_window(double lambda, const StrainMetric& m) {
  if (m.r() == 1.0) return lambda > 0.84;
  if (m.r() == 2.0) return lambda > 0.64;
  if (m.r() == -2.0) return lambda < 1.19;
  throw InvalidArgument("volume window is only known for r = 1, 2, -2");
}

double excited_state(double lambda, const StrainMetric& m) {
  check_positive(lambda, "lambda");
  const double l2 = lambda * lambda;
  if (m.r() == 1.0) {
    const double q = 25.0 * kCbrt2 * l2 - 4.0 * kCbrt2 * kCbrt2 * (4.0 + std::sqrt(17.0)) * lambda + 24.0;
    return std::pow(2.0, -1.5) * std::sqrt(q);
  }
  if (m.r() == 2.0) {
    const double q = 305.0 * kCbrt2 * kCbrt2 * l2 * l2 - 400.0 * kCbrt2 * l2 + 192.0;
    return std::sqrt(q) / 8.0;
  }
  throw InvalidArgument("excited state closed form is only known for r = 1, 2");
}

double sl1_max_frobenius() {
  static const double value = [] {
    const Matrix3d f_inv = inverse(fcc_basis());
    double best = 0;
    for_each_slk(1, [&](const UnimodularMatrix& mu) {
      best = std::max(best, (mu.real() * f_inv).norm());
    });
    return best;
  }();
  return value;
}

double bct_bain_distance(double a, double c, const StrainMetric& m) {
  check_positive(a, "A");
  check_positive(c, "C");
  const double x = std::pow(kTwoSixth * a, m.r()) - 1.0;
  const double z = std::pow(c / kCbrt2, m.r()) - 1.0;
  return std::sqrt(2.0 * x * x + z * z);
}

Matrix3d bct_competitor_basis(double a, double c) {
  check_positive(a, "A");
  check_positive(c, "C");
  Matrix3d b;
  b << -a, a, 0,
       a, a, 0,
       -c, -c, -2 * c;
  return std::pow(2.0, -4.0 / 3.0) * b;
}

double bct_competitor_excess(double a, double c, const StrainMetric& m) {
  check_positive(a, "A");
  check_positive(c, "C");
  if (m.r() == 1.0)
    return (c - a) * (std::pow(2.0, -2.0 / 3.0) * (a + c) - std::pow(2.0, 7.0 / 6.0) + kCbrt2 * kCbrt2);
  if (m.r() == 2.0)
    return std::pow(2.0, -4.0 / 3.0) * (c - a) * (a + c) *
           (3.0 * a * a + 3.0 * c * c - 2.0 * kCbrt2 * kCbrt2);
  throw InvalidArgument("competitor excess is only known for r = 1, 2");
}

SymMatrix3d bct_alternative_stretch(double a, double c) {
  check_positive(a, "A");
  check_positive(c, "C");
  const double mean = kTwoSixth * (a + c) / 2.0;
  const double half_diff = kTwoSixth * (a - c) / 2.0;
  return SymMatrix3d(mean, mean, a / kCbrt2, half_diff, 0.0, 0.0);
}

// ---- verification reports ---------------------------------------------------

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string VerificationReport::diagnostics() const {
  std::string out;
  for (const auto& c : checks)
    out += name + ": " + (c.passed ? "ok   " : "FAIL ") + c.name + ": " + c.detail + "\n";
  return out;
}

void VerificationReport::require() const {
  if (!passed()) throw VerificationFailed(diagnostics());
}

VerificationReport verify_bain(const StrainMetric& m) {
  if (m.r() != 1.0 && m.r() != 2.0 && m.r() != -2.0)
    throw InvalidArgument("Bain verification covers r = 1, 2, -2");
  VerificationReport rep;
  rep.name = "bain r=" + fmt(m.r());
  const auto sol = solve(fcc_basis(), bcc_basis(1.0), m);
  check_bain_structure(rep, sol, 1.0, m, 1e-12);
  rep.solves.push_back(sol);
  rep.require();
  return rep;
}

VerificationReport bain_with_volume(double lambda, const StrainMetric& m, const SolveOptions& opts) {
  check_positive(lambda, "lambda");
  VerificationReport rep;
  rep.name = "bain lambda=" + fmt(lambda) + " r=" + fmt(m.r());
  const auto sol = solve(fcc_basis(), bcc_basis(lambda), m, opts);
  if (in_bain_window(lambda, m)) {
    check_bain_structure(rep, sol, lambda, m, 1e-12);
  } else {
    add(rep, "outside window", true, "optimum " + fmt(sol.m_min) + " reported without assertion");
  }
  rep.solves.push_back(sol);
  rep.require();
  return rep;
}

Matrix3d terephthalic_form_one() {
  return triclinic_to_primitive({7.730, 6.443, 3.749, 92.75, 109.15, 95.95});
}

Matrix3d terephthalic_form_two() {
  return triclinic_to_primitive({7.452, 6.856, 5.020, 116.6, 119.2, 96.5});
}

VerificationReport terephthalic_case(unsigned threads) {
  constexpr double tol = 1e-3;
  VerificationReport rep;
  rep.name = "terephthalic";
  const Matrix3d f = terephthalic_form_one();
  const Matrix3d g = terephthalic_form_two();
  const auto expected_mu = UnimodularMatrix::from_rows({0, 1, 0, 1, 0, 0, 1, 1, -1});
  const std::array<double, 3> direct_spectrum{0.725, 1.033, 1.385};
  const std::array<double, 3> inverse_spectrum{0.743, 0.977, 1.429};

  SolveOptions opts;
  opts.threads = threads;

  const std::array<std::pair<double, double>, 2> direct{{{1.0, 0.474}, {2.0, 1.035}}};
  for (const auto& [r, m_expected] : direct) {
    const std::string tag = "r=" + fmt(r) + " ";
    const auto sol = solve(f, g, StrainMetric(r), opts);
    const bool unique = sol.minimizers.size() == 1 && sol.minimizers[0].mu == expected_mu;
    add(rep, tag + "minimizer", unique,
        sol.minimizers.empty() ? "none" : sol.minimizers[0].mu.to_string() + " of " +
                                              std::to_string(sol.minimizers.size()));
    add(rep, tag + "m_min", std::abs(sol.m_min - m_expected) <= tol,
        "found " + fmt(sol.m_min) + ", expected " + fmt(m_expected));
    if (!sol.classes.empty()) {
      const auto nu = ascending(sol.classes[0].principal_stretches);
      add(rep, tag + "stretches", close_triple(nu, direct_spectrum, tol),
          "found " + fmt_triple(nu) + ", expected " + fmt_triple(direct_spectrum));
    }
    add(rep, tag + "gap", sol.gap > 0.015, "gap " + fmt(sol.gap));
    add(rep, tag + "radius", sol.bound.k == 3 && sol.k_used == 3,
        "bound k=" + std::to_string(sol.bound.k));
    rep.solves.push_back(sol);
  }

  const auto sol = solve(f, g, StrainMetric(-2.0), opts);
  add(rep, "r=-2 radius", sol.bound.side == BoundSide::inverse && sol.bound.k == 2,
      "bound k=" + std::to_string(sol.bound.k) + " on the " +
          (sol.bound.side == BoundSide::inverse ? "inverse" : "direct") + " side");
  add(rep, "r=-2 minimizer differs", !sol.minimizers.empty() && sol.minimizers[0].mu != expected_mu,
      sol.minimizers.empty() ? "none" : sol.minimizers[0].mu.to_string());
  if (!sol.classes.empty()) {
    const auto nu = ascending(sol.classes[0].principal_stretches);
    add(rep, "r=-2 stretches", close_triple(nu, inverse_spectrum, tol),
        "found " + fmt_triple(nu) + ", expected " + fmt_triple(inverse_spectrum));
  }
  rep.solves.push_back(sol);
  rep.require();
  return rep;
}

// ---- fcc → bct stability ----------------------------------------------------

namespace {

struct BctGeometry {
  Matrix3d basis;
  SymMatrix3d gram;
  double m1, m2;  // Bain-type distances
};

BctGeometry bct_geometry(double a, double c) {
  const Matrix3d b = bct_basis(a, c);
  return {b, SymMatrix3d::gram(b), bct_bain_distance(a, c, StrainMetric(1.0)),
          bct_bain_distance(a, c, StrainMetric(2.0))};
}

bool hypothesis_holds(double a, double c) { return c >= a && a > 0.75; }

// Lower bounds on non-Bain SL¹ distances obtained by comparing with the
// optimal fcc → λ·bcc transformation.
BctLowerBounds bounds_from_scaled_bcc(const BctGeometry& g, double lambda) {
  const double k = sl1_max_frobenius();
  const Matrix3d ref = bcc_basis(lambda);
  BctLowerBounds lb;
  lb.d1 = excited_state(lambda, StrainMetric(1.0)) - k * (ref - g.basis).norm();
  lb.d2 = excited_state(lambda, StrainMetric(2.0)) -
          k * k * (SymMatrix3d::gram(ref) - g.gram).frobenius();
  return lb;
}

}  // namespace

BctFlags bct_stability_flags(double a, double c, BctLowerBounds* bounds) {
  check_positive(a, "A");
  check_positive(c, "C");
  BctFlags flags;
  BctLowerBounds best;
  if (bounds) *bounds = best;
  if (!hypothesis_holds(a, c)) return flags;
  flags.hypothesis = true;

  const BctGeometry g = bct_geometry(a, c);
  const StrainMetric r1(1.0), r2(2.0);

  const BctLowerBounds base = bounds_from_scaled_bcc(g, 1.0);
  flags.d1_sl1 = base.d1 >= g.m1;
  flags.d2_sl1 = base.d2 >= g.m2;
  flags.d1_outside = std::cbrt(4.0) * a - 1.0 > g.m1;
  flags.d2_outside = std::pow(2.0, 4.0 / 3.0) * a - 1.0 > g.m2;
  best = base;

  for (double lambda : {0.9, 1.1, 1.3, 0.995 * std::sqrt(a * c)}) {
    const BctLowerBounds lb = bounds_from_scaled_bcc(g, lambda);
    if (in_bain_window(lambda, r1)) {
      best.d1 = std::max(best.d1, lb.d1);
      flags.extended_d1 = flags.extended_d1 || (lb.d1 >= g.m1 && flags.d1_outside);
    }
    if (in_bain_window(lambda, r2)) {
      best.d2 = std::max(best.d2, lb.d2);
      flags.extended_d2 = flags.extended_d2 || (lb.d2 >= g.m2 && flags.d2_outside);
    }
  }
  if (bounds) *bounds = best;
  return flags;
}

namespace {

std::size_t grid_count(double lo, double hi, double step) {
  if (!(hi >= lo)) throw InvalidArgument("region range is empty");
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

// Snaps i·step to 12 decimals so that grid values such as 0.75 are exact
// decimal neighbours rather than accumulated binary error.
double grid_value(double lo, double step, std::size_t i) {
  return std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12;
}

template <class Fn>
void parallel_rows(std::size_t rows, unsigned threads, Fn&& fn) {
  const unsigned n = std::max(1u, std::min<unsigned>(resolve_threads(threads),
                                                     static_cast<unsigned>(rows)));
  if (n == 1) {
    for (std::size_t i = 0; i < rows; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < n; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < rows; i += n) fn(i);
    });
}

constexpr std::ptrdiff_t kNeighbourWindow = 8;

}  // namespace

RegionScanResult bct_region_scan(const RegionScanOptions& opts) {
  if (!(opts.step > 0) || !std::isfinite(opts.step)) throw InvalidArgument("step must be positive");
  if (!(opts.a_min > 0) || !(opts.c_min > 0)) throw InvalidArgument("A and C ranges must be positive");
  if (opts.iterations < 0) throw InvalidArgument("iterations must be non-negative");

  RegionScanResult out;
  out.options = opts;
  out.a_count = grid_count(opts.a_min, opts.a_max, opts.step);
  out.c_count = grid_count(opts.c_min, opts.c_max, opts.step);
  out.cells.resize(out.a_count * out.c_count);
  std::vector<BctLowerBounds> bounds(out.cells.size());

  parallel_rows(out.a_count, opts.threads, [&](std::size_t ia) {
    const double a = grid_value(opts.a_min, opts.step, ia);
    for (std::size_t ic = 0; ic < out.c_count; ++ic) {
      const double c = grid_value(opts.c_min, opts.step, ic);
      const std::size_t idx = ia * out.c_count + ic;
      out.cells[idx] = {a, c, bct_stability_flags(a, c, &bounds[idx])};
    }
  });

  const double k = sl1_max_frobenius();
  const auto na = static_cast<std::ptrdiff_t>(out.a_count);
  const auto nc = static_cast<std::ptrdiff_t>(out.c_count);
  for (int pass = 0; pass < opts.iterations; ++pass) {
    // Each pass reads only the previous pass, so the result is independent of
    // the thread schedule.
    const std::vector<RegionCell> prev_cells = out.cells;
    const std::vector<BctLowerBounds> prev_bounds = bounds;
    parallel_rows(out.a_count, opts.threads, [&](std::size_t ia) {
      for (std::size_t ic = 0; ic < out.c_count; ++ic) {
        const std::size_t idx = ia * out.c_count + ic;
        RegionCell& cell = out.cells[idx];
        if (!cell.flags.hypothesis) continue;
        const BctGeometry g = bct_geometry(cell.a, cell.c);
        BctLowerBounds& lb = bounds[idx];
        for (std::ptrdiff_t da = -kNeighbourWindow; da <= kNeighbourWindow; ++da)
          for (std::ptrdiff_t dc = -kNeighbourWindow; dc <= kNeighbourWindow; ++dc) {
            const std::ptrdiff_t ja = static_cast<std::ptrdiff_t>(ia) + da;
            const std::ptrdiff_t jc = static_cast<std::ptrdiff_t>(ic) + dc;
            if ((da == 0 && dc == 0) || ja < 0 || jc < 0 || ja >= na || jc >= nc) continue;
            const std::size_t j = static_cast<std::size_t>(ja * nc + jc);
            const RegionCell& n = prev_cells[j];
            const Matrix3d nb = bct_basis(n.a, n.c);
            if (n.flags.certified_d1()) {
              const double est = prev_bounds[j].d1 - k * (nb - g.basis).norm();
              lb.d1 = std::max(lb.d1, est);
              if (est >= g.m1 && cell.flags.d1_outside) cell.flags.extended_d1 = true;
            }
            if (n.flags.certified_d2()) {
              const double est =
                  prev_bounds[j].d2 - k * k * (SymMatrix3d::gram(nb) - g.gram).frobenius();
              lb.d2 = std::max(lb.d2, est);
              if (est >= g.m2 && cell.flags.d2_outside) cell.flags.extended_d2 = true;
            }
          }
      }
    });
  }
  return out;
}

MonotonicityReport check_monotonicity(const RegionScanResult& scan) {
  MonotonicityReport rep;
  const double step = scan.options.step;
  auto index_of = [&](double v, double lo, std::size_t count) -> std::optional<std::size_t> {
    const double i = std::round((v - lo) / step);
    if (i < 0 || i >= static_cast<double>(count)) return std::nullopt;
    return static_cast<std::size_t>(i);
  };
  for (const auto& cell : scan.cells) {
    const bool base1 = cell.flags.d1_sl1 && cell.flags.d1_outside;
    const bool base2 = cell.flags.d2_sl1 && cell.flags.d2_outside;
    if (!base1 && !base2) continue;
    ++rep.checked;
    const double span = std::max(std::abs(cell.a - 1.0), std::abs(cell.c - 1.0));
    const int steps = static_cast<int>(std::ceil(span / step));
    bool bad1 = false, bad2 = false;
    for (int s = 1; s < steps; ++s) {
      const double t = static_cast<double>(s) / steps;
      const auto ia = index_of(cell.a + t * (1.0 - cell.a), scan.options.a_min, scan.a_count);
      const auto ic = index_of(cell.c + t * (1.0 - cell.c), scan.options.c_min, scan.c_count);
      if (!ia || !ic) continue;
      const auto& f = scan.at(*ia, *ic).flags;
      if (!f.hypothesis) continue;
      bad1 = bad1 || (base1 && !(f.d1_sl1 && f.d1_outside));
      bad2 = bad2 || (base2 && !(f.d2_sl1 && f.d2_outside));
    }
    rep.violations_d1 += bad1;
    rep.violations_d2 += bad2;
  }
  return rep;
}

namespace {

const char* const kRegionHeader =
    "A,C,flag_d1_sl1,flag_d1_outside,flag_d2_sl1,flag_d2_outside,flag_extended_d1,flag_extended_d2";

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidArgument("malformed number '" + std::string(s) + "' in region table");
  return v;
}

bool parse_flag(std::string_view s) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw InvalidArgument("malformed flag '" + std::string(s) + "' in region table");
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void write_region_table(std::ostream& out, const RegionScanResult& scan) {
  const auto& o = scan.options;
  out << "# bct region scan a_min=" << shortest(o.a_min) << " a_max=" << shortest(o.a_max)
      << " c_min=" << shortest(o.c_min) << " c_max=" << shortest(o.c_max)
      << " step=" << shortest(o.step) << " iterations=" << o.iterations
      << " a_count=" << scan.a_count << " c_count=" << scan.c_count << "\n";
  out << kRegionHeader << "\n";
  for (const auto& c : scan.cells) {
    const auto& f = c.flags;
    out << shortest(c.a) << ',' << shortest(c.c) << ',' << f.d1_sl1 << ',' << f.d1_outside << ','
        << f.d2_sl1 << ',' << f.d2_outside << ',' << f.extended_d1 << ',' << f.extended_d2 << "\n";
  }
}

RegionScanResult read_region_table(std::istream& in) {
  RegionScanResult scan;
  std::string line;
  bool meta = false, header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (auto tok : split(line, ' ')) {
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) continue;
        const auto key = tok.substr(0, eq);
        const auto val = tok.substr(eq + 1);
        auto& o = scan.options;
        if (key == "a_min") o.a_min = parse_double(val);
        else if (key == "a_max") o.a_max = parse_double(val);
        else if (key == "c_min") o.c_min = parse_double(val);
        else if (key == "c_max") o.c_max = parse_double(val);
        else if (key == "step") o.step = parse_double(val);
        else if (key == "iterations") o.iterations = static_cast<int>(parse_double(val));
        else if (key == "a_count") scan.a_count = static_cast<std::size_t>(parse_double(val));
        else if (key == "c_count") scan.c_count = static_cast<std::size_t>(parse_double(val));
      }
      meta = true;
      continue;
    }
    if (!header) {
      if (line != kRegionHeader) throw InvalidArgument("unexpected region table header: " + line);
      header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 8) throw InvalidArgument("region table row needs 8 fields: " + line);
    RegionCell cell;
    cell.a = parse_double(fields[0]);
    cell.c = parse_double(fields[1]);
    auto& f = cell.flags;
    f.d1_sl1 = parse_flag(fields[2]);
    f.d1_outside = parse_flag(fields[3]);
    f.d2_sl1 = parse_flag(fields[4]);
    f.d2_outside = parse_flag(fields[5]);
    f.extended_d1 = parse_flag(fields[6]);
    f.extended_d2 = parse_flag(fields[7]);
    f.hypothesis = hypothesis_holds(cell.a, cell.c);
    scan.cells.push_back(cell);
  }
  if (!meta || !header) throw InvalidArgument("region table lacks its metadata or header line");
  if (scan.cells.size() != scan.a_count * scan.c_count)
    throw InvalidArgument("region table row count does not match its grid");
  return scan;
}

}  // namespace lattrans
