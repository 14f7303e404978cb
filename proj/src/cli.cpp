#include "lattrans/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lattrans/applications.hpp"
#include "lattrans/errors.hpp"

namespace lattrans {

namespace {

using nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

Centring to_centring(const std::string& s) {
  if (auto c = parse_centring(s)) return *c;
  throw InvalidArgument("unknown centring '" + s + "' (expected P, C, I or F)");
}

// 12 significant digits; the shortest round-trip form of the rounded value is
// what ends up in the document.
double sig12(double v) {
  if (!std::isfinite(v)) return v;
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return std::stod(os.str());
}

ordered_json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return sig12(v);
}

ordered_json matrix_json(const Matrix3d& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 3; ++i)
    rows.push_back({real(m(i, 0)), real(m(i, 1)), real(m(i, 2))});
  return rows;
}

ordered_json mu_json(const UnimodularMatrix& mu) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({mu(i, 0), mu(i, 1), mu(i, 2)});
  return rows;
}

std::string human_matrix(const Matrix3d& m, int indent) {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed;
  for (int i = 0; i < 3; ++i) {
    os << std::string(static_cast<std::size_t>(indent), ' ');
    for (int j = 0; j < 3; ++j) os << std::setw(11) << m(i, j);
    os << "\n";
  }
  return os.str();
}

std::string human_report(const OptimalityReport& rep) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "metric r = " << rep.metric.r() << "\n";
  os << "search radius k = " << rep.k_used << " ("
     << (rep.bound.side == BoundSide::inverse ? "inverse" : "direct") << " side, bound k = "
     << rep.bound.k << ", " << (rep.certified ? "certified" : "NOT certified") << ")\n";
  os << "m_min = " << rep.m_min << "\n";
  if (rep.m_second)
    os << "next level = " << *rep.m_second << ", gap = " << rep.gap << "\n";
  else
    os << "next level = none found\n";
  if (rep.unresolved_tie) os << "warning: gap below tie tolerance\n";
  os << "minimizers: " << rep.minimizers.size() << "\n";
  for (const auto& m : rep.minimizers) os << "  mu = " << m.mu.to_string() << "\n";
  os << "classes: " << rep.classes.size() << "\n";
  for (std::size_t i = 0; i < rep.classes.size(); ++i) {
    const auto& c = rep.classes[i];
    os << "  class " << i + 1 << " (" << c.members.size() << " members), principal stretches ("
       << c.principal_stretches[2] << ", " << c.principal_stretches[1] << ", "
       << c.principal_stretches[0] << ")\n";
    os << human_matrix(c.stretch.dense(), 4);
  }
  return os.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot open output file '" + path + "'");
  f << text;
}

struct Common {
  std::string format = "human";
  std::string out_path;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"human", "structured"}));
  cmd->add_option("--out", c.out_path, "Write output to this file instead of stdout");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = available parallelism)");
}

}  // namespace

LatticeSpec parse_lattice(const std::string& text) {
  LatticeSpec spec;
  if (text == "fcc") {
    spec.cell = fcc_basis();
    return spec;
  }
  if (text == "bcc") {
    spec.cell = bcc_basis(1.0);
    return spec;
  }
  if (text.rfind("bcc:", 0) == 0) {
    spec.cell = bcc_basis(to_real(text.substr(4)));
    return spec;
  }
  if (text.rfind("bct:", 0) == 0) {
    const auto parts = split(text.substr(4), ':');
    if (parts.size() != 2) throw InvalidArgument("bct needs bct:<A>:<C>");
    spec.cell = bct_basis(to_real(parts[0]), to_real(parts[1]));
    return spec;
  }
  if (text.rfind("tri:", 0) == 0) {
    const auto parts = split(text.substr(4), ',');
    if (parts.size() != 6 && parts.size() != 7)
      throw InvalidArgument("triclinic lattice needs tri:a,b,c,alpha,beta,gamma[,centring]");
    TriclinicParams p{to_real(parts[0]), to_real(parts[1]), to_real(parts[2]),
                      to_real(parts[3]), to_real(parts[4]), to_real(parts[5])};
    spec.cell = p;
    if (parts.size() == 7) spec.centring = to_centring(parts[6]);
    return spec;
  }

  std::string numbers = text;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    numbers = text.substr(0, colon);
    spec.centring = to_centring(text.substr(colon + 1));
  }
  const auto parts = split(numbers, ',');
  if (parts.size() != 9)
    throw InvalidArgument("unrecognised lattice '" + text +
                          "' (expected fcc, bcc[:l], bct:A:C, tri:..., or nine reals)");
  Matrix3d m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = to_real(parts[static_cast<std::size_t>(i)]);
  spec.cell = m;
  return spec;
}

std::string structured_report(const OptimalityReport& rep, const Matrix3d& parent,
                              const Matrix3d& product) {
  ordered_json j;
  j["parent"] = matrix_json(parent);
  j["product"] = matrix_json(product);
  j["r"] = real(rep.metric.r());
  j["bound"] = {{"side", rep.bound.side == BoundSide::inverse ? "inverse" : "direct"},
                {"m0", real(rep.bound.m0)},
                {"raw_bound", real(rep.bound.raw_bound)},
                {"k", rep.bound.k}};
  j["k_used"] = rep.k_used;
  j["certified"] = rep.certified;
  j["m_min"] = real(rep.m_min);
  j["m_second"] = rep.m_second ? real(*rep.m_second) : ordered_json(nullptr);
  j["gap"] = real(rep.gap);
  j["unresolved_tie"] = rep.unresolved_tie;

  ordered_json mins = ordered_json::array();
  for (const auto& m : rep.minimizers)
    mins.push_back({{"mu", mu_json(m.mu)}, {"h", matrix_json(m.h)}, {"distance", real(m.distance)}});
  j["minimizers"] = std::move(mins);

  ordered_json classes = ordered_json::array();
  for (const auto& c : rep.classes) {
    const auto& nu = c.principal_stretches;
    classes.push_back({{"stretch", matrix_json(c.stretch.dense())},
                       {"principal_stretches", {real(nu[2]), real(nu[1]), real(nu[0])}},
                       {"members", c.members}});
  }
  j["classes"] = std::move(classes);

  ordered_json levels = ordered_json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"distance", real(l.distance)}, {"multiplicity", l.multiplicity}});
  j["levels"] = std::move(levels);
  j["evaluated"] = rep.evaluated;
  j["pruned"] = rep.pruned;
  return j.dump(2) + "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal lattice transformations between Bravais lattices"};
  app.require_subcommand(1);

  // solve
  Common solve_common;
  std::string parent_text, product_text;
  double r = 1.0;
  std::optional<int> k;
  int max_k = kDefaultMaxK;
  bool strict = false, swap_columns = false;
  auto* solve_cmd = app.add_subcommand("solve", "Find the d_r-optimal transformations");
  solve_cmd->add_option("--parent", parent_text, "Parent lattice")->required();
  solve_cmd->add_option("--product", product_text, "Product lattice")->required();
  solve_cmd->add_option("--r", r, "Metric exponent (nonzero)");
  solve_cmd->add_option("--k", k, "Search exactly this radius instead of the computed one");
  solve_cmd->add_option("--max-k", max_k, "Largest radius allowed");
  solve_cmd->add_flag("--strict", strict, "Exit 4 when the best level is not separated");
  solve_cmd->add_flag("--swap-columns", swap_columns,
                      "Exchange columns 1 and 2 of a left-handed basis instead of failing");
  add_common(solve_cmd, solve_common);

  // verify
  Common verify_common;
  std::string verify_name;
  auto* verify_cmd = app.add_subcommand("verify", "Reproduce a built-in case");
  verify_cmd->add_option("name", verify_name, "bain-d1, bain-d2, bain-dm2 or terephthalic")
      ->required();
  add_common(verify_cmd, verify_common);

  // region
  Common region_common;
  RegionScanOptions region;
  auto* region_cmd = app.add_subcommand("region", "Scan (A, C) for fcc -> bct stability");
  region_cmd->add_option("--a-min", region.a_min);
  region_cmd->add_option("--a-max", region.a_max);
  region_cmd->add_option("--c-min", region.c_min);
  region_cmd->add_option("--c-max", region.c_max);
  region_cmd->add_option("--step", region.step);
  region_cmd->add_option("--iterations", region.iterations, "Neighbour refinement passes");
  add_common(region_cmd, region_common);

  // count-sl
  Common count_common;
  int count_k = 1;
  int count_max_k = kDefaultMaxK;
  bool naive = false;
  auto* count_cmd = app.add_subcommand("count-sl", "Count unimodular matrices with entries in [-k, k]");
  count_cmd->add_option("--k", count_k)->required();
  count_cmd->add_option("--max-k", count_max_k, "Largest radius allowed");
  count_cmd->add_flag("--naive", naive, "Enumerate all integer matrices (k <= 2)");
  add_common(count_cmd, count_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  }

  try {
    if (*solve_cmd) {
      const PrimitiveBasis parent = parse_lattice(parent_text).resolve(swap_columns);
      const PrimitiveBasis product = parse_lattice(product_text).resolve(swap_columns);
      const StrainMetric metric(r);
      if (k) check_radius(*k, max_k);
      SolveOptions opts;
      opts.k_override = k;
      opts.max_k = max_k;
      opts.threads = solve_common.threads;
      const auto rep = solve(parent.basis, product.basis, metric, opts);
      const std::string text = solve_common.format == "structured"
                                   ? structured_report(rep, parent.basis, product.basis)
                                   : human_report(rep);
      emit(text, solve_common.out_path, out);
      if (strict && rep.unresolved_tie) {
        err << "error: unresolved tie (gap " << rep.gap << ")\n";
        return exit_code::unresolved_tie;
      }
      return exit_code::ok;
    }

    if (*verify_cmd) {
      VerificationReport rep;
      try {
        if (verify_name == "bain-d1") {
          rep = verify_bain(StrainMetric(1.0));
        } else if (verify_name == "bain-d2") {
          rep = verify_bain(StrainMetric(2.0));
        } else if (verify_name == "bain-dm2") {
          rep = verify_bain(StrainMetric(-2.0));
        } else if (verify_name == "terephthalic") {
          rep = terephthalic_case(verify_common.threads);
        } else {
          err << "error: unknown case '" << verify_name
              << "' (expected bain-d1, bain-d2, bain-dm2 or terephthalic)\n";
          return exit_code::input_error;
        }
      } catch (const VerificationFailed& e) {
        err << e.what();
        out << "FAIL " << verify_name << "\n";
        return exit_code::verification_failed;
      }
      std::string text;
      if (verify_common.format == "structured") {
        ordered_json j;
        j["case"] = verify_name;
        j["passed"] = rep.passed();
        ordered_json checks = ordered_json::array();
        for (const auto& c : rep.checks)
          checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        j["checks"] = std::move(checks);
        text = j.dump(2) + "\n";
      } else {
        text = rep.diagnostics() + "PASS " + verify_name + "\n";
      }
      emit(text, verify_common.out_path, out);
      return exit_code::ok;
    }

    if (*region_cmd) {
      region.threads = region_common.threads;
      const auto scan = bct_region_scan(region);
      std::ostringstream table;
      write_region_table(table, scan);
      emit(table.str(), region_common.out_path, out);
      return exit_code::ok;
    }

    if (*count_cmd) {
      const auto start = std::chrono::steady_clock::now();
      const auto stats = count_slk(count_k, count_common.threads, naive, count_max_k);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::ostringstream os;
      if (count_common.format == "structured") {
        ordered_json j;
        j["k"] = count_k;
        j["count"] = stats.count;
        j["candidates_examined"] = stats.candidates_examined;
        j["naive"] = naive;
        j["seconds"] = real(seconds);
        os << j.dump(2) << "\n";
      } else {
        os << "|SL^" << count_k << "| = " << stats.count << "\n";
        os << std::setprecision(3) << std::fixed << "time " << seconds << " s\n";
      }
      emit(os.str(), count_common.out_path, out);
      return exit_code::ok;
    }
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::budget_exceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  }
  return exit_code::input_error;
}

}  // namespace lattrans
