#include "lattrans/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lattrans/lattice.hpp"

namespace lattrans {

namespace {

void check_generator(const Matrix3d& m) {
  if (is_singular(m)) throw SingularMatrix();
  if (!(det(m) > 0)) throw NotRightHanded();
}

// Running state of one partition of the search: the lowest distinct distance
// levels with multiplicities, and every candidate tied with the current best.
class Fold {
 public:
  explicit Fold(std::size_t cap) : cap_(cap) {}

  // Upper end of the retained levels once the histogram is full; a candidate
  // provably above it can be skipped without changing any retained level.
  std::optional<double> prune_threshold() const {
    if (levels_.size() < cap_) return std::nullopt;
    const double top = levels_.back().distance;
    return top + tie_tolerance(top);
  }

  void add(const UnimodularMatrix& mu, double d) {
    add_level({d, 1, d});
    if (best_.empty() || d <= best_min_ + tie_tolerance(best_min_)) {
      if (best_.empty() || d < best_min_) {
        best_min_ = d;
        std::erase_if(best_, [this](const Entry& e) {
          return e.distance > best_min_ + tie_tolerance(best_min_);
        });
      }
      best_.push_back({mu, d});
    }
  }

  void merge(const Fold& o) {
    for (const auto& lvl : o.levels_) add_level(lvl);
    for (const auto& e : o.best_) {
      if (best_.empty() || e.distance <= best_min_ + tie_tolerance(best_min_)) {
        if (best_.empty() || e.distance < best_min_) {
          best_min_ = e.distance;
          std::erase_if(best_, [this](const Entry& x) {
            return x.distance > best_min_ + tie_tolerance(best_min_);
          });
        }
        best_.push_back(e);
      }
    }
    evaluated += o.evaluated;
    pruned += o.pruned;
  }

  struct Entry {
    UnimodularMatrix mu;
    double distance;
  };

  const std::vector<DistanceLevel>& levels() const { return levels_; }
  const std::vector<Entry>& best() const { return best_; }

  std::uint64_t evaluated = 0;
  std::uint64_t pruned = 0;

 private:
  void add_level(const DistanceLevel& lvl) {
    const double d = lvl.distance;
    auto it = std::lower_bound(levels_.begin(), levels_.end(), d,
                               [](const DistanceLevel& l, double v) { return l.distance < v; });
    auto absorb = [&lvl](DistanceLevel& into) {
      into.multiplicity += lvl.multiplicity;
      into.distance = std::min(into.distance, lvl.distance);
      into.max_distance = std::max(into.max_distance, lvl.max_distance);
    };
    if (it != levels_.end() && distances_tie(it->distance, d)) {
      absorb(*it);
      return;
    }
    if (it != levels_.begin() && distances_tie(std::prev(it)->distance, d)) {
      absorb(*std::prev(it));
      return;
    }
    if (levels_.size() >= cap_ && it == levels_.end()) return;
    levels_.insert(it, lvl);
    if (levels_.size() > cap_) levels_.pop_back();
  }

  std::size_t cap_;
  std::vector<DistanceLevel> levels_;
  std::vector<Entry> best_;
  double best_min_ = 0;
};

struct SearchSetup {
  Matrix3d f, g, f_inv;
  StrainMetric metric;
  // Squared column lengths of the basis that the key-lemma bound divides by:
  // |f_i|² on the direct side, |g_i|² on the inverse side.
  Vector3d denom2;
};

Fold run_search(const SearchSetup& s, int k, unsigned threads, std::size_t level_cap, bool prune,
                int max_k) {
  const bool inverse = s.metric.inverse_side();
  const double exponent = s.metric.exponent();

  auto visit = [&](Fold& fold, const UnimodularMatrix& enumerated) {
    // On the inverse side the enumerated matrix is μ⁻¹.
    const UnimodularMatrix mu = inverse ? integer_inverse(enumerated) : enumerated;
    const Matrix3d gm = s.g * mu.real();

    if (prune) {
      if (auto threshold = fold.prune_threshold()) {
        // Key lemma: d_s ≥ max_i |Gμe_i|ˢ/|f_i|ˢ − 1 and
        // d_-s ≥ max_i |Fμ⁻¹e_i|ˢ/|g_i|ˢ − 1.
        const Matrix3d probe = inverse ? Matrix3d(s.f * enumerated.real()) : gm;
        double ratio2 = 0;
        for (int i = 0; i < 3; ++i)
          ratio2 = std::max(ratio2, probe.col(i).squaredNorm() / s.denom2(i));
        const double bound = std::pow(ratio2, 0.5 * exponent) - 1.0;
        if (bound > *threshold) {
          ++fold.pruned;
          return;
        }
      }
    }

    const Matrix3d h = gm * s.f_inv;
    const auto ev = sym_eigenvalues(SymMatrix3d::gram(h));
    ++fold.evaluated;
    fold.add(mu, distance_from_gram_eigenvalues(ev, s.metric));
  };

  auto parts = fold_slk_partitions<Fold>(
      k, threads, [level_cap] { return Fold(level_cap); }, visit, max_k);
  Fold total(level_cap);
  for (const auto& p : parts) total.merge(p);
  return total;
}

SearchSetup make_setup(const Matrix3d& f, const Matrix3d& g, const StrainMetric& m) {
  check_generator(f);
  check_generator(g);
  SearchSetup s{f, g, inverse(f), m, Vector3d::Zero()};
  const Matrix3d& base = m.inverse_side() ? g : f;
  for (int i = 0; i < 3; ++i) s.denom2(i) = base.col(i).squaredNorm();
  return s;
}

}  // namespace

double SearchBound::radius() const { return std::pow(raw_bound, 1.0 / exponent); }

SearchBound compute_bound(const Matrix3d& f, const Matrix3d& g, const StrainMetric& m,
                          const std::optional<UnimodularMatrix>& incumbent) {
  check_generator(f);
  check_generator(g);
  const UnimodularMatrix mu0 = incumbent.value_or(UnimodularMatrix::identity());

  SearchBound b;
  b.exponent = m.exponent();
  b.side = m.inverse_side() ? BoundSide::inverse : BoundSide::direct;
  b.m0 = d_r_to_identity(g * mu0.real() * inverse(f), m);

  const Matrix3d& outer = m.inverse_side() ? g : f;
  const Matrix3d& inner = m.inverse_side() ? f : g;
  const double s = b.exponent;
  b.raw_bound = std::pow(column_max_norm(outer), s) / std::pow(singular_values(inner).min(), s) *
                (b.m0 + 1.0);

  // Smallest k >= 1 with √((k+1)² + 1) > radius.
  const double radius = b.radius();
  const double limit = radius * radius - 1.0;
  double k = limit > 0 ? std::floor(std::sqrt(limit)) : 1.0;
  k = std::max(k, 1.0);
  if (k > 1e6) {
    b.k = 1000000;
    return b;
  }
  int ki = static_cast<int>(k);
  while (ki > 1 && double(ki * ki) + 1.0 > radius * radius) --ki;  // guard sqrt rounding
  while (double((ki + 1) * (ki + 1)) + 1.0 <= radius * radius) ++ki;
  b.k = ki;
  return b;
}

OptimalityReport solve(const Matrix3d& f, const Matrix3d& g, const StrainMetric& m,
                       const SolveOptions& opts) {
  const SearchSetup setup = make_setup(f, g, m);

  OptimalityReport rep;
  rep.metric = m;
  rep.bound = compute_bound(f, g, m, opts.incumbent);
  int k = rep.bound.k;
  if (opts.k_override) {
    k = *opts.k_override;
  } else if (opts.k_cap && k > *opts.k_cap) {
    k = *opts.k_cap;
  }
  rep.k_used = k;
  rep.certified = k >= rep.bound.k;

  const Fold fold = run_search(setup, k, opts.threads, std::max<std::size_t>(opts.level_cap, 2),
                               opts.prune, opts.max_k);
  rep.evaluated = fold.evaluated;
  rep.pruned = fold.pruned;
  rep.levels = fold.levels();

  std::vector<Fold::Entry> best = fold.best();
  std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.mu < b.mu; });
  std::vector<Matrix3d> hs;
  for (const auto& e : best) {
    Minimizer mz{e.mu, g * e.mu.real() * setup.f_inv, e.distance};
    hs.push_back(mz.h);
    rep.minimizers.push_back(std::move(mz));
  }
  rep.m_min = rep.levels.empty() ? 0.0 : rep.levels.front().distance;
  if (rep.levels.size() > 1) {
    rep.m_second = rep.levels[1].distance;
    rep.gap = *rep.m_second - rep.m_min;
    rep.unresolved_tie = !(*rep.m_second - rep.levels[0].max_distance > tie_tolerance(rep.m_min));
  }
  rep.classes = group_classes(hs);
  return rep;
}

std::vector<DistanceLevel> ranked_distances(const Matrix3d& f, const Matrix3d& g,
                                            const StrainMetric& m, int k, unsigned threads,
                                            std::size_t level_cap) {
  const SearchSetup setup = make_setup(f, g, m);
  return run_search(setup, k, threads, std::max<std::size_t>(level_cap, 1), true, kDefaultMaxK)
      .levels();
}

std::vector<EquivalenceClass> group_classes(const std::vector<Matrix3d>& hs, double tol) {
  std::vector<EquivalenceClass> classes;
  std::vector<SymMatrix3d> reps;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (is_singular(hs[i])) throw SingularMatrix();
    const SymMatrix3d c = SymMatrix3d::gram(hs[i]);
    bool placed = false;
    for (std::size_t j = 0; j < classes.size(); ++j) {
      if ((c - reps[j]).frobenius() <= tol * (1.0 + reps[j].frobenius())) {
        classes[j].members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      reps.push_back(c);
      classes.push_back({polar_stretch(hs[i]), singular_values(hs[i]), {i}});
    }
  }
  return classes;
}

OrbitResult p24_orbit(const UnimodularMatrix& mu0, const Matrix3d& f, const Matrix3d& g) {
  const Matrix3d f_inv = inverse(f), g_inv = inverse(g);
  const auto& group = point_group_24();

  std::vector<std::optional<UnimodularMatrix>> left, right;
  for (const auto& p : group) left.push_back(UnimodularMatrix::try_round(g_inv * p.real() * g));
  for (const auto& q : group) right.push_back(UnimodularMatrix::try_round(f_inv * q.real() * f));

  OrbitResult out;
  for (const auto& l : left)
    for (const auto& r : right) {
      if (!l || !r) {
        ++out.dropped;
        continue;
      }
      out.members.push_back(*l * mu0 * *r);
    }
  std::sort(out.members.begin(), out.members.end());
  out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
  return out;
}

}  // namespace lattrans
