#pragma once

// Complete satisfiability for modular difference logic.
//
// A satisfiable system over residues mod N has a solution whose values all lie
// within (2m+1)p of one end of [0, N-1] (p variables, m the largest absolute
// constant). `solve` searches only that candidate set, so it stays complete
// while its domains are independent of N. `normalize_solution` is the
// constructive side of the same bound: it turns any solution into one inside
// the candidate set by sliding clusters of nearby values towards 0.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "modlogic/core.hpp"

namespace modlogic::mdl {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;
/// Per-variable cap on explicit candidate values.
inline constexpr std::uint64_t kMaxDomainSize = std::uint64_t{1} << 22;

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : Error("enumeration needs " + describe(required) + " assignments, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  /// N^p, saturated at the largest uint64.
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  static std::string describe(std::uint64_t n) {
    return n == std::numeric_limits<std::uint64_t>::max() ? "more than 2^64" : std::to_string(n);
  }
  std::uint64_t required_;
  std::uint64_t budget_;
};

class NotASolution : public Error {
 public:
  explicit NotASolution(std::size_t violated)
      : Error("assignment violates constraint #" + std::to_string(violated)), violated_(violated) {}
  std::size_t violated() const noexcept { return violated_; }

 private:
  std::size_t violated_;
};

/// A solver produced something that fails its own re-check.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

struct SearchStats {
  std::uint64_t domain_size = 0;
  std::uint64_t nodes = 0;
};

struct Sat {
  Assignment model;
  SearchStats stats;
};

struct Unsat {
  SearchStats stats;
};

using SolveOutcome = std::variant<Sat, Unsat>;

inline bool is_sat(const SolveOutcome& o) noexcept { return std::holds_alternative<Sat>(o); }

struct ResidueInterval {
  Residue lo = 0;
  Residue hi = 0;

  friend bool operator==(const ResidueInterval&, const ResidueInterval&) = default;
};

/// Candidate set D = ([0, B] u [N-1-B, N-1]) n [0, N-1] with B = (2m+1)p.
struct DomainBound {
  std::int64_t bound = 0;
  std::vector<ResidueInterval> intervals;

  bool contains(Residue v) const noexcept {
    return std::any_of(intervals.begin(), intervals.end(), [v](const ResidueInterval& i) { return i.lo <= v && v <= i.hi; });
  }

  std::uint64_t size() const noexcept {
    std::uint64_t n = 0;
    for (const auto& i : intervals) n += static_cast<std::uint64_t>(i.hi - i.lo) + 1;
    return n;
  }

  /// Ascending through the low interval, then descending from N-1.
  std::vector<Residue> search_order() const {
    if (size() > kMaxDomainSize) throw LimitError("candidate domain has " + std::to_string(size()) + " values");
    std::vector<Residue> out;
    out.reserve(size());
    for (Residue v = intervals.front().lo; v <= intervals.front().hi; ++v) out.push_back(v);
    if (intervals.size() > 1) {
      for (Residue v = intervals.back().hi; v >= intervals.back().lo; --v) out.push_back(v);
    }
    return out;
  }
};

inline DomainBound small_model_bound(const ConstraintSystem& sys) {
  const std::int64_t n = sys.modulus().value();
  const std::int64_t m = sys.max_constant();
  // m <= 2^40 and p <= 2^20 keep B below 2^62.
  const std::int64_t b = (2 * m + 1) * static_cast<std::int64_t>(sys.num_vars());
  DomainBound d;
  d.bound = b;
  if (b >= n - 1 || n - 1 - b <= b + 1) {
    d.intervals.push_back({0, n - 1});
  } else {
    d.intervals.push_back({0, b});
    d.intervals.push_back({n - 1 - b, n - 1});
  }
  return d;
}

// ---------------------------------------------------------------------------
// Brute force

/// Enumerates all N^p assignments, last variable fastest. Throws
/// BudgetExceeded when N^p > budget.
inline SolveOutcome brute_force_sat(const ConstraintSystem& sys, std::uint64_t budget = kDefaultBudget) {
  const std::size_t p = sys.num_vars();
  const auto n = static_cast<std::uint64_t>(sys.modulus().value());
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < p; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / n) {
      total = std::numeric_limits<std::uint64_t>::max();
      break;
    }
    total *= n;
  }
  if (total > budget) throw BudgetExceeded(total, budget);

  SearchStats stats{n, 0};
  std::vector<Residue> values(p, 0);
  Assignment a(p);
  for (;;) {
    ++stats.nodes;
    for (std::size_t i = 0; i < p; ++i) a.set(VarId{static_cast<std::uint32_t>(i)}, values[i]);
    if (eval_system(sys, a).satisfied()) return Sat{a, stats};
    std::size_t i = p;
    while (i > 0) {
      --i;
      if (static_cast<std::uint64_t>(++values[i]) < n) break;
      values[i] = 0;
      if (i == 0) return Unsat{stats};
    }
    if (p == 0) return Unsat{stats};
  }
}

// ---------------------------------------------------------------------------
// Bounded search

namespace detail {

enum class Cmp { LE, LT, EQ };

// One side of a constraint: variable + offset, or a constant when var < 0.
struct Side {
  std::int64_t var = -1;
  Offset offset = 0;
};

// lhs CMP rhs under the residue order.
struct Atom {
  Side lhs;
  Cmp cmp = Cmp::LE;
  Side rhs;
};

inline Atom normalize(const Constraint& c) {
  Side l{static_cast<std::int64_t>(c.lhs.var.index), c.lhs.offset};
  Side r;
  if (const auto* t = std::get_if<Term>(&c.rhs)) {
    r = Side{static_cast<std::int64_t>(t->var.index), t->offset};
  } else {
    r = Side{-1, std::get<Constant>(c.rhs).value};
  }
  switch (c.rel) {
    case Relation::LE: return {l, Cmp::LE, r};
    case Relation::LT: return {l, Cmp::LT, r};
    case Relation::EQ: return {l, Cmp::EQ, r};
    case Relation::GE: return {r, Cmp::LE, l};
    case Relation::GT: return {r, Cmp::LT, l};
  }
  return {l, Cmp::LE, r};
}

inline bool holds(Cmp cmp, Residue a, Residue b) noexcept {
  switch (cmp) {
    case Cmp::LE: return a <= b;
    case Cmp::LT: return a < b;
    case Cmp::EQ: return a == b;
  }
  return false;
}

// Maintains arc consistency over the binary constraints during a depth-first
// search on explicit domains. After a value fails, later values of the same
// variable that are substitutable by it (every neighbor value compatible with
// them is compatible with the failed one) are skipped; this is sound because
// any solution using them would remain a solution after the swap.
class BoundedSearch {
 public:
  BoundedSearch(const ConstraintSystem& sys, const DomainBound& bound) : sys_(sys), n_(sys.modulus()) {
    const std::size_t p = sys.num_vars();
    atoms_by_var_.resize(p);
    const std::vector<Residue> initial = bound.search_order();
    stats_.domain_size = initial.size();
    domains_.assign(p, initial);

    for (const auto& c : sys.constraints()) {
      const Atom atom = normalize(c);
      const auto lv = atom.lhs.var;
      const auto rv = atom.rhs.var;
      if (lv >= 0 && rv >= 0 && lv != rv) {
        atoms_by_var_[static_cast<std::size_t>(lv)].push_back(binary_.size());
        atoms_by_var_[static_cast<std::size_t>(rv)].push_back(binary_.size());
        binary_.push_back(atom);
      } else {
        unary_.push_back(atom);
      }
    }
  }

  std::optional<Assignment> run() {
    for (const auto& atom : unary_) {
      if (atom.lhs.var < 0 && atom.rhs.var < 0) {
        if (!holds(atom.cmp, side_value(atom.lhs, 0), side_value(atom.rhs, 0))) return std::nullopt;
        continue;
      }
      auto& dom = domains_[static_cast<std::size_t>(atom.lhs.var >= 0 ? atom.lhs.var : atom.rhs.var)];
      std::erase_if(dom, [&](Residue v) { return !holds(atom.cmp, side_value(atom.lhs, v), side_value(atom.rhs, v)); });
      if (dom.empty()) return std::nullopt;
    }
    std::vector<std::size_t> all(domains_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (!propagate(domains_, all)) return std::nullopt;
    if (!search(domains_)) return std::nullopt;
    Assignment a(domains_.size());
    for (std::size_t i = 0; i < domains_.size(); ++i) a.set(VarId{static_cast<std::uint32_t>(i)}, solution_[i]);
    return a;
  }

  const SearchStats& stats() const noexcept { return stats_; }

 private:
  using Domains = std::vector<std::vector<Residue>>;

  Residue side_value(const Side& s, Residue var_value) const noexcept {
    if (s.var < 0) return reduce_mod(s.offset, n_);
    return reduce_mod(static_cast<__int128>(var_value) + s.offset, n_);
  }

  // Removes values of `var` without support in the other variable of `atom`.
  bool revise(Domains& doms, const Atom& atom, std::size_t var) const {
    const bool var_is_lhs = static_cast<std::size_t>(atom.lhs.var) == var;
    const Side& mine = var_is_lhs ? atom.lhs : atom.rhs;
    const Side& theirs = var_is_lhs ? atom.rhs : atom.lhs;
    const auto& other = doms[static_cast<std::size_t>(theirs.var)];
    auto& dom = doms[var];
    const std::size_t before = dom.size();

    if (atom.cmp == Cmp::EQ) {
      std::unordered_set<Residue> seen;
      seen.reserve(other.size() * 2);
      for (Residue w : other) seen.insert(side_value(theirs, w));
      std::erase_if(dom, [&](Residue v) { return !seen.contains(side_value(mine, v)); });
    } else if (var_is_lhs) {
      // need some w with mine(v) CMP theirs(w): compare against the largest rhs
      Residue best = -1;
      for (Residue w : other) best = std::max(best, side_value(theirs, w));
      std::erase_if(dom, [&](Residue v) { return best < 0 || !holds(atom.cmp, side_value(mine, v), best); });
    } else {
      Residue best = std::numeric_limits<Residue>::max();
      for (Residue w : other) best = std::min(best, side_value(theirs, w));
      std::erase_if(dom, [&](Residue v) {
        return best == std::numeric_limits<Residue>::max() || !holds(atom.cmp, best, side_value(mine, v));
      });
    }
    return dom.size() != before;
  }

  bool propagate(Domains& doms, const std::vector<std::size_t>& changed) {
    std::deque<std::size_t> queue(changed.begin(), changed.end());
    std::vector<char> queued(doms.size(), 0);
    for (auto v : changed) queued[v] = 1;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      queued[v] = 0;
      for (std::size_t a : atoms_by_var_[v]) {
        const Atom& atom = binary_[a];
        const auto other = static_cast<std::size_t>(static_cast<std::size_t>(atom.lhs.var) == v ? atom.rhs.var : atom.lhs.var);
        if (revise(doms, atom, other)) {
          if (doms[other].empty()) return false;
          if (!queued[other]) {
            queued[other] = 1;
            queue.push_back(other);
          }
        }
      }
    }
    return true;
  }

  // Every binary constraint on `var` that admits `candidate` with some current
  // neighbor value also admits `failed` with it.
  bool substitutable(const Domains& doms, std::size_t var, Residue candidate, Residue failed) const {
    for (std::size_t a : atoms_by_var_[var]) {
      const Atom& atom = binary_[a];
      const bool var_is_lhs = static_cast<std::size_t>(atom.lhs.var) == var;
      const Side& mine = var_is_lhs ? atom.lhs : atom.rhs;
      const Side& theirs = var_is_lhs ? atom.rhs : atom.lhs;
      const Residue c = side_value(mine, candidate);
      const Residue f = side_value(mine, failed);
      for (Residue w : doms[static_cast<std::size_t>(theirs.var)]) {
        const Residue t = side_value(theirs, w);
        const bool ok_c = var_is_lhs ? holds(atom.cmp, c, t) : holds(atom.cmp, t, c);
        const bool ok_f = var_is_lhs ? holds(atom.cmp, f, t) : holds(atom.cmp, t, f);
        if (ok_c && !ok_f) return false;
      }
    }
    return true;
  }

  bool search(const Domains& doms) {
    ++stats_.nodes;
    // First unfixed variable in first-occurrence order. Smallest-domain-first
    // is much worse on the coloring encodings: it branches on edge variables
    // whose values do not matter before the vertex variables that do.
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < doms.size() && !pick; ++i) {
      if (doms[i].size() > 1) pick = i;
    }
    if (!pick) {
      solution_.clear();
      for (const auto& d : doms) solution_.push_back(d.front());
      return true;
    }
    const std::size_t var = *pick;
    std::vector<Residue> failed;
    for (Residue value : doms[var]) {
      if (std::any_of(failed.begin(), failed.end(), [&](Residue f) { return substitutable(doms, var, value, f); })) continue;
      Domains next = doms;
      next[var] = {value};
      if (propagate(next, {var}) && search(next)) return true;
      failed.push_back(value);
    }
    return false;
  }

  const ConstraintSystem& sys_;
  Modulus n_;
  std::vector<Atom> binary_;
  std::vector<Atom> unary_;
  std::vector<std::vector<std::size_t>> atoms_by_var_;
  Domains domains_;
  std::vector<Residue> solution_;
  SearchStats stats_;
};

}  // namespace detail

/// Complete decision procedure over the small-model candidate set. Worst-case
/// exponential in the number of variables; domains never exceed
/// min(N, 2(2m+1)p + 2) values.
inline SolveOutcome solve(const ConstraintSystem& sys) {
  const DomainBound bound = small_model_bound(sys);
  detail::BoundedSearch search(sys, bound);
  auto model = search.run();
  if (!model) return Unsat{search.stats()};
  if (!eval_system(sys, *model).satisfied()) throw InvariantViolation("bounded search returned a non-model");
  return Sat{std::move(*model), search.stats()};
}

// ---------------------------------------------------------------------------
// Clusters and normalization

/// Connected component of the graph joining values at distance <= 2m, over
/// the variables plus two synthetic ones pinned at 0 and N-1.
struct Cluster {
  std::vector<VarId> members;  // original variables, ordered by value then id
  bool has_min = false;        // contains the synthetic variable at 0
  bool has_max = false;        // contains the synthetic variable at N-1
  Residue leftmost = 0;
  Residue rightmost = 0;
  ResidueInterval domain;

  bool inner() const noexcept { return !has_min && !has_max; }
};

/// Clusters ordered left to right. Requires a total assignment.
inline std::vector<Cluster> compute_clusters(const ConstraintSystem& sys, const Assignment& a) {
  const std::int64_t n = sys.modulus().value();
  const std::int64_t m = sys.max_constant();
  struct Point {
    Residue value;
    int kind;  // 0 = v_min, 1 = variable, 2 = v_max
    std::uint32_t var;
  };
  std::vector<Point> points;
  points.push_back({0, 0, 0});
  for (std::uint32_t i = 0; i < sys.num_vars(); ++i) {
    const Residue v = a.at(VarId{i});
    if (v < 0 || v >= n) throw Error("assignment value " + std::to_string(v) + " is not a residue");
    points.push_back({v, 1, i});
  }
  points.push_back({n - 1, 2, 0});
  std::stable_sort(points.begin(), points.end(), [](const Point& x, const Point& y) {
    return x.value != y.value ? x.value < y.value : x.kind < y.kind;
  });

  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& pt = points[i];
    if (i == 0 || pt.value - points[i - 1].value > 2 * m) {
      clusters.emplace_back();
      clusters.back().leftmost = pt.value;
    }
    Cluster& c = clusters.back();
    c.rightmost = pt.value;
    if (pt.kind == 0) c.has_min = true;
    if (pt.kind == 2) c.has_max = true;
    if (pt.kind == 1) c.members.push_back(VarId{pt.var});
  }
  for (auto& c : clusters) {
    c.domain = {std::max<std::int64_t>(0, c.leftmost - m), std::min<std::int64_t>(n - 1, c.rightmost + m)};
  }
  return clusters;
}

/// Packs inner clusters to the left, one shift at a time, until each starts
/// right after its left neighbor's domain. The result satisfies `sys` and has
/// every value in [0, (2m+1)p] u [N-1-(2m+1)p, N-1].
inline Assignment normalize_solution(const ConstraintSystem& sys, Assignment a) {
  if (auto r = eval_system(sys, a); !r.satisfied()) throw NotASolution(*r.violated);
  for (;;) {
    const auto clusters = compute_clusters(sys, a);
    bool shifted = false;
    for (std::size_t i = 1; i < clusters.size(); ++i) {
      const Cluster& c = clusters[i];
      if (!c.inner()) continue;
      const Residue target = clusters[i - 1].domain.hi + 1;
      if (c.domain.lo <= target) continue;
      const std::int64_t d = c.domain.lo - target;
      for (VarId v : c.members) a.set(v, a.at(v) - d);
      if (!eval_system(sys, a).satisfied()) throw InvariantViolation("cluster shift broke a constraint");
      shifted = true;
      break;
    }
    if (!shifted) return a;
  }
}

}  // namespace modlogic::mdl
