#pragma once

// Reference implementations used only by tests. None of them call into the
// library's solvers; they re-derive answers by exhaustive enumeration or a
// different algorithm.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "modlogic/modlogic.hpp"

namespace oracle {

// Floor-division residue, written without the library's reduce_mod.
inline std::int64_t mod(std::int64_t i, std::int64_t n) {
  const auto q = std::lldiv(i, n);
  return q.rem < 0 ? q.rem + n : q.rem;
}

inline bool holds(modlogic::Relation r, std::int64_t a, std::int64_t b) {
  switch (r) {
    case modlogic::Relation::LE: return a <= b;
    case modlogic::Relation::LT: return a < b;
    case modlogic::Relation::EQ: return a == b;
    case modlogic::Relation::GE: return a >= b;
    case modlogic::Relation::GT: return a > b;
  }
  return false;
}

inline bool check(const modlogic::ConstraintSystem& sys, const std::vector<std::int64_t>& values) {
  const std::int64_t n = sys.modulus().value();
  for (const auto& c : sys.constraints()) {
    const std::int64_t lhs = mod(values[c.lhs.var.index] + c.lhs.offset, n);
    std::int64_t rhs = 0;
    if (const auto* t = std::get_if<modlogic::Term>(&c.rhs)) {
      rhs = mod(values[t->var.index] + t->offset, n);
    } else {
      rhs = mod(std::get<modlogic::Constant>(c.rhs).value, n);
    }
    if (!holds(c.rel, lhs, rhs)) return false;
  }
  return true;
}

/// Odometer over [0, N-1]^p; returns the first satisfying vector, if any.
inline std::optional<std::vector<std::int64_t>> mdl_search(const modlogic::ConstraintSystem& sys) {
  const std::size_t p = sys.num_vars();
  const std::int64_t n = sys.modulus().value();
  std::vector<std::int64_t> v(p, 0);
  for (;;) {
    if (check(sys, v)) return v;
    std::size_t i = 0;
    while (i < p && ++v[i] == n) v[i++] = 0;
    if (i == p) return std::nullopt;
  }
}

/// Bellman-Ford from a virtual source joined to every vertex with weight 0.
/// True iff the difference constraints have an integer solution.
inline bool idl_bellman_ford(const std::vector<modlogic::idl::IdlConstraint>& cs, std::size_t num_vars) {
  // x - y <= k is an edge y -> x of weight k.
  std::vector<std::int64_t> dist(num_vars, 0);
  for (std::size_t round = 0; round <= num_vars; ++round) {
    bool changed = false;
    for (const auto& c : cs) {
      if (dist[c.y.index] + c.k < dist[c.x.index]) {
        dist[c.x.index] = dist[c.y.index] + c.k;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

/// Exhaustive search with x0 pinned at 0 and the rest in [-W, W], W = sum |k|.
/// Translation invariance makes the pin harmless; the window holds a solution
/// whenever one exists.
inline bool idl_window(const std::vector<modlogic::idl::IdlConstraint>& cs, std::size_t num_vars) {
  if (num_vars == 0) return true;
  std::int64_t w = 0;
  for (const auto& c : cs) w += std::llabs(c.k);
  std::vector<std::int64_t> v(num_vars, -w);
  v[0] = 0;
  auto ok = [&] {
    return std::all_of(cs.begin(), cs.end(), [&](const auto& c) { return v[c.x.index] - v[c.y.index] <= c.k; });
  };
  for (;;) {
    if (ok()) return true;
    std::size_t i = 1;
    while (i < num_vars && ++v[i] > w) v[i++] = -w;
    if (i >= num_vars) return false;
  }
}

/// All proper 3-colorings, by trying all 3^n color vectors.
inline std::vector<modlogic::reductions::Coloring> all_colorings(const modlogic::reductions::Graph& g) {
  const std::uint32_t n = g.num_vertices();
  std::vector<modlogic::reductions::Coloring> out;
  modlogic::reductions::Coloring col(n, 0);
  for (;;) {
    bool proper = true;
    for (const auto& [a, b] : g.edges()) proper = proper && col[a] != col[b];
    if (proper) out.push_back(col);
    std::uint32_t i = 0;
    while (i < n && ++col[i] == 3) col[i++] = 0;
    if (i == n) return out;
  }
}

inline bool three_colorable(const modlogic::reductions::Graph& g) { return !all_colorings(g).empty(); }

/// One representative per isomorphism class of graphs on 1..4 vertices,
/// picked as the least edge bitmask over all vertex permutations.
inline std::vector<modlogic::reductions::Graph> small_graphs() {
  std::vector<modlogic::reductions::Graph> out;
  for (std::uint32_t n = 1; n <= 4; ++n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> slots;
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) slots.emplace_back(a, b);
    }
    auto slot_of = [&](std::uint32_t a, std::uint32_t b) {
      if (a > b) std::swap(a, b);
      return static_cast<std::size_t>(std::find(slots.begin(), slots.end(), std::make_pair(a, b)) - slots.begin());
    };
    std::set<std::uint32_t> canon;
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
      std::vector<std::uint32_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::uint32_t best = mask;
      do {
        std::uint32_t image = 0;
        for (std::size_t s = 0; s < slots.size(); ++s) {
          if (mask >> s & 1) image |= 1u << slot_of(perm[slots[s].first], perm[slots[s].second]);
        }
        best = std::min(best, image);
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (!canon.insert(best).second) continue;
      modlogic::reductions::Graph g(n);
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (best >> s & 1) g.add_edge(slots[s].first, slots[s].second);
      }
      out.push_back(g);
    }
  }
  return out;
}

}  // namespace oracle
