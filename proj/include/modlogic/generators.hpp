#pragma once

// Instance generators: the wraparound gap examples, the four-constraint
// integer cycle, seeded random systems, and a few named graphs.

#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "modlogic/core.hpp"
#include "modlogic/reductions.hpp"

namespace modlogic::gen {

/// x >= 0, x + 1 <= 0: satisfiable mod any N (x = N-1), not over the integers.
inline ConstraintSystem intro_gap(Modulus n) {
  ConstraintSystem sys(n);
  const VarId x = sys.variable("x");
  sys.add(Term{x, 0}, Relation::GE, Constant{0});
  sys.add(Term{x, 1}, Relation::LE, Constant{0});
  return sys;
}

/// x0 < x1 < ... < xN: N+1 distinct residues do not fit in [0, N-1].
inline ConstraintSystem chain(Modulus n) {
  if (static_cast<std::uint64_t>(n.value()) >= kMaxVariables) throw LimitError("chain needs N+1 variables");
  ConstraintSystem sys(n);
  VarId prev = sys.variable("x0");
  for (std::int64_t i = 1; i <= n.value(); ++i) {
    const VarId cur = sys.variable("x" + std::to_string(i));
    sys.add(Term{prev, 0}, Relation::LT, Term{cur, 0});
    prev = cur;
  }
  return sys;
}

/// x1 - x2 <= -3, x2 - x3 <= 1, x3 - x4 <= -2, x4 - x1 <= 3 written as
/// modular constraints; its integer reading sums to 0 <= -1.
inline ConstraintSystem idl_cycle_example(Modulus n) {
  ConstraintSystem sys(n);
  const VarId x1 = sys.variable("x1");
  const VarId x2 = sys.variable("x2");
  const VarId x3 = sys.variable("x3");
  const VarId x4 = sys.variable("x4");
  sys.add(Term{x1, 3}, Relation::LE, Term{x2, 0});
  sys.add(Term{x2, 0}, Relation::LE, Term{x3, 1});
  sys.add(Term{x3, 2}, Relation::LE, Term{x4, 0});
  sys.add(Term{x4, 0}, Relation::LE, Term{x1, 3});
  return sys;
}

struct RandomParams {
  std::uint32_t vars = 3;
  std::uint32_t constraints = 5;
  Offset m = 2;
  std::int64_t modulus = 12;
};

namespace detail {

// Uniform draw in [lo, hi] from the raw engine output; the engine sequence is
// fixed by the standard, so the result is identical on every platform.
inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r = 0;
  do {
    r = rng();
  } while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

}  // namespace detail

/// Each constraint picks one of eight shapes uniformly:
///   x+k <= y+l, x <= c, x >= c, x+k < y+l, x < c, x > c, x+k = y+l, x = c
/// with variables uniform over x0..x{vars-1} and k, l, c uniform in [-m, m].
/// Variables are interned on first use, so unused ones do not appear.
inline ConstraintSystem random_system(const RandomParams& params, std::uint64_t seed) {
  if (params.vars == 0) throw Error("random systems need at least one variable");
  if (params.m < 0 || params.m > kMaxOffset) throw LimitError("m out of range");
  ConstraintSystem sys{Modulus(params.modulus)};
  std::mt19937_64 rng(seed);
  auto pick_var = [&] { return "x" + std::to_string(detail::uniform(rng, 0, params.vars - 1)); };
  auto pick_offset = [&] { return detail::uniform(rng, -params.m, params.m); };
  for (std::uint32_t i = 0; i < params.constraints; ++i) {
    const auto shape = detail::uniform(rng, 0, 7);
    const std::string x = pick_var();
    static constexpr Relation kBinary[] = {Relation::LE, Relation::LT, Relation::EQ};
    static constexpr Relation kUnary[] = {Relation::LE, Relation::GE, Relation::LT, Relation::GT, Relation::EQ};
    switch (shape) {
      case 0:
      case 3:
      case 6: {
        const Offset k = pick_offset();
        const std::string y = pick_var();
        const Offset l = pick_offset();
        const VarId xv = sys.variable(x);
        const VarId yv = sys.variable(y);
        sys.add(Term{xv, k}, kBinary[shape / 3], Term{yv, l});
        break;
      }
      default: {
        const Offset c = pick_offset();
        const int idx = shape == 1 ? 0 : shape == 2 ? 1 : shape == 4 ? 2 : shape == 5 ? 3 : 4;
        sys.add(Term{sys.variable(x), 0}, kUnary[idx], Constant{c});
        break;
      }
    }
  }
  return sys;
}

inline reductions::Graph complete_graph(std::uint32_t n) {
  reductions::Graph g(n);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) g.add_edge(a, b);
  }
  return g;
}

inline reductions::Graph cycle_graph(std::uint32_t n) {
  reductions::Graph g(n);
  for (std::uint32_t a = 0; a < n; ++a) g.add_edge(a, (a + 1) % n);
  return g;
}

inline reductions::Graph petersen_graph() {
  reductions::Graph g(10);
  for (std::uint32_t i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);          // outer cycle
    g.add_edge(i, i + 5);                // spokes
    g.add_edge(i + 5, (i + 2) % 5 + 5);  // inner pentagram
  }
  return g;
}

}  // namespace modlogic::gen
