#pragma once

// Integer difference logic: constraint graph with a Sink vertex,
// Floyd-Warshall with negative-cycle extraction, model and certificate
// construction, and the naive integer reading of a modular system.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "modlogic/core.hpp"

namespace modlogic::idl {

/// Largest |k| accepted by build_graph. With at most kMaxVariables + 1
/// vertices every simple path weight stays below 2^62.
inline constexpr std::int64_t kMaxWeight = std::int64_t{1} << 42;

/// x - y <= k
struct IdlConstraint {
  VarId x;
  VarId y;
  std::int64_t k = 0;

  friend bool operator==(const IdlConstraint&, const IdlConstraint&) = default;
};

/// Integer reading of a modular system. `source[i]` is the index of the
/// modular constraint that produced `constraints[i]`.
struct Relaxation {
  std::vector<IdlConstraint> constraints;
  std::vector<std::size_t> source;
  std::size_t num_vars = 0;
  /// Fresh variable standing for the integer 0, present when some
  /// constraint compares against a constant.
  std::optional<VarId> zero;
};

/// Reads every modular constraint as an integer difference constraint,
/// ignoring wraparound and the [0, N-1] range entirely.
inline Relaxation relax_to_idl(const ConstraintSystem& sys) {
  Relaxation out;
  out.num_vars = sys.num_vars();
  const auto& cs = sys.constraints();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Constraint& c = cs[i];
    Term rhs;
    if (const auto* t = std::get_if<Term>(&c.rhs)) {
      rhs = *t;
    } else {
      if (!out.zero) {
        out.zero = VarId{static_cast<std::uint32_t>(out.num_vars)};
        ++out.num_vars;
      }
      rhs = Term{*out.zero, std::get<Constant>(c.rhs).value};
    }
    const Term& lhs = c.lhs;
    // lhs.var + lhs.offset REL rhs.var + rhs.offset
    auto emit = [&](VarId x, VarId y, std::int64_t k) {
      out.constraints.push_back(IdlConstraint{x, y, k});
      out.source.push_back(i);
    };
    const std::int64_t forward = rhs.offset - lhs.offset;   // x - y <= l - k
    const std::int64_t backward = lhs.offset - rhs.offset;  // y - x <= k - l
    switch (c.rel) {
      case Relation::LE: emit(lhs.var, rhs.var, forward); break;
      case Relation::LT: emit(lhs.var, rhs.var, forward - 1); break;
      case Relation::EQ:
        emit(lhs.var, rhs.var, forward);
        emit(rhs.var, lhs.var, backward);
        break;
      case Relation::GE: emit(rhs.var, lhs.var, backward); break;
      case Relation::GT: emit(rhs.var, lhs.var, backward - 1); break;
    }
  }
  return out;
}

/// Raised by build_graph for a constraint x - x <= k with k < 0.
class TrivialUnsat : public Error {
 public:
  TrivialUnsat(IdlConstraint c, std::size_t index)
      : Error("constraint #" + std::to_string(index) + " reads x - x <= " + std::to_string(c.k)),
        constraint_(c),
        index_(index) {}

  const IdlConstraint& constraint() const noexcept { return constraint_; }
  std::size_t index() const noexcept { return index_; }

 private:
  IdlConstraint constraint_;
  std::size_t index_;
};

class DiffGraph {
 public:
  static constexpr std::size_t kNoSource = std::numeric_limits<std::size_t>::max();

  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::int64_t weight = 0;
    /// Index of the input constraint this edge came from; kNoSource for the
    /// edges into Sink.
    std::size_t source = kNoSource;

    friend bool operator==(const Edge&, const Edge&) = default;
  };

  DiffGraph(std::size_t num_originals, std::vector<Edge> edges)
      : num_originals_(num_originals), edges_(std::move(edges)) {}

  std::size_t num_originals() const noexcept { return num_originals_; }
  std::size_t num_vertices() const noexcept { return num_originals_ + 1; }
  std::size_t sink() const noexcept { return num_originals_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::optional<Edge> edge(std::size_t from, std::size_t to) const {
    for (const auto& e : edges_) {
      if (e.from == from && e.to == to) return e;
    }
    return std::nullopt;
  }

 private:
  std::size_t num_originals_;
  std::vector<Edge> edges_;
};

/// One edge per ordered pair, keeping the minimum weight (the first such
/// constraint on ties), followed by a weight-0 edge from every original
/// variable to Sink.
inline DiffGraph build_graph(std::span<const IdlConstraint> constraints, std::size_t num_vars) {
  if (num_vars > kMaxVariables + 1) throw LimitError("too many IDL variables");
  std::vector<DiffGraph::Edge> edges;
  std::vector<std::size_t> slot(num_vars * num_vars, DiffGraph::kNoSource);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    if (c.x.index >= num_vars) throw UndefinedVariable(c.x);
    if (c.y.index >= num_vars) throw UndefinedVariable(c.y);
    if (c.k > kMaxWeight || c.k < -kMaxWeight) {
      throw LimitError("IDL weight " + std::to_string(c.k) + " exceeds 2^42 in magnitude");
    }
    if (c.x == c.y) {
      if (c.k < 0) throw TrivialUnsat(c, i);
      continue;
    }
    auto& s = slot[c.x.index * num_vars + c.y.index];
    if (s == DiffGraph::kNoSource) {
      s = edges.size();
      edges.push_back({c.x.index, c.y.index, c.k, i});
    } else if (c.k < edges[s].weight) {
      edges[s].weight = c.k;
      edges[s].source = i;
    }
  }
  for (std::size_t v = 0; v < num_vars; ++v) edges.push_back({v, num_vars, 0, DiffGraph::kNoSource});
  return DiffGraph(num_vars, std::move(edges));
}

inline DiffGraph build_graph(std::span<const IdlConstraint> constraints) {
  std::size_t n = 0;
  for (const auto& c : constraints) n = std::max<std::size_t>({n, c.x.index + 1u, c.y.index + 1u});
  return build_graph(constraints, n);
}

/// All-pairs minimal path weights; nullopt where no path exists.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t n, std::vector<std::int64_t> dist, std::vector<char> reachable)
      : n_(n), dist_(std::move(dist)), reachable_(std::move(reachable)) {}

  std::size_t size() const noexcept { return n_; }

  std::optional<std::int64_t> at(std::size_t from, std::size_t to) const {
    const std::size_t idx = from * n_ + to;
    if (!reachable_.at(idx)) return std::nullopt;
    return dist_[idx];
  }

 private:
  std::size_t n_;
  std::vector<std::int64_t> dist_;
  std::vector<char> reachable_;
};

/// A closed walk of negative total weight, as indices into DiffGraph::edges().
/// Simple (no repeated vertex) and rotated to start at its smallest vertex.
struct NegativeCycle {
  std::vector<std::size_t> edges;
  std::int64_t weight = 0;
};

using ShortestPaths = std::variant<DistanceMatrix, NegativeCycle>;

namespace detail {

inline std::int64_t walk_weight(const DiffGraph& g, std::span<const std::size_t> walk) {
  __int128 w = 0;
  for (auto e : walk) w += g.edges()[e].weight;
  return static_cast<std::int64_t>(w);
}

// Reduces a closed negative walk to a simple negative cycle: split at the first
// repeated vertex; one of the two closed pieces is negative.
inline std::vector<std::size_t> simple_negative_cycle(const DiffGraph& g, std::vector<std::size_t> walk) {
  for (;;) {
    std::vector<std::size_t> first_seen(g.num_vertices(), DiffGraph::kNoSource);
    std::optional<std::pair<std::size_t, std::size_t>> repeat;
    for (std::size_t pos = 0; pos < walk.size(); ++pos) {
      const std::size_t v = g.edges()[walk[pos]].from;
      if (first_seen[v] != DiffGraph::kNoSource) {
        repeat = {first_seen[v], pos};
        break;
      }
      first_seen[v] = pos;
    }
    if (!repeat) break;
    const auto [p, q] = *repeat;
    std::vector<std::size_t> inner(walk.begin() + static_cast<std::ptrdiff_t>(p), walk.begin() + static_cast<std::ptrdiff_t>(q));
    std::vector<std::size_t> outer(walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(p));
    outer.insert(outer.end(), walk.begin() + static_cast<std::ptrdiff_t>(q), walk.end());
    walk = walk_weight(g, inner) < 0 ? std::move(inner) : std::move(outer);
  }
  auto smallest = std::min_element(walk.begin(), walk.end(), [&](std::size_t a, std::size_t b) {
    return g.edges()[a].from < g.edges()[b].from;
  });
  std::rotate(walk.begin(), smallest, walk.end());
  return walk;
}

}  // namespace detail

/// Floyd-Warshall over the graph. Stops at the first pivot k that closes a
/// negative cycle i -> k -> i; up to that point every stored distance is a
/// simple-path weight, so the intermediate-vertex table unfolds into a walk.
inline ShortestPaths floyd_warshall(const DiffGraph& g) {
  const std::size_t n = g.num_vertices();
  constexpr std::int32_t kDirect = -1;
  std::vector<std::int64_t> dist(n * n, 0);
  std::vector<char> reach(n * n, 0);
  std::vector<std::int32_t> via(n * n, kDirect);
  std::vector<std::size_t> direct(n * n, DiffGraph::kNoSource);

  for (std::size_t v = 0; v < n; ++v) reach[v * n + v] = 1;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& edge = g.edges()[e];
    const std::size_t idx = edge.from * n + edge.to;
    reach[idx] = 1;
    dist[idx] = edge.weight;
    direct[idx] = e;
  }

  auto unfold = [&](auto&& self, std::size_t from, std::size_t to, std::vector<std::size_t>& out) -> void {
    const std::size_t idx = from * n + to;
    if (via[idx] == kDirect) {
      out.push_back(direct[idx]);
      return;
    }
    const auto mid = static_cast<std::size_t>(via[idx]);
    self(self, from, mid, out);
    self(self, mid, to, out);
  };

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || !reach[i * n + k] || !reach[k * n + i]) continue;
      if (static_cast<__int128>(dist[i * n + k]) + dist[k * n + i] < 0) {
        std::vector<std::size_t> walk;
        unfold(unfold, i, k, walk);
        unfold(unfold, k, i, walk);
        NegativeCycle cycle;
        cycle.edges = detail::simple_negative_cycle(g, std::move(walk));
        cycle.weight = detail::walk_weight(g, cycle.edges);
        return cycle;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || !reach[i * n + k]) continue;
      const std::int64_t ik = dist[i * n + k];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k || !reach[k * n + j]) continue;
        const std::size_t idx = i * n + j;
        const __int128 candidate = static_cast<__int128>(ik) + dist[k * n + j];
        if (!reach[idx] || candidate < dist[idx]) {
          reach[idx] = 1;
          dist[idx] = static_cast<std::int64_t>(candidate);
          via[idx] = static_cast<std::int32_t>(k);
        }
      }
    }
  }
  return DistanceMatrix(n, std::move(dist), std::move(reach));
}

/// Integer model: values[i] is the value of variable i.
struct IdlModel {
  std::vector<std::int64_t> values;
};

/// Closed chain x0 - x1 <= k0, x1 - x2 <= k1, ..., x_{r-1} - x0 <= k_{r-1}
/// whose weights sum to `weight` < 0. `source[i]` indexes the input list.
struct IdlCertificate {
  std::vector<IdlConstraint> cycle;
  std::vector<std::size_t> source;
  std::int64_t weight = 0;
};

using IdlOutcome = std::variant<IdlModel, IdlCertificate>;

inline bool is_sat(const IdlOutcome& o) noexcept { return std::holds_alternative<IdlModel>(o); }

/// Decides the system. On success S(x) = W(x, Sink), which is <= 0.
inline IdlOutcome solve_idl(std::span<const IdlConstraint> constraints, std::size_t num_vars) {
  std::optional<DiffGraph> graph;
  try {
    graph.emplace(build_graph(constraints, num_vars));
  } catch (const TrivialUnsat& e) {
    return IdlCertificate{{e.constraint()}, {e.index()}, e.constraint().k};
  }
  auto paths = floyd_warshall(*graph);
  if (auto* cycle = std::get_if<NegativeCycle>(&paths)) {
    IdlCertificate cert;
    cert.weight = cycle->weight;
    for (auto e : cycle->edges) {
      const auto& edge = graph->edges()[e];
      cert.cycle.push_back(constraints[edge.source]);
      cert.source.push_back(edge.source);
    }
    return cert;
  }
  const auto& w = std::get<DistanceMatrix>(paths);
  IdlModel model;
  model.values.reserve(num_vars);
  for (std::size_t v = 0; v < num_vars; ++v) model.values.push_back(*w.at(v, graph->sink()));
  return model;
}

inline IdlOutcome solve_idl(std::span<const IdlConstraint> constraints) {
  std::size_t n = 0;
  for (const auto& c : constraints) n = std::max<std::size_t>({n, c.x.index + 1u, c.y.index + 1u});
  return solve_idl(constraints, n);
}

inline IdlOutcome solve_idl(const Relaxation& r) { return solve_idl(r.constraints, r.num_vars); }

/// S(x) - S(y) <= k for every constraint.
inline bool satisfies(const IdlModel& model, std::span<const IdlConstraint> constraints) {
  for (const auto& c : constraints) {
    if (c.x.index >= model.values.size() || c.y.index >= model.values.size()) return false;
    const __int128 diff = static_cast<__int128>(model.values[c.x.index]) - model.values[c.y.index];
    if (diff > c.k) return false;
  }
  return true;
}

/// Checks the chain closes and sums negative; summing its inequalities then
/// gives 0 <= weight < 0.
inline bool is_valid_certificate(const IdlCertificate& cert) {
  if (cert.cycle.empty()) return false;
  __int128 total = 0;
  for (std::size_t i = 0; i < cert.cycle.size(); ++i) {
    const auto& next = cert.cycle[(i + 1) % cert.cycle.size()];
    if (cert.cycle[i].y != next.x) return false;
    total += cert.cycle[i].k;
  }
  return total < 0 && total == cert.weight;
}

/// As above, and every cited constraint is the one at its source index.
inline bool is_valid_certificate(const IdlCertificate& cert, std::span<const IdlConstraint> constraints) {
  if (cert.source.size() != cert.cycle.size()) return false;
  for (std::size_t i = 0; i < cert.cycle.size(); ++i) {
    if (cert.source[i] >= constraints.size() || constraints[cert.source[i]] != cert.cycle[i]) return false;
  }
  return is_valid_certificate(cert);
}

}  // namespace modlogic::idl
