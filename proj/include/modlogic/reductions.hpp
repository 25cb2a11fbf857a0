#pragma once

// Graph 3-colorability as modular difference constraints.
//
// Each vertex v gets residues v_0, v_1, v_2 tied in a cycle that forces at
// least one of them to the top of the range; the first such index is v's
// color. Each edge (v, w) and color c gets residues e_c, f_c with constraints
// that rule out v_c and w_c both being at the top. The non-strict encoding
// needs N >= 4, the strict one N >= 9.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modlogic/core.hpp"

namespace modlogic::reductions {

class GraphError : public Error {
 public:
  using Error::Error;
};

class ModulusTooSmall : public ModulusError {
 public:
  ModulusTooSmall(std::int64_t n, std::int64_t minimum)
      : ModulusError("modulus too small: " + std::to_string(n) + " < " + std::to_string(minimum)) {}
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class ImproperColoring : public Error {
 public:
  using Error::Error;
};

/// Undirected simple graph on 0..n-1; edges stored as (v, w) with v < w,
/// sorted.
class Graph {
 public:
  using Edge = std::pair<std::uint32_t, std::uint32_t>;

  Graph() = default;
  explicit Graph(std::uint32_t n) : n_(n) {}

  void add_edge(std::uint32_t a, std::uint32_t b) {
    if (a == b) throw GraphError("self-loop on vertex " + std::to_string(a));
    if (a >= n_ || b >= n_) throw GraphError("edge endpoint out of range");
    const Edge e{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it != edges_.end() && *it == e) {
      throw GraphError("duplicate edge " + std::to_string(e.first) + "-" + std::to_string(e.second));
    }
    edges_.insert(it, e);
  }

  bool has_edge(std::uint32_t a, std::uint32_t b) const {
    const Edge e{std::min(a, b), std::max(a, b)};
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

  std::uint32_t num_vertices() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::uint32_t n_ = 0;
  std::vector<Edge> edges_;
};

/// color[v] in {0, 1, 2}.
using Coloring = std::vector<int>;

enum class Variant { NonStrict, Strict };

constexpr std::string_view variant_name(Variant v) noexcept {
  return v == Variant::NonStrict ? "nonstrict" : "strict";
}

constexpr std::int64_t minimum_modulus(Variant v) noexcept { return v == Variant::NonStrict ? 4 : 9; }

struct EdgeColorVars {
  std::uint32_t u = 0;
  std::uint32_t w = 0;
  int color = 0;
  VarId e;
  VarId f;

  friend bool operator==(const EdgeColorVars&, const EdgeColorVars&) = default;
};

struct EncodingMeta {
  Variant variant = Variant::NonStrict;
  Modulus modulus{4};
  std::vector<std::array<VarId, 3>> vertex_vars;
  /// Three entries per edge, in edge order then color order.
  std::vector<EdgeColorVars> edge_vars;

  friend bool operator==(const EncodingMeta&, const EncodingMeta&) = default;
};

struct Encoding {
  ConstraintSystem system;
  EncodingMeta meta;
};

inline bool verify_coloring(const Graph& g, const Coloring& col) {
  if (col.size() != g.num_vertices()) return false;
  for (int c : col) {
    if (c < 0 || c > 2) return false;
  }
  return std::none_of(g.edges().begin(), g.edges().end(), [&](const Graph::Edge& e) { return col[e.first] == col[e.second]; });
}

namespace detail {

inline std::string vertex_var_name(std::uint32_t v, int c) {
  return "v" + std::to_string(v) + "_c" + std::to_string(c);
}

inline std::string edge_var_name(char prefix, std::uint32_t u, std::uint32_t w, int c) {
  return std::string(1, prefix) + std::to_string(u) + "_" + std::to_string(w) + "_c" + std::to_string(c);
}

}  // namespace detail

inline Encoding encode_3col(const Graph& g, Modulus n, Variant variant) {
  if (n.value() < minimum_modulus(variant)) throw ModulusTooSmall(n.value(), minimum_modulus(variant));
  const bool strict = variant == Variant::Strict;
  Encoding out{ConstraintSystem(n), EncodingMeta{variant, n, {}, {}}};
  ConstraintSystem& sys = out.system;

  for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
    std::array<VarId, 3> vars;
    for (int c = 0; c < 3; ++c) vars[static_cast<std::size_t>(c)] = sys.variable(detail::vertex_var_name(v, c));
    out.meta.vertex_vars.push_back(vars);
    for (std::size_t c = 0; c < 3; ++c) {
      const VarId cur = vars[c];
      const VarId next = vars[(c + 1) % 3];
      if (strict) {
        sys.add(Term{cur, 2}, Relation::LT, Term{next, 0});
      } else {
        sys.add(Term{cur, 1}, Relation::LE, Term{next, 0});
      }
    }
  }

  for (const auto& [u, w] : g.edges()) {
    for (int c = 0; c < 3; ++c) {
      const VarId e = sys.variable(detail::edge_var_name('e', u, w, c));
      const VarId f = sys.variable(detail::edge_var_name('f', u, w, c));
      const VarId uc = out.meta.vertex_vars[u][static_cast<std::size_t>(c)];
      const VarId wc = out.meta.vertex_vars[w][static_cast<std::size_t>(c)];
      if (strict) {
        sys.add(Term{uc, 0}, Relation::LT, Term{e, -1});
        sys.add(Term{wc, 0}, Relation::LT, Term{f, -1});
        sys.add(Term{f, 1}, Relation::LT, Term{e, 1});
      } else {
        sys.add(Term{uc, 0}, Relation::LE, Term{e, -1});
        sys.add(Term{wc, 0}, Relation::LE, Term{f, -1});
        sys.add(Term{f, 1}, Relation::LE, Term{e, 0});
      }
      out.meta.edge_vars.push_back({u, w, c, e, f});
    }
  }
  return out;
}

inline Encoding encode_3col_nonstrict(const Graph& g, Modulus n) { return encode_3col(g, n, Variant::NonStrict); }
inline Encoding encode_3col_strict(const Graph& g, Modulus n) { return encode_3col(g, n, Variant::Strict); }

/// Color of each vertex: the least c with v_c at the top (N-1), or for the
/// strict encoding within the top two residues (>= N-2).
inline Coloring decode_coloring(const EncodingMeta& meta, const Assignment& a) {
  const std::int64_t n = meta.modulus.value();
  const std::int64_t threshold = meta.variant == Variant::NonStrict ? n - 1 : n - 2;
  Coloring col;
  col.reserve(meta.vertex_vars.size());
  for (std::size_t v = 0; v < meta.vertex_vars.size(); ++v) {
    int color = -1;
    for (int c = 0; c < 3 && color < 0; ++c) {
      if (a.at(meta.vertex_vars[v][static_cast<std::size_t>(c)]) >= threshold) color = c;
    }
    if (color < 0) throw DecodeError("vertex " + std::to_string(v) + " has no residue at or above " + std::to_string(threshold));
    col.push_back(color);
  }
  return col;
}

/// Builds a model of the encoding from a proper coloring. Variables are
/// numbered exactly as encode_3col numbers them.
inline Assignment coloring_to_witness(const Graph& g, const Coloring& col, Modulus n, Variant variant) {
  if (n.value() < minimum_modulus(variant)) throw ModulusTooSmall(n.value(), minimum_modulus(variant));
  if (!verify_coloring(g, col)) throw ImproperColoring("not a proper 3-coloring");
  const std::int64_t top = n.value() - 1;
  const bool strict = variant == Variant::Strict;

  Assignment a(3 * static_cast<std::size_t>(g.num_vertices()) + 6 * g.edges().size());
  auto vertex_var = [](std::uint32_t v, int c) { return VarId{3 * v + static_cast<std::uint32_t>(c)}; };

  // (v_c, v_{c+1}, v_{c+2}) for a vertex of color c
  const std::array<Residue, 3> pattern = strict ? std::array<Residue, 3>{top - 1, 1, 4} : std::array<Residue, 3>{top, 0, 1};
  for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
    for (int i = 0; i < 3; ++i) a.set(vertex_var(v, (col[v] + i) % 3), pattern[static_cast<std::size_t>(i)]);
  }

  std::uint32_t next = 3 * g.num_vertices();
  for (const auto& [u, w] : g.edges()) {
    for (int c = 0; c < 3; ++c) {
      const VarId e{next++};
      const VarId f{next++};
      Residue ev = 0;
      Residue fv = 0;
      if (c == col[u]) {
        ev = 0;
        fv = top;
      } else if (c == col[w]) {
        ev = strict ? 6 : 2;
        fv = 0;
      } else {
        ev = strict ? 7 : 3;
        fv = strict ? 6 : 2;
      }
      a.set(e, ev);
      a.set(f, fv);
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// DIMACS edge format: "p edge n m" then m lines "e u v", 1-indexed.

inline Graph parse_dimacs_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<Graph> g;
  std::size_t declared = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind == "c") continue;
    auto fail = [&](const std::string& msg) -> void { throw ParseError(line_no, 1, msg); };
    if (kind == "p") {
      std::string format;
      long long n = -1;
      long long m = -1;
      if (g) fail("duplicate problem line");
      if (!(ls >> format >> n >> m) || (format != "edge" && format != "col") || n < 0 || m < 0 ||
          n > static_cast<long long>(kMaxVariables)) {
        fail("expected 'p edge <n> <m>'");
      }
      g.emplace(static_cast<std::uint32_t>(n));
      declared = static_cast<std::size_t>(m);
    } else if (kind == "e") {
      long long a = 0;
      long long b = 0;
      if (!g) fail("edge before problem line");
      if (!(ls >> a >> b)) fail("expected 'e <u> <v>'");
      if (a < 1 || b < 1 || a > g->num_vertices() || b > g->num_vertices()) fail("vertex out of range");
      if (a == b) fail("self-loop on vertex " + std::to_string(a));
      if (g->has_edge(static_cast<std::uint32_t>(a - 1), static_cast<std::uint32_t>(b - 1))) {
        fail("duplicate edge " + std::to_string(a) + " " + std::to_string(b));
      }
      g->add_edge(static_cast<std::uint32_t>(a - 1), static_cast<std::uint32_t>(b - 1));
    } else {
      fail("unknown line type '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing input");
  }
  if (!g) throw ParseError(line_no, 1, "missing 'p edge' line");
  if (g->edges().size() != declared) {
    throw ParseError(line_no, 1, "declared " + std::to_string(declared) + " edges, found " + std::to_string(g->edges().size()));
  }
  return std::move(*g);
}

inline std::string render_dimacs_graph(const Graph& g) {
  std::string out = "p edge " + std::to_string(g.num_vertices()) + " " + std::to_string(g.edges().size()) + "\n";
  for (const auto& [u, w] : g.edges()) out += "e " + std::to_string(u + 1) + " " + std::to_string(w + 1) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Sidecar: "encoding <variant> <N>", then "vertex <v> <v0> <v1> <v2>" and
// "edge <u> <w> <c> <e> <f>" lines naming the variables of the encoded system.

inline std::string render_meta(const EncodingMeta& meta, const SymbolTable& symbols) {
  std::string out = "encoding " + std::string(variant_name(meta.variant)) + " " + std::to_string(meta.modulus.value()) + "\n";
  for (std::size_t v = 0; v < meta.vertex_vars.size(); ++v) {
    out += "vertex " + std::to_string(v);
    for (VarId id : meta.vertex_vars[v]) out += " " + symbols.name(id);
    out += "\n";
  }
  for (const auto& ev : meta.edge_vars) {
    out += "edge " + std::to_string(ev.u) + " " + std::to_string(ev.w) + " " + std::to_string(ev.color) + " " +
           symbols.name(ev.e) + " " + symbols.name(ev.f) + "\n";
  }
  return out;
}

/// A parsed sidecar: enough to rebuild the encoding and check the names.
struct Sidecar {
  Variant variant = Variant::NonStrict;
  Modulus modulus{4};
  Graph graph;
  std::vector<std::array<std::string, 3>> vertex_names;
  std::vector<std::array<std::string, 2>> edge_names;
};

inline Sidecar parse_meta(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  Variant variant = Variant::NonStrict;
  long long n = 0;
  std::vector<std::array<std::string, 3>> vertices;
  struct EdgeLine {
    long long u, w, c;
    std::array<std::string, 2> names;
  };
  std::vector<EdgeLine> edges;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind.front() == '#') continue;
    auto fail = [&](const std::string& msg) -> void { throw ParseError(line_no, 1, msg); };
    if (kind == "encoding") {
      std::string name;
      if (have_header || !(ls >> name >> n)) fail("expected 'encoding <variant> <N>'");
      if (name == "nonstrict") {
        variant = Variant::NonStrict;
      } else if (name == "strict") {
        variant = Variant::Strict;
      } else {
        fail("unknown variant '" + name + "'");
      }
      have_header = true;
    } else if (kind == "vertex") {
      long long v = -1;
      std::array<std::string, 3> names;
      if (!have_header || !(ls >> v >> names[0] >> names[1] >> names[2])) fail("expected 'vertex <v> <v0> <v1> <v2>'");
      if (v != static_cast<long long>(vertices.size())) fail("vertex lines must be numbered 0, 1, 2, ...");
      vertices.push_back(names);
    } else if (kind == "edge") {
      EdgeLine e{};
      if (!have_header || !(ls >> e.u >> e.w >> e.c >> e.names[0] >> e.names[1])) fail("expected 'edge <u> <w> <c> <e> <f>'");
      if (e.c != static_cast<long long>(edges.size() % 3)) fail("edge lines must list colors 0, 1, 2 in order");
      if (e.c > 0 && (edges.back().u != e.u || edges.back().w != e.w)) fail("edge lines for one edge must be consecutive");
      edges.push_back(e);
    } else {
      fail("unknown line type '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing input");
  }
  if (!have_header) throw ParseError(line_no, 1, "missing 'encoding' header");
  if (edges.size() % 3 != 0) throw ParseError(line_no, 1, "incomplete edge block");

  Sidecar s{variant, Modulus(n), Graph(static_cast<std::uint32_t>(vertices.size())), std::move(vertices), {}};
  for (std::size_t i = 0; i < edges.size(); i += 3) {
    const auto& e = edges[i];
    if (e.u < 0 || e.w < 0 || e.u >= e.w) throw ParseError(line_no, 1, "edge endpoints must satisfy u < w");
    try {
      s.graph.add_edge(static_cast<std::uint32_t>(e.u), static_cast<std::uint32_t>(e.w));
    } catch (const GraphError& err) {
      throw ParseError(line_no, 1, err.what());
    }
  }
  // add_edge keeps edges sorted; names follow the graph's edge order.
  for (const auto& [u, w] : s.graph.edges()) {
    for (std::size_t i = 0; i < edges.size(); i += 3) {
      if (edges[i].u == u && edges[i].w == w) {
        for (std::size_t c = 0; c < 3; ++c) s.edge_names.push_back(edges[i + c].names);
      }
    }
  }
  return s;
}

}  // namespace modlogic::reductions
