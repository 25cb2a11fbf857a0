#include <gtest/gtest.h>

#include "modlogic/modlogic.hpp"
#include "oracles.hpp"

using namespace modlogic;
using reductions::Graph;
using reductions::Variant;

namespace {

std::vector<Graph> witness_corpus() {
  auto out = oracle::small_graphs();
  out.push_back(gen::complete_graph(3));
  out.push_back(gen::cycle_graph(5));
  out.push_back(gen::petersen_graph());
  return out;
}

Graph path3() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  return g;
}

}  // namespace

TEST(Corpus, SmallGraphCounts) {
  std::array<int, 5> per_size{};
  for (const auto& g : oracle::small_graphs()) ++per_size[g.num_vertices()];
  EXPECT_EQ(per_size[1], 1);
  EXPECT_EQ(per_size[2], 2);
  EXPECT_EQ(per_size[3], 4);
  EXPECT_EQ(per_size[4], 11);
}

TEST(Graph, Edges) {
  Graph g(3);
  g.add_edge(2, 0);
  EXPECT_TRUE(g.has_edge(0, 2));
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_THROW(g.add_edge(0, 2), reductions::GraphError);
  EXPECT_THROW(g.add_edge(1, 1), reductions::GraphError);
  EXPECT_THROW(g.add_edge(1, 3), reductions::GraphError);
}

TEST(VerifyColoring, Examples) {
  EXPECT_TRUE(reductions::verify_coloring(gen::complete_graph(3), {0, 1, 2}));
  EXPECT_TRUE(reductions::verify_coloring(path3(), {0, 1, 0}));
  EXPECT_FALSE(reductions::verify_coloring(path3(), {0, 0, 1}));
  EXPECT_FALSE(reductions::verify_coloring(path3(), {0, 1}));
  EXPECT_FALSE(reductions::verify_coloring(path3(), {0, 1, 3}));
  const Graph k4 = gen::complete_graph(4);
  for (int code = 0; code < 81; ++code) {
    reductions::Coloring col{code % 3, code / 3 % 3, code / 9 % 3, code / 27};
    EXPECT_FALSE(reductions::verify_coloring(k4, col));
  }
}

TEST(Encode, Counts) {
  const auto k3 = reductions::encode_3col_nonstrict(gen::complete_graph(3), Modulus(16));
  EXPECT_EQ(k3.system.num_vars(), 27u);
  EXPECT_EQ(k3.system.constraints().size(), 36u);
  const auto k3s = reductions::encode_3col_strict(gen::complete_graph(3), Modulus(16));
  EXPECT_EQ(k3s.system.num_vars(), 27u);
  EXPECT_EQ(k3s.system.constraints().size(), 36u);

  const auto single = reductions::encode_3col_nonstrict(Graph(1), Modulus(4));
  EXPECT_EQ(single.system.num_vars(), 3u);
  EXPECT_EQ(single.system.constraints().size(), 3u);

  Graph edge(2);
  edge.add_edge(0, 1);
  const auto e = reductions::encode_3col_strict(edge, Modulus(9));
  EXPECT_EQ(e.system.num_vars(), 12u);
  EXPECT_EQ(e.system.constraints().size(), 15u);

  for (const auto& g : witness_corpus()) {
    for (auto variant : {Variant::NonStrict, Variant::Strict}) {
      const auto enc = reductions::encode_3col(g, Modulus(16), variant);
      ASSERT_EQ(enc.system.num_vars(), 3 * g.num_vertices() + 6 * g.edges().size());
      ASSERT_EQ(enc.system.constraints().size(), 3 * g.num_vertices() + 9 * g.edges().size());
    }
  }
}

TEST(Encode, ModulusMinimums) {
  EXPECT_THROW(reductions::encode_3col_nonstrict(gen::complete_graph(3), Modulus(3)), reductions::ModulusTooSmall);
  EXPECT_THROW(reductions::encode_3col_strict(gen::complete_graph(3), Modulus(8)), reductions::ModulusTooSmall);
  EXPECT_NO_THROW(reductions::encode_3col_nonstrict(gen::complete_graph(3), Modulus(4)));
  EXPECT_NO_THROW(reductions::encode_3col_strict(gen::complete_graph(3), Modulus(9)));
}

TEST(Encode, NamesAreDeterministic) {
  Graph edge(2);
  edge.add_edge(0, 1);
  const auto enc = reductions::encode_3col_nonstrict(edge, Modulus(4));
  EXPECT_EQ(render_system(enc.system),
            "mod 4\n"
            "v0_c0 + 1 <= v0_c1\nv0_c1 + 1 <= v0_c2\nv0_c2 + 1 <= v0_c0\n"
            "v1_c0 + 1 <= v1_c1\nv1_c1 + 1 <= v1_c2\nv1_c2 + 1 <= v1_c0\n"
            "v0_c0 <= e0_1_c0 - 1\nv1_c0 <= f0_1_c0 - 1\nf0_1_c0 + 1 <= e0_1_c0\n"
            "v0_c1 <= e0_1_c1 - 1\nv1_c1 <= f0_1_c1 - 1\nf0_1_c1 + 1 <= e0_1_c1\n"
            "v0_c2 <= e0_1_c2 - 1\nv1_c2 <= f0_1_c2 - 1\nf0_1_c2 + 1 <= e0_1_c2\n");
}

TEST(Encode, StrictOffsetsStaySmall) {
  for (const auto& g : witness_corpus()) {
    const auto enc = reductions::encode_3col_strict(g, Modulus(9));
    for (const auto& c : enc.system.constraints()) {
      ASSERT_GE(c.lhs.offset, 0);
      ASSERT_LE(c.lhs.offset, 2);
      const auto& rhs = std::get<Term>(c.rhs);
      ASSERT_GE(rhs.offset, -1);
      ASSERT_LE(rhs.offset, 1);
    }
  }
}

TEST(Witness, Examples) {
  Graph edge(2);
  edge.add_edge(0, 1);
  const auto n = reductions::encode_3col_nonstrict(edge, Modulus(16));
  const auto a = reductions::coloring_to_witness(edge, {0, 1}, Modulus(16), Variant::NonStrict);
  EXPECT_EQ(a.at(n.meta.edge_vars[0].e), 0);
  EXPECT_EQ(a.at(n.meta.edge_vars[0].f), 15);
  EXPECT_EQ(a.at(n.meta.vertex_vars[0][0]), 15);
  EXPECT_EQ(a.at(n.meta.vertex_vars[0][1]), 0);
  EXPECT_EQ(a.at(n.meta.vertex_vars[0][2]), 1);

  const auto s = reductions::encode_3col_strict(edge, Modulus(16));
  const auto b = reductions::coloring_to_witness(edge, {0, 1}, Modulus(16), Variant::Strict);
  EXPECT_EQ(b.at(s.meta.edge_vars[2].e), 7);
  EXPECT_EQ(b.at(s.meta.edge_vars[2].f), 6);
  EXPECT_EQ(b.at(s.meta.edge_vars[1].e), 6);
  EXPECT_EQ(b.at(s.meta.edge_vars[1].f), 0);

  EXPECT_THROW(reductions::coloring_to_witness(edge, {1, 1}, Modulus(16), Variant::NonStrict), reductions::ImproperColoring);
}

// When neither endpoint has color c, N = 4 puts e at 3 = N-1, the largest residue.
TEST(Witness, BoundaryModulusFour) {
  Graph edge(2);
  edge.add_edge(0, 1);
  const auto enc = reductions::encode_3col_nonstrict(edge, Modulus(4));
  for (const auto& col : oracle::all_colorings(edge)) {
    const auto a = reductions::coloring_to_witness(edge, col, Modulus(4), Variant::NonStrict);
    ASSERT_TRUE(eval_system(enc.system, a).satisfied());
    for (const auto& ev : enc.meta.edge_vars) {
      if (ev.color != col[0] && ev.color != col[1]) {
        EXPECT_EQ(a.at(ev.e), 3);
      }
    }
  }
}

TEST(Witness, SatisfiesEncodingOnCorpus) {
  for (const auto& g : witness_corpus()) {
    const auto colorings = oracle::all_colorings(g);
    for (auto [variant, n] : std::vector<std::pair<Variant, std::int64_t>>{
             {Variant::NonStrict, 4}, {Variant::NonStrict, 9}, {Variant::NonStrict, 16}, {Variant::NonStrict, 256},
             {Variant::Strict, 9}, {Variant::Strict, 16}, {Variant::Strict, 256}}) {
      const auto enc = reductions::encode_3col(g, Modulus(n), variant);
      for (const auto& col : colorings) {
        const auto a = reductions::coloring_to_witness(g, col, Modulus(n), variant);
        ASSERT_TRUE(eval_system(enc.system, a).satisfied());
        ASSERT_EQ(reductions::decode_coloring(enc.meta, a), col);
      }
    }
  }
}

TEST(Decode, Examples) {
  const auto n = reductions::encode_3col_nonstrict(Graph(1), Modulus(16));
  Assignment a(3);
  a.set(VarId{0}, 15);
  a.set(VarId{1}, 0);
  a.set(VarId{2}, 1);
  EXPECT_EQ(reductions::decode_coloring(n.meta, a), (reductions::Coloring{0}));

  const auto s = reductions::encode_3col_strict(Graph(1), Modulus(16));
  a.set(VarId{0}, 4);
  a.set(VarId{1}, 14);
  a.set(VarId{2}, 1);
  EXPECT_EQ(reductions::decode_coloring(s.meta, a), (reductions::Coloring{1}));

  a.set(VarId{1}, 5);
  EXPECT_THROW(reductions::decode_coloring(s.meta, a), reductions::DecodeError);
}

// Several v_c may sit at N-1 in a model; the cyclic chain forces at least one.
TEST(Decode, MaximalValueIsNotExclusive) {
  const auto enc = reductions::encode_3col_nonstrict(Graph(1), Modulus(4));
  Assignment a(3);
  for (auto triple : {std::array<Residue, 3>{3, 3, 0}, std::array<Residue, 3>{3, 3, 3}}) {
    for (std::uint32_t i = 0; i < 3; ++i) a.set(VarId{i}, triple[i]);
    EXPECT_TRUE(eval_system(enc.system, a).satisfied());
    EXPECT_EQ(reductions::decode_coloring(enc.meta, a), (reductions::Coloring{0}));
  }
  for (Residue x = 0; x < 4; ++x) {
    for (Residue y = 0; y < 4; ++y) {
      for (Residue z = 0; z < 4; ++z) {
        a.set(VarId{0}, x);
        a.set(VarId{1}, y);
        a.set(VarId{2}, z);
        if (eval_system(enc.system, a).satisfied()) {
          EXPECT_TRUE(x == 3 || y == 3 || z == 3);
        }
      }
    }
  }
}

TEST(Reduction, AgreesWithExhaustiveColoring) {
  for (const auto& g : oracle::small_graphs()) {
    const bool colorable = oracle::three_colorable(g);
    for (auto [variant, n] : std::vector<std::pair<Variant, std::int64_t>>{{Variant::NonStrict, 4}, {Variant::Strict, 9}}) {
      const auto enc = reductions::encode_3col(g, Modulus(n), variant);
      const auto out = mdl::solve(enc.system);
      ASSERT_EQ(mdl::is_sat(out), colorable);
      if (colorable) {
        const auto col = reductions::decode_coloring(enc.meta, std::get<mdl::Sat>(out).model);
        ASSERT_TRUE(reductions::verify_coloring(g, col));
      }
    }
  }
}

TEST(Reduction, DecodesSolverModelsOnLargerGraphs) {
  for (const auto& g : {gen::cycle_graph(5), gen::petersen_graph(), gen::cycle_graph(7)}) {
    for (auto variant : {Variant::NonStrict, Variant::Strict}) {
      const auto enc = reductions::encode_3col(g, Modulus(16), variant);
      const auto out = mdl::solve(enc.system);
      ASSERT_TRUE(mdl::is_sat(out));
      ASSERT_TRUE(reductions::verify_coloring(g, reductions::decode_coloring(enc.meta, std::get<mdl::Sat>(out).model)));
    }
  }
}

TEST(Dimacs, ParseAndRender) {
  const Graph k3 = reductions::parse_dimacs_graph("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
  EXPECT_EQ(k3, gen::complete_graph(3));
  EXPECT_THROW(reductions::parse_dimacs_graph("p edge 2 1\ne 1 1\n"), ParseError);
  EXPECT_THROW(reductions::parse_dimacs_graph("p edge 2 2\ne 1 2\ne 2 1\n"), ParseError);
  EXPECT_THROW(reductions::parse_dimacs_graph("p edge 2 2\ne 1 2\n"), ParseError);
  EXPECT_THROW(reductions::parse_dimacs_graph("p edge 2 1\ne 1 3\n"), ParseError);
  EXPECT_THROW(reductions::parse_dimacs_graph("e 1 2\n"), ParseError);
  for (const auto& g : witness_corpus()) {
    const std::string text = reductions::render_dimacs_graph(g);
    EXPECT_EQ(reductions::parse_dimacs_graph(text), g);
    EXPECT_EQ(reductions::render_dimacs_graph(reductions::parse_dimacs_graph(text)), text);
  }
}

TEST(Sidecar, RoundTrip) {
  for (auto variant : {Variant::NonStrict, Variant::Strict}) {
    const Graph g = gen::petersen_graph();
    const auto enc = reductions::encode_3col(g, Modulus(12), variant);
    const auto text = reductions::render_meta(enc.meta, enc.system.symbols());
    const auto side = reductions::parse_meta(text);
    EXPECT_EQ(side.variant, variant);
    EXPECT_EQ(side.modulus.value(), 12);
    EXPECT_EQ(side.graph, g);
    ASSERT_EQ(side.vertex_names.size(), 10u);
    EXPECT_EQ(side.vertex_names[3][2], "v3_c2");
    ASSERT_EQ(side.edge_names.size(), 45u);
  }
  EXPECT_THROW(reductions::parse_meta("vertex 0 a b c\n"), ParseError);
}
