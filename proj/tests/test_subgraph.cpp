#include <gtest/gtest.h>

#include <map>

#include "crawlcount/exact.hpp"
#include "crawlcount/subgraph.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace crawlcount;
using namespace crawlcount::testing;

namespace {

struct Fixture {
  explicit Fixture(Graph graph) : g(std::move(graph)), ledger(g.vertex_count()), oracle(g, ledger) {}
  Graph g;
  QueryLedger ledger;
  NeighborhoodOracle oracle;
};

VSet vset(const Instance& inst) { return VSet(inst.begin(), inst.end()); }

}  // namespace

TEST(Instance, CanonicalForm) {
  Instance a{3, 1, 2};
  Instance b{2, 3, 1};
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[0], 1u);
  EXPECT_EQ(a.with(0), (Instance{0, 1, 2, 3}));
  EXPECT_EQ(a.without_position(1), (Instance{1, 3}));
  EXPECT_THROW((Instance{1, 1}), Error);
  EXPECT_THROW(a.with(2), Error);
}

TEST(Representative, SingleMinDegreeVertex) {
  // d(0) = 3, d(1) = 5.
  Fixture f(make_graph(8, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}, {1, 6}, {1, 7}}));
  EXPECT_EQ(representative(f.oracle, Instance{0, 1}, 0), (Instance{0}));
}

TEST(Representative, TieGoesToSmallerVertex) {
  Fixture f(make_graph(6, {{2, 4}, {2, 0}, {2, 1}, {4, 3}, {4, 5}}));
  EXPECT_EQ(representative(f.oracle, Instance{2, 4}, 0), (Instance{2}));
}

TEST(Representative, PairInBowtieTriangle) {
  Fixture f(bowtie());
  Instance tri{0, 1, 2};
  VSet brute = brute_representative(f.g, vset(tri), 1);
  EXPECT_EQ(brute, (VSet{0, 1}));
  EXPECT_EQ(vset(representative(f.oracle, tri, 1)), brute);
}

TEST(Representative, TooSmallInstance) {
  Fixture f(bowtie());
  EXPECT_THROW(representative(f.oracle, Instance{0, 1}, 2), Error);
}

TEST(SegNeighborhood, Examples) {
  Fixture tri(triangle());
  EXPECT_EQ(seg_neighborhood(tri.oracle, Instance{0, 1}, 0), (std::vector<Vertex>{1, 2}));
  EXPECT_EQ(seg_degree(tri.oracle, Instance{0, 1}, 0), 2u);

  Fixture st(star(3));
  EXPECT_EQ(representative(st.oracle, Instance{0, 1}, 0), (Instance{1}));
  EXPECT_EQ(seg_neighborhood(st.oracle, Instance{0, 1}, 0), (std::vector<Vertex>{0}));
  EXPECT_EQ(seg_degree(st.oracle, Instance{0, 1}, 0), 1u);

  // Every pair of {0,1,2} in the diamond covers {0,1,2,3}; the tie goes to {0,1}.
  Fixture dm(diamond());
  Instance inst{0, 1, 2};
  VSet rep = brute_representative(dm.g, vset(inst), 1);
  EXPECT_EQ(rep, (VSet{0, 1}));
  EXPECT_EQ(seg_neighborhood(dm.oracle, inst, 1), (std::vector<Vertex>{0, 1, 2, 3}));
  EXPECT_EQ(seg_degree(dm.oracle, inst, 1), brute_seg_degree(dm.g, vset(inst), 1));
  EXPECT_EQ(seg_degree(dm.oracle, inst, 1), 4u);
}

TEST(SegDegree, CliqueEdgeIsMinDegree) {
  for (const auto& [name, g] : corpus()) {
    QueryLedger ledger(g.vertex_count());
    NeighborhoodOracle oracle(g, ledger);
    for (auto [u, v] : g.edges())
      EXPECT_EQ(seg_degree(oracle, Instance{u, v}, 0), std::min(g.degree(u), g.degree(v))) << name;
  }
}

TEST(Representative, AgreesWithBruteForceOnSmallCorpus) {
  for (const auto& [name, g] : corpus()) {
    if (g.vertex_count() > 16) continue;
    QueryLedger ledger(g.vertex_count());
    NeighborhoodOracle oracle(g, ledger);
    for (const auto& pname : builtin_pattern_names()) {
      SegmentedMotif motif(builtin_pattern(pname));
      for (int i = 2; i <= motif.size(); ++i)
        for (const Instance& inst : enumerate_instances(g, motif, i)) {
          int c = motif.representative_size(i) - 1;
          EXPECT_EQ(vset(representative(oracle, inst, c)), brute_representative(g, vset(inst), c)) << name;
        }
    }
  }
}

TEST(Assign, TriangleToEdge) {
  Fixture f(complete(4));
  SegmentedMotif motif(builtin_pattern("g33"));
  EXPECT_EQ(assign(f.oracle, Instance{1, 2, 3}, motif), (Instance{2, 3}));
}

TEST(Assign, DiamondToTriangle) {
  Fixture f(diamond());
  SegmentedMotif motif(builtin_pattern("g45"));
  Instance whole{0, 1, 2, 3};
  // Removing 0 leaves the path 1-2-3; removing 1 leaves the triangle {0,2,3}.
  VSet brute = brute_assign(f.g, motif.pattern(), motif.segmentation(), vset(whole));
  EXPECT_EQ(brute, (VSet{0, 2, 3}));
  EXPECT_EQ(vset(assign(f.oracle, whole, motif)), brute);
}

TEST(Assign, AgreesWithDefinitionOnCorpus) {
  for (const auto& [name, g] : corpus()) {
    if (g.vertex_count() > 16) continue;
    QueryLedger ledger(g.vertex_count());
    NeighborhoodOracle oracle(g, ledger);
    for (const auto& pname : builtin_pattern_names()) {
      SegmentedMotif motif(builtin_pattern(pname));
      for (int i = 3; i <= motif.size(); ++i)
        for (const Instance& inst : enumerate_instances(g, motif, i))
          EXPECT_EQ(vset(assign(oracle, inst, motif)), brute_assign(g, motif.pattern(), motif.segmentation(), vset(inst)))
              << name << " " << pname << " " << inst.str();
    }
  }
}

TEST(Assign, RejectsNonCopies) {
  // No removal from an edgeless triple leaves an edge.
  Fixture f(path(5));
  SegmentedMotif motif(builtin_pattern("g33"));
  EXPECT_THROW(assign(f.oracle, Instance{0, 2, 4}, motif), Error);
}

TEST(CheckExtension, BowtieExamples) {
  Fixture f(bowtie());
  SegmentedMotif motif(builtin_pattern("g33"));
  EXPECT_TRUE(check_extension(f.oracle, Instance{1, 2}, 0, motif));
  EXPECT_FALSE(check_extension(f.oracle, Instance{1, 2}, 1, motif));
  // {0,1,2} is a triangle but it is assigned to {1,2}, not {0,2}.
  EXPECT_FALSE(check_extension(f.oracle, Instance{0, 2}, 1, motif));
  // Not a triangle at all.
  EXPECT_FALSE(check_extension(f.oracle, Instance{0, 1}, 3, motif));
}

// For every parent copy, the accepted extensions are exactly the copies one
// level up that the definition assigns to it, and all of them are reachable
// through N_seg(parent).
TEST(CheckExtension, AcceptsExactlyTheAssignedExtensions) {
  for (const auto& [name, g] : corpus()) {
    if (g.vertex_count() > 16) continue;
    QueryLedger ledger(g.vertex_count());
    NeighborhoodOracle oracle(g, ledger);
    for (const auto& pname : builtin_pattern_names()) {
      SegmentedMotif motif(builtin_pattern(pname));
      const auto& p = motif.pattern();
      const auto& s = motif.segmentation();
      for (int i = 2; i < motif.size(); ++i) {
        std::map<VSet, std::size_t> inverse;
        for (const VSet& up : naive_enumerate(g, p, s, i + 1)) ++inverse[brute_assign(g, p, s, up)];
        for (const Instance& parent : enumerate_instances(g, motif, i)) {
          std::size_t accepted = 0, reachable = 0;
          auto nbhd = seg_neighborhood(oracle, parent, motif);
          for (Vertex u = 0; u < g.vertex_count(); ++u) {
            if (!check_extension(oracle, parent, u, motif)) continue;
            ++accepted;
            reachable += std::binary_search(nbhd.begin(), nbhd.end(), u);
          }
          EXPECT_EQ(accepted, inverse[vset(parent)]) << name << " " << pname << " " << parent.str();
          EXPECT_EQ(reachable, accepted) << name << " " << pname << " " << parent.str();
        }
      }
    }
  }
}
