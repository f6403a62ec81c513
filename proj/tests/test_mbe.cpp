#include <gtest/gtest.h>

#include "rtlab/analysis.hpp"
#include "rtlab/clique.hpp"
#include "rtlab/mbe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

using namespace rtlab;

namespace {

MbeParams mparams(int ell, int p, int q, std::size_t k = 10, std::size_t m = 8, std::uint64_t seed = 1) {
  MbeParams P;
  P.ell = ell;
  P.p = p;
  P.q = q;
  P.k = k;
  P.m = m;
  P.seed = seed;
  return P;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(MbeParams, Derived) {
  auto P = mparams(3, 1, 4, 12);
  P.epsilon = 0.3;
  EXPECT_DOUBLE_EQ(P.mu(), 0.3 / std::sqrt(12.0));
  EXPECT_EQ(P.r(), 8u);
  EXPECT_DOUBLE_EQ(P.zeta(), std::exp(-12.0 * P.mu() / (3.0 * 64.0)));
  EXPECT_EQ(P.bound(), 12u);
  P.t = 27;
  EXPECT_EQ(P.copies(), 3u);
  P.t = 9;
  EXPECT_EQ(P.copies(), 0u);
}

TEST(MbeParams, Validation) {
  EXPECT_THROW(mparams(1, 1, 3).validate(), DomainError);
  EXPECT_THROW(mparams(2, 1, 4).validate(), DomainError);
  EXPECT_NO_THROW(mparams(3, 1, 4).validate());
  auto P = mparams(2, 1, 2);
  P.t = 8;
  EXPECT_THROW(P.validate(), DomainError);
  P.t = 9;
  EXPECT_NO_THROW(P.validate());
  EXPECT_THROW(mparams(7, 1, 2).validate(), SizeLimitError);
  EXPECT_THROW(mparams(2, 1, 2, 10, 7).validate(), DomainError);
}

TEST(QFamily, SmallCases) {
  auto f1 = build_q_family(1);
  EXPECT_EQ(f1.r, 2u);
  EXPECT_EQ(f1.q_edges(0), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}}));
  auto f2 = build_q_family(2);
  EXPECT_EQ(f2.r, 4u);
  EXPECT_EQ(q_union_independence(f2, 0b11), 1u);
  EXPECT_EQ(q_union_independence(build_q_family(3), 0b001), 4u);
  EXPECT_THROW(build_q_family(0), SizeLimitError);
  EXPECT_THROW(build_q_family(7), SizeLimitError);
}

TEST(QFamily, BipartiteHalvesCoverTheClique) {
  for (int ell = 1; ell <= 6; ++ell) {
    auto f = build_q_family(ell);
    std::set<std::pair<std::size_t, std::size_t>> all;
    for (int h = 0; h < ell; ++h) {
      auto e = f.q_edges(h);
      EXPECT_EQ(e.size(), (f.r / 2) * (f.r / 2));
      all.insert(e.begin(), e.end());
    }
    EXPECT_EQ(all.size(), f.r * (f.r - 1) / 2);
  }
}

TEST(QFamily, UnionIndependence) {
  for (int ell = 1; ell <= 4; ++ell) {
    auto f = build_q_family(ell);
    for (std::uint32_t mask = 0; mask < (1u << ell); ++mask)
      EXPECT_EQ(q_union_independence(f, mask), std::size_t{1} << (ell - std::popcount(mask)));
  }
}

TEST(EdgeColouring, OneFactorisation) {
  EXPECT_EQ(proper_edge_coloring(2)[0][1], 1);
  for (int q = 2; q <= 12; q += 2) {
    auto c = proper_edge_coloring(q);
    std::vector<int> per_colour(q, 0);
    for (int i = 0; i < q; ++i) {
      std::set<int> seen;
      for (int j = 0; j < q; ++j) {
        if (i == j) continue;
        EXPECT_EQ(c[i][j], c[j][i]);
        EXPECT_GE(c[i][j], 1);
        EXPECT_LE(c[i][j], q - 1);
        EXPECT_TRUE(seen.insert(c[i][j]).second) << "q " << q << " vertex " << i;
        if (i < j) ++per_colour[c[i][j]];
      }
    }
    for (int col = 1; col < q; ++col) EXPECT_EQ(per_colour[col], q / 2);
  }
  EXPECT_THROW(proper_edge_coloring(5), DomainError);
}

TEST(RelatedCoordinates, CountAndPartners) {
  for (int q = 2; q <= 6; q += 2)
    for (int p = 1; p <= 2; ++p)
      for (int ell = p * (q - 1); ell <= std::min(6, p * (q - 1) + 2); ++ell) {
        if (ell < 1) continue;
        auto P = mparams(ell, p, q);
        auto c = proper_edge_coloring(q);
        for (int i = 0; i < q; ++i)
          for (int i2 = 0; i2 < q; ++i2) {
            if (i == i2) continue;
            auto rel = related_coordinates(i, i2, P, c);
            EXPECT_EQ(static_cast<int>(rel.size()), ell - p);
            std::set<int> left, right;
            for (auto [h, h2] : rel) {
              EXPECT_TRUE(left.insert(h).second);
              EXPECT_TRUE(right.insert(h2).second);
              EXPECT_LT(h, ell);
              EXPECT_LT(h2, ell);
            }
            // swapping the classes swaps the pairs
            auto back = related_coordinates(i2, i, P, c);
            std::vector<std::pair<int, int>> flipped;
            for (auto [h, h2] : rel) flipped.emplace_back(h2, h);
            std::sort(flipped.begin(), flipped.end());
            EXPECT_EQ(back, flipped);
          }
      }
}

TEST(RelatedCoordinates, TrailingCoordinatesAreDiagonal) {
  auto P = mparams(5, 1, 4);  // ell = p(q-1) + 2
  auto c = proper_edge_coloring(4);
  for (int i = 0; i < 4; ++i)
    for (int i2 = i + 1; i2 < 4; ++i2) {
      auto rel = related_coordinates(i, i2, P, c);
      EXPECT_NE(std::find(rel.begin(), rel.end(), std::make_pair(3, 3)), rel.end());
      EXPECT_NE(std::find(rel.begin(), rel.end(), std::make_pair(4, 4)), rel.end());
    }
  EXPECT_THROW(related_coordinates(1, 1, P, c), DomainError);
}

TEST(BaseHypergraph, SingleCoordinate) {
  auto e1 = RealUnitVector::basis(3, 0);
  auto near_anti = RealUnitVector({-1.0, 1e-4, 0.0});
  auto B = build_base_hypergraph(1, 0.1, {e1, near_anti});
  ASSERT_EQ(B.edges.size(), 1u);
  EXPECT_TRUE(B.satisfies_geometry(B.edges[0]));
  auto C = build_base_hypergraph(1, 0.1, {e1, RealUnitVector::basis(3, 1)});
  EXPECT_TRUE(C.edges.empty());
}

TEST(BaseHypergraph, TwoCoordinatesFromAntipodalPairs) {
  std::vector<RealUnitVector> P{RealUnitVector::basis(3, 0), RealUnitVector::basis(3, 0, -1.0),
                                RealUnitVector::basis(3, 1), RealUnitVector::basis(3, 1, -1.0)};
  auto B = build_base_hypergraph(2, 0.1, P);
  // string i takes point (e_1 or -e_1) in coordinate 0 and (e_2 or -e_2) in coordinate 1
  std::vector<std::size_t> edge(4);
  for (std::size_t i = 0; i < 4; ++i) edge[i] = B.vertex_of({(i & 1u) ? 1u : 0u, (i & 2u) ? 3u : 2u});
  EXPECT_TRUE(B.satisfies_geometry(edge));
  bool present = false;
  for (const auto& e : B.edges) {
    EXPECT_TRUE(B.satisfies_geometry(e));
    present = present || sorted(e) == sorted(edge);
  }
  EXPECT_TRUE(present);
  // mixing axes within one coordinate breaks a constraint
  edge[1] = B.vertex_of({2u, 2u});
  EXPECT_FALSE(B.satisfies_geometry(edge));
}

TEST(BaseHypergraph, RejectsOversizedInput) {
  std::vector<RealUnitVector> P;
  for (int i = 0; i < 40; ++i) P.push_back(RealUnitVector::basis(3, i % 3));
  EXPECT_THROW(build_base_hypergraph(4, 0.1, P), SizeLimitError);
  EXPECT_THROW(build_base_hypergraph(1, 0.1, {}), DomainError);
}

TEST(Blowup, IdentityAtOneCopy) {
  auto P = mparams(2, 1, 2);
  auto pts = mbe_points(P);
  auto B = build_base_hypergraph(2, P.mu(), pts.points, pts.cells);
  auto [B2, report] = blowup_sparsify(B, P, pts.partition.get());
  EXPECT_EQ(B2.edges, B.edges);
  EXPECT_EQ(B2.points.size(), B.points.size());
  EXPECT_EQ(report.final_edges, B.edges.size());
}

TEST(Blowup, SparseAndCovering) {
  auto P = mparams(2, 1, 2, 10, 8, 3);
  P.t = 4;
  auto pts = mbe_points(P);
  auto B = build_base_hypergraph(2, P.mu(), pts.points, pts.cells);
  auto [B2, report] = blowup_sparsify(B, P, pts.partition.get());
  ASSERT_GT(B2.edges.size(), 0u);
  EXPECT_EQ(report.final_edges, B2.edges.size());
  EXPECT_EQ(B2.points.size(), 2 * B.points.size());
  for (const auto& e : B2.edges) EXPECT_TRUE(B2.satisfies_geometry(e));

  // connected sub-configurations of up to four hyperedges
  const std::size_t r = B2.r, E = B2.edges.size();
  std::vector<std::set<std::size_t>> vs(E);
  for (std::size_t e = 0; e < E; ++e) vs[e] = std::set<std::size_t>(B2.edges[e].begin(), B2.edges[e].end());
  std::vector<std::vector<std::size_t>> touching(E);
  for (std::size_t a = 0; a < E; ++a)
    for (std::size_t b = a + 1; b < E; ++b)
      if (std::any_of(vs[a].begin(), vs[a].end(), [&](std::size_t v) { return vs[b].count(v) > 0; })) {
        touching[a].push_back(b);
        touching[b].push_back(a);
      }
  std::set<std::vector<std::size_t>> level, all;
  for (std::size_t e = 0; e < E; ++e) level.insert({e});
  std::size_t violations = 0;
  for (std::size_t size = 1; size <= 4 && !level.empty(); ++size) {
    std::set<std::vector<std::size_t>> next;
    for (const auto& sub : level) {
      all.insert(sub);
      std::set<std::size_t> verts;
      for (std::size_t e : sub) verts.insert(vs[e].begin(), vs[e].end());
      if (violates_sparsity(verts.size(), sub.size(), r, P.zeta())) ++violations;
      if (size == 4) continue;
      for (std::size_t e : sub)
        for (std::size_t f : touching[e])
          if (!std::binary_search(sub.begin(), sub.end(), f)) {
            auto grown = sub;
            grown.insert(std::upper_bound(grown.begin(), grown.end(), f), f);
            next.insert(std::move(grown));
          }
    }
    level = std::move(next);
  }
  const std::size_t checked = all.size();
  EXPECT_GT(checked, E);
  EXPECT_EQ(violations, 0u);

  // each surviving base hyperedge keeps a transversal copy
  std::set<std::size_t> covered(B2.origin.begin(), B2.origin.end());
  Rng rng = make_stream(P.seed, {0xB10});
  std::size_t hits = 0;
  for (int i = 0; i < 20; ++i) hits += covered.count(std::uniform_int_distribution<std::size_t>(0, B.edges.size() - 1)(rng));
  EXPECT_GE(hits, 19u);
}

TEST(Shadow, SmallHypergraphs) {
  auto e1 = RealUnitVector::basis(3, 0);
  std::vector<RealUnitVector> P{RealUnitVector::basis(3, 0), RealUnitVector::basis(3, 0, -1.0),
                                RealUnitVector::basis(3, 1), RealUnitVector::basis(3, 1, -1.0)};
  auto B = build_base_hypergraph(2, 0.1, P);
  GeometricHypergraph one = B;
  one.edges.resize(1);
  one.origin.resize(1);
  auto s = shadow_graph(one);
  auto c = max_clique(s.graph);
  EXPECT_EQ(c.size, 4u);
  EXPECT_EQ(s.graph.edge_count(), 6u);
  EXPECT_EQ(s.containing_edge(c.witness), std::optional<std::size_t>(0));
  GeometricHypergraph none = B;
  none.edges.clear();
  none.origin.clear();
  EXPECT_EQ(shadow_graph(none).graph.edge_count(), 0u);
  (void)e1;
}

TEST(Shadow, CliquesLieInHyperedges) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto G = build_mbe(mparams(2, 1, 2, 12, 8, seed));
    const auto& S = G.borsuk;
    EXPECT_LE(max_clique(S.graph).size, 4u);
    std::size_t cliques = 0;
    for_each_maximal_clique(S.graph, [&](const std::vector<std::size_t>& c) {
      ++cliques;
      EXPECT_TRUE(S.containing_edge(c).has_value());
      return true;
    });
    EXPECT_GT(cliques, 0u);
  }
}

TEST(Lengthy, Basics) {
  std::vector<RealUnitVector> P{RealUnitVector::basis(3, 0), RealUnitVector::basis(3, 0, -1.0),
                                RealUnitVector::basis(3, 1)};
  auto B = build_base_hypergraph(2, 0.1, P);
  EXPECT_TRUE(lengthy_coordinates(B, {}).empty());
  EXPECT_TRUE(lengthy_coordinates(B, {B.vertex_of({0, 2})}).empty());
  // antipodal in coordinate 0 only
  EXPECT_EQ(lengthy_coordinates(B, {B.vertex_of({0, 2}), B.vertex_of({1, 2})}), std::vector<int>{0});
}

TEST(BuildMbe, TwoClassesSingleCoordinate) {
  auto P = mparams(1, 1, 2, 10, 8, 2);
  auto G = build_mbe(P);
  EXPECT_TRUE(G.related.at({0, 1}).empty());
  const std::size_t N = G.class_size();
  for (std::size_t u = 0; u < N; ++u)
    for (std::size_t v = N; v < 2 * N; ++v) EXPECT_TRUE(G.graph.adjacent(u, v));
  auto c = max_clique(G.graph);
  EXPECT_TRUE(c.exhaustive);
  EXPECT_LE(c.size, 4u);
}

TEST(BuildMbe, CrossDensity) {
  auto G = build_mbe(mparams(2, 1, 2, 12, 8, 3));
  auto r = density_report(G.graph);
  EXPECT_NEAR(r.pair_density[0][1], 0.5, 0.2);
}

TEST(BuildMbe, CrossEdgesFollowRelatedCoordinates) {
  auto P = mparams(3, 1, 4, 10, 6, 4);
  auto G = build_mbe(P);
  const auto& H = *G.borsuk.hypergraph;
  const std::size_t N = G.class_size();
  Rng rng = make_stream(4, {0xB11});
  std::uniform_int_distribution<std::size_t> pick(0, G.graph.size() - 1);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t u = pick(rng), v = pick(rng);
    const int cu = G.class_of(u), cv = G.class_of(v);
    if (cu == cv) continue;
    const auto& rel = G.related.at({std::min(cu, cv), std::max(cu, cv)});
    const std::size_t a = cu < cv ? u : v, b = cu < cv ? v : u;
    bool expect = true;
    for (auto [h, h2] : rel)
      expect = expect && distance(H.points[H.coord(a % N, h)], H.points[H.coord(b % N, h2)]) <=
                             std::sqrt(2.0) - P.mu() + kGeomTol;
    EXPECT_EQ(G.graph.adjacent(u, v), expect);
  }
}

TEST(BuildMbe, CliqueStructure) {
  for (auto [ell, p, q] : {std::tuple{2, 1, 2}, std::tuple{2, 2, 2}, std::tuple{3, 1, 4}}) {
    auto P = mparams(ell, p, q, 10, 6, 7);
    auto G = build_mbe(P);
    const auto& H = *G.borsuk.hypergraph;
    const std::size_t N = G.class_size();
    EXPECT_LE(max_clique(G.graph, P.bound()).size, P.bound());
    std::size_t seen = 0;
    for_each_maximal_clique(G.graph, [&](const std::vector<std::size_t>& A) {
      std::size_t budget = 0;
      for (int i = 0; i < q; ++i) {
        std::vector<std::size_t> part;
        for (std::size_t v : A)
          if (G.class_of(v) == i) part.push_back(v % N);
        const auto L = lengthy_coordinates(H, part);
        EXPECT_LE(part.size(), std::size_t{1} << L.size());
        budget += L.size();
      }
      EXPECT_LE(budget, static_cast<std::size_t>(ell + p));
      return ++seen < 20000;
    });
    EXPECT_GT(seen, 0u);
  }
}

TEST(BuildMbe, Deterministic) {
  auto P = mparams(2, 1, 2, 10, 8, 5);
  set_thread_count(1);
  auto a = build_mbe(P);
  set_thread_count(4);
  auto b = build_mbe(P);
  set_thread_count(0);
  EXPECT_EQ(a.graph.edges(), b.graph.edges());
}
