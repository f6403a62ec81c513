#pragma once

#include "rtlab/common.hpp"
#include "rtlab/graph.hpp"
#include "rtlab/parallel.hpp"
#include "rtlab/partition.hpp"
#include "rtlab/random.hpp"
#include "rtlab/sphere.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <iterator>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rtlab {

inline constexpr std::size_t kMbeBaseVertexLimit = 1000000;
inline constexpr std::size_t kMbeGraphVertexLimit = 100000;

struct MbeParams {
  int ell = 1;
  int p = 1;
  int q = 2;
  std::size_t k = 10;  // spheres are S^k(R), i.e. unit vectors in R^{k+1}
  std::size_t m = 8;   // cells per sphere
  double epsilon = 0.1;
  std::size_t t = 1;  // blow-up multiplicity, a perfect ell-th power
  double retention = 0.5;
  std::uint64_t seed = 0;

  double mu() const { return epsilon / std::sqrt(static_cast<double>(k)); }
  std::size_t r() const { return std::size_t{1} << ell; }
  double zeta() const {
    return std::exp(-static_cast<double>(k) * mu() / (3.0 * std::pow(4.0, static_cast<double>(ell))));
  }
  /// t^{1/ell}, or 0 when t is not a perfect ell-th power.
  std::size_t copies() const {
    for (std::size_t s = 1;; ++s) {
      std::size_t v = 1;
      for (int i = 0; i < ell && v <= t; ++i) v *= s;
      if (v == t) return s;
      if (v > t) return 0;
    }
  }
  std::size_t bound() const { return (std::size_t{1} << ell) + (std::size_t{1} << p) + static_cast<std::size_t>(q) - 2; }

  void validate() const {
    if (q < 2 || q % 2 != 0) throw DomainError("q must be even and at least 2");
    if (p < 1) throw DomainError("p must be at least 1");
    if (ell < p * (q - 1)) throw DomainError("need ell >= p(q-1)");
    if (ell < 1 || ell > 6) throw SizeLimitError("ell must lie in [1, 6]");
    if (m < 2 || m % 2 != 0) throw DomainError("m must be even and at least 2");
    if (k < 1) throw DomainError("k must be positive");
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (t < 1 || copies() == 0) throw DomainError("t must be a perfect ell-th power");
    if (!(retention > 0.0 && retention <= 1.0)) throw DomainError("retention must lie in (0, 1]");
  }
};

// ---------------------------------------------------------------------------
// Binary strings and the bipartite graphs Q_h

struct BinaryStringFamily {
  int ell = 0;
  std::size_t r = 0;

  /// Coordinate h (0-based) of string i is bit h of i.
  bool bit(std::size_t i, int h) const { return (i >> h) & 1u; }
  bool q_adjacent(std::size_t i, std::size_t j, int h) const { return bit(i, h) != bit(j, h); }
  std::vector<std::pair<std::size_t, std::size_t>> q_edges(int h) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j)
        if (q_adjacent(i, j, h)) out.emplace_back(i, j);
    return out;
  }
};

inline BinaryStringFamily build_q_family(int ell) {
  if (ell < 1 || ell > 6) throw SizeLimitError("ell must lie in [1, 6]");
  return BinaryStringFamily{ell, std::size_t{1} << ell};
}

/// Independence number of the union of Q_h over h in the bitmask, by brute
/// force over all string subsets (r <= 16).
inline std::size_t q_union_independence(const BinaryStringFamily& f, std::uint32_t mask) {
  if (f.r > 16) throw SizeLimitError("brute force limited to ell <= 4");
  std::size_t best = 0;
  for (std::uint32_t s = 1; s < (1u << f.r); ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < f.r && ok; ++i)
      for (std::size_t j = i + 1; j < f.r && ok; ++j)
        if (((s >> i) & 1u) && ((s >> j) & 1u))
          for (int h = 0; h < f.ell; ++h)
            if (((mask >> h) & 1u) && f.q_adjacent(i, j, h)) {
              ok = false;
              break;
            }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(s)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Edge colouring and related coordinates

/// Round-robin 1-factorization of K_q. c[i][j] in [1, q-1], c[i][i] = 0.
inline std::vector<std::vector<int>> proper_edge_coloring(int q) {
  if (q < 2 || q % 2 != 0) throw DomainError("q must be even and at least 2");
  std::vector<std::vector<int>> c(q, std::vector<int>(q, 0));
  const int rim = q - 1;
  for (int round = 0; round < rim; ++round) {
    const int colour = round + 1;
    c[round][rim] = c[rim][round] = colour;
    for (int j = 1; j <= (q - 2) / 2; ++j) {
      const int a = (round + j) % rim, b = (round - j + rim) % rim;
      c[a][b] = c[b][a] = colour;
    }
  }
  return c;
}

/// (h, h') pairs (0-based coordinates) that are (i, i')-related.
inline std::vector<std::pair<int, int>> related_coordinates(int i, int i2, const MbeParams& params,
                                                            const std::vector<std::vector<int>>& colour) {
  if (i == i2) throw DomainError("related coordinates need distinct classes");
  const int q = params.q, p = params.p;
  if (i < 0 || i2 < 0 || i >= q || i2 >= q) throw DomainError("class index out of range");
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < q; ++j) {
    if (j == i || j == i2) continue;
    for (int s = 0; s < p; ++s) out.emplace_back((colour[i][j] - 1) * p + s, (colour[i2][j] - 1) * p + s);
  }
  for (int h = p * (q - 1); h < params.ell; ++h) out.emplace_back(h, h);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Geometric hypergraphs

/// r-uniform hypergraph on tuples of sphere points. Every coordinate sphere
/// uses the same point list; vertex v has coordinate h equal to digit h of v
/// in base |points|. edges[e][i] is the vertex labelled by string i.
struct GeometricHypergraph {
  int ell = 0;
  std::size_t r = 0;
  double mu = 0.0;
  std::vector<RealUnitVector> points;
  std::vector<std::size_t> point_cell;      // domain holding each point
  std::vector<std::size_t> point_base;      // base point each point was copied from
  std::vector<std::vector<std::size_t>> edges;
  std::vector<std::size_t> origin;          // base hyperedge each edge descends from

  std::size_t vertex_count() const {
    std::size_t n = 1;
    for (int h = 0; h < ell; ++h) n *= points.size();
    return n;
  }
  std::size_t coord(std::size_t v, int h) const {
    for (int i = 0; i < h; ++i) v /= points.size();
    return v % points.size();
  }
  std::vector<std::size_t> coords(std::size_t v) const {
    std::vector<std::size_t> out(static_cast<std::size_t>(ell));
    for (int h = 0; h < ell; ++h, v /= points.size()) out[static_cast<std::size_t>(h)] = v % points.size();
    return out;
  }
  std::size_t vertex_of(const std::vector<std::size_t>& c) const {
    std::size_t v = 0;
    for (int h = ell; h-- > 0;) v = v * points.size() + c[static_cast<std::size_t>(h)];
    return v;
  }

  bool far(std::size_t a, std::size_t b) const { return distance(points[a], points[b]) >= 2.0 - mu - kGeomTol; }

  /// The labelled almost-antipodality condition for one hyperedge.
  bool satisfies_geometry(const std::vector<std::size_t>& edge) const {
    if (edge.size() != r) return false;
    for (int h = 0; h < ell; ++h)
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
          if (((i >> h) & 1u) != ((j >> h) & 1u) && !far(coord(edge[i], h), coord(edge[j], h))) return false;
    return true;
  }
};

/// Builds B on the point set P: a labelled r-tuple is a hyperedge iff for
/// every h, strings that differ in bit h get almost antipodal points in
/// coordinate h. Constraints split by coordinate, so hyperedges are products
/// of per-coordinate patterns; each unordered vertex set is kept once.
inline GeometricHypergraph build_base_hypergraph(int ell, double mu, std::vector<RealUnitVector> P,
                                                 std::vector<std::size_t> cells = {}) {
  if (ell < 1 || ell > 6) throw SizeLimitError("ell must lie in [1, 6]");
  if (P.empty()) throw DomainError("point set must be nonempty");
  GeometricHypergraph B;
  B.ell = ell;
  B.r = std::size_t{1} << ell;
  B.mu = mu;
  B.points = std::move(P);
  const std::size_t M = B.points.size();
  if (cells.empty()) {
    cells.resize(M);
    for (std::size_t i = 0; i < M; ++i) cells[i] = i;
  }
  B.point_cell = std::move(cells);
  B.point_base.resize(M);
  for (std::size_t i = 0; i < M; ++i) B.point_base[i] = i;
  if (B.vertex_count() > kMbeBaseVertexLimit || std::pow(static_cast<double>(M), ell) > kMbeBaseVertexLimit)
    throw SizeLimitError("m^ell exceeds the desk bound");

  std::vector<std::vector<std::size_t>> compat(M);
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b)
      if (a != b && B.far(a, b)) compat[a].push_back(b);

  // Per-coordinate patterns: point index per string, with every cross-side
  // pair compatible.
  const std::size_t r = B.r;
  std::vector<std::vector<std::vector<std::size_t>>> patterns(static_cast<std::size_t>(ell));
  for (int h = 0; h < ell; ++h) {
    std::vector<std::size_t> assign(r);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == r) {
        patterns[static_cast<std::size_t>(h)].push_back(assign);
        if (patterns[static_cast<std::size_t>(h)].size() > kMbeBaseVertexLimit)
          throw SizeLimitError("too many coordinate patterns");
        return;
      }
      const bool side = (i >> h) & 1u;
      // the first opposite-side string already assigned restricts candidates
      std::size_t anchor = r;
      for (std::size_t j = 0; j < i; ++j)
        if ((((j >> h) & 1u) != 0) != side) {
          anchor = j;
          break;
        }
      auto try_point = [&](std::size_t a) {
        for (std::size_t j = 0; j < i; ++j)
          if ((((j >> h) & 1u) != 0) != side && !B.far(a, assign[j])) return;
        assign[i] = a;
        self(self, i + 1);
      };
      if (anchor == r) {
        for (std::size_t a = 0; a < M; ++a)
          if (!compat[a].empty()) try_point(a);
      } else {
        for (std::size_t a : compat[assign[anchor]]) try_point(a);
      }
    };
    rec(rec, 0);
  }

  double combos = 1.0;
  for (const auto& pt : patterns) combos *= static_cast<double>(pt.size());
  if (combos > 4.0 * static_cast<double>(kMbeBaseVertexLimit)) throw SizeLimitError("too many candidate hyperedges");

  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> choice(static_cast<std::size_t>(ell), 0);
  bool any = true;
  for (const auto& pt : patterns)
    if (pt.empty()) any = false;
  while (any) {
    std::vector<std::size_t> edge(r);
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<std::size_t> c(static_cast<std::size_t>(ell));
      for (int h = 0; h < ell; ++h) c[static_cast<std::size_t>(h)] = patterns[static_cast<std::size_t>(h)][choice[static_cast<std::size_t>(h)]][i];
      edge[i] = B.vertex_of(c);
    }
    std::vector<std::size_t> key = edge;
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) == key.end() && seen.insert(key).second) {
      B.origin.push_back(B.edges.size());
      B.edges.push_back(std::move(edge));
    }
    std::size_t h = 0;
    while (h < choice.size() && ++choice[h] == patterns[h].size()) choice[h++] = 0;
    if (h == choice.size()) break;
  }
  return B;
}

/// Points for the MBE spheres: one representative per cell of an antipodally
/// symmetric partition of S^k(R), with rep(mirror(c)) = -rep(c).
struct MbePointSet {
  std::shared_ptr<const ZonalPartition> partition;
  std::vector<RealUnitVector> points;
  std::vector<std::size_t> cells;
};

inline MbePointSet mbe_points(const MbeParams& params) {
  MbePointSet out;
  out.partition = std::make_shared<const ZonalPartition>(params.k + 1, params.m, true);
  out.points.resize(params.m);
  out.cells.resize(params.m);
  for (std::size_t c = 0; c < params.m; ++c) {
    out.cells[c] = c;
    const std::size_t mc = out.partition->mirror(c);
    if (mc < c) {
      out.points[c] = -out.points[mc];
    } else {
      Rng rng = make_stream(params.seed, {0x3BE0ULL, c});
      out.points[c] = out.partition->sample(c, rng);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Blow-up and sparsification

struct BlowupReport {
  std::size_t candidates = 0;
  std::size_t retained = 0;
  std::size_t deleted_overlap = 0;   // pairs of hyperedges sharing >= 2 vertices
  std::size_t deleted_triangle = 0;  // Berge triangles
  std::size_t deleted_sparse = 0;    // small dense configurations
  std::size_t final_edges = 0;
  std::size_t deleted() const { return deleted_overlap + deleted_triangle + deleted_sparse; }
};

/// Sparsity condition on a sub-hypergraph with nv vertices and ne edges.
inline bool violates_sparsity(std::size_t nv, std::size_t ne, std::size_t r, double zeta) {
  if (ne == 0 || nv > r * r * r) return false;
  return static_cast<double>(nv) + (1.0 + zeta - static_cast<double>(r)) * static_cast<double>(ne - 1) <
         static_cast<double>(r) - 1e-12;
}

namespace detail {

inline std::uint64_t pair_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

inline std::size_t union_size(const std::vector<const std::vector<std::size_t>*>& es) {
  std::vector<std::size_t> all;
  for (auto* e : es) all.insert(all.end(), e->begin(), e->end());
  std::sort(all.begin(), all.end());
  return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

}  // namespace detail

/// Replaces every coordinate point by s = t^{1/ell} nearby copies (copy 0 is
/// the point itself), keeps each copy of a base hyperedge with probability
/// `retention`, then deletes hyperedges that overlap in two vertices, close a
/// Berge triangle, or complete a small dense configuration. With t = 1 the
/// hypergraph is returned unchanged.
inline std::pair<GeometricHypergraph, BlowupReport> blowup_sparsify(const GeometricHypergraph& B, const MbeParams& params,
                                                                    const ZonalPartition* partition = nullptr) {
  params.validate();
  BlowupReport report;
  const std::size_t s = params.copies();
  if (s == 1) {
    report.candidates = report.retained = report.final_edges = B.edges.size();
    return {B, report};
  }
  const std::size_t r = B.r, t = params.t, M = B.points.size();
  double cand_per_edge = std::pow(static_cast<double>(t), static_cast<double>(r));
  if (cand_per_edge * static_cast<double>(B.edges.size()) > 2e7) throw SizeLimitError("blow-up too large for desk scale");

  GeometricHypergraph out;
  out.ell = B.ell;
  out.r = r;
  out.mu = B.mu;
  out.points.reserve(M * s);
  for (std::size_t a = 0; a < M; ++a) {
    for (std::size_t j = 0; j < s; ++j) {
      if (j == 0) {
        out.points.push_back(B.points[a]);
      } else {
        for (std::uint64_t attempt = 0;; ++attempt) {
          Rng rng = make_stream(params.seed, {0xB10ULL, a, j, attempt});
          RealUnitVector dir = sample_real_sphere(B.points[a].dim(), rng);
          const double rad = params.mu() / 100.0 * (0.5 + 0.5 * uniform01(rng));
          std::vector<double> c(B.points[a].coords().begin(), B.points[a].coords().end());
          for (std::size_t i = 0; i < c.size(); ++i) c[i] += rad * dir[i];
          RealUnitVector x(std::move(c));
          const bool inside = partition == nullptr || partition->locate(x) == B.point_cell[a];
          if ((inside && distance(x, B.points[a]) <= params.mu() / 100.0) || attempt > 1000) {
            if (!inside) throw DomainError("could not place a copy inside its cell");
            out.points.push_back(std::move(x));
            break;
          }
        }
      }
      out.point_cell.push_back(B.point_cell[a]);
      out.point_base.push_back(B.point_base[a]);
    }
  }

  // copy index kappa in [0, t) of a base vertex: digit h of kappa (base s)
  // picks the copy used in coordinate h.
  auto copy_vertex = [&](std::size_t base_vertex, std::size_t kappa) {
    std::vector<std::size_t> c = B.coords(base_vertex);
    for (auto& x : c) {
      x = x * s + kappa % s;
      kappa /= s;
    }
    return out.vertex_of(c);
  };

  std::vector<std::vector<std::size_t>> kept;
  std::vector<std::size_t> kept_origin;
  for (std::size_t e = 0; e < B.edges.size(); ++e) {
    Rng rng = make_stream(params.seed, {0xB11ULL, e});
    std::vector<std::size_t> kappa(r, 0);
    while (true) {
      ++report.candidates;
      if (uniform01(rng) < params.retention) {
        std::vector<std::size_t> edge(r);
        for (std::size_t i = 0; i < r; ++i) edge[i] = copy_vertex(B.edges[e][i], kappa[i]);
        if (out.satisfies_geometry(edge)) {
          kept.push_back(std::move(edge));
          kept_origin.push_back(B.origin.empty() ? e : B.origin[e]);
        }
      }
      std::size_t i = 0;
      while (i < r && ++kappa[i] == t) kappa[i++] = 0;
      if (i == r) break;
    }
  }
  report.retained = kept.size();

  // Greedy deletion in generation order: a hyperedge is dropped if, together
  // with earlier survivors, it forms a forbidden configuration.
  std::unordered_map<std::uint64_t, std::size_t> pair_owner;
  std::unordered_map<std::size_t, std::vector<std::size_t>> incidence;  // vertex -> accepted edge ids
  std::vector<std::vector<std::size_t>> acc;
  auto shares = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> x = a, y = b, z;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(z));
    return z;
  };
  for (std::size_t idx = 0; idx < kept.size(); ++idx) {
    const auto& e = kept[idx];
    bool overlap = false;
    for (std::size_t i = 0; i < r && !overlap; ++i)
      for (std::size_t j = i + 1; j < r; ++j)
        if (pair_owner.count(detail::pair_key(e[i], e[j]))) {
          overlap = true;
          break;
        }
    if (overlap) {
      ++report.deleted_overlap;
      continue;
    }
    // neighbours f with the shared vertex x_f (unique by linearity)
    std::vector<std::pair<std::size_t, std::size_t>> nb;
    for (std::size_t x : e)
      if (auto it = incidence.find(x); it != incidence.end())
        for (std::size_t f : it->second) nb.emplace_back(f, x);
    bool triangle = false;
    for (std::size_t a = 0; a < nb.size() && !triangle; ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (nb[a].second == nb[b].second || nb[a].first == nb[b].first) continue;
        for (std::size_t z : shares(acc[nb[a].first], acc[nb[b].first]))
          if (z != nb[a].second && z != nb[b].second) triangle = true;
        if (triangle) break;
      }
    if (triangle) {
      ++report.deleted_triangle;
      continue;
    }
    // connected configurations of up to four hyperedges containing e
    bool dense = false;
    {
      std::vector<std::size_t> near;
      for (auto [f, x] : nb) near.push_back(f);
      std::sort(near.begin(), near.end());
      near.erase(std::unique(near.begin(), near.end()), near.end());
      std::vector<const std::vector<std::size_t>*> cfg{&e};
      auto grow = [&](auto&& self, std::size_t from) -> void {
        if (dense) return;
        if (cfg.size() >= 2 && violates_sparsity(detail::union_size(cfg), cfg.size(), r, params.zeta())) {
          dense = true;
          return;
        }
        if (cfg.size() == 4) return;
        for (std::size_t i = from; i < near.size(); ++i) {
          cfg.push_back(&acc[near[i]]);
          self(self, i + 1);
          cfg.pop_back();
        }
      };
      grow(grow, 0);
    }
    if (dense) {
      ++report.deleted_sparse;
      continue;
    }
    const std::size_t id = acc.size();
    for (std::size_t i = 0; i < r; ++i) {
      incidence[e[i]].push_back(id);
      for (std::size_t j = i + 1; j < r; ++j) pair_owner[detail::pair_key(e[i], e[j])] = id;
    }
    acc.push_back(e);
    out.origin.push_back(kept_origin[idx]);
  }
  out.edges = std::move(acc);
  report.final_edges = out.edges.size();
  return {std::move(out), report};
}

// ---------------------------------------------------------------------------
// Shadow graph

struct BorsukGraph {
  LabeledGraph graph;
  std::shared_ptr<const GeometricHypergraph> hypergraph;
  std::vector<std::vector<std::size_t>> incidence;  // vertex -> hyperedges containing it

  /// Hyperedges containing both u and v.
  std::vector<std::size_t> cover(std::size_t u, std::size_t v) const {
    std::vector<std::size_t> out;
    std::set_intersection(incidence[u].begin(), incidence[u].end(), incidence[v].begin(), incidence[v].end(),
                          std::back_inserter(out));
    return out;
  }
  /// Some hyperedge containing every vertex of vs, or none.
  std::optional<std::size_t> containing_edge(const std::vector<std::size_t>& vs) const {
    if (vs.empty()) return std::nullopt;
    std::vector<std::size_t> cur = incidence[vs[0]];
    for (std::size_t i = 1; i < vs.size() && !cur.empty(); ++i) {
      std::vector<std::size_t> nxt;
      std::set_intersection(cur.begin(), cur.end(), incidence[vs[i]].begin(), incidence[vs[i]].end(),
                            std::back_inserter(nxt));
      cur.swap(nxt);
    }
    if (cur.empty()) return std::nullopt;
    return cur.front();
  }
};

inline BorsukGraph shadow_graph(std::shared_ptr<const GeometricHypergraph> B) {
  const std::size_t n = B->vertex_count();
  if (n > kMbeGraphVertexLimit) throw SizeLimitError("shadow graph too large");
  BorsukGraph g;
  g.graph = LabeledGraph(n);
  g.incidence.assign(n, {});
  for (std::size_t e = 0; e < B->edges.size(); ++e) {
    const auto& edge = B->edges[e];
    for (std::size_t i = 0; i < edge.size(); ++i) {
      g.incidence[edge[i]].push_back(e);
      for (std::size_t j = i + 1; j < edge.size(); ++j)
        if (edge[i] != edge[j]) g.graph.add_edge(edge[i], edge[j]);
    }
  }
  g.hypergraph = std::move(B);
  return g;
}

inline BorsukGraph shadow_graph(const GeometricHypergraph& B) {
  return shadow_graph(std::make_shared<const GeometricHypergraph>(B));
}

/// Coordinates h (0-based) in which two vertices of A are almost antipodal.
inline std::vector<int> lengthy_coordinates(const GeometricHypergraph& B, const std::vector<std::size_t>& A) {
  std::vector<int> out;
  for (int h = 0; h < B.ell; ++h) {
    bool found = false;
    for (std::size_t i = 0; i < A.size() && !found; ++i)
      for (std::size_t j = i + 1; j < A.size(); ++j)
        if (B.far(B.coord(A[i], h), B.coord(A[j], h))) {
          found = true;
          break;
        }
    if (found) out.push_back(h);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The multipartite graph

struct MbeGraph {
  MbeParams params;
  BinaryStringFamily family;
  std::vector<std::vector<int>> colouring;
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> related;  // keyed by (i, i') with i < i'
  std::shared_ptr<const ZonalPartition> partition;
  std::shared_ptr<const GeometricHypergraph> base;
  BorsukGraph borsuk;  // the common copy of B(ell)
  BlowupReport blowup;
  LabeledGraph graph;  // vertex (i, x) has id i * N + x

  std::size_t class_size() const { return borsuk.graph.size(); }
  int class_of(std::size_t v) const { return static_cast<int>(v / class_size()); }
  std::size_t local(std::size_t v) const { return v % class_size(); }
};

inline MbeGraph build_mbe(const MbeParams& params) {
  params.validate();
  {
    double n = std::pow(static_cast<double>(params.m), params.ell) * static_cast<double>(params.t) * params.q;
    if (n > static_cast<double>(kMbeGraphVertexLimit)) throw SizeLimitError("m^ell t q exceeds the desk bound");
  }
  MbeGraph G;
  G.params = params;
  G.family = build_q_family(params.ell);
  G.colouring = proper_edge_coloring(params.q);
  for (int i = 0; i < params.q; ++i)
    for (int j = i + 1; j < params.q; ++j) G.related[{i, j}] = related_coordinates(i, j, params, G.colouring);

  MbePointSet pts = mbe_points(params);
  G.partition = pts.partition;
  auto base = std::make_shared<const GeometricHypergraph>(build_base_hypergraph(params.ell, params.mu(), pts.points, pts.cells));
  G.base = base;
  auto [blown, report] = blowup_sparsify(*base, params, pts.partition.get());
  G.blowup = report;
  G.borsuk = shadow_graph(std::make_shared<const GeometricHypergraph>(std::move(blown)));

  const GeometricHypergraph& H = *G.borsuk.hypergraph;
  const std::size_t N = G.class_size(), M = H.points.size();
  const double limit = std::sqrt(2.0) - params.mu() + kGeomTol;
  std::vector<char> close(M * M);
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b) close[a * M + b] = distance(H.points[a], H.points[b]) <= limit;
  std::vector<std::vector<std::size_t>> coords(N);
  for (std::size_t x = 0; x < N; ++x) coords[x] = H.coords(x);

  const std::size_t total = N * static_cast<std::size_t>(params.q);
  G.graph = LabeledGraph(total);
  for (int i = 0; i < params.q; ++i) {
    const std::size_t cls = G.graph.add_class("V" + std::to_string(i + 1));
    for (std::size_t x = 0; x < N; ++x) G.graph.set_class(static_cast<std::size_t>(i) * N + x, cls);
    for (auto [u, v] : G.borsuk.graph.edges()) G.graph.add_edge(i * N + u, i * N + v);
  }
  std::vector<std::vector<std::size_t>> rows(total);
  parallel_for(total, [&](std::size_t u) {
    const int ci = static_cast<int>(u / N);
    const auto& cu = coords[u % N];
    for (int cj = ci + 1; cj < params.q; ++cj) {
      const auto& rel = G.related.at({ci, cj});
      for (std::size_t y = 0; y < N; ++y) {
        const auto& cv = coords[y];
        bool ok = true;
        for (auto [h, h2] : rel)
          if (!close[cu[static_cast<std::size_t>(h)] * M + cv[static_cast<std::size_t>(h2)]]) {
            ok = false;
            break;
          }
        if (ok) rows[u].push_back(static_cast<std::size_t>(cj) * N + y);
      }
    }
  });
  for (std::size_t u = 0; u < total; ++u)
    for (std::size_t v : rows[u]) G.graph.add_edge(u, v);
  return G;
}

}  // namespace rtlab
