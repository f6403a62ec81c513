#pragma once

#include "rtlab/clique.hpp"
#include "rtlab/common.hpp"
#include "rtlab/graph.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace rtlab {

// ---------------------------------------------------------------------------
// p-independence

struct PIndependence {
  std::size_t lower = 0;
  std::size_t upper = 0;
  bool exact = false;
};

namespace detail {

// True iff s contains a clique on `size` vertices.
inline bool has_clique_of_size(const LabeledGraph& g, const VertexSet& s, std::size_t size) {
  if (size == 0) return true;
  const std::size_t n = g.size();
  std::function<bool(const VertexSet&, std::size_t)> rec = [&](const VertexSet& cand, std::size_t need) {
    if (need == 0) return true;
    if (cand.count() < need) return false;
    for (std::size_t v = cand.first(); v < n; v = cand.next(v + 1)) {
      VertexSet rest = cand & g.neighbours(v);
      // only extend with larger ids so each clique is tried once
      for (std::size_t u = rest.first(); u < n && u <= v; u = rest.next(u + 1)) rest.reset(u);
      if (rec(rest, need - 1)) return true;
    }
    return false;
  };
  return rec(s, size);
}

// Greedy clique cover of s; returns sum over parts of min(|part|, cap).
inline std::size_t clique_cover_bound(const LabeledGraph& g, VertexSet s, std::size_t cap) {
  const std::size_t n = g.size();
  std::size_t total = 0;
  while (!s.empty()) {
    std::size_t v = s.first();
    s.reset(v);
    VertexSet cand = s & g.neighbours(v);
    std::size_t size = 1;
    while (!cand.empty()) {
      std::size_t best = cand.first(), best_deg = 0;
      for (std::size_t u = cand.first(); u < n; u = cand.next(u + 1)) {
        std::size_t d = (cand & g.neighbours(u)).count();
        if (d > best_deg) best = u, best_deg = d;
      }
      s.reset(best);
      cand &= g.neighbours(best);
      ++size;
    }
    total += std::min(size, cap);
  }
  return total;
}

inline std::size_t greedy_p_free(const LabeledGraph& g, std::size_t p) {
  const std::size_t n = g.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.degree(a) < g.degree(b); });
  VertexSet chosen(n);
  std::size_t size = 0;
  for (std::size_t v : order) {
    if (!has_clique_of_size(g, chosen & g.neighbours(v), p - 1)) {
      chosen.set(v);
      ++size;
    }
  }
  return size;
}

}  // namespace detail

/// Size of the largest vertex set inducing a K_p-free graph. Exact search up
/// to exact_limit vertices, otherwise greedy and clique-cover bounds.
inline PIndependence p_independence(const LabeledGraph& g, std::size_t p, std::size_t exact_limit = 40) {
  if (p < 2) throw DomainError("p must be at least 2");
  const std::size_t n = g.size();
  PIndependence out;
  out.lower = detail::greedy_p_free(g, p);
  {
    VertexSet all(n);
    all.fill();
    out.upper = detail::clique_cover_bound(g, all, p - 1);
  }
  if (n > exact_limit || out.lower == out.upper) {
    out.exact = out.lower == out.upper;
    return out;
  }

  std::size_t best = out.lower;
  VertexSet chosen(n);
  // Decide vertices in index order; free holds undecided vertices that can
  // still be added without completing a K_p.
  std::function<void(std::size_t, VertexSet)> rec = [&](std::size_t size, VertexSet free) {
    VertexSet addable(n);
    for (std::size_t v = free.first(); v < n; v = free.next(v + 1))
      if (!detail::has_clique_of_size(g, chosen & g.neighbours(v), p - 1)) addable.set(v);
    if (addable.empty()) {
      best = std::max(best, size);
      return;
    }
    if (size + detail::clique_cover_bound(g, addable, p - 1) <= best) return;
    const std::size_t v = addable.first();
    addable.reset(v);
    chosen.set(v);
    rec(size + 1, addable);
    chosen.reset(v);
    rec(size, addable);
  };
  VertexSet all(n);
  all.fill();
  rec(0, all);
  out.lower = out.upper = best;
  out.exact = true;
  return out;
}

// ---------------------------------------------------------------------------
// Density statistics

struct DensityReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  double global_density = 0.0;  // e(G) / C(n, 2)
  std::vector<std::string> class_names;
  std::vector<std::size_t> class_sizes;
  std::vector<std::size_t> inner_edges;               // e(G[V_i])
  std::vector<std::vector<std::size_t>> cross_edges;  // e(V_i, V_j), symmetric
  std::vector<std::vector<double>> pair_density;      // e(V_i, V_j) / (|V_i||V_j|)

  double density(std::size_t i, std::size_t j) const { return pair_density.at(i).at(j); }
};

inline DensityReport density_report(const LabeledGraph& g) {
  DensityReport r;
  const std::size_t n = g.size();
  r.vertices = n;
  r.edges = g.edge_count();
  r.global_density = n < 2 ? 0.0 : static_cast<double>(r.edges) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
  const std::size_t c = g.class_names().size();
  r.class_names = g.class_names();
  r.class_sizes.assign(c, 0);
  r.inner_edges.assign(c, 0);
  r.cross_edges.assign(c, std::vector<std::size_t>(c, 0));
  r.pair_density.assign(c, std::vector<double>(c, 0.0));
  for (std::size_t v = 0; v < n; ++v)
    if (g.class_of(v) != LabeledGraph::kNoClass) ++r.class_sizes[g.class_of(v)];
  for (auto [u, v] : g.edges()) {
    const std::size_t a = g.class_of(u), b = g.class_of(v);
    if (a == LabeledGraph::kNoClass || b == LabeledGraph::kNoClass) continue;
    if (a == b) ++r.inner_edges[a];
    else {
      ++r.cross_edges[a][b];
      ++r.cross_edges[b][a];
    }
  }
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (i != j && r.class_sizes[i] && r.class_sizes[j])
        r.pair_density[i][j] = static_cast<double>(r.cross_edges[i][j]) /
                               (static_cast<double>(r.class_sizes[i]) * static_cast<double>(r.class_sizes[j]));
  return r;
}

/// Disjoint union of the inputs plus every edge between different inputs.
/// Each input becomes one class named "G<i>".
inline LabeledGraph complete_join(const std::vector<LabeledGraph>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.size();
  LabeledGraph out(n);
  std::size_t base = 0;
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::size_t cls = out.add_class("G" + std::to_string(i));
    starts.push_back(base);
    for (std::size_t v = 0; v < parts[i].size(); ++v) out.set_class(base + v, cls);
    for (auto [u, v] : parts[i].edges()) out.add_edge(base + u, base + v);
    base += parts[i].size();
  }
  starts.push_back(n);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t u = starts[i]; u < starts[i + 1]; ++u)
      for (std::size_t v = starts[i + 1]; v < n; ++v) out.add_edge(u, v);
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form densities (exact rationals)

struct RhoStar {
  Rational value;
  long long t = 0;
  long long r = 0;
};

/// Conjectured Ramsey-Turan density for q = p t + r + 2 with 0 <= r < p.
inline RhoStar rho_star(long long p, long long q) {
  if (p < 1) throw DomainError("p must be positive");
  if (q < p + 2) throw DomainError("rho_star needs q >= p + 2");
  RhoStar out;
  out.t = (q - 2) / p;
  out.r = (q - 2) % p;
  const long long a = 2 * p - out.r - 1;
  out.value = make_rational((out.t - 1) * a + out.r + 1, out.t * a + out.r + 1);
  return out;
}

struct Theorem13Density {
  Rational density;  // (1 / 2^{ell-p}) (1 - 1/q)
  long long p_star = 0;
  long long q_star = 0;
  RhoStar rho;  // rho_star(p_star, q_star)
  bool strict = false;           // density > rho.value
  bool equality_window = false;  // q(q-2) <= 2^p <= q^2
};

inline Theorem13Density theorem13_density(long long ell, long long p, long long q) {
  if (p < 1) throw DomainError("p must be positive");
  if (q < 2 || q % 2 != 0) throw DomainError("q must be even and at least 2");
  if (ell < p * (q - 1)) throw DomainError("need ell >= p (q - 1)");
  if (ell > 60) throw DomainError("ell too large for 64-bit arithmetic");
  Theorem13Density out;
  out.density = Rational(BigInt(q - 1), BigInt(q) * (BigInt(1) << (ell - p)));
  out.p_star = 1LL << ell;
  out.q_star = out.p_star + (1LL << p) + q - 1;
  out.rho = rho_star(out.p_star, out.q_star);
  out.strict = out.density > out.rho.value;
  const long long two_p = 1LL << p;
  out.equality_window = q * (q - 2) <= two_p && two_p <= q * q;
  return out;
}

/// Class sizes of the extremal structure behind rho_star: t-1 ordinary
/// classes of size x, completely joined to each other and to a special part
/// of size z = 1 - (t-1)x whose inner density is (r+1)/(2p). The special part
/// is itself two halves of size z/2. The edge density is maximized over x.
struct ConjecturedSizes {
  long long t = 0;
  long long r = 0;
  Rational ordinary;  // x, for each of the t-1 ordinary classes
  Rational special;   // z
  Rational half;      // z / 2
  Rational density;   // 2 e / n^2 at the optimum
};

inline ConjecturedSizes conjectured_class_sizes(long long p, long long q) {
  RhoStar rs = rho_star(p, q);
  ConjecturedSizes out;
  out.t = rs.t;
  out.r = rs.r;
  const Rational d = make_rational(rs.r + 1, 2 * p);
  const Rational s = rs.t - 1;
  // f(x) = (-s^2 - s + d s^2) x^2 + 2 s (1 - d) x + d, concave for d < 1.
  if (s == 0) {
    out.ordinary = 0;
  } else {
    out.ordinary = (1 - d) / (s + 1 - d * s);
  }
  out.special = 1 - s * out.ordinary;
  out.half = out.special / 2;
  const Rational& x = out.ordinary;
  out.density = (-s * s - s + d * s * s) * x * x + 2 * s * (1 - d) * x + d;
  return out;
}

}  // namespace rtlab
