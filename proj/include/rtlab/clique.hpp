#pragma once

#include "rtlab/common.hpp"
#include "rtlab/graph.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rtlab {

struct CliqueCertificate {
  std::size_t size = 0;
  std::vector<std::size_t> witness;  // sorted vertex ids
  bool exhaustive = false;
};

inline constexpr std::size_t kMaxCliqueExhaustiveLimit = 5000;

namespace detail {

// Degeneracy order: repeatedly strip a minimum-degree vertex. Returned
// order lists the last-stripped (innermost core) vertices first.
inline std::vector<std::size_t> degeneracy_order(const LabeledGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> deg(n);
  std::size_t maxd = 0;
  for (std::size_t v = 0; v < n; ++v) maxd = std::max(maxd, deg[v] = g.degree(v));
  std::vector<std::vector<std::size_t>> buckets(maxd + 1);
  for (std::size_t v = 0; v < n; ++v) buckets[deg[v]].push_back(v);
  std::vector<char> gone(n, 0);
  std::vector<std::size_t> stripped;
  stripped.reserve(n);
  std::size_t d = 0;
  while (stripped.size() < n) {
    d = std::min(d, maxd);
    while (buckets[d].empty()) ++d;
    std::size_t v = buckets[d].back();
    buckets[d].pop_back();
    if (gone[v] || deg[v] != d) continue;
    gone[v] = 1;
    stripped.push_back(v);
    const VertexSet& nb = g.neighbours(v);
    for (std::size_t u = nb.first(); u < n; u = nb.next(u + 1)) {
      if (gone[u]) continue;
      --deg[u];
      buckets[deg[u]].push_back(u);
      if (deg[u] < d) d = deg[u];
    }
  }
  std::reverse(stripped.begin(), stripped.end());
  return stripped;
}

class CliqueSearch {
 public:
  CliqueSearch(const LabeledGraph& g, std::optional<std::size_t> cutoff) : cutoff_(cutoff) {
    order_ = degeneracy_order(g);
    const std::size_t n = g.size();
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[order_[i]] = i;
    adj_.assign(n, VertexSet(n));
    for (std::size_t i = 0; i < n; ++i) {
      const VertexSet& nb = g.neighbours(order_[i]);
      for (std::size_t u = nb.first(); u < n; u = nb.next(u + 1)) adj_[i].set(pos[u]);
    }
  }

  CliqueCertificate run() {
    const std::size_t n = adj_.size();
    if (n > 0) {
      VertexSet all(n);
      all.fill();
      std::vector<std::size_t> current;
      expand(current, all);
    }
    CliqueCertificate cert;
    cert.size = best_.size();
    for (std::size_t v : best_) cert.witness.push_back(order_[v]);
    std::sort(cert.witness.begin(), cert.witness.end());
    cert.exhaustive = !stopped_;
    return cert;
  }

 private:
  void expand(std::vector<std::size_t>& current, VertexSet p) {
    const std::size_t n = adj_.size();
    std::vector<std::size_t> order, colour;
    order.reserve(p.count());
    colour.reserve(p.count());
    VertexSet uncoloured = p;
    std::size_t k = 0;
    while (!uncoloured.empty()) {
      ++k;
      VertexSet q = uncoloured;
      for (std::size_t v = q.first(); v < n; v = q.next(v + 1)) {
        q.subtract(adj_[v]);
        uncoloured.reset(v);
        order.push_back(v);
        colour.push_back(k);
      }
    }
    for (std::size_t i = order.size(); i-- > 0;) {
      if (current.size() + colour[i] <= best_.size()) return;
      const std::size_t v = order[i];
      current.push_back(v);
      VertexSet np = p & adj_[v];
      if (np.empty()) {
        if (current.size() > best_.size()) {
          best_ = current;
          if (cutoff_ && best_.size() >= *cutoff_ + 1) stopped_ = true;
        }
      } else {
        expand(current, np);
      }
      current.pop_back();
      if (stopped_) return;
      p.reset(v);
    }
  }

  std::optional<std::size_t> cutoff_;
  std::vector<std::size_t> order_;
  std::vector<VertexSet> adj_;
  std::vector<std::size_t> best_;
  bool stopped_ = false;
};

}  // namespace detail

/// Branch and bound with greedy colouring bounds. With a cutoff c the search
/// stops as soon as a clique of size c + 1 is found (exhaustive = false);
/// otherwise the certificate is exact.
inline CliqueCertificate max_clique(const LabeledGraph& g, std::optional<std::size_t> cutoff = std::nullopt) {
  if (!cutoff && g.size() > kMaxCliqueExhaustiveLimit)
    throw SizeLimitError("exhaustive clique search is limited to " + std::to_string(kMaxCliqueExhaustiveLimit) +
                         " vertices; pass a cutoff");
  return detail::CliqueSearch(g, cutoff).run();
}

/// Bron-Kerbosch with pivoting; visit receives each maximal clique (sorted).
/// Returning false from visit stops the enumeration.
inline void for_each_maximal_clique(const LabeledGraph& g,
                                    const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  const std::size_t n = g.size();
  if (n == 0) return;
  bool stop = false;
  std::vector<std::size_t> r;
  std::function<void(VertexSet, VertexSet)> rec = [&](VertexSet p, VertexSet x) {
    if (stop) return;
    if (p.empty() && x.empty()) {
      std::vector<std::size_t> c = r;
      std::sort(c.begin(), c.end());
      if (!visit(c)) stop = true;
      return;
    }
    VertexSet px = p;
    px |= x;
    std::size_t pivot = n, best = 0;
    for (std::size_t u = px.first(); u < n; u = px.next(u + 1)) {
      std::size_t c = (p & g.neighbours(u)).count();
      if (pivot == n || c > best) pivot = u, best = c;
    }
    VertexSet cand = p;
    cand.subtract(g.neighbours(pivot));
    for (std::size_t v = cand.first(); v < n; v = cand.next(v + 1)) {
      r.push_back(v);
      rec(p & g.neighbours(v), x & g.neighbours(v));
      r.pop_back();
      if (stop) return;
      p.reset(v);
      x.set(v);
    }
  };
  VertexSet all(n);
  all.fill();
  rec(all, VertexSet(n));
}

}  // namespace rtlab
