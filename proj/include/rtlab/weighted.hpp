#pragma once

#include "rtlab/common.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rtlab {

using WeightMatrix = std::vector<std::vector<int>>;

/// Subset tables are indexed by 32-bit masks; this caps exact searches.
inline constexpr std::size_t kWeightedExactLimit = 18;

/// Symmetric weights in {0..p} with zero diagonal.
class PWeightedGraph {
 public:
  PWeightedGraph() = default;
  PWeightedGraph(int p, std::size_t m) : p_(p), w_(m, std::vector<int>(m, 0)) {
    if (p < 1) throw DomainError("p must be positive");
  }
  PWeightedGraph(int p, WeightMatrix w) : p_(p), w_(std::move(w)) {
    if (p < 1) throw DomainError("p must be positive");
    const std::size_t m = w_.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (w_[i].size() != m) throw DomainError("weight matrix must be square");
      if (w_[i][i] != 0) throw DomainError("weight matrix must have zero diagonal");
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (w_[i][j] != w_[j][i]) throw DomainError("weight matrix must be symmetric");
        if (w_[i][j] < 0 || w_[i][j] > p_) throw DomainError("weights must lie in {0,...,p}");
      }
  }

  int p() const { return p_; }
  std::size_t size() const { return w_.size(); }
  const WeightMatrix& matrix() const { return w_; }

  int weight(std::size_t x, std::size_t y) const { return w_.at(x).at(y); }
  void set_weight(std::size_t x, std::size_t y, int v) {
    if (x == y) throw DomainError("diagonal weights are fixed at 0");
    if (v < 0 || v > p_) throw DomainError("weights must lie in {0,...,p}");
    w_.at(x).at(y) = v;
    w_.at(y).at(x) = v;
  }
  // p - w(x, y); note tilde(x, x) = p.
  int tilde(std::size_t x, std::size_t y) const { return p_ - weight(x, y); }

  long long degree(std::size_t x) const {
    long long d = 0;
    for (int v : w_.at(x)) d += v;
    return d;
  }
  long long min_degree() const {
    if (w_.empty()) return 0;
    long long d = std::numeric_limits<long long>::max();
    for (std::size_t x = 0; x < size(); ++x) d = std::min(d, degree(x));
    return d;
  }
  bool positive() const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (w_[i][j] == 0) return false;
    return true;
  }

  /// gamma_K(x) = sum over y in K, y != x, of tilde(x, y).
  long long gamma(const std::vector<std::size_t>& K, std::size_t x) const {
    long long s = 0;
    for (std::size_t y : K)
      if (y != x) s += tilde(x, y);
    return s;
  }
  /// Sum of tilde over unordered pairs of K.
  long long tilde_sum(const std::vector<std::size_t>& K) const {
    long long s = 0;
    for (std::size_t i = 0; i < K.size(); ++i)
      for (std::size_t j = i + 1; j < K.size(); ++j) s += tilde(K[i], K[j]);
    return s;
  }

  PWeightedGraph induced(const std::vector<std::size_t>& vs) const {
    PWeightedGraph g(p_, vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j) g.w_[i][j] = g.w_[j][i] = weight(vs[i], vs[j]);
    return g;
  }

  bool operator==(const PWeightedGraph&) const = default;

 private:
  int p_ = 1;
  WeightMatrix w_;
};

// ---------------------------------------------------------------------------
// Dominance

/// Sort both ascending and compare pointwise.
inline bool multiset_dominates(std::vector<Rational> a, std::vector<Rational> b) {
  if (a.size() != b.size()) throw DomainError("multisets must have equal size");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

/// p(a-1)/a + 1
inline Rational dominance_threshold(int p, int a) {
  if (a < 1) throw DomainError("vertex weight must be positive");
  return make_rational(static_cast<std::int64_t>(p) * (a - 1), a) + 1;
}

/// Target multiset for the j-th vertex (1-based) of weight a: j-2 copies of
/// the threshold plus a itself. Empty for j = 1.
inline std::vector<Rational> dominance_target(int p, int a, std::size_t j) {
  if (j <= 1) return {};
  std::vector<Rational> t(j - 2, dominance_threshold(p, a));
  t.push_back(Rational(a));
  return t;
}

struct DominatingExtension {
  std::vector<std::size_t> order;
  std::vector<int> weights;

  long long size() const {
    long long s = 0;
    for (int w : weights) s += w;
    return s;
  }
};

/// order may be any list of distinct vertices (an extension of G[order]).
inline bool is_dominating_extension(const PWeightedGraph& g, const std::vector<std::size_t>& order,
                                    const std::vector<int>& weights) {
  if (order.size() != weights.size()) return false;
  std::vector<char> seen(g.size(), 0);
  for (std::size_t v : order) {
    if (v >= g.size() || seen[v]) return false;
    seen[v] = 1;
  }
  for (int a : weights)
    if (a < 1 || a > g.p()) return false;
  for (std::size_t j = 1; j < order.size(); ++j) {
    std::vector<Rational> back;
    back.reserve(j);
    for (std::size_t i = 0; i < j; ++i) back.push_back(Rational(g.weight(order[i], order[j])));
    if (!multiset_dominates(back, dominance_target(g.p(), weights[j], j + 1))) return false;
  }
  return true;
}

inline bool is_dominating_extension(const PWeightedGraph& g, const DominatingExtension& e) {
  return is_dominating_extension(g, e.order, e.weights);
}

namespace detail {

// Sorted target is {a, T, ..., T} with T >= a, so dominance reduces to
// min >= a and second-smallest >= T, i.e. a * second >= p(a-1) + a.
inline bool weight_feasible(int p, int a, int lo, int second, bool has_second) {
  if (lo < a) return false;
  if (!has_second) return true;
  return static_cast<long long>(a) * second >= static_cast<long long>(p) * (a - 1) + a;
}

inline int max_weight_from(int p, int lo, int second, bool has_second) {
  for (int a = p; a >= 1; --a)
    if (weight_feasible(p, a, lo, second, has_second)) return a;
  return 0;
}

// Largest feasible weight of v given the set of earlier vertices (order
// among them does not matter). p for an empty prefix, 0 if none works.
inline int max_weight_given(const PWeightedGraph& g, std::size_t v, const std::vector<std::size_t>& before) {
  if (before.empty()) return g.p();
  int lo = std::numeric_limits<int>::max(), second = std::numeric_limits<int>::max();
  for (std::size_t u : before) {
    const int w = g.weight(u, v);
    if (w < lo) second = lo, lo = w;
    else if (w < second) second = w;
  }
  return max_weight_from(g.p(), lo, second, before.size() >= 2);
}

inline int max_weight_given_mask(const PWeightedGraph& g, std::size_t v, std::uint32_t before) {
  if (before == 0) return g.p();
  int lo = std::numeric_limits<int>::max(), second = std::numeric_limits<int>::max();
  for (std::uint32_t b = before; b; b &= b - 1) {
    const int w = g.weight(static_cast<std::size_t>(std::countr_zero(b)), v);
    if (w < lo) second = lo, lo = w;
    else if (w < second) second = w;
  }
  return max_weight_from(g.p(), lo, second, std::popcount(before) >= 2);
}

inline std::vector<std::size_t> mask_members(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::uint32_t b = mask; b; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  return out;
}

inline std::uint32_t to_mask(const std::vector<std::size_t>& vs) {
  std::uint32_t m = 0;
  for (std::size_t v : vs) m |= std::uint32_t{1} << v;
  return m;
}

// best[S]: largest dominating extension of G[S] (-1 when G[S] is not
// positive); last[S]: final vertex of an optimal order. Valid because the
// feasible weights of a vertex depend only on the set before it.
struct ExtensionTable {
  std::vector<int> best;
  std::vector<std::uint8_t> last;

  explicit ExtensionTable(const PWeightedGraph& g) {
    const std::size_t m = g.size();
    if (m > kWeightedExactLimit)
      throw SizeLimitError("exact weighted search is limited to " + std::to_string(kWeightedExactLimit) + " vertices");
    const std::uint32_t full = (std::uint32_t{1} << m);
    best.assign(full, -1);
    last.assign(full, 0);
    best[0] = 0;
    for (std::uint32_t s = 1; s < full; ++s) {
      for (std::uint32_t b = s; b; b &= b - 1) {
        const std::size_t v = static_cast<std::size_t>(std::countr_zero(b));
        const std::uint32_t rest = s & ~(std::uint32_t{1} << v);
        if (best[rest] < 0) continue;
        const int a = max_weight_given_mask(g, v, rest);
        if (a == 0) continue;
        if (best[rest] + a > best[s]) {
          best[s] = best[rest] + a;
          last[s] = static_cast<std::uint8_t>(v);
        }
      }
    }
  }

  std::vector<std::size_t> order(std::uint32_t s) const {
    std::vector<std::size_t> out;
    while (s) {
      const std::size_t v = last[s];
      out.push_back(v);
      s &= ~(std::uint32_t{1} << v);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

}  // namespace detail

/// Pointwise-largest weights along a fixed order. Each position is
/// maximized independently, which is consistent since feasibility of one
/// weight never depends on the others.
inline std::vector<int> maximal_dominating_extension(const PWeightedGraph& g, const std::vector<std::size_t>& order) {
  std::vector<int> out;
  out.reserve(order.size());
  std::vector<std::size_t> before;
  for (std::size_t v : order) {
    if (v >= g.size()) throw DomainError("vertex out of range");
    if (std::find(before.begin(), before.end(), v) != before.end()) throw DomainError("order repeats a vertex");
    const int a = detail::max_weight_given(g, v, before);
    if (a == 0) throw DomainError("order has a zero-weight backwards pair at vertex " + std::to_string(v));
    out.push_back(a);
    before.push_back(v);
  }
  return out;
}

struct MembershipResult {
  std::optional<DominatingExtension> extension;  // size >= q when present
  long long best_size = 0;                       // largest extension found
  bool exhaustive = false;
};

/// Largest dominating extension of G over all orders. Exact through the
/// subset table up to kWeightedExactLimit vertices, greedy beyond.
inline DominatingExtension best_dominating_extension(const PWeightedGraph& g, bool* exhaustive = nullptr) {
  const std::size_t m = g.size();
  if (m == 0) {
    if (exhaustive) *exhaustive = true;
    return {};
  }
  if (!g.positive()) throw DomainError("dominating extensions need a positive weighted graph");
  if (m <= kWeightedExactLimit) {
    detail::ExtensionTable table(g);
    DominatingExtension e;
    e.order = table.order((std::uint32_t{1} << m) - 1);
    e.weights = maximal_dominating_extension(g, e.order);
    if (exhaustive) *exhaustive = true;
    return e;
  }
  // Greedy: every start vertex, then repeatedly the vertex of largest weight.
  DominatingExtension best;
  long long best_size = -1;
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<std::size_t> order{s};
    std::vector<char> used(m, 0);
    used[s] = 1;
    while (order.size() < m) {
      std::size_t pick = m;
      int pw = -1;
      for (std::size_t v = 0; v < m; ++v) {
        if (used[v]) continue;
        const int a = detail::max_weight_given(g, v, order);
        if (a > pw) pick = v, pw = a;
      }
      used[pick] = 1;
      order.push_back(pick);
    }
    DominatingExtension e{order, maximal_dominating_extension(g, order)};
    if (e.size() > best_size) best_size = e.size(), best = std::move(e);
  }
  if (exhaustive) *exhaustive = false;
  return best;
}

inline MembershipResult in_G_p_q(const PWeightedGraph& g, long long q) {
  MembershipResult r;
  if (!g.positive()) {
    r.exhaustive = true;
    return r;
  }
  DominatingExtension e = best_dominating_extension(g, &r.exhaustive);
  r.best_size = e.size();
  if (r.best_size >= q) r.extension = std::move(e);
  return r;
}

}  // namespace rtlab
