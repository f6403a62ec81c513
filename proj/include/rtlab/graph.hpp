#pragma once

#include "rtlab/common.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rtlab {

/// Fixed-size bitset over vertex indices, stored as 64-bit words.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t capacity() const { return n_; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void fill() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  VertexSet& operator&=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  VertexSet& operator|=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  VertexSet& subtract(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }

  /// First set index at or after i, or capacity() if none.
  std::size_t next(std::size_t i) const {
    if (i >= n_) return n_;
    std::size_t w = i >> 6;
    std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (i & 63));
    while (true) {
      if (bits) return std::min(n_, (w << 6) + static_cast<std::size_t>(std::countr_zero(bits)));
      if (++w >= words_.size()) return n_;
      bits = words_[w];
    }
  }
  std::size_t first() const { return next(0); }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = first(); i < n_; i = next(i + 1)) out.push_back(i);
    return out;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  bool operator==(const VertexSet&) const = default;

 private:
  void trim() {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Simple undirected graph with a bit-matrix adjacency and optional vertex
/// classes. Vertices without an assigned class carry kNoClass.
class LabeledGraph {
 public:
  static constexpr std::size_t kNoClass = static_cast<std::size_t>(-1);

  LabeledGraph() = default;
  explicit LabeledGraph(std::size_t n) : rows_(n, VertexSet(n)), cls_(n, kNoClass) {}

  std::size_t size() const { return rows_.size(); }

  void add_edge(std::size_t u, std::size_t v) {
    check(u, v);
    rows_[u].set(v);
    rows_[v].set(u);
  }
  void remove_edge(std::size_t u, std::size_t v) {
    check(u, v);
    rows_[u].reset(v);
    rows_[v].reset(u);
  }
  bool adjacent(std::size_t u, std::size_t v) const { return rows_[u].test(v); }
  const VertexSet& neighbours(std::size_t u) const { return rows_[u]; }
  std::size_t degree(std::size_t u) const { return rows_[u].count(); }

  std::size_t edge_count() const {
    std::size_t s = 0;
    for (const auto& r : rows_) s += r.count();
    return s / 2;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < size(); ++u)
      for (std::size_t v = rows_[u].next(u + 1); v < size(); v = rows_[u].next(v + 1)) out.emplace_back(u, v);
    return out;
  }

  std::size_t add_class(std::string name) {
    names_.push_back(std::move(name));
    return names_.size() - 1;
  }
  void set_class(std::size_t v, std::size_t c) {
    if (c != kNoClass && c >= names_.size()) throw DomainError("unknown class id");
    cls_.at(v) = c;
  }
  std::size_t class_of(std::size_t v) const { return cls_.at(v); }
  const std::vector<std::string>& class_names() const { return names_; }
  std::vector<std::size_t> class_members(std::size_t c) const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < size(); ++v)
      if (cls_[v] == c) out.push_back(v);
    return out;
  }

  bool is_clique(const std::vector<std::size_t>& vs) const {
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (vs[i] == vs[j] || !adjacent(vs[i], vs[j])) return false;
    return true;
  }

  /// Subgraph induced on vs, relabelled 0..|vs|-1 in the given order.
  LabeledGraph induced(const std::vector<std::size_t>& vs) const {
    LabeledGraph g(vs.size());
    g.names_ = names_;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      g.cls_[i] = cls_.at(vs[i]);
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (adjacent(vs[i], vs[j])) g.add_edge(i, j);
    }
    return g;
  }

 private:
  void check(std::size_t u, std::size_t v) const {
    if (u >= size() || v >= size()) throw DomainError("vertex out of range");
    if (u == v) throw DomainError("self-loops are not allowed");
  }

  std::vector<VertexSet> rows_;
  std::vector<std::size_t> cls_;
  std::vector<std::string> names_;
};

inline LabeledGraph complete_graph(std::size_t n) {
  LabeledGraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

inline LabeledGraph cycle_graph(std::size_t n) {
  if (n < 3) throw DomainError("cycles need at least 3 vertices");
  LabeledGraph g(n);
  for (std::size_t u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
  return g;
}

}  // namespace rtlab
