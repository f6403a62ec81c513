#pragma once

#include "rtlab/analysis.hpp"
#include "rtlab/common.hpp"
#include "rtlab/weighted.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rtlab {

struct HeroicEvidence {
  std::vector<std::size_t> subset;  // L, nonempty subset of K
  DominatingExtension extension;    // of G[L]
  long long required = 0;           // p|L| - wt(L)
};

struct ExchangeEntry {
  std::size_t x = 0;  // outside K
  std::size_t y = 0;  // inside K
  long long gamma_without_y = 0;  // gamma_{K - y}(x)
  long long gamma_y = 0;          // gamma_K(y)
};

struct HerculeanCertificate {
  int p = 0;
  std::vector<std::size_t> K;
  long long value = 0;                  // p|K| - wt(K)
  std::vector<HeroicEvidence> heroic;   // one entry per nonempty L in K
  std::vector<long long> gamma;         // gamma_K(x) for every vertex
  std::vector<ExchangeEntry> exchange;  // every (x outside, y inside)
  bool property_i = false;
  bool property_ii = false;
  bool property_iii = false;

  bool ok() const { return property_i && property_ii && property_iii; }
};

namespace detail {

// Heroic sets of G: every nonempty L inside has best(L) >= p|L| - wt(L).
struct HeroicTable {
  ExtensionTable ext;
  std::vector<long long> tw;  // wt(S)
  std::vector<char> heroic;

  explicit HeroicTable(const PWeightedGraph& g) : ext(g) {
    const std::size_t m = g.size();
    const std::uint32_t full = std::uint32_t{1} << m;
    tw.assign(full, 0);
    heroic.assign(full, 0);
    for (std::uint32_t s = 1; s < full; ++s) {
      const std::size_t v = static_cast<std::size_t>(std::countr_zero(s));
      const std::uint32_t rest = s & (s - 1);
      long long add = 0;
      for (std::uint32_t b = rest; b; b &= b - 1) add += g.tilde(v, static_cast<std::size_t>(std::countr_zero(b)));
      tw[s] = tw[rest] + add;
      const long long need = static_cast<long long>(g.p()) * std::popcount(s) - tw[s];
      bool h = ext.best[s] >= 0 && ext.best[s] >= need;
      for (std::uint32_t b = s; h && b && std::popcount(s) > 1; b &= b - 1) {
        const std::uint32_t sub = s & ~(b & (~b + 1));
        if (!heroic[sub]) h = false;
      }
      heroic[s] = h;
    }
  }

  long long value(int p, std::uint32_t s) const { return static_cast<long long>(p) * std::popcount(s) - tw[s]; }
};

inline std::uint32_t select_herculean(const HeroicTable& t, int p, std::size_t m) {
  std::uint32_t best = 0;
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << m); ++s) {
    if (!t.heroic[s]) continue;
    if (best == 0) {
      best = s;
      continue;
    }
    const long long vs = t.value(p, s), vb = t.value(p, best);
    if (vs > vb || (vs == vb && std::popcount(s) < std::popcount(best))) best = s;
  }
  return best;
}

inline HerculeanCertificate make_certificate(const PWeightedGraph& g, const HeroicTable& t, std::uint32_t kmask) {
  HerculeanCertificate c;
  c.p = g.p();
  c.K = mask_members(kmask);
  c.value = t.value(g.p(), kmask);
  for (std::uint32_t l = kmask; l; l = (l - 1) & kmask) {
    HeroicEvidence e;
    e.subset = mask_members(l);
    e.extension.order = t.ext.order(l);
    e.extension.weights = maximal_dominating_extension(g, e.extension.order);
    e.required = t.value(g.p(), l);
    c.heroic.push_back(std::move(e));
  }
  std::reverse(c.heroic.begin(), c.heroic.end());
  for (std::size_t x = 0; x < g.size(); ++x) c.gamma.push_back(g.gamma(c.K, x));
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (kmask >> x & 1u) continue;
    for (std::size_t y : c.K) {
      std::vector<std::size_t> ky;
      for (std::size_t v : c.K)
        if (v != y) ky.push_back(v);
      c.exchange.push_back({x, y, g.gamma(ky, x), c.gamma[y]});
    }
  }
  return c;
}

}  // namespace detail

/// Recomputes all three properties from the stored data and G alone.
inline void check_herculean_certificate(const PWeightedGraph& g, HerculeanCertificate& c) {
  const long long p = g.p();
  c.property_i = !c.K.empty() && c.value == p * static_cast<long long>(c.K.size()) - g.tilde_sum(c.K);
  const std::size_t expected = c.K.empty() ? 0 : (std::size_t{1} << c.K.size()) - 1;
  c.property_i = c.property_i && c.heroic.size() == expected;
  for (const auto& e : c.heroic) {
    std::vector<std::size_t> a = e.extension.order, b = e.subset;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const bool inside = std::includes(c.K.begin(), c.K.end(), b.begin(), b.end());
    const long long need = p * static_cast<long long>(e.subset.size()) - g.tilde_sum(e.subset);
    if (!inside || a != b || e.required != need || !is_dominating_extension(g, e.extension) ||
        e.extension.size() < need)
      c.property_i = false;
  }
  c.property_ii = c.gamma.size() == g.size();
  for (std::size_t x = 0; c.property_ii && x < g.size(); ++x) {
    const bool in = std::find(c.K.begin(), c.K.end(), x) != c.K.end();
    const long long gx = g.gamma(c.K, x);
    if (gx != c.gamma[x] || (in ? gx > p - 1 : gx < p)) c.property_ii = false;
  }
  c.property_iii = c.exchange.size() == (g.size() - c.K.size()) * c.K.size();
  for (const auto& e : c.exchange) {
    std::vector<std::size_t> ky;
    for (std::size_t v : c.K)
      if (v != e.y) ky.push_back(v);
    if (e.gamma_without_y != g.gamma(ky, e.x) || e.gamma_y != g.gamma(c.K, e.y) || e.gamma_without_y < e.gamma_y)
      c.property_iii = false;
  }
}

/// Heroic K maximizing p|K| - wt(K), then minimal |K|, then smallest
/// vertex mask. Exhaustive over subsets, so m <= kWeightedExactLimit.
inline HerculeanCertificate find_herculean(const PWeightedGraph& g) {
  if (g.size() == 0) throw DomainError("graph has no vertices");
  detail::HeroicTable t(g);
  HerculeanCertificate c = detail::make_certificate(g, t, detail::select_herculean(t, g.p(), g.size()));
  check_herculean_certificate(g, c);
  return c;
}

// ---------------------------------------------------------------------------
// G_p(pt+2) subgraph finder

struct GpqSearchResult {
  bool found = false;
  long long target = 0;  // pt + 2
  DominatingExtension extension;  // J in enumeration order
  std::vector<std::size_t> K, R, S;  // x-, y- and z-vertices (recipe only)
  long long herculean_value = 0;
  bool used_fallback = false;
  long long min_degree = 0;
  Rational degree_threshold;  // p * rho*(pt+2) * m
  bool degree_condition = false;
  std::string failure;
};

/// Herculean K, then y-vertices (weight >= 2) and z-vertices (weight >= 1)
/// appended to maximize 2r + s exactly. If that falls short of pt + 2 the
/// best extension over all subsets is tried before reporting failure.
inline GpqSearchResult find_G_pq_subgraph(const PWeightedGraph& g, int t) {
  const int p = g.p();
  if (p < 2) throw DomainError("p must be at least 2");
  if (t < 1) throw DomainError("t must be positive");
  const std::size_t m = g.size();
  if (m == 0) throw DomainError("graph has no vertices");
  if (m > kWeightedExactLimit)
    throw SizeLimitError("subgraph search is limited to " + std::to_string(kWeightedExactLimit) + " vertices");

  GpqSearchResult res;
  res.target = static_cast<long long>(p) * t + 2;
  res.min_degree = g.min_degree();
  res.degree_threshold = Rational(p) * rho_star(p, res.target).value * Rational(static_cast<long long>(m));
  res.degree_condition = Rational(res.min_degree) > res.degree_threshold;

  detail::HeroicTable table(g);
  const std::uint32_t kmask = detail::select_herculean(table, p, m);
  res.K = detail::mask_members(kmask);
  res.herculean_value = table.value(p, kmask);

  // Outside vertices, re-indexed 0..o-1.
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < m; ++v)
    if (!(kmask >> v & 1u)) out.push_back(v);
  const std::size_t o = out.size();
  const std::uint32_t ofull = std::uint32_t{1} << o;
  auto lift = [&](std::uint32_t local) {
    std::uint32_t s = 0;
    for (std::uint32_t b = local; b; b &= b - 1) s |= std::uint32_t{1} << out[static_cast<std::size_t>(std::countr_zero(b))];
    return s;
  };

  // reach[R]: R can follow K as y-vertices in some order; ylast gives it.
  std::vector<char> reach(ofull, 0);
  std::vector<std::uint8_t> ylast(ofull, 0);
  reach[0] = 1;
  for (std::uint32_t r = 1; r < ofull; ++r)
    for (std::uint32_t b = r; b && !reach[r]; b &= b - 1) {
      const std::size_t i = static_cast<std::size_t>(std::countr_zero(b));
      const std::uint32_t rest = r & ~(std::uint32_t{1} << i);
      if (reach[rest] && detail::max_weight_given_mask(g, out[i], kmask | lift(rest)) >= 2) {
        reach[r] = 1;
        ylast[r] = static_cast<std::uint8_t>(i);
      }
    }
  // Positive cliques among outside vertices: z-vertices only need positive
  // weights to everything before them.
  std::vector<std::uint32_t> posnb(o, 0);
  for (std::size_t i = 0; i < o; ++i)
    for (std::size_t j = 0; j < o; ++j)
      if (i != j && g.weight(out[i], out[j]) > 0) posnb[i] |= std::uint32_t{1} << j;
  std::vector<std::uint8_t> clique(ofull, 0);
  for (std::uint32_t c = 1; c < ofull; ++c) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(c));
    const std::uint32_t rest = c & (c - 1);
    clique[c] = std::max<std::uint8_t>(clique[rest], static_cast<std::uint8_t>(1 + clique[rest & posnb[i]]));
  }
  auto positive_to = [&](std::size_t v, std::uint32_t set) {
    for (std::uint32_t b = set; b; b &= b - 1)
      if (g.weight(v, static_cast<std::size_t>(std::countr_zero(b))) == 0) return false;
    return true;
  };

  long long best_score = -1;
  std::uint32_t best_r = 0, best_c = 0;
  for (std::uint32_t r = 0; r < ofull; ++r) {
    if (!reach[r]) continue;
    const std::uint32_t before = kmask | lift(r);
    std::uint32_t cand = 0;
    for (std::size_t i = 0; i < o; ++i)
      if (!(r >> i & 1u) && positive_to(out[i], before)) cand |= std::uint32_t{1} << i;
    const long long score = 2LL * std::popcount(r) + clique[cand];
    if (score > best_score) best_score = score, best_r = r, best_c = cand;
  }

  std::vector<std::size_t> order = table.ext.order(kmask);
  {
    std::vector<std::size_t> ys;
    for (std::uint32_t r = best_r; r; r &= ~(std::uint32_t{1} << ylast[r])) ys.push_back(out[ylast[r]]);
    std::reverse(ys.begin(), ys.end());
    res.R = ys;
    // walk the clique table for a witness
    std::uint32_t c = best_c;
    while (c) {
      const std::size_t i = static_cast<std::size_t>(std::countr_zero(c));
      const std::uint32_t rest = c & (c - 1);
      if (clique[c] == clique[rest]) {
        c = rest;
      } else {
        res.S.push_back(out[i]);
        c = rest & posnb[i];
      }
    }
  }
  order.insert(order.end(), res.R.begin(), res.R.end());
  order.insert(order.end(), res.S.begin(), res.S.end());
  DominatingExtension recipe{order, maximal_dominating_extension(g, order)};
  if (recipe.size() >= res.target && is_dominating_extension(g, recipe)) {
    res.found = true;
    res.extension = std::move(recipe);
    return res;
  }

  // Fallback: smallest positive J whose best extension reaches the target.
  res.used_fallback = true;
  std::uint32_t pick = 0;
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << m); ++s)
    if (table.ext.best[s] >= res.target && (pick == 0 || std::popcount(s) < std::popcount(pick))) pick = s;
  if (pick != 0) {
    res.found = true;
    res.extension.order = table.ext.order(pick);
    res.extension.weights = maximal_dominating_extension(g, res.extension.order);
    return res;
  }
  res.failure = "no J with G[J] in G_" + std::to_string(p) + "(" + std::to_string(res.target) +
                "); min degree " + std::to_string(res.min_degree) + (res.degree_condition ? " > " : " <= ") +
                to_string(res.degree_threshold) + " (degree condition " +
                (res.degree_condition ? "holds" : "fails") + ")";
  return res;
}

// ---------------------------------------------------------------------------
// Window check for the G_p(p+s+t-1) bound

struct WindowRow {
  long long m = 0;
  Rational slack;      // (s+t-m)(m-1)/m - s(t-1)/t; a violation needs slack > 0
  Rational product;    // (m-t)(m-(s+t)/t)
  bool consistent = false;  // slack > 0 exactly when product < 0
};

struct WindowReport {
  long long p = 0, s = 0, t = 0;
  long long m_min = 2, m_max = 0;  // m ranges over [2, s+t]
  std::vector<WindowRow> rows;
  bool passed = false;  // no m has slack > 0
};

inline WindowReport verify_theorem15_window(long long p, long long s, long long t) {
  if (s < 1 || t < 1 || p < 1) throw DomainError("p, s and t must be positive");
  if (!(t * (t - 2) <= s && s <= t * t)) throw DomainError("need t(t-2) <= s <= t^2");
  if (s + t - 1 > p) throw DomainError("need s + t - 1 <= p");
  WindowReport rep;
  rep.p = p;
  rep.s = s;
  rep.t = t;
  rep.m_max = s + t;
  rep.passed = true;
  const Rational lhs = make_rational(s * (t - 1), t);
  for (long long m = 2; m <= rep.m_max; ++m) {
    WindowRow row;
    row.m = m;
    row.slack = make_rational((s + t - m) * (m - 1), m) - lhs;
    row.product = Rational(m - t) * (Rational(m) - make_rational(s + t, t));
    row.consistent = (row.slack > 0) == (row.product < 0);
    if (row.slack > 0 || !row.consistent) rep.passed = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace rtlab
