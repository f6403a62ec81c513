#pragma once

#include "rtlab/common.hpp"
#include "rtlab/random.hpp"
#include "rtlab/weighted.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

namespace rtlab {

inline constexpr std::size_t kSimplexExactLimit = 16;

/// Maximizer of u^T A u over the probability simplex.
struct SimplexSolution {
  Rational g;                       // exact value (exact mode only)
  double value = 0.0;               // g as a double in both modes
  std::vector<Rational> u;          // exact mode
  std::vector<double> u_value;      // both modes
  std::vector<std::size_t> support;
  bool exact = false;
};

enum class SimplexMode { automatic, exact, numeric };

namespace detail {

inline void check_weight_matrix(const WeightMatrix& a) {
  const std::size_t m = a.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != m) throw DomainError("matrix must be square");
    if (a[i][i] != 0) throw DomainError("matrix must have zero diagonal");
    for (std::size_t j = 0; j < m; ++j) {
      if (a[i][j] != a[j][i]) throw DomainError("matrix must be symmetric");
      if (a[i][j] < 0) throw DomainError("matrix entries must be nonnegative");
    }
  }
}

// System on support S (size s): rows i < s read sum_j A_ij u_j - g = 0, row
// s reads sum_j u_j = 1. Unknowns u_0..u_{s-1}, g. Returns nullopt if singular.
template <typename T>
std::optional<std::vector<T>> solve_support(const WeightMatrix& a, const std::vector<std::size_t>& S,
                                            double pivot_tol) {
  const std::size_t s = S.size(), n = s + 1;
  std::vector<std::vector<T>> M(n, std::vector<T>(n + 1, T(0)));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) M[i][j] = T(a[S[i]][S[j]]);
    M[i][s] = T(-1);
  }
  for (std::size_t j = 0; j < s; ++j) M[s][j] = T(1);
  M[s][n] = T(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    if constexpr (std::is_floating_point_v<T>) {
      double best = pivot_tol;
      for (std::size_t r = c; r < n; ++r)
        if (std::abs(M[r][c]) > best) best = std::abs(M[r][c]), piv = r;
    } else {
      for (std::size_t r = c; r < n && piv == n; ++r)
        if (M[r][c] != 0) piv = r;
    }
    if (piv == n) return std::nullopt;
    std::swap(M[c], M[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || M[r][c] == 0) continue;
      const T f = M[r][c] / M[c][c];
      for (std::size_t k = c; k <= n; ++k) M[r][k] -= f * M[c][k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = M[i][n] / M[i][i];
  return x;
}

struct SupportCandidate {
  std::vector<std::size_t> support;
  double g = 0.0;
};

}  // namespace detail

/// Multiplicative updates u_i <- u_i (Au)_i / u^T A u from a uniform start
/// and restarts-1 random starts; returns the best local optimum found.
inline SimplexSolution simplex_numeric(const WeightMatrix& a, std::size_t steps = 10000, std::size_t restarts = 50,
                                       std::uint64_t seed = 0) {
  detail::check_weight_matrix(a);
  const std::size_t m = a.size();
  SimplexSolution best;
  best.exact = false;
  if (m == 0) return best;
  best.value = -1.0;
  std::vector<double> u(m), au(m);
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    if (r == 0) {
      std::fill(u.begin(), u.end(), 1.0 / static_cast<double>(m));
    } else {
      Rng rng = make_stream(seed, {0x6A0FULL, r});
      std::exponential_distribution<double> ex(1.0);
      double s = 0.0;
      for (auto& x : u) s += (x = ex(rng));
      for (auto& x : u) x /= s;
    }
    double f = 0.0;
    for (std::size_t it = 0; it <= steps; ++it) {
      f = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        au[i] = 0.0;
        for (std::size_t j = 0; j < m; ++j) au[i] += a[i][j] * u[j];
        f += u[i] * au[i];
      }
      if (it == steps || f <= 0.0) break;
      double moved = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double nu = u[i] * au[i] / f;
        moved = std::max(moved, std::abs(nu - u[i]));
        u[i] = nu;
      }
      if (moved < 1e-15) break;  // fixed point
    }
    if (f > best.value) {
      best.value = f;
      best.u_value = u;
    }
  }
  if (best.value <= 0.0) {
    // Zero matrix: every vertex of the simplex is optimal.
    best.value = 0.0;
    best.u_value.assign(m, 0.0);
    best.u_value[0] = 1.0;
  }
  best.support.clear();
  for (std::size_t i = 0; i < m; ++i)
    if (best.u_value[i] > 1e-9) best.support.push_back(i);
  return best;
}

namespace detail {

// Every support with a nonsingular equal-row-sum system and a nonnegative
// solution is a candidate; the optimum is attained by one of them (moving
// along a kernel direction keeps u^T A u constant and shrinks the support).
// Double prefilter, exact confirmation of the near-best candidates.
// Returns the optimum with smallest support, then lexicographically first.
inline SimplexSolution simplex_exact(const WeightMatrix& a) {
  const std::size_t m = a.size();
  if (m > kSimplexExactLimit)
    throw SizeLimitError("exact g(A) is limited to " + std::to_string(kSimplexExactLimit) + " indices");
  SimplexSolution out;
  out.exact = true;
  if (m == 0) return out;

  std::vector<SupportCandidate> cands;
  double top = -1.0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask) {
    std::vector<std::size_t> S = mask_members(mask);
    auto x = solve_support<double>(a, S, 1e-9);
    if (!x) {
      // Possibly singular only numerically; settle it exactly.
      auto xr = solve_support<Rational>(a, S, 0.0);
      if (!xr) continue;
      std::vector<double> xd;
      for (const auto& v : *xr) xd.push_back(to_double(v));
      x = xd;
    }
    bool ok = true;
    for (std::size_t i = 0; i < S.size(); ++i)
      if ((*x)[i] < -1e-9) ok = false;
    if (!ok) continue;
    const double g = x->back();
    top = std::max(top, g);
    cands.push_back({std::move(S), g});
  }

  bool found = false;
  for (const auto& c : cands) {
    if (c.g < top - 1e-7) continue;
    auto x = solve_support<Rational>(a, c.support, 0.0);
    if (!x) continue;
    bool ok = true;
    for (std::size_t i = 0; i < c.support.size(); ++i)
      if ((*x)[i] < 0) ok = false;
    if (!ok) continue;
    const Rational& g = x->back();
    const bool better = !found || g > out.g ||
                        (g == out.g && (c.support.size() < out.support.size() ||
                                        (c.support.size() == out.support.size() && c.support < out.support)));
    if (better) {
      found = true;
      out.g = g;
      out.support = c.support;
      out.u.assign(m, Rational(0));
      for (std::size_t i = 0; i < c.support.size(); ++i) out.u[c.support[i]] = (*x)[i];
    }
  }
  if (!found) throw std::logic_error("g(A): no feasible support found");
  out.value = to_double(out.g);
  for (const auto& v : out.u) out.u_value.push_back(to_double(v));
  return out;
}

}  // namespace detail

/// g(A) = max u^T A u over the simplex. automatic switches to the numeric
/// fallback above kSimplexExactLimit (flagged by exact = false).
inline SimplexSolution g_of_A(const WeightMatrix& a, SimplexMode mode = SimplexMode::automatic) {
  detail::check_weight_matrix(a);
  if (mode == SimplexMode::numeric || (mode == SimplexMode::automatic && a.size() > kSimplexExactLimit))
    return simplex_numeric(a);
  return detail::simplex_exact(a);
}

inline WeightMatrix submatrix(const WeightMatrix& a, const std::vector<std::size_t>& J) {
  WeightMatrix out(J.size(), std::vector<int>(J.size(), 0));
  for (std::size_t i = 0; i < J.size(); ++i)
    for (std::size_t j = 0; j < J.size(); ++j) out[i][j] = a.at(J[i]).at(J[j]);
  return out;
}

/// Row sums (A u)_j for j in the support; each equals g at an optimum.
inline std::vector<Rational> support_row_sums(const WeightMatrix& a, const SimplexSolution& s) {
  std::vector<Rational> out;
  for (std::size_t j : s.support) {
    Rational r = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != j) r += Rational(a[i][j]) * s.u[i];
    out.push_back(r);
  }
  return out;
}

struct DenseCore {
  std::vector<std::size_t> J;
  SimplexSolution solution;  // for A[J], indices relative to J
};

/// Smallest J (then lexicographically first) with g(A[J]) >= g(A). Any such
/// J carries an optimum of A, so J is the smallest optimal support.
inline DenseCore dense_core(const WeightMatrix& a) {
  detail::check_weight_matrix(a);
  SimplexSolution full = detail::simplex_exact(a);
  DenseCore out;
  out.J = full.support;
  out.solution = detail::simplex_exact(submatrix(a, out.J));
  return out;
}

}  // namespace rtlab
