#pragma once

#include "rtlab/common.hpp"
#include "rtlab/graph.hpp"
#include "rtlab/parallel.hpp"
#include "rtlab/partition.hpp"
#include "rtlab/random.hpp"
#include "rtlab/sphere.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rtlab {

enum class CbeMode {
  sampled,  // W, Z i.i.d. uniform on the sphere
  strict,   // one point per partition cell (cells of diameter <= mu/4)
  planted,  // clusters of rotated copies of anchor points
};

inline std::string to_string(CbeMode m) {
  switch (m) {
    case CbeMode::sampled: return "sampled";
    case CbeMode::strict: return "strict";
    case CbeMode::planted: return "planted";
  }
  return "?";
}

inline CbeMode parse_cbe_mode(const std::string& s) {
  if (s == "sampled") return CbeMode::sampled;
  if (s == "strict") return CbeMode::strict;
  if (s == "planted") return CbeMode::planted;
  throw DomainError("unknown mode '" + s + "' (expected sampled, strict or planted)");
}

struct CbeParams {
  int p = 3;
  int ell = 1;
  std::size_t k = 16;
  std::size_t n = 100;
  double epsilon = 0.01;
  double bigK = 10.0;
  std::uint64_t seed = 0;
  CbeMode mode = CbeMode::sampled;
  std::size_t cluster_size = 0;  // planted mode; 0 means 2p

  double mu() const { return epsilon / std::sqrt(2.0 * static_cast<double>(k)); }
  Complex rho() const {
    const double a = 2.0 * std::numbers::pi / static_cast<double>(p);
    return {std::cos(a), std::sin(a)};
  }
  Complex rho_pow(int h) const {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(((h % p) + p) % p) / static_cast<double>(p);
    return {std::cos(a), std::sin(a)};
  }

  void validate() const {
    if (p < 2) throw DomainError("p must be at least 2");
    if (ell < 1 || ell >= p) throw DomainError("need 1 <= ell < p");
    if (k < 1) throw DomainError("k must be positive");
    if (n < 1) throw DomainError("n must be positive");
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (!(bigK >= 1.0)) throw DomainError("K must be at least 1");
  }

  /// Soft parameter-hierarchy checks; violations are reported, not fatal.
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    if (!(3.0 * std::sqrt(mu()) < 4.0 / static_cast<double>(p))) out.push_back("3*sqrt(mu) < 4/p does not hold");
    if (!(bigK * mu() < 1.0)) out.push_back("K*mu < 1 does not hold");
    return out;
  }
};

namespace detail {

// |u - c v|^2 = 2 - 2 Re(conj(c) <u, v>) for unit u, v and |c| = 1.
inline double rotated_distance_from_inner(Complex ip, Complex c) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * (std::conj(c) * ip).real()));
}

inline std::optional<int> rotation_witness_from_inner(Complex ip, const CbeParams& params) {
  const double limit = std::sqrt(params.mu()) + kGeomTol;
  for (int h = 1; h < params.p; ++h)
    if (rotated_distance_from_inner(ip, params.rho_pow(h)) <= limit) return h;
  return std::nullopt;
}

inline bool cross_edge_from_inner(Complex ip, const CbeParams& params) {
  const double floor = params.bigK * params.mu() - kGeomTol;
  for (int h = 0; h < params.p; ++h)
    if (std::abs((params.rho_pow(h) * ip).imag()) < floor) return false;
  double arg = std::atan2(ip.imag(), ip.real());
  if (arg < 0.0) arg += 2.0 * std::numbers::pi;
  const double top = 2.0 * std::numbers::pi * params.ell / params.p;
  return arg <= top + kGeomTol || arg >= 2.0 * std::numbers::pi - kGeomTol;
}

}  // namespace detail

/// Smallest h in [1, p-1] with |u - rho^h v| <= sqrt(mu).
inline std::optional<int> rotation_witness(const ComplexUnitVector& u, const ComplexUnitVector& v,
                                           const CbeParams& params) {
  return detail::rotation_witness_from_inner(inner(u, v), params);
}

/// Cross-pair rule: |Im(rho^h <w,z>)| >= K mu for all h, and arg <w,z> lies
/// in the closed window [0, 2 pi ell / p].
inline bool cross_edge(const ComplexUnitVector& w, const ComplexUnitVector& z, const CbeParams& params) {
  return detail::cross_edge_from_inner(inner(w, z), params);
}

struct CbeGraph {
  CbeParams params;
  std::vector<ComplexUnitVector> W, Z;
  LabeledGraph graph;  // W = [0, n), Z = [n, 2n)
  // (u, v) with u < v in the same class -> smallest h with |x_u - rho^h x_v| <= sqrt(mu)
  std::map<std::pair<std::size_t, std::size_t>, int> rotation_labels;

  const ComplexUnitVector& point(std::size_t v) const { return v < params.n ? W[v] : Z[v - params.n]; }
  bool same_class(std::size_t u, std::size_t v) const { return (u < params.n) == (v < params.n); }
};

namespace detail {

inline bool is_duplicate(const std::vector<ComplexUnitVector>& pts, const ComplexUnitVector& x) {
  for (const auto& y : pts)
    if (distance(x, y) < 1e-12) return true;
  return false;
}

inline ComplexUnitVector perturb(const ComplexUnitVector& x, double radius, Rng& rng) {
  ComplexUnitVector dir = sample_complex_sphere(x.dim(), rng);
  const double r = radius * uniform01(rng);
  std::vector<Complex> c(x.coords().begin(), x.coords().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += r * dir[i];
  return ComplexUnitVector(std::move(c));
}

inline std::vector<ComplexUnitVector> sample_class(const CbeParams& params, std::uint64_t tag) {
  std::vector<ComplexUnitVector> pts;
  pts.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      Rng rng = make_stream(params.seed, {0xCBEULL, tag, i, attempt});
      ComplexUnitVector x = sample_complex_sphere(params.k, rng);
      if (!is_duplicate(pts, x)) {
        pts.push_back(std::move(x));
        break;
      }
    }
  }
  return pts;
}

// Planted instances: each cluster is a set of noisy rotations rho^h a of one
// anchor a, so the inner graph is rich in K_p's. Z anchors are correlated
// with W anchors so cross pairs take many arguments.
inline void plant_classes(const CbeParams& params, std::vector<ComplexUnitVector>& W,
                          std::vector<ComplexUnitVector>& Z) {
  const std::size_t cs = params.cluster_size ? params.cluster_size : 2 * static_cast<std::size_t>(params.p);
  const double noise = std::sqrt(params.mu()) / 4.0;
  auto build = [&](std::uint64_t tag, const std::vector<ComplexUnitVector>* partner) {
    std::vector<ComplexUnitVector> pts;
    std::vector<ComplexUnitVector> anchors;
    for (std::size_t i = 0; i < params.n; ++i) {
      const std::size_t c = i / cs;
      if (c == anchors.size()) {
        Rng rng = make_stream(params.seed, {0x91A7ULL, tag, c});
        ComplexUnitVector a = sample_complex_sphere(params.k, rng);
        if (partner != nullptr && !partner->empty()) {
          const ComplexUnitVector& base = (*partner)[(c * cs) % partner->size()];
          const double theta = 2.0 * std::numbers::pi * uniform01(rng);
          std::vector<Complex> mix(params.k);
          for (std::size_t j = 0; j < params.k; ++j) mix[j] = std::polar(1.0, theta) * base[j] + 0.7 * a[j];
          a = ComplexUnitVector(std::move(mix));
        }
        anchors.push_back(std::move(a));
      }
      for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng = make_stream(params.seed, {0x91A8ULL, tag, i, attempt});
        const int h = static_cast<int>(i % static_cast<std::size_t>(params.p));
        ComplexUnitVector x = perturb(anchors[c].rotated(params.rho_pow(h)), noise, rng);
        if (!is_duplicate(pts, x)) {
          pts.push_back(std::move(x));
          break;
        }
      }
    }
    return pts;
  };
  W = build(0, nullptr);
  Z = build(1, &W);
}

}  // namespace detail

/// Builds the two-class graph. Edge rules are the same in every mode; modes
/// only differ in how W and Z are chosen.
inline CbeGraph build_cbe(const CbeParams& params) {
  params.validate();
  CbeGraph g;
  g.params = params;
  const std::size_t n = params.n;
  switch (params.mode) {
    case CbeMode::sampled:
      g.W = detail::sample_class(params, 0);
      g.Z = detail::sample_class(params, 1);
      break;
    case CbeMode::strict: {
      SpherePartition part = partition_sphere(params.k, n, params.mu() / 4.0, params.seed);
      for (std::size_t i = 0; i < n; ++i) {
        Rng rw = make_stream(params.seed, {0x57C7ULL, 0, i});
        Rng rz = make_stream(params.seed, {0x57C7ULL, 1, i});
        g.W.push_back(part.sample(i, rw));
        g.Z.push_back(part.sample(i, rz));
      }
      break;
    }
    case CbeMode::planted:
      detail::plant_classes(params, g.W, g.Z);
      break;
  }

  const std::size_t N = 2 * n;
  struct Row {
    std::vector<std::size_t> nbrs;
    std::vector<int> labels;  // rotation label per inner neighbour, 0 for cross
  };
  std::vector<Row> rows(N);
  parallel_for(N, [&](std::size_t u) {
    const ComplexUnitVector& x = g.point(u);
    for (std::size_t v = u + 1; v < N; ++v) {
      const Complex ip = inner(x, g.point(v));
      if (g.same_class(u, v)) {
        if (auto h = detail::rotation_witness_from_inner(ip, params)) {
          rows[u].nbrs.push_back(v);
          rows[u].labels.push_back(*h);
        }
      } else if (detail::cross_edge_from_inner(ip, params)) {
        rows[u].nbrs.push_back(v);
        rows[u].labels.push_back(0);
      }
    }
  });

  g.graph = LabeledGraph(N);
  const std::size_t cw = g.graph.add_class("W"), cz = g.graph.add_class("Z");
  for (std::size_t v = 0; v < N; ++v) g.graph.set_class(v, v < n ? cw : cz);
  for (std::size_t u = 0; u < N; ++u)
    for (std::size_t i = 0; i < rows[u].nbrs.size(); ++i) {
      const std::size_t v = rows[u].nbrs[i];
      g.graph.add_edge(u, v);
      if (rows[u].labels[i] != 0) g.rotation_labels[{u, v}] = rows[u].labels[i];
    }
  return g;
}

}  // namespace rtlab
