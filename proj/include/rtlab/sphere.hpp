#pragma once

#include "rtlab/common.hpp"
#include "rtlab/parallel.hpp"
#include "rtlab/random.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rtlab {

using Complex = std::complex<double>;

/// Point on the real unit sphere S^{d-1}(R). Coordinates are renormalized on
/// construction.
class RealUnitVector {
 public:
  RealUnitVector() = default;
  explicit RealUnitVector(std::vector<double> coords) : coords_(std::move(coords)) { normalize(); }

  static RealUnitVector basis(std::size_t d, std::size_t i, double sign = 1.0) {
    std::vector<double> c(d, 0.0);
    c.at(i) = sign;
    return RealUnitVector(std::move(c));
  }

  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  RealUnitVector operator-() const {
    RealUnitVector out = *this;
    for (double& x : out.coords_) x = -x;
    return out;
  }

 private:
  void normalize() {
    if (coords_.empty()) throw DomainError("RealUnitVector needs dimension >= 1");
    double s = 0.0;
    for (double x : coords_) s += x * x;
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("cannot normalize a zero or non-finite vector");
    const double inv = 1.0 / std::sqrt(s);
    for (double& x : coords_) x *= inv;
  }

  std::vector<double> coords_;
};

/// Point on the complex unit sphere S^{k-1}(C).
class ComplexUnitVector {
 public:
  ComplexUnitVector() = default;
  explicit ComplexUnitVector(std::vector<Complex> coords) : coords_(std::move(coords)) { normalize(); }

  static ComplexUnitVector basis(std::size_t k, std::size_t i, Complex value = 1.0) {
    std::vector<Complex> c(k, 0.0);
    c.at(i) = value;
    return ComplexUnitVector(std::move(c));
  }

  std::size_t dim() const { return coords_.size(); }
  std::span<const Complex> coords() const { return coords_; }
  const Complex& operator[](std::size_t i) const { return coords_[i]; }

  /// Multiplication by a unit-modulus scalar (a rotation of the sphere).
  ComplexUnitVector rotated(Complex phase) const {
    ComplexUnitVector out = *this;
    for (Complex& z : out.coords_) z *= phase;
    return out;
  }

 private:
  void normalize() {
    if (coords_.empty()) throw DomainError("ComplexUnitVector needs dimension >= 1");
    double s = 0.0;
    for (const Complex& z : coords_) s += std::norm(z);
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("cannot normalize a zero or non-finite vector");
    const double inv = 1.0 / std::sqrt(s);
    for (Complex& z : coords_) z *= inv;
  }

  std::vector<Complex> coords_;
};

inline void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw DomainError("dimension mismatch");
}

inline double dot(const RealUnitVector& a, const RealUnitVector& b) {
  require_same_dim(a.dim(), b.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double distance(const RealUnitVector& a, const RealUnitVector& b) {
  require_same_dim(a.dim(), b.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Hermitian inner product <w, z> = sum_i w_i * conj(z_i).
inline Complex inner(const ComplexUnitVector& w, const ComplexUnitVector& z) {
  require_same_dim(w.dim(), z.dim());
  Complex s = 0.0;
  for (std::size_t i = 0; i < w.dim(); ++i) s += w[i] * std::conj(z[i]);
  return s;
}

inline double distance(const ComplexUnitVector& a, const ComplexUnitVector& b) {
  require_same_dim(a.dim(), b.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

/// |a - phase * b| without materializing the rotated vector.
inline double rotated_distance(const ComplexUnitVector& a, const ComplexUnitVector& b, Complex phase) {
  require_same_dim(a.dim(), b.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a[i] - phase * b[i]);
  return std::sqrt(s);
}

/// The isometry (x_1 + i y_1, ..., x_k + i y_k) -> (x_1, y_1, ..., x_k, y_k).
inline RealUnitVector complex_to_real(const ComplexUnitVector& z) {
  std::vector<double> out;
  out.reserve(2 * z.dim());
  for (const Complex& c : z.coords()) {
    out.push_back(c.real());
    out.push_back(c.imag());
  }
  return RealUnitVector(std::move(out));
}

inline ComplexUnitVector real_to_complex(const RealUnitVector& x) {
  if (x.dim() % 2 != 0) throw DomainError("real dimension must be even to map onto a complex sphere");
  std::vector<Complex> out(x.dim() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Complex(x[2 * i], x[2 * i + 1]);
  return ComplexUnitVector(std::move(out));
}

inline RealUnitVector sample_real_sphere(std::size_t d, Rng& rng) {
  if (d == 0) throw DomainError("dimension must be positive");
  std::vector<double> c(d);
  for (;;) {
    double s = 0.0;
    for (double& x : c) {
      x = standard_normal(rng);
      s += x * x;
    }
    if (s > 1e-300) return RealUnitVector(c);
  }
}

inline ComplexUnitVector sample_complex_sphere(std::size_t k, Rng& rng) {
  if (k == 0) throw DomainError("dimension must be positive");
  std::vector<Complex> c(k);
  for (;;) {
    double s = 0.0;
    for (Complex& z : c) {
      z = Complex(standard_normal(rng), standard_normal(rng));
      s += std::norm(z);
    }
    if (s > 1e-300) return ComplexUnitVector(c);
  }
}

// ---------------------------------------------------------------------------
// Cap measures.

/// Upper bound e^{-k alpha^2} on the normalized measure of a cap of height
/// 1 - alpha in S^{k-1}(C).
inline double cap_measure_upper_bound(std::size_t k, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in [0, 1)");
  return std::exp(-static_cast<double>(k) * alpha * alpha);
}

/// Lower bound max(0, 1/2 - sqrt(2) delta) on the measure of the cap of points
/// within distance sqrt(2) - delta / sqrt(2k) of a fixed point of S^{k-1}(C).
inline double cap_measure_lower_bound(std::size_t k, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (k < 3) throw DomainError("k must be at least 3");
  return std::max(0.0, 0.5 - std::sqrt(2.0) * delta);
}

/// Radius of the cap used by cap_measure_lower_bound.
inline double lower_cap_radius(std::size_t k, double delta) {
  return std::sqrt(2.0) - delta / std::sqrt(2.0 * static_cast<double>(k));
}

struct MonteCarloEstimate {
  std::size_t samples = 0;
  std::size_t hits = 0;
  double fraction() const { return samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples); }
  /// Binomial standard error of fraction().
  double standard_error() const {
    if (samples == 0) return 0.0;
    double f = fraction();
    return std::sqrt(std::max(f * (1.0 - f), 1.0 / static_cast<double>(samples)) / static_cast<double>(samples));
  }
};

/// Monte Carlo measure of {x in S^{d-1}(R) : <x, e_1> >= threshold}. Samples
/// are drawn in fixed blocks with one stream per block, so the estimate does
/// not depend on the thread count.
inline MonteCarloEstimate monte_carlo_cap_fraction(std::size_t d, double threshold, std::size_t samples,
                                                   std::uint64_t seed) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::size_t> hits(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng = make_stream(seed, {0xCA9ULL, b});
    const std::size_t begin = b * kBlock;
    const std::size_t end = std::min(samples, begin + kBlock);
    std::size_t local = 0;
    for (std::size_t i = begin; i < end; ++i) {
      RealUnitVector x = sample_real_sphere(d, rng);
      if (x[0] >= threshold) ++local;
    }
    hits[b] = local;
  });
  MonteCarloEstimate est;
  est.samples = samples;
  for (std::size_t h : hits) est.hits += h;
  return est;
}

/// Monte Carlo measure of a cap of height 1 - alpha on S^{k-1}(C).
inline MonteCarloEstimate monte_carlo_upper_cap(std::size_t k, double alpha, std::size_t samples,
                                                std::uint64_t seed) {
  return monte_carlo_cap_fraction(2 * k, alpha, samples, seed);
}

/// Monte Carlo measure of the cap of radius sqrt(2) - delta/sqrt(2k).
inline MonteCarloEstimate monte_carlo_lower_cap(std::size_t k, double delta, std::size_t samples,
                                                std::uint64_t seed) {
  const double r = lower_cap_radius(k, delta);
  // |x - c|^2 = 2 - 2<x, c> <= r^2.
  return monte_carlo_cap_fraction(2 * k, 1.0 - r * r / 2.0, samples, seed);
}

// ---------------------------------------------------------------------------
// Distance configurations.

/// True iff some pair (a, b) in A x B has |a - b| >= 2 - nu.
inline bool two_set_distance_check(std::span<const ComplexUnitVector> A, std::span<const ComplexUnitVector> B,
                                   double nu) {
  if (A.empty() || B.empty()) throw DomainError("point sets must be nonempty");
  const double target = 2.0 - nu - kGeomTol;
  for (const auto& a : A)
    for (const auto& b : B)
      if (distance(a, b) >= target) return true;
  return false;
}

struct RhombusWitness {
  std::size_t p1 = 0, p2 = 0, q1 = 0, q2 = 0;
};

/// Searches for p1, p2 in P and q1, q2 in Q with |p1 - p2| >= far,
/// |q1 - q2| >= far and every cross distance <= near.
inline std::optional<RhombusWitness> find_rhombus(std::span<const RealUnitVector> P,
                                                  std::span<const RealUnitVector> Q, double far, double near) {
  auto far_pairs = [&](std::span<const RealUnitVector> S) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < S.size(); ++i)
      for (std::size_t j = i + 1; j < S.size(); ++j)
        if (distance(S[i], S[j]) >= far - kGeomTol) out.emplace_back(i, j);
    return out;
  };
  const auto fp = far_pairs(P);
  if (fp.empty()) return std::nullopt;
  const auto fq = far_pairs(Q);
  if (fq.empty()) return std::nullopt;

  // near[i][j] for the points that occur in some far pair.
  std::vector<std::vector<char>> close(P.size(), std::vector<char>(Q.size(), -1));
  auto is_close = [&](std::size_t i, std::size_t j) {
    char& c = close[i][j];
    if (c < 0) c = distance(P[i], Q[j]) <= near + kGeomTol ? 1 : 0;
    return c == 1;
  };
  for (auto [a, b] : fp)
    for (auto [c, d] : fq)
      if (is_close(a, c) && is_close(a, d) && is_close(b, c) && is_close(b, d)) return RhombusWitness{a, b, c, d};
  return std::nullopt;
}

/// Search for the forbidden four-point configuration with parameter mu in
/// (0, 1/4). A returned witness signals a bug in whatever produced the points.
inline std::optional<RhombusWitness> rhombus_search(std::span<const RealUnitVector> P,
                                                    std::span<const RealUnitVector> Q, double mu) {
  if (!(mu > 0.0 && mu < 0.25)) throw DomainError("mu must lie in (0, 1/4)");
  return find_rhombus(P, Q, 2.0 - mu, std::sqrt(2.0) - mu);
}

}  // namespace rtlab
