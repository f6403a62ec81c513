#pragma once

#include "rtlab/common.hpp"
#include "rtlab/random.hpp"
#include "rtlab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace rtlab {

namespace detail {

// int_0^theta sin^m(s) ds via the standard reduction formula.
inline double sin_power_integral(std::size_t m, double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  double cur = (m % 2 == 0) ? theta : 1.0 - c;
  for (std::size_t j = (m % 2 == 0) ? 2 : 3; j <= m; j += 2) {
    const double jd = static_cast<double>(j);
    cur = -std::pow(s, jd - 1.0) * c / jd + (jd - 1.0) / jd * cur;
  }
  return cur;
}

// Normalized polar measure of the cap {theta' <= theta} on S^{d-1}.
inline double polar_cdf(std::size_t d, double theta) {
  if (theta <= 0.0) return 0.0;
  if (theta >= std::numbers::pi) return 1.0;
  const double total = sin_power_integral(d - 2, std::numbers::pi);
  return std::clamp(sin_power_integral(d - 2, theta) / total, 0.0, 1.0);
}

inline double polar_cdf_inverse(std::size_t d, double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return std::numbers::pi;
  double lo = 0.0, hi = std::numbers::pi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    if (polar_cdf(d, mid) < u) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double sphere_area(std::size_t d) {
  const double h = static_cast<double>(d) / 2.0;
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

// Split x = (cos theta, sin theta * y) with y on S^{d-2}.
inline std::pair<double, std::vector<double>> polar_split(std::span<const double> x) {
  const double theta = std::acos(std::clamp(x[0], -1.0, 1.0));
  std::vector<double> y(x.begin() + 1, x.end());
  double s = 0.0;
  for (double v : y) s += v * v;
  if (s < 1e-300) {
    std::fill(y.begin(), y.end(), 0.0);
    y[0] = 1.0;
  } else {
    const double inv = 1.0 / std::sqrt(s);
    for (double& v : y) v *= inv;
  }
  return {theta, std::move(y)};
}

inline double max_sin_on(double a, double b) {
  constexpr double half = std::numbers::pi / 2.0;
  if (a <= half && half <= b) return 1.0;
  return std::max(std::sin(a), std::sin(b));
}

struct ZoneNode {
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<double> bounds;                          // B + 1 polar angles
  std::vector<std::size_t> offset;                     // B + 1 cumulative cell counts
  std::vector<std::shared_ptr<const ZoneNode>> child;  // per band, on S^{d-2}
  std::vector<char> mirrored;                          // band is the antipodal image of band B-1-b
  std::vector<double> diam;                            // per cell

  std::size_t bands() const { return child.size(); }

  std::size_t locate(std::span<const double> x) const {
    if (n == 1) return 0;
    if (d == 2) {
      double a = std::atan2(x[1], x[0]);
      if (a < 0) a += 2.0 * std::numbers::pi;
      auto i = static_cast<std::size_t>(a / (2.0 * std::numbers::pi) * static_cast<double>(n));
      return std::min(i, n - 1);
    }
    auto [theta, y] = polar_split(x);
    auto it = std::upper_bound(bounds.begin() + 1, bounds.end() - 1, theta);
    const std::size_t b = static_cast<std::size_t>(it - (bounds.begin() + 1));
    if (mirrored[b])
      for (double& v : y) v = -v;
    return offset[b] + child[b]->locate(y);
  }

  std::vector<double> sample(std::size_t cell, Rng& rng) const {
    if (n == 1) {
      RealUnitVector v = sample_real_sphere(d, rng);
      return {v.coords().begin(), v.coords().end()};
    }
    if (d == 2) {
      const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
      const double a = (static_cast<double>(cell) + uniform01(rng)) * w;
      return {std::cos(a), std::sin(a)};
    }
    const std::size_t b = static_cast<std::size_t>(
        std::upper_bound(offset.begin(), offset.end(), cell) - offset.begin() - 1);
    const double fa = polar_cdf(d, bounds[b]), fb = polar_cdf(d, bounds[b + 1]);
    const double theta = std::clamp(polar_cdf_inverse(d, fa + (fb - fa) * uniform01(rng)), bounds[b], bounds[b + 1]);
    std::vector<double> y = child[b]->sample(cell - offset[b], rng);
    if (mirrored[b])
      for (double& v : y) v = -v;
    std::vector<double> x;
    x.reserve(d);
    x.push_back(std::cos(theta));
    for (double v : y) x.push_back(std::sin(theta) * v);
    return x;
  }
};

using NodeCache = std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const ZoneNode>>;

// Rounds ideal real counts to integers summing to target, carrying the
// rounding error forward.
inline std::vector<std::size_t> round_with_carry(const std::vector<double>& ideal, std::size_t target) {
  std::vector<std::size_t> out(ideal.size(), 0);
  double carry = 0.0;
  long long sum = 0;
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    long long c = std::max(0LL, std::llround(ideal[i] + carry));
    carry += ideal[i] - static_cast<double>(c);
    out[i] = static_cast<std::size_t>(c);
    sum += c;
  }
  long long diff = static_cast<long long>(target) - sum;
  for (std::size_t i = ideal.size(); diff != 0 && i-- > 0;) {
    if (diff > 0) {
      out[i] += static_cast<std::size_t>(diff);
      diff = 0;
    } else {
      long long take = std::min<long long>(-diff, static_cast<long long>(out[i]));
      out[i] -= static_cast<std::size_t>(take);
      diff += take;
    }
  }
  return out;
}

inline std::shared_ptr<const ZoneNode> build_zone(std::size_t d, std::size_t n, bool antipodal, NodeCache& cache);

inline std::shared_ptr<const ZoneNode> plain_zone(std::size_t d, std::size_t n, NodeCache& cache) {
  auto key = std::make_pair(d, n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto node = build_zone(d, n, false, cache);
  cache.emplace(key, node);
  return node;
}

inline std::shared_ptr<const ZoneNode> build_zone(std::size_t d, std::size_t n, bool antipodal, NodeCache& cache) {
  auto node = std::make_shared<ZoneNode>();
  node->d = d;
  node->n = n;
  if (n == 1) {
    node->diam = {2.0};
    return node;
  }
  if (d == 2) {
    node->diam.assign(n, 2.0 * std::sin(std::numbers::pi / static_cast<double>(n)));
    return node;
  }

  constexpr double pi = std::numbers::pi;
  const double nd = static_cast<double>(n);
  const double cap = polar_cdf_inverse(d, 1.0 / nd);
  std::vector<std::size_t> counts{1};
  if (n > 2) {
    const double alpha = std::pow(sphere_area(d) / nd, 1.0 / static_cast<double>(d - 1));
    const double span = pi - 2.0 * cap;
    std::size_t collars;
    if (antipodal) {
      collars = 2 * std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(span / (2.0 * alpha))));
      collars = std::min(collars, n - 2);
    } else {
      collars = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(span / alpha)));
      collars = std::min(collars, n - 2);
    }
    const double h = span / static_cast<double>(collars);
    std::vector<double> ideal(collars);
    for (std::size_t i = 0; i < collars; ++i)
      ideal[i] = nd * (polar_cdf(d, cap + static_cast<double>(i + 1) * h) - polar_cdf(d, cap + static_cast<double>(i) * h));
    std::vector<std::size_t> c;
    if (antipodal) {
      ideal.resize(collars / 2);
      c = round_with_carry(ideal, (n - 2) / 2);
      for (std::size_t i = collars / 2; i-- > 0;) c.push_back(c[i]);
    } else {
      c = round_with_carry(ideal, n - 2);
    }
    for (std::size_t v : c)
      if (v > 0) counts.push_back(v);
  }
  counts.push_back(1);

  const std::size_t B = counts.size();
  node->offset.assign(B + 1, 0);
  for (std::size_t b = 0; b < B; ++b) node->offset[b + 1] = node->offset[b] + counts[b];
  node->bounds.assign(B + 1, 0.0);
  node->bounds[B] = pi;
  if (antipodal) {
    for (std::size_t b = 1; b <= B / 2; ++b) {
      node->bounds[b] = polar_cdf_inverse(d, static_cast<double>(node->offset[b]) / nd);
      node->bounds[B - b] = pi - node->bounds[b];
    }
    if (B % 2 == 0) node->bounds[B / 2] = pi / 2.0;
  } else {
    for (std::size_t b = 1; b < B; ++b) node->bounds[b] = polar_cdf_inverse(d, static_cast<double>(node->offset[b]) / nd);
  }

  node->child.resize(B);
  node->mirrored.assign(B, 0);
  for (std::size_t b = 0; b < B; ++b) {
    node->child[b] = plain_zone(d - 1, counts[b], cache);
    if (antipodal && b >= (B + 1) / 2) node->mirrored[b] = 1;
  }

  node->diam.assign(n, 2.0);
  for (std::size_t b = 0; b < B; ++b) {
    const double a = node->bounds[b], e = node->bounds[b + 1];
    for (std::size_t j = 0; j < counts[b]; ++j) {
      double bound;
      if (b == 0 && counts[b] == 1) bound = e <= pi / 2 ? 2.0 * std::sin(e) : 2.0;
      else if (b + 1 == B && counts[b] == 1) bound = a >= pi / 2 ? 2.0 * std::sin(a) : 2.0;
      else {
        // |x - x'|^2 = 4 sin^2((t - t')/2) + sin t sin t' |y - y'|^2
        const double s = 2.0 * std::sin((e - a) / 2.0), m = max_sin_on(a, e) * node->child[b]->diam[j];
        bound = std::sqrt(s * s + m * m);
      }
      node->diam[node->offset[b] + j] = std::min(2.0, bound);
    }
  }
  return node;
}

}  // namespace detail

/// Recursive zonal partition of S^{d-1}(R) into n cells of equal measure.
/// Polar caps hold one cell each; the collars between them are split
/// recursively on S^{d-2}. With antipodal = true (n even) the layout is
/// symmetric under x -> -x and mirror() pairs each cell with its image.
class ZonalPartition {
 public:
  ZonalPartition(std::size_t d, std::size_t n, bool antipodal = false) : antipodal_(antipodal) {
    if (d < 2) throw DomainError("zonal partitions need d >= 2");
    if (n < 1) throw DomainError("cell count must be positive");
    if (antipodal && n % 2 != 0) throw DomainError("antipodal partitions need an even cell count");
    detail::NodeCache cache;
    root_ = antipodal ? detail::build_zone(d, n, true, cache) : detail::plain_zone(d, n, cache);
    max_diameter_ = *std::max_element(root_->diam.begin(), root_->diam.end());
  }

  std::size_t dim() const { return root_->d; }
  std::size_t size() const { return root_->n; }
  bool antipodal() const { return antipodal_; }
  double max_diameter() const { return max_diameter_; }
  double cell_diameter_bound(std::size_t cell) const { return root_->diam.at(cell); }

  std::size_t locate(std::span<const double> x) const {
    if (x.size() != dim()) throw DomainError("dimension mismatch");
    return root_->locate(x);
  }
  std::size_t locate(const RealUnitVector& x) const { return locate(x.coords()); }

  /// Uniform sample from the given cell.
  RealUnitVector sample(std::size_t cell, Rng& rng) const {
    if (cell >= size()) throw DomainError("cell index out of range");
    return RealUnitVector(root_->sample(cell, rng));
  }

  /// Index of the antipodal image of a cell.
  std::size_t mirror(std::size_t cell) const {
    if (!antipodal_) throw DomainError("partition is not antipodally symmetric");
    if (root_->d == 2) return (cell + size() / 2) % size();
    if (size() == 1) return cell;
    const auto& off = root_->offset;
    const std::size_t b = static_cast<std::size_t>(std::upper_bound(off.begin(), off.end(), cell) - off.begin() - 1);
    const std::size_t mb = root_->bands() - 1 - b;
    return off[mb] + (cell - off[b]);
  }

 private:
  std::shared_ptr<const detail::ZoneNode> root_;
  bool antipodal_ = false;
  double max_diameter_ = 2.0;
};

/// Equal-measure partition of S^{k-1}(C), built on S^{2k-1}(R) through the
/// coordinate isometry, with one seeded representative per cell.
struct SpherePartition {
  std::size_t k = 0;
  std::size_t n = 0;
  double max_diameter = 2.0;
  std::shared_ptr<const ZonalPartition> cells;
  std::vector<ComplexUnitVector> representatives;

  std::size_t locate(const ComplexUnitVector& z) const { return cells->locate(complex_to_real(z)); }
  ComplexUnitVector sample(std::size_t cell, Rng& rng) const { return real_to_complex(cells->sample(cell, rng)); }
};

/// Partition without a diameter requirement.
inline SpherePartition make_sphere_partition(std::size_t k, std::size_t n, std::uint64_t seed) {
  if (k < 1) throw DomainError("k must be positive");
  SpherePartition out;
  out.k = k;
  out.n = n;
  out.cells = std::make_shared<const ZonalPartition>(2 * k, n);
  out.max_diameter = out.cells->max_diameter();
  out.representatives.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = make_stream(seed, {0x9A27ULL, i});
    out.representatives.push_back(out.sample(i, rng));
  }
  return out;
}

inline SpherePartition partition_sphere(std::size_t k, std::size_t n, double delta, std::uint64_t seed) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (n < 1) throw DomainError("cell count must be positive");
  // Cheap necessary check before building: n cells of diameter <= delta
  // need at least area(S^{2k-1}) / area(cap of radius delta) cells.
  if (delta < 2.0) {
    const double half_angle = 2.0 * std::asin(std::min(1.0, delta / 2.0));
    const double cap = detail::polar_cdf(2 * k, half_angle);
    if (cap > 0.0 && static_cast<double>(n) < 1.0 / cap)
      throw InfeasiblePartition("too few cells for the requested diameter");
  }
  SpherePartition out = make_sphere_partition(k, n, seed);
  if (out.max_diameter > delta + kGeomTol)
    throw InfeasiblePartition("partition scheme cannot reach diameter " + std::to_string(delta) + " with " +
                              std::to_string(n) + " cells (bound " + std::to_string(out.max_diameter) + ")");
  return out;
}

}  // namespace rtlab
