#pragma once
// Samplers over a box-bounded continuous search space.
//
// All samplers are pure functions of their arguments and the state of the
// supplied generator. Hilbert and random-walk samples come out ordered;
// Latin hypercube and uniform samples do not.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>
#include <vector>

#include "hcela/hilbert.hpp"
#include "hcela/sample.hpp"

namespace hcela {

enum class Stochasticity { EdgeUniform, VertexGaussian };

struct StochasticityStrategy {
  Stochasticity variant = Stochasticity::VertexGaussian;
  double sigma = 0.3;  // grid units, VertexGaussian only

  static StochasticityStrategy edge_uniform() { return {Stochasticity::EdgeUniform, 0.0}; }
  static StochasticityStrategy vertex_gaussian(double sigma = 0.3) { return {Stochasticity::VertexGaussian, sigma}; }

  void validate() const {
    if (variant == Stochasticity::VertexGaussian && !(sigma > 0.0)) {
      throw DomainError("VertexGaussian sigma must be > 0");
    }
  }
};

inline constexpr unsigned kMinSamplerOrder = 3;

// Smallest order p >= 3 whose curve has at least n vertices.
inline unsigned hilbert_sampler_order(std::size_t dim, std::uint64_t n) {
  if (dim < 1) throw DomainError("hilbert_sampler_order: dimension must be >= 1");
  unsigned p = kMinSamplerOrder;
  while (dim * p < 64 && (std::uint64_t{1} << (dim * p)) < n) ++p;
  if (p > kMaxOrder || dim * p > kMaxIndexBits) {
    throw CapacityError("hilbert sampler: requested sample exceeds supported curve size");
  }
  return p;
}

namespace detail {

// Uniform integer in [0, bound], bound >= 0, by rejection on the minimal bit width.
inline HilbertIndex uniform_index_inclusive(const HilbertIndex& bound, Rng& rng) {
  if (bound == 0) return 0;
  const std::size_t bits = boost::multiprecision::msb(bound) + 1;
  const std::size_t limbs = (bits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(bits - (limbs - 1) * 64);
  const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
  std::vector<std::uint64_t> words(limbs);
  for (;;) {
    for (auto& w : words) w = rng();
    words[0] &= top_mask;
    HilbertIndex v;
    boost::multiprecision::import_bits(v, words.begin(), words.end(), 64);
    if (v <= bound) return v;
  }
}

// n distinct integers drawn uniformly from [0, 2^bits), sorted ascending (Floyd's algorithm).
inline std::vector<HilbertIndex> distinct_indices(std::size_t bits, std::size_t n, Rng& rng) {
  if (bits < 64) {
    const std::uint64_t total = std::uint64_t{1} << bits;
    if (n > total) throw CapacityError("hilbert sampler: more points requested than curve vertices");
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(n * 2);
    for (std::uint64_t j = total - n; j < total; ++j) {
      const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> sorted(chosen.begin(), chosen.end());
    std::sort(sorted.begin(), sorted.end());
    return {sorted.begin(), sorted.end()};
  }
  HilbertIndex total = HilbertIndex(1) << bits;
  std::set<HilbertIndex> chosen;
  for (HilbertIndex j = total - n; j < total; ++j) {
    HilbertIndex t = uniform_index_inclusive(j, rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

// Grid cell g covers [g, g + 1) in cell units; cell centres sit at g + 0.5.
inline void scale_grid_point(std::span<const double> grid, const SearchSpace& space, double cells,
                             std::span<double> out) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = space.upper[i] - space.lower[i];
    out[i] = std::clamp(space.lower[i] + (grid[i] + 0.5) * w / cells, space.lower[i], space.upper[i]);
  }
}

inline double reflect_into(double x, double lo, double hi) {
  const double w = hi - lo;
  // Fold x into [lo, lo + 2w) then mirror the upper half.
  double t = std::fmod(x - lo, 2.0 * w);
  if (t < 0) t += 2.0 * w;
  if (t > w) t = 2.0 * w - t;
  return std::clamp(lo + t, lo, hi);
}

}  // namespace detail

// Sub-samples n distinct vertices of a Hilbert curve (order >= 3), keeps them in
// curve order, perturbs them in grid units and maps each grid vertex to the
// centre of its cell in the box (2^p cells per axis).
inline OrderedSample hilbert_sample(const SearchSpace& space, std::size_t n, const StochasticityStrategy& strategy,
                                    Rng& rng) {
  space.validate();
  strategy.validate();
  if (n < 2) throw DomainError("hilbert_sample: n must be >= 2");
  const std::size_t d = space.dim();
  const CurveParams params{d, hilbert_sampler_order(d, n)};
  const auto indices = detail::distinct_indices(params.index_bits(), n, rng);
  const double cells = static_cast<double>(params.side_max()) + 1.0;

  PointSet vertices(d, n);
  for (std::size_t k = 0; k < n; ++k) {
    const GridPoint g = index_to_point(params, indices[k]);
    auto row = vertices[k];
    for (std::size_t i = 0; i < d; ++i) row[i] = static_cast<double>(g[i]);
  }

  OrderedSample out{PointSet(d, n), std::nullopt, true};
  std::vector<double> grid(d);
  if (strategy.variant == Stochasticity::VertexGaussian) {
    std::normal_distribution<double> noise(0.0, strategy.sigma);
    for (std::size_t k = 0; k < n; ++k) {
      auto v = vertices[k];
      for (std::size_t i = 0; i < d; ++i) grid[i] = std::clamp(v[i] + noise(rng), 0.0, cells - 1.0);
      detail::scale_grid_point(grid, space, cells, out.points[k]);
    }
  } else {
    // First vertex as-is, then one point on each edge between consecutive selected vertices.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    detail::scale_grid_point(vertices[0], space, cells, out.points[0]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double r = unit(rng);
      auto a = vertices[k];
      auto b = vertices[k + 1];
      for (std::size_t i = 0; i < d; ++i) grid[i] = r * a[i] + (1.0 - r) * b[i];
      detail::scale_grid_point(grid, space, cells, out.points[k + 1]);
    }
  }
  return out;
}

inline OrderedSample lhs_sample(const SearchSpace& space, std::size_t n, Rng& rng) {
  space.validate();
  if (n < 1) throw DomainError("lhs_sample: n must be >= 1");
  const std::size_t d = space.dim();
  OrderedSample out{PointSet(d, n), std::nullopt, false};
  std::vector<std::size_t> strata(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < d; ++i) {
    std::iota(strata.begin(), strata.end(), std::size_t{0});
    std::shuffle(strata.begin(), strata.end(), rng);
    const double w = space.upper[i] - space.lower[i];
    for (std::size_t k = 0; k < n; ++k) {
      const double u = (static_cast<double>(strata[k]) + unit(rng)) / static_cast<double>(n);
      out.points[k][i] = std::min(space.lower[i] + u * w, space.upper[i]);
    }
  }
  return out;
}

// Bounded random walk: uniform start, per-coordinate steps in [-max_step, max_step], reflected at walls.
inline OrderedSample random_walk_sample(const SearchSpace& space, std::size_t n, double max_step, Rng& rng) {
  space.validate();
  if (n < 1) throw DomainError("random_walk_sample: n must be >= 1");
  if (!(max_step > 0.0)) throw DomainError("random_walk_sample: max_step must be > 0");
  const std::size_t d = space.dim();
  OrderedSample out{PointSet(d, n), std::nullopt, true};
  for (std::size_t i = 0; i < d; ++i) {
    out.points[0][i] = std::uniform_real_distribution<double>(space.lower[i], space.upper[i])(rng);
  }
  std::uniform_real_distribution<double> step(-max_step, max_step);
  for (std::size_t k = 1; k < n; ++k) {
    auto prev = out.points[k - 1];
    auto cur = out.points[k];
    for (std::size_t i = 0; i < d; ++i) {
      cur[i] = detail::reflect_into(prev[i] + step(rng), space.lower[i], space.upper[i]);
    }
  }
  return out;
}

inline OrderedSample uniform_sample(const SearchSpace& space, std::size_t n, Rng& rng) {
  space.validate();
  if (n < 1) throw DomainError("uniform_sample: n must be >= 1");
  const std::size_t d = space.dim();
  OrderedSample out{PointSet(d, n), std::nullopt, false};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      out.points[k][i] = std::uniform_real_distribution<double>(space.lower[i], space.upper[i])(rng);
    }
  }
  return out;
}

}  // namespace hcela
