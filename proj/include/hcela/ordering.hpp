#pragma once
// Orderings that turn an unordered sample into a walk, plus step-size diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hcela/hilbert.hpp"
#include "hcela/sample.hpp"

namespace hcela {

enum class OrderingStrategy { HilbertOrder, NearestNeighbour, RandomOrder };

inline std::string_view to_string(OrderingStrategy s) {
  switch (s) {
    case OrderingStrategy::HilbertOrder: return "hilbert";
    case OrderingStrategy::NearestNeighbour: return "nn";
    case OrderingStrategy::RandomOrder: return "random";
  }
  return "?";
}

inline OrderingStrategy parse_ordering(std::string_view s) {
  if (s == "hilbert" || s == "hc") return OrderingStrategy::HilbertOrder;
  if (s == "nn") return OrderingStrategy::NearestNeighbour;
  if (s == "random" || s == "rnd") return OrderingStrategy::RandomOrder;
  throw DomainError("unknown ordering strategy: " + std::string(s));
}

// Grid cell of x on a 2^p grid over the box, floor-binned, upper boundary clamped into the last cell.
inline GridPoint quantise(std::span<const double> x, const SearchSpace& space, unsigned order) {
  const double cells = std::ldexp(1.0, static_cast<int>(order));
  const auto last = static_cast<std::uint32_t>(cells - 1.0);
  GridPoint g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (x[i] - space.lower[i]) / (space.upper[i] - space.lower[i]);
    const double c = std::floor(u * cells);
    g[i] = c >= cells ? last : (c < 0.0 ? 0u : static_cast<std::uint32_t>(c));
  }
  return g;
}

// Permutation that sorts the sample by Hilbert index at order ceil(log2(n+1)); stable on ties.
inline std::vector<std::size_t> hilbert_permutation(const PointSet& points, const SearchSpace& space) {
  space.validate();
  if (points.empty()) throw DomainError("order_hilbert: sample is empty");
  if (points.dim() != space.dim()) throw DomainError("order_hilbert: dimension mismatch");
  const std::size_t n = points.size();
  const CurveParams params{space.dim(), min_order_for_sample(n)};
  std::vector<HilbertIndex> keys;
  keys.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!space.contains(points[k])) throw DomainError("order_hilbert: point " + std::to_string(k) + " outside space");
    keys.push_back(point_to_index(params, quantise(points[k], space, params.order)));
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return perm;
}

inline OrderedSample order_hilbert(const OrderedSample& sample, const SearchSpace& space) {
  sample.validate();
  const auto perm = hilbert_permutation(sample.points, space);
  return permuted(sample, perm, true);
}

// Greedy nearest-neighbour chain from `start`; ties go to the lowest original position.
inline std::vector<std::size_t> nearest_neighbour_permutation(const PointSet& points, std::size_t start = 0) {
  const std::size_t n = points.size();
  if (n == 0) throw DomainError("order_nearest_neighbour: sample is empty");
  if (start >= n) throw DomainError("order_nearest_neighbour: start index out of range");
  // `remaining` keeps unvisited indices in ascending order so the first minimum wins ties.
  std::vector<std::size_t> remaining;
  remaining.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != start) remaining.push_back(i);
  }
  std::vector<std::size_t> perm;
  perm.reserve(n);
  perm.push_back(start);
  std::size_t current = start;
  while (!remaining.empty()) {
    const auto here = points[current];
    std::size_t best_pos = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < remaining.size(); ++j) {
      const double dd = squared_distance(here, points[remaining[j]]);
      if (dd < best) {
        best = dd;
        best_pos = j;
      }
    }
    current = remaining[best_pos];
    perm.push_back(current);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return perm;
}

inline OrderedSample order_nearest_neighbour(const OrderedSample& sample, std::size_t start = 0) {
  sample.validate();
  const auto perm = nearest_neighbour_permutation(sample.points, start);
  return permuted(sample, perm, true);
}

// Same as above with the start drawn uniformly from the sample.
inline OrderedSample order_nearest_neighbour(const OrderedSample& sample, Rng& rng) {
  if (sample.size() == 0) throw DomainError("order_nearest_neighbour: sample is empty");
  const auto start = std::uniform_int_distribution<std::size_t>(0, sample.size() - 1)(rng);
  return order_nearest_neighbour(sample, start);
}

inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Explicit Fisher-Yates so the permutation does not depend on the standard library's shuffle.
  for (std::size_t i = n; i > 1; --i) {
    const auto j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

inline OrderedSample order_random(const OrderedSample& sample, Rng& rng) {
  sample.validate();
  if (sample.size() == 0) throw DomainError("order_random: sample is empty");
  const auto perm = random_permutation(sample.size(), rng);
  return permuted(sample, perm, true);
}

inline OrderedSample apply_ordering(const OrderedSample& sample, OrderingStrategy strategy, const SearchSpace& space,
                                    Rng& rng) {
  switch (strategy) {
    case OrderingStrategy::HilbertOrder: return order_hilbert(sample, space);
    case OrderingStrategy::NearestNeighbour: return order_nearest_neighbour(sample);
    case OrderingStrategy::RandomOrder: return order_random(sample, rng);
  }
  throw DomainError("unknown ordering strategy");
}

// Euclidean distances between consecutive points; length n - 1.
inline std::vector<double> step_sizes(const PointSet& points) {
  if (points.size() < 2) throw DomainError("step_sizes: need at least 2 points");
  std::vector<double> steps(points.size() - 1);
  for (std::size_t k = 0; k + 1 < points.size(); ++k) steps[k] = distance(points[k], points[k + 1]);
  return steps;
}

inline std::vector<double> step_sizes(const OrderedSample& sample) { return step_sizes(sample.points); }

}  // namespace hcela
