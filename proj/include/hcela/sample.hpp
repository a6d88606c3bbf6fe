#pragma once
// Core value types shared by the samplers, orderings and feature code.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hcela/error.hpp"

namespace hcela {

using Rng = std::mt19937_64;

// SplitMix64 finaliser; used to derive independent child streams from a parent seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t task_index) {
  return mix64(mix64(parent) ^ mix64(task_index + 0x632be59bd9b4e019ull));
}

// Row-major n x d matrix of points.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::size_t n) : dim_(dim), data_(dim * n, 0.0) {}
  PointSet(std::size_t dim, std::vector<double> data) : dim_(dim), data_(std::move(data)) {
    if (dim_ == 0 || data_.size() % dim_ != 0) throw DomainError("PointSet: data size is not a multiple of dim");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return data_.empty(); }

  std::span<double> operator[](std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> operator[](std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  void push_back(std::span<const double> x) {
    if (x.size() != dim_) throw DomainError("PointSet::push_back: dimension mismatch");
    data_.insert(data_.end(), x.begin(), x.end());
  }
  void reserve(std::size_t n) { data_.reserve(n * dim_); }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

struct SearchSpace {
  std::vector<double> lower;
  std::vector<double> upper;

  static SearchSpace cube(std::size_t dim, double lo, double hi) {
    return SearchSpace{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
  }

  std::size_t dim() const { return lower.size(); }

  void validate() const {
    if (lower.empty()) throw DomainError("SearchSpace: dimension must be >= 1");
    if (lower.size() != upper.size()) throw DomainError("SearchSpace: bound lengths differ");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(lower[i] < upper[i])) throw DomainError("SearchSpace: lower must be < upper on every axis");
    }
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
    }
    return true;
  }
};

// A sequence of points whose order may carry spatial meaning, optionally with fitness values.
struct OrderedSample {
  PointSet points;
  std::optional<std::vector<double>> fitness;
  bool ordered = false;

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.dim(); }
  bool has_fitness() const { return fitness.has_value(); }

  void validate() const {
    if (fitness && fitness->size() != points.size()) {
      throw DomainError("OrderedSample: fitness length differs from point count");
    }
  }
};

// Applies a permutation: out[i] = in[perm[i]], carrying fitness along.
inline OrderedSample permuted(const OrderedSample& in, std::span<const std::size_t> perm, bool ordered) {
  OrderedSample out;
  out.points = PointSet(in.dim());
  out.points.reserve(perm.size());
  for (auto i : perm) out.points.push_back(in.points[i]);
  if (in.fitness) {
    std::vector<double> f;
    f.reserve(perm.size());
    for (auto i : perm) f.push_back((*in.fitness)[i]);
    out.fitness = std::move(f);
  }
  out.ordered = ordered;
  return out;
}

}  // namespace hcela
