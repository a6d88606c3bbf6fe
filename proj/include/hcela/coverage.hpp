#pragma once
// Search-space coverage: Hausdorff distance to a reference set, Friedman mean ranks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "hcela/sample.hpp"

namespace hcela {

struct CoverageResult {
  std::size_t dimension = 0;
  std::size_t sample_size = 0;
  std::string sampler;
  std::size_t run = 0;
  double hausdorff = 0.0;
};

// max over a of the distance to the closest point of b. The inner scan stops as
// soon as it finds a point closer than the running maximum, since that a-point
// can no longer raise the result.
inline double directed_hausdorff(const PointSet& a, const PointSet& b) {
  double worst = 0.0;  // squared
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto p = a[i];
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double dd = squared_distance(p, b[j]);
      if (dd < nearest) {
        nearest = dd;
        if (nearest <= worst) break;
      }
    }
    worst = std::max(worst, nearest);
  }
  return std::sqrt(worst);
}

inline double hausdorff_distance(const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) throw DomainError("hausdorff_distance: point sets must be non-empty");
  if (a.dim() != b.dim()) throw DomainError("hausdorff_distance: dimension mismatch");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

// Mean over a of the distance to the closest point of b.
inline double mean_nearest_distance(const PointSet& a, const PointSet& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto p = a[i];
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) nearest = std::min(nearest, squared_distance(p, b[j]));
    sum += std::sqrt(nearest);
  }
  return sum / static_cast<double>(a.size());
}

// Averaged Hausdorff distance (p = 1): max of the two mean nearest distances.
// This is the coverage figure the sampler comparison reports; it is far less
// dominated by a single outlying reference point than the max-min form.
inline double averaged_hausdorff_distance(const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) throw DomainError("averaged_hausdorff_distance: point sets must be non-empty");
  if (a.dim() != b.dim()) throw DomainError("averaged_hausdorff_distance: dimension mismatch");
  return std::max(mean_nearest_distance(a, b), mean_nearest_distance(b, a));
}

enum class CoverageMetric { Averaged, Classic };

inline double coverage_distance(const PointSet& a, const PointSet& b, CoverageMetric metric) {
  return metric == CoverageMetric::Averaged ? averaged_hausdorff_distance(a, b) : hausdorff_distance(a, b);
}

// Ranks within one block, ascending (1 = smallest), ties share the average rank.
inline std::vector<double> average_ranks(const std::vector<double>& row) {
  const std::size_t k = row.size();
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
  std::vector<double> ranks(k);
  for (std::size_t i = 0; i < k;) {
    std::size_t j = i;
    while (j + 1 < k && row[idx[j + 1]] == row[idx[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
    i = j + 1;
  }
  return ranks;
}

// rows = blocks, columns = strategies. Missing cells are encoded as NaN and rejected.
inline std::vector<double> friedman_mean_ranks(const std::vector<std::vector<double>>& results) {
  if (results.empty()) throw DomainError("friedman_mean_ranks: need at least one block");
  const std::size_t k = results.front().size();
  if (k < 2) throw DomainError("friedman_mean_ranks: need at least two strategies");
  std::vector<double> sums(k, 0.0);
  for (const auto& row : results) {
    if (row.size() != k) throw DomainError("friedman_mean_ranks: missing cells (ragged rows)");
    for (double v : row) {
      if (std::isnan(v)) throw DomainError("friedman_mean_ranks: missing cell");
    }
    const auto r = average_ranks(row);
    for (std::size_t c = 0; c < k; ++c) sums[c] += r[c];
  }
  for (auto& s : sums) s /= static_cast<double>(results.size());
  return sums;
}

}  // namespace hcela
