#pragma once
// k-nearest-neighbour group prediction and permutation feature importance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcela/ordering.hpp"
#include "hcela/sample.hpp"

namespace hcela {

struct RecordMeta {
  int function_id = 0;
  std::uint64_t instance = 0;
  std::size_t dimension = 0;
  std::string sampler;
  std::string ordering;
  std::uint64_t seed = 0;
};

struct FeatureRecord {
  std::vector<double> features;
  int label = 0;
  RecordMeta meta;
};

using Dataset = std::vector<FeatureRecord>;

// z-score coefficients fitted on training data only. Zero-variance columns use a unit scale.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Dataset& data) {
    if (data.empty()) throw DomainError("Standardizer: empty training set");
    const std::size_t f = data.front().features.size();
    Standardizer s{std::vector<double>(f, 0.0), std::vector<double>(f, 0.0)};
    for (const auto& r : data) {
      if (r.features.size() != f) throw DomainError("Standardizer: inconsistent feature count");
      for (std::size_t j = 0; j < f; ++j) {
        if (!std::isfinite(r.features[j])) throw DomainError("Standardizer: non-finite feature in training data");
        s.mean[j] += r.features[j];
      }
    }
    const double n = static_cast<double>(data.size());
    for (auto& m : s.mean) m /= n;
    for (const auto& r : data) {
      for (std::size_t j = 0; j < f; ++j) {
        const double t = r.features[j] - s.mean[j];
        s.scale[j] += t * t;
      }
    }
    for (auto& v : s.scale) {
      v = std::sqrt(v / n);
      if (!(v > 0.0)) v = 1.0;
    }
    return s;
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != mean.size()) throw DomainError("Standardizer: feature count mismatch");
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / scale[j];
    return z;
  }
};

class KnnClassifier {
 public:
  KnnClassifier(const Dataset& train, std::size_t k) : k_(k), scaler_(Standardizer::fit(train)) {
    if (k == 0) throw DomainError("knn: k must be >= 1");
    if (k > train.size()) throw DomainError("knn: k exceeds training set size");
    points_ = PointSet(scaler_.mean.size());
    points_.reserve(train.size());
    labels_.reserve(train.size());
    for (const auto& r : train) {
      points_.push_back(scaler_.apply(r.features));
      labels_.push_back(r.label);
    }
  }

  // Majority vote among the k nearest; label ties go to the smaller summed distance, then the lower label.
  int predict(std::span<const double> features) const {
    const auto z = scaler_.apply(features);
    std::vector<std::pair<double, std::size_t>> dist(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) dist[i] = {distance(z, points_[i]), i};
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
    std::map<int, std::pair<std::size_t, double>> votes;  // label -> (count, summed distance)
    for (std::size_t i = 0; i < k_; ++i) {
      auto& v = votes[labels_[dist[i].second]];
      ++v.first;
      v.second += dist[i].first;
    }
    int best = votes.begin()->first;
    for (const auto& [label, v] : votes) {
      const auto& b = votes.at(best);
      if (v.first > b.first || (v.first == b.first && v.second < b.second)) best = label;
    }
    return best;
  }

  double accuracy(const Dataset& test) const {
    if (test.empty()) throw DomainError("knn: empty test set");
    std::size_t hits = 0;
    for (const auto& r : test) hits += predict(r.features) == r.label ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(test.size());
  }

  const Standardizer& scaler() const { return scaler_; }
  std::size_t k() const { return k_; }

 private:
  std::size_t k_;
  Standardizer scaler_;
  PointSet points_;
  std::vector<int> labels_;
};

inline int knn_predict(const Dataset& train, std::span<const double> query, std::size_t k) {
  if (train.empty()) throw DomainError("knn_predict: empty training set");
  return KnnClassifier(train, k).predict(query);
}

// All records of the named instances go to the test side.
inline std::pair<Dataset, Dataset> holdout_split(const Dataset& data, const std::set<std::uint64_t>& test_instances) {
  std::set<std::uint64_t> present;
  for (const auto& r : data) present.insert(r.meta.instance);
  for (auto i : test_instances) {
    if (!present.count(i)) throw DomainError("holdout_split: instance " + std::to_string(i) + " not in dataset");
  }
  Dataset train, test;
  for (const auto& r : data) (test_instances.count(r.meta.instance) ? test : train).push_back(r);
  if (train.empty() || test.empty()) throw DomainError("holdout_split: split leaves an empty side");
  return {std::move(train), std::move(test)};
}

struct FeatureImportance {
  std::string feature;
  double mean_drop = 0.0;  // permuted accuracy minus base accuracy
  double std_drop = 0.0;
  std::vector<double> drops;  // one per repetition
};

struct ImportanceReport {
  double base_accuracy = 0.0;
  std::vector<FeatureImportance> features;
};

inline ImportanceReport permutation_importance(const Dataset& train, const Dataset& test, std::size_t k,
                                               std::size_t repetitions, Rng& rng,
                                               const std::vector<std::string>& names = {}) {
  if (repetitions < 1) throw DomainError("permutation_importance: repetitions must be >= 1");
  if (test.empty()) throw DomainError("permutation_importance: empty test set");
  const KnnClassifier model(train, k);
  ImportanceReport report;
  report.base_accuracy = model.accuracy(test);
  const std::size_t nf = test.front().features.size();
  for (std::size_t j = 0; j < nf; ++j) {
    std::vector<double> drops;
    drops.reserve(repetitions);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto perm = random_permutation(test.size(), rng);
      Dataset shuffled = test;
      for (std::size_t i = 0; i < test.size(); ++i) shuffled[i].features[j] = test[perm[i]].features[j];
      drops.push_back(model.accuracy(shuffled) - report.base_accuracy);
    }
    const double mean = std::accumulate(drops.begin(), drops.end(), 0.0) / static_cast<double>(repetitions);
    double var = 0.0;
    for (double v : drops) var += (v - mean) * (v - mean);
    const double sd = repetitions > 1 ? std::sqrt(var / static_cast<double>(repetitions - 1)) : 0.0;
    report.features.push_back({j < names.size() ? names[j] : "f" + std::to_string(j), mean, sd, drops});
  }
  return report;
}

}  // namespace hcela
