#pragma once
// Experiment sweeps behind the command-line tool: coverage, timing, feature
// extraction and classification. Each sweep is a pure function of its
// configuration (timings aside); cells run concurrently on derived seeds and
// results are collected in cell order so output is independent of scheduling.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "hcela/benchmarks.hpp"
#include "hcela/classify.hpp"
#include "hcela/coverage.hpp"
#include "hcela/csv.hpp"
#include "hcela/features.hpp"
#include "hcela/ordering.hpp"
#include "hcela/sampling.hpp"

namespace hcela {

enum class SamplerKind { Hilbert, Lhs, RandomWalk, Uniform };

inline std::string_view to_string(SamplerKind s) {
  switch (s) {
    case SamplerKind::Hilbert: return "hilbert";
    case SamplerKind::Lhs: return "lhs";
    case SamplerKind::RandomWalk: return "random_walk";
    case SamplerKind::Uniform: return "uniform";
  }
  return "?";
}

inline SamplerKind parse_sampler(std::string_view s) {
  if (s == "hilbert" || s == "hc") return SamplerKind::Hilbert;
  if (s == "lhs") return SamplerKind::Lhs;
  if (s == "random_walk" || s == "rw") return SamplerKind::RandomWalk;
  if (s == "uniform") return SamplerKind::Uniform;
  throw DomainError("unknown sampler: " + std::string(s));
}

inline bool is_ordered_sampler(SamplerKind s) { return s == SamplerKind::Hilbert || s == SamplerKind::RandomWalk; }

struct SamplerOptions {
  StochasticityStrategy stochasticity{};
  double max_step = 1.0;
};

inline OrderedSample draw_sample(SamplerKind kind, const SearchSpace& space, std::size_t n, Rng& rng,
                                 const SamplerOptions& opts = {}) {
  switch (kind) {
    case SamplerKind::Hilbert: return hilbert_sample(space, n, opts.stochasticity, rng);
    case SamplerKind::Lhs: return lhs_sample(space, n, rng);
    case SamplerKind::RandomWalk: return random_walk_sample(space, n, opts.max_step, rng);
    case SamplerKind::Uniform: return uniform_sample(space, n, rng);
  }
  throw DomainError("unknown sampler");
}

struct ExperimentConfig {
  std::vector<std::size_t> dimensions{5, 10};
  std::vector<std::size_t> sample_size_multipliers{100, 316};
  std::size_t repetitions = 30;
  std::uint64_t seed = 1;
  std::vector<SamplerKind> samplers{SamplerKind::Hilbert, SamplerKind::Lhs, SamplerKind::RandomWalk};
  std::vector<OrderingStrategy> orderings{OrderingStrategy::HilbertOrder, OrderingStrategy::NearestNeighbour,
                                          OrderingStrategy::RandomOrder};
  std::string output_dir = ".";

  // Not part of the sweep grid proper, but needed to pin the experiments down.
  std::vector<std::uint64_t> instances{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  double lower = -5.0;
  double upper = 5.0;
  CoverageMetric metric = CoverageMetric::Averaged;
  bool include_control = true;
  std::size_t k = 5;
  std::size_t splits = 10;
  std::size_t importance_repetitions = 10;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (repetitions < 1) throw DomainError("config: repetitions must be >= 1");
    if (dimensions.empty() || sample_size_multipliers.empty()) throw DomainError("config: empty dims or mults");
    if (samplers.empty() || orderings.empty()) throw DomainError("config: empty sampler or ordering selection");
    if (instances.empty()) throw DomainError("config: empty instance list");
    for (auto d : dimensions) {
      if (d < 1) throw DomainError("config: dimension must be >= 1");
    }
    if (!(lower < upper)) throw DomainError("config: lower must be < upper");
  }

  SearchSpace space(std::size_t d) const { return SearchSpace::cube(d, lower, upper); }
};

// Runs fn(i) for i in [0, count) on up to `threads` workers.
inline void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Coverage

struct CoverageReport {
  std::vector<CoverageResult> runs;
  std::vector<double> classic;  // classic Hausdorff per run row, for reference
  std::vector<std::string> strategy_names;
  std::vector<double> mean_ranks;  // Friedman mean rank per sampler, same order as strategy_names
};

inline CoverageReport run_coverage(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Cell {
    std::size_t d, n, run;
  };
  std::vector<Cell> cells;
  for (auto d : cfg.dimensions) {
    for (auto m : cfg.sample_size_multipliers) {
      for (std::size_t r = 0; r < cfg.repetitions; ++r) cells.push_back({d, m * d, r});
    }
  }
  const std::size_t ns = cfg.samplers.size();
  std::vector<std::vector<CoverageResult>> out(cells.size());
  std::vector<std::vector<double>> classic(cells.size());
  parallel_for(cells.size(), cfg.threads, [&](std::size_t c) {
    const auto& cell = cells[c];
    const auto space = cfg.space(cell.d);
    const std::uint64_t cell_seed = derive_seed(derive_seed(derive_seed(cfg.seed, cell.d), cell.n), cell.run);
    Rng ref_rng(derive_seed(cell_seed, 0));
    const auto reference = uniform_sample(space, cell.n, ref_rng);
    for (std::size_t s = 0; s < ns; ++s) {
      Rng rng(derive_seed(cell_seed, s + 1 + static_cast<std::size_t>(cfg.samplers[s]) * 16));
      const auto sample = draw_sample(cfg.samplers[s], space, cell.n, rng);
      out[c].push_back({cell.d, cell.n, std::string(to_string(cfg.samplers[s])), cell.run,
                        coverage_distance(sample.points, reference.points, cfg.metric)});
      classic[c].push_back(cfg.metric == CoverageMetric::Classic ? out[c].back().hausdorff
                                                                 : hausdorff_distance(sample.points, reference.points));
    }
  });
  CoverageReport report;
  std::vector<std::vector<double>> blocks;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> block;
    for (std::size_t s = 0; s < ns; ++s) {
      report.runs.push_back(out[c][s]);
      report.classic.push_back(classic[c][s]);
      block.push_back(out[c][s].hausdorff);
    }
    blocks.push_back(std::move(block));
  }
  for (auto s : cfg.samplers) report.strategy_names.emplace_back(to_string(s));
  if (ns >= 2) report.mean_ranks = friedman_mean_ranks(blocks);
  return report;
}

struct CoverageSummaryRow {
  std::size_t dimension, sample_size;
  std::string sampler;
  double mean, stddev;
};

inline std::vector<CoverageSummaryRow> summarise_coverage(const std::vector<CoverageResult>& runs) {
  std::map<std::tuple<std::size_t, std::size_t, std::string>, std::vector<double>> groups;
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> order;
  for (const auto& r : runs) {
    auto key = std::make_tuple(r.dimension, r.sample_size, r.sampler);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(r.hausdorff);
  }
  std::vector<CoverageSummaryRow> out;
  for (const auto& key : order) {
    const auto& v = groups[key];
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), mean, sd});
  }
  return out;
}

inline void write_coverage_csvs(const CoverageReport& report, const std::string& dir, const Provenance& prov) {
  {
    auto os = open_output(dir + "/coverage_runs.csv");
    write_provenance(os, prov);
    os << "dimension,sample_size,sampler,run,hausdorff,classic_hausdorff\n";
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
      const auto& r = report.runs[i];
      os << r.dimension << ',' << r.sample_size << ',' << r.sampler << ',' << r.run << ',' << format_double(r.hausdorff)
         << ',' << format_double(report.classic[i]) << '\n';
    }
  }
  {
    auto os = open_output(dir + "/coverage_summary.csv");
    write_provenance(os, prov);
    os << "dimension,sample_size,sampler,mean,std\n";
    for (const auto& r : summarise_coverage(report.runs)) {
      os << r.dimension << ',' << r.sample_size << ',' << r.sampler << ',' << format_double(r.mean) << ','
         << format_double(r.stddev) << '\n';
    }
  }
  {
    auto os = open_output(dir + "/coverage_ranks.csv");
    write_provenance(os, prov);
    os << "sampler,friedman_mean_rank\n";
    for (std::size_t s = 0; s < report.mean_ranks.size(); ++s) {
      os << report.strategy_names[s] << ',' << format_double(report.mean_ranks[s]) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Timing

enum class TimingMode { Sampling, Ordering };

struct TimingRow {
  std::string mode;
  std::string strategy;
  std::size_t d = 0, n = 0, run = 0;
  double seconds = 0.0;
};

template <class F>
double time_seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

// Sequential on purpose: concurrent timing runs would contend for cores.
inline std::vector<TimingRow> run_timing(const ExperimentConfig& cfg, TimingMode mode) {
  cfg.validate();
  std::vector<TimingRow> rows;
  for (auto d : cfg.dimensions) {
    const auto space = cfg.space(d);
    for (auto m : cfg.sample_size_multipliers) {
      const std::size_t n = m * d;
      for (std::size_t r = 0; r < cfg.repetitions; ++r) {
        const std::uint64_t cell_seed = derive_seed(derive_seed(derive_seed(cfg.seed, d), n), r);
        if (mode == TimingMode::Sampling) {
          for (auto s : cfg.samplers) {
            Rng rng(derive_seed(cell_seed, static_cast<std::uint64_t>(s)));
            OrderedSample sample;
            const double t = time_seconds([&] { sample = draw_sample(s, space, n, rng); });
            rows.push_back({"sampling", std::string(to_string(s)), d, n, r, t});
          }
        } else {
          Rng rng(cell_seed);
          const auto sample = lhs_sample(space, n, rng);
          for (auto o : cfg.orderings) {
            Rng order_rng(derive_seed(cell_seed, static_cast<std::uint64_t>(o) + 1));
            OrderedSample ordered;
            const double t = time_seconds([&] { ordered = apply_ordering(sample, o, space, order_rng); });
            rows.push_back({"ordering", std::string(to_string(o)), d, n, r, t});
          }
        }
      }
    }
  }
  return rows;
}

inline void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows, const Provenance& prov) {
  write_provenance(os, prov);
  os << "mode,strategy,d,n,run,seconds\n";
  for (const auto& r : rows) {
    os << r.mode << ',' << r.strategy << ',' << r.d << ',' << r.n << ',' << r.run << ',' << format_double(r.seconds)
       << '\n';
  }
}

// ---------------------------------------------------------------------------
// Features

struct FeatureRow {
  int function = 0;
  int group = 0;
  std::uint64_t instance = 0;
  std::size_t dim = 0;
  std::string sampler;
  std::string ordering;
  std::uint64_t seed = 0;
  IcFeatures features;
};

inline constexpr const char* kFeatureHeader =
    "function,group,instance,dim,sampler,ordering,seed,eps_s,eps_max,eps_ratio,h_max,m0";

inline void write_feature_row(std::ostream& os, const FeatureRow& r) {
  os << r.function << ',' << r.group << ',' << r.instance << ',' << r.dim << ',' << r.sampler << ',' << r.ordering
     << ',' << r.seed << ',' << format_double(r.features.eps_s) << ',' << format_double(r.features.eps_max) << ','
     << format_double(r.features.eps_ratio) << ',' << format_double(r.features.h_max) << ','
     << format_double(r.features.m0) << '\n';
}

inline void write_features_csv(std::ostream& os, const std::vector<FeatureRow>& rows, const Provenance& prov) {
  write_provenance(os, prov);
  os << kFeatureHeader << '\n';
  for (const auto& r : rows) write_feature_row(os, r);
}

inline std::vector<FeatureRow> read_features_csv(std::istream& is) {
  const auto rows = read_csv_rows(is);
  if (rows.empty()) throw DomainError("feature csv: missing header");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kFeatureHeader) throw DomainError("feature csv: unexpected header '" + header + "'");
  std::vector<FeatureRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& c = rows[r];
    if (c.size() != 12) throw DomainError("feature csv: row " + std::to_string(r) + " has wrong width");
    FeatureRow f;
    f.function = std::stoi(c[0]);
    f.group = std::stoi(c[1]);
    f.instance = std::stoull(c[2]);
    f.dim = std::stoull(c[3]);
    f.sampler = c[4];
    f.ordering = c[5];
    f.seed = std::stoull(c[6]);
    f.features.eps_s = parse_double(c[7]);
    f.features.eps_max = parse_double(c[8]);
    f.features.eps_ratio = parse_double(c[9]);
    f.features.h_max = parse_double(c[10]);
    f.features.m0 = parse_double(c[11]);
    out.push_back(std::move(f));
  }
  return out;
}

struct FeatureSweep {
  std::vector<FeatureRow> rows;
  std::size_t failed_cells = 0;
};

// One sample X per (dim, size, seed, instance, sampler), shared by every function and ordering.
// Samplers that already produce a walk are used as-is (ordering "none").
inline FeatureSweep run_features(const ExperimentConfig& cfg, std::ostream* log = &std::cerr) {
  cfg.validate();
  struct Cell {
    std::size_t d, n;
    std::uint64_t seed, instance;
    SamplerKind sampler;
  };
  std::vector<Cell> cells;
  for (auto d : cfg.dimensions) {
    for (auto m : cfg.sample_size_multipliers) {
      for (std::size_t r = 0; r < cfg.repetitions; ++r) {
        for (auto inst : cfg.instances) {
          for (auto s : cfg.samplers) cells.push_back({d, m * d, cfg.seed + r, inst, s});
        }
      }
    }
  }
  const IcConfig ic;
  std::vector<std::vector<FeatureRow>> out(cells.size());
  std::vector<std::size_t> failures(cells.size(), 0);
  std::mutex log_mutex;
  parallel_for(cells.size(), cfg.threads, [&](std::size_t c) {
    const auto& cell = cells[c];
    auto report = [&](const std::string& what, const std::exception& e) {
      ++failures[c];
      if (log) {
        std::lock_guard lock(log_mutex);
        *log << "features: cell d=" << cell.d << " n=" << cell.n << " seed=" << cell.seed
             << " instance=" << cell.instance << " sampler=" << to_string(cell.sampler) << ' ' << what
             << " failed: " << e.what() << '\n';
      }
    };
    try {
      const auto space = cfg.space(cell.d);
      const std::uint64_t base = derive_seed(derive_seed(derive_seed(cell.seed, cell.d), cell.n), cell.instance);
      Rng rng(derive_seed(base, static_cast<std::uint64_t>(cell.sampler)));
      OrderedSample x = draw_sample(cell.sampler, space, cell.n, rng);

      std::vector<std::pair<std::string, std::vector<std::size_t>>> orders;
      if (is_ordered_sampler(cell.sampler)) {
        std::vector<std::size_t> id(x.size());
        std::iota(id.begin(), id.end(), std::size_t{0});
        orders.emplace_back("none", std::move(id));
      } else {
        for (auto o : cfg.orderings) {
          Rng order_rng(derive_seed(base, 100 + static_cast<std::uint64_t>(o)));
          std::vector<std::size_t> perm;
          switch (o) {
            case OrderingStrategy::HilbertOrder: perm = hilbert_permutation(x.points, space); break;
            case OrderingStrategy::NearestNeighbour: perm = nearest_neighbour_permutation(x.points); break;
            case OrderingStrategy::RandomOrder: perm = random_permutation(x.size(), order_rng); break;
          }
          orders.emplace_back(std::string(to_string(o)), std::move(perm));
        }
      }

      std::vector<ObjectiveFunction> functions;
      if (cfg.include_control) functions.push_back(constant_function(cell.d));
      if (cell.d >= 2) {
        for (int id = 1; id <= kSuiteSize; ++id) functions.push_back(make_function(id, cell.d, cell.instance));
      }
      for (const auto& f : functions) {
        x.fitness = evaluate_all(f, x.points);
        for (const auto& [name, perm] : orders) {
          try {
            const auto walk = permuted(x, perm, true);
            out[c].push_back({f.id, f.group, cell.instance, cell.d, std::string(to_string(cell.sampler)), name,
                              cell.seed, compute_ic_features(walk, ic)});
          } catch (const std::exception& e) {
            report("function=" + std::to_string(f.id) + " ordering=" + name, e);
          }
        }
      }
    } catch (const std::exception& e) {
      report("sampling", e);
    }
  });
  FeatureSweep sweep;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    sweep.rows.insert(sweep.rows.end(), out[c].begin(), out[c].end());
    sweep.failed_cells += failures[c];
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Classification

inline FeatureRecord to_record(const FeatureRow& r) {
  const auto a = r.features.as_array();
  return {{a.begin(), a.end()}, r.group, {r.function, r.instance, r.dim, r.sampler, r.ordering, r.seed}};
}

struct GroupingResult {
  std::string sampler;
  std::string ordering;
  std::vector<double> split_accuracy;
  std::vector<FeatureImportance> importance;  // pooled over splits and repetitions

  double mean_accuracy() const {
    return std::accumulate(split_accuracy.begin(), split_accuracy.end(), 0.0) /
           static_cast<double>(split_accuracy.size());
  }
};

// Instances held out for split `split`: a seeded third of the instance ids (at least one, never all).
inline std::set<std::uint64_t> test_instances_for_split(const std::vector<std::uint64_t>& instances,
                                                        std::uint64_t seed, std::size_t split) {
  if (instances.size() < 2) throw DomainError("classify: need at least two instances to hold some out");
  std::vector<std::uint64_t> ids(instances);
  std::sort(ids.begin(), ids.end());
  Rng rng(derive_seed(seed, 0x5117 + split));
  const auto perm = random_permutation(ids.size(), rng);
  const std::size_t take = std::clamp<std::size_t>((ids.size() + 2) / 3, 1, ids.size() - 1);
  std::set<std::uint64_t> out;
  for (std::size_t i = 0; i < take; ++i) out.insert(ids[perm[i]]);
  return out;
}

// Records with group 0 (flat control) are excluded: they are not a class.
inline std::vector<GroupingResult> run_classify(const std::vector<FeatureRow>& rows, const ExperimentConfig& cfg) {
  std::map<std::pair<std::string, std::string>, Dataset> groups;
  std::vector<std::pair<std::string, std::string>> order;
  std::set<std::uint64_t> instance_set;
  for (const auto& r : rows) {
    if (r.group < 1) continue;
    auto key = std::make_pair(r.sampler, r.ordering);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(to_record(r));
    instance_set.insert(r.instance);
  }
  if (groups.empty()) throw DomainError("classify: no labelled feature rows");
  const std::vector<std::uint64_t> instances(instance_set.begin(), instance_set.end());
  const std::vector<std::string> names(kIcFeatureNames.begin(), kIcFeatureNames.end());

  std::vector<GroupingResult> results;
  for (std::size_t g = 0; g < order.size(); ++g) {
    const auto& data = groups[order[g]];
    GroupingResult res{order[g].first, order[g].second, {}, {}};
    std::vector<std::vector<double>> pooled(names.size());
    for (std::size_t s = 0; s < cfg.splits; ++s) {
      const auto test_ids = test_instances_for_split(instances, cfg.seed, s);
      std::set<std::uint64_t> present;
      for (const auto& r : data) present.insert(r.meta.instance);
      std::set<std::uint64_t> usable;
      for (auto id : test_ids) {
        if (present.count(id)) usable.insert(id);
      }
      const auto [train, test] = holdout_split(data, usable);
      Rng rng(derive_seed(derive_seed(cfg.seed, s), g));
      const auto rep = permutation_importance(train, test, cfg.k, cfg.importance_repetitions, rng, names);
      res.split_accuracy.push_back(rep.base_accuracy);
      for (std::size_t j = 0; j < names.size(); ++j) {
        pooled[j].insert(pooled[j].end(), rep.features[j].drops.begin(), rep.features[j].drops.end());
      }
    }
    for (std::size_t j = 0; j < names.size(); ++j) {
      const auto& v = pooled[j];
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
      res.importance.push_back({names[j], mean, sd, v});
    }
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace hcela
