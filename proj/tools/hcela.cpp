// hcela: sampling, ordering, IC features, coverage, timing and classification from the command line.
//
// Exit status: 0 on success, 2 if some sweep cells failed, 1 on any other error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hcela/experiments.hpp"

namespace {

using hcela::ExperimentConfig;
using nlohmann::json;

struct ConfigFlags {
  std::string config_path;
  std::vector<std::size_t> dims, mults;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> samplers, orderings;
  std::optional<std::string> out;
  std::vector<std::uint64_t> instances;
  std::optional<std::size_t> threads;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--dims", dims, "dimensions")->delimiter(',');
    app->add_option("--mults", mults, "sample size multipliers (n = mult * d)")->delimiter(',');
    app->add_option("--reps", reps, "repetitions");
    app->add_option("--seed", seed, "root seed");
    app->add_option("--samplers", samplers, "hilbert,lhs,random_walk")->delimiter(',');
    app->add_option("--orderings", orderings, "hilbert,nn,random")->delimiter(',');
    app->add_option("--out", out, "output directory");
    app->add_option("--instances", instances, "function instances")->delimiter(',');
    app->add_option("--threads", threads, "worker threads (0 = all cores)");
  }
};

json to_json(const ExperimentConfig& c) {
  json j;
  j["dims"] = c.dimensions;
  j["mults"] = c.sample_size_multipliers;
  j["reps"] = c.repetitions;
  j["seed"] = c.seed;
  std::vector<std::string> s, o;
  for (auto x : c.samplers) s.emplace_back(hcela::to_string(x));
  for (auto x : c.orderings) o.emplace_back(hcela::to_string(x));
  j["samplers"] = s;
  j["orderings"] = o;
  j["instances"] = c.instances;
  j["lower"] = c.lower;
  j["upper"] = c.upper;
  j["metric"] = c.metric == hcela::CoverageMetric::Averaged ? "averaged" : "classic";
  j["include_control"] = c.include_control;
  j["k"] = c.k;
  j["splits"] = c.splits;
  j["importance_reps"] = c.importance_repetitions;
  return j;
}

void apply_json(ExperimentConfig& c, const json& j) {
  if (j.contains("dims")) c.dimensions = j["dims"].get<std::vector<std::size_t>>();
  if (j.contains("mults")) c.sample_size_multipliers = j["mults"].get<std::vector<std::size_t>>();
  if (j.contains("reps")) c.repetitions = j["reps"].get<std::size_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("samplers")) {
    c.samplers.clear();
    for (const auto& s : j["samplers"]) c.samplers.push_back(hcela::parse_sampler(s.get<std::string>()));
  }
  if (j.contains("orderings")) {
    c.orderings.clear();
    for (const auto& s : j["orderings"]) c.orderings.push_back(hcela::parse_ordering(s.get<std::string>()));
  }
  if (j.contains("out")) c.output_dir = j["out"].get<std::string>();
  if (j.contains("instances")) c.instances = j["instances"].get<std::vector<std::uint64_t>>();
  if (j.contains("lower")) c.lower = j["lower"].get<double>();
  if (j.contains("upper")) c.upper = j["upper"].get<double>();
  if (j.contains("metric")) {
    const auto m = j["metric"].get<std::string>();
    if (m == "averaged") c.metric = hcela::CoverageMetric::Averaged;
    else if (m == "classic") c.metric = hcela::CoverageMetric::Classic;
    else throw hcela::DomainError("config: metric must be averaged or classic");
  }
  if (j.contains("include_control")) c.include_control = j["include_control"].get<bool>();
  if (j.contains("k")) c.k = j["k"].get<std::size_t>();
  if (j.contains("splits")) c.splits = j["splits"].get<std::size_t>();
  if (j.contains("importance_reps")) c.importance_repetitions = j["importance_reps"].get<std::size_t>();
  if (j.contains("threads")) c.threads = j["threads"].get<std::size_t>();
}

ExperimentConfig resolve(const ConfigFlags& f, ExperimentConfig c = {}) {
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    apply_json(c, json::parse(is));
  }
  if (!f.dims.empty()) c.dimensions = f.dims;
  if (!f.mults.empty()) c.sample_size_multipliers = f.mults;
  if (f.reps) c.repetitions = *f.reps;
  if (f.seed) c.seed = *f.seed;
  if (!f.samplers.empty()) {
    c.samplers.clear();
    for (const auto& s : f.samplers) c.samplers.push_back(hcela::parse_sampler(s));
  }
  if (!f.orderings.empty()) {
    c.orderings.clear();
    for (const auto& s : f.orderings) c.orderings.push_back(hcela::parse_ordering(s));
  }
  if (f.out) c.output_dir = *f.out;
  if (!f.instances.empty()) c.instances = f.instances;
  if (f.threads) c.threads = *f.threads;
  c.validate();
  return c;
}

// Output directory and thread count do not change results, so they stay out of the hash.
hcela::Provenance provenance(const ExperimentConfig& c) { return {hcela::fnv1a_hex(to_json(c).dump()), c.seed}; }

hcela::Provenance provenance(const json& j, std::uint64_t seed) { return {hcela::fnv1a_hex(j.dump()), seed}; }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_in_dir(const std::string& dir, const std::string& name) {
  ensure_dir(dir);
  return hcela::open_output(dir + "/" + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert-curve sampling and information-content landscape features"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hcela::kVersion);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "draw one sample and write it as CSV");
  std::string s_sampler = "hilbert", s_stoch = "gaussian", s_out = "-";
  std::size_t s_dim = 2, s_n = 100;
  std::uint64_t s_seed = 1, s_instance = 1;
  int s_function = -1;
  double s_lower = -5.0, s_upper = 5.0, s_step = 1.0, s_sigma = 0.3;
  sample_cmd->add_option("--sampler", s_sampler, "hilbert|lhs|random_walk|uniform");
  sample_cmd->add_option("--dim,-d", s_dim, "dimension")->required();
  sample_cmd->add_option("-n,--size", s_n, "number of points")->required();
  sample_cmd->add_option("--seed", s_seed, "seed");
  sample_cmd->add_option("--lower", s_lower, "lower bound (all axes)");
  sample_cmd->add_option("--upper", s_upper, "upper bound (all axes)");
  sample_cmd->add_option("--stochasticity", s_stoch, "gaussian|edge (hilbert sampler)");
  sample_cmd->add_option("--sigma", s_sigma, "vertex noise in grid units");
  sample_cmd->add_option("--max-step", s_step, "random walk step bound");
  sample_cmd->add_option("--function", s_function, "evaluate suite function id (0 = constant) into a y column");
  sample_cmd->add_option("--instance", s_instance, "function instance");
  sample_cmd->add_option("--out,-o", s_out, "output file ('-' for stdout)");

  // order
  auto* order_cmd = app.add_subcommand("order", "reorder a sample CSV and write step sizes");
  std::string o_in, o_out = "-", o_steps, o_ordering = "hilbert";
  std::uint64_t o_seed = 1;
  std::optional<double> o_lower, o_upper;
  order_cmd->add_option("--in,-i", o_in, "input sample CSV")->required()->check(CLI::ExistingFile);
  order_cmd->add_option("--ordering", o_ordering, "hilbert|nn|random");
  order_cmd->add_option("--seed", o_seed, "seed (random ordering)");
  order_cmd->add_option("--lower", o_lower, "lower bound for Hilbert quantisation (default: data minimum)");
  order_cmd->add_option("--upper", o_upper, "upper bound for Hilbert quantisation (default: data maximum)");
  order_cmd->add_option("--out,-o", o_out, "output sample CSV ('-' for stdout)");
  order_cmd->add_option("--steps", o_steps, "step-size CSV");

  // features
  auto* feat_cmd = app.add_subcommand("features", "IC features of one ordered sample, or a sweep over the suite");
  ConfigFlags feat_flags;
  feat_flags.attach(feat_cmd);
  std::string f_in;
  int f_function = 0, f_group = 0;
  std::uint64_t f_instance = 0, f_seed = 0;
  std::string f_sampler = "external", f_ordering = "none";
  feat_cmd->add_option("--in,-i", f_in, "single ordered sample CSV with y column")->check(CLI::ExistingFile);
  feat_cmd->add_option("--function", f_function, "function id recorded in the row (--in mode)");
  feat_cmd->add_option("--group", f_group, "group recorded in the row (--in mode)");
  feat_cmd->add_option("--instance", f_instance, "instance recorded in the row (--in mode)");
  feat_cmd->add_option("--sampler", f_sampler, "sampler recorded in the row (--in mode)");
  feat_cmd->add_option("--ordering", f_ordering, "ordering recorded in the row (--in mode)");
  feat_cmd->add_option("--row-seed", f_seed, "seed recorded in the row (--in mode)");

  // coverage
  auto* cov_cmd = app.add_subcommand("coverage", "Hausdorff distance of each sampler to a uniform reference");
  ConfigFlags cov_flags;
  cov_flags.attach(cov_cmd);
  std::string cov_metric;
  cov_cmd->add_option("--metric", cov_metric, "averaged|classic");

  // timing
  auto* time_cmd = app.add_subcommand("timing", "wall-clock time of sampling or ordering");
  ConfigFlags time_flags;
  time_flags.attach(time_cmd);
  std::string t_mode = "sampling";
  time_cmd->add_option("--mode", t_mode, "sampling|ordering")->check(CLI::IsMember({"sampling", "ordering"}));

  // classify
  auto* cls_cmd = app.add_subcommand("classify", "kNN group prediction and permutation importance");
  ConfigFlags cls_flags;
  cls_flags.attach(cls_cmd);
  std::string c_in;
  std::optional<std::size_t> c_k, c_splits, c_imp;
  cls_cmd->add_option("--in,-i", c_in, "feature CSV")->required();
  cls_cmd->add_option("-k", c_k, "neighbours");
  cls_cmd->add_option("--splits", c_splits, "random instance holdout splits");
  cls_cmd->add_option("--importance-reps", c_imp, "permutations per feature and split");

  // suite
  auto* suite_cmd = app.add_subcommand("suite", "write the benchmark manifest");
  ConfigFlags suite_flags;
  suite_flags.attach(suite_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample_cmd) {
      const auto space = hcela::SearchSpace::cube(s_dim, s_lower, s_upper);
      hcela::SamplerOptions opts;
      opts.max_step = s_step;
      if (s_stoch == "gaussian") opts.stochasticity = hcela::StochasticityStrategy::vertex_gaussian(s_sigma);
      else if (s_stoch == "edge") opts.stochasticity = hcela::StochasticityStrategy::edge_uniform();
      else throw hcela::DomainError("stochasticity must be gaussian or edge");
      hcela::Rng rng(s_seed);
      auto sample = hcela::draw_sample(hcela::parse_sampler(s_sampler), space, s_n, rng, opts);
      json j{{"cmd", "sample"}, {"sampler", s_sampler}, {"dim", s_dim}, {"n", s_n}, {"lower", s_lower},
             {"upper", s_upper}, {"stochasticity", s_stoch}, {"sigma", s_sigma}, {"max_step", s_step},
             {"function", s_function}, {"instance", s_instance}};
      if (s_function >= 0) {
        const auto f = s_function == 0 ? hcela::constant_function(s_dim)
                                       : hcela::make_function(s_function, s_dim, s_instance);
        sample.fitness = hcela::evaluate_all(f, sample.points);
      }
      const auto prov = provenance(j, s_seed);
      if (s_out == "-") {
        hcela::write_sample_csv(std::cout, sample, prov);
      } else {
        auto os = hcela::open_output(s_out);
        hcela::write_sample_csv(os, sample, prov);
      }
      return 0;
    }

    if (*order_cmd) {
      auto is = hcela::open_input(o_in);
      const auto sample = hcela::read_sample_csv(is);
      if (sample.size() == 0) throw hcela::DomainError("order: empty sample");
      std::vector<double> lo(sample.dim()), hi(sample.dim());
      for (std::size_t i = 0; i < sample.dim(); ++i) {
        lo[i] = hi[i] = sample.points[0][i];
        for (std::size_t k = 1; k < sample.size(); ++k) {
          lo[i] = std::min(lo[i], sample.points[k][i]);
          hi[i] = std::max(hi[i], sample.points[k][i]);
        }
        if (o_lower) lo[i] = *o_lower;
        if (o_upper) hi[i] = *o_upper;
        if (!(lo[i] < hi[i])) hi[i] = lo[i] + 1.0;
      }
      const hcela::SearchSpace space{lo, hi};
      hcela::Rng rng(o_seed);
      const auto ordered = hcela::apply_ordering(sample, hcela::parse_ordering(o_ordering), space, rng);
      const auto prov = provenance(json{{"cmd", "order"}, {"ordering", o_ordering}, {"lower", lo}, {"upper", hi}}, o_seed);
      if (o_out == "-") {
        hcela::write_sample_csv(std::cout, ordered, prov);
      } else {
        auto os = hcela::open_output(o_out);
        hcela::write_sample_csv(os, ordered, prov);
      }
      if (!o_steps.empty()) {
        auto os = hcela::open_output(o_steps);
        hcela::write_steps_csv(os, hcela::step_sizes(ordered), prov);
      }
      return 0;
    }

    if (*feat_cmd) {
      if (!f_in.empty()) {
        auto is = hcela::open_input(f_in);
        const auto sample = hcela::read_sample_csv(is);
        hcela::FeatureRow row{f_function, f_group, f_instance, sample.dim(), f_sampler, f_ordering, f_seed,
                              hcela::compute_ic_features(sample)};
        const auto prov = provenance(json{{"cmd", "features"}, {"in", f_in}}, f_seed);
        const std::string out = feat_flags.out.value_or("-");
        if (out == "-") {
          hcela::write_features_csv(std::cout, {row}, prov);
        } else {
          auto os = hcela::open_output(out);
          hcela::write_features_csv(os, {row}, prov);
        }
        return 0;
      }
      ExperimentConfig defaults;
      defaults.sample_size_multipliers = {100};
      defaults.repetitions = 1;
      defaults.samplers = {hcela::SamplerKind::Hilbert, hcela::SamplerKind::Lhs, hcela::SamplerKind::RandomWalk};
      const auto cfg = resolve(feat_flags, defaults);
      const auto sweep = hcela::run_features(cfg);
      auto os = open_in_dir(cfg.output_dir, "features.csv");
      hcela::write_features_csv(os, sweep.rows, provenance(cfg));
      if (sweep.failed_cells) {
        std::cerr << "features: " << sweep.failed_cells << " cell(s) failed\n";
        return 2;
      }
      return 0;
    }

    if (*cov_cmd) {
      auto cfg = resolve(cov_flags);
      if (cov_metric == "classic") cfg.metric = hcela::CoverageMetric::Classic;
      else if (cov_metric == "averaged") cfg.metric = hcela::CoverageMetric::Averaged;
      else if (!cov_metric.empty()) throw hcela::DomainError("metric must be averaged or classic");
      ensure_dir(cfg.output_dir);
      const auto report = hcela::run_coverage(cfg);
      hcela::write_coverage_csvs(report, cfg.output_dir, provenance(cfg));
      return 0;
    }

    if (*time_cmd) {
      ExperimentConfig defaults;
      defaults.repetitions = 5;
      const auto cfg = resolve(time_flags, defaults);
      const auto mode = t_mode == "ordering" ? hcela::TimingMode::Ordering : hcela::TimingMode::Sampling;
      const auto rows = hcela::run_timing(cfg, mode);
      auto os = open_in_dir(cfg.output_dir, "timing_" + t_mode + ".csv");
      auto prov = provenance(cfg);
      prov.config_hash = hcela::fnv1a_hex(to_json(cfg).dump() + t_mode);
      hcela::write_timing_csv(os, rows, prov);
      return 0;
    }

    if (*cls_cmd) {
      auto cfg = resolve(cls_flags);
      if (c_k) cfg.k = *c_k;
      if (c_splits) cfg.splits = *c_splits;
      if (c_imp) cfg.importance_repetitions = *c_imp;
      auto is = hcela::open_input(c_in);
      const auto rows = hcela::read_features_csv(is);
      const auto results = hcela::run_classify(rows, cfg);
      const auto prov = provenance(cfg);
      auto acc = open_in_dir(cfg.output_dir, "accuracy.csv");
      hcela::write_provenance(acc, prov);
      acc << "sampler,ordering,split,accuracy\n";
      for (const auto& r : results) {
        for (std::size_t s = 0; s < r.split_accuracy.size(); ++s) {
          acc << r.sampler << ',' << r.ordering << ',' << s << ',' << hcela::format_double(r.split_accuracy[s])
              << '\n';
        }
        auto imp = open_in_dir(cfg.output_dir, "importance_" + r.sampler + "_" + r.ordering + ".csv");
        hcela::write_provenance(imp, prov);
        imp << "feature,mean_drop,std_drop\n";
        for (const auto& f : r.importance) {
          imp << f.feature << ',' << hcela::format_double(f.mean_drop) << ',' << hcela::format_double(f.std_drop)
              << '\n';
        }
      }
      auto summary = open_in_dir(cfg.output_dir, "accuracy_summary.csv");
      hcela::write_provenance(summary, prov);
      summary << "sampler,ordering,mean_accuracy\n";
      for (const auto& r : results) {
        summary << r.sampler << ',' << r.ordering << ',' << hcela::format_double(r.mean_accuracy()) << '\n';
      }
      return 0;
    }

    if (*suite_cmd) {
      const auto cfg = resolve(suite_flags);
      auto os = open_in_dir(cfg.output_dir, "suite.csv");
      hcela::write_provenance(os, provenance(cfg));
      os << "id,name,group,dimension,instance\n";
      for (auto d : cfg.dimensions) {
        for (const auto& f : hcela::suite(d, cfg.instances)) {
          os << f.id << ',' << f.name << ',' << f.group << ',' << f.dimension << ',' << f.instance << '\n';
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "hcela: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
