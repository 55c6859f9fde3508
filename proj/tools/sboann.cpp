// sboann: train, sweep, compare and apply metaheuristic-trained UCS networks.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbo_ann/config.hpp"
#include "sbo_ann/dataset.hpp"
#include "sbo_ann/model_io.hpp"
#include "sbo_ann/pipeline.hpp"
#include "sbo_ann/synthesize.hpp"

namespace fs = std::filesystem;
using namespace sbo_ann;

namespace {

constexpr std::size_t kCliDefaultPopulation = 300;

struct CommonOptions {
  std::string data;
  std::string algo = "sbo";
  std::size_t pop = kCliDefaultPopulation;
  std::size_t iters = kDefaultIterations;
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string config;
  CLI::Option *pop_opt = nullptr;
  CLI::Option *iters_opt = nullptr;
};

void add_search_flags(CLI::App *cmd, CommonOptions &o) {
  o.pop_opt = cmd->add_option("--pop", o.pop, "Population size")->check(CLI::Range(2, 1000000));
  o.iters_opt = cmd->add_option("--iters", o.iters, "Iterations")->check(CLI::Range(1, 100000000));
  cmd->add_option("--seed", o.seed, "Seed for the split and the optimizer")->capture_default_str();
  cmd->add_option("--config", o.config, "key=value file with search settings");
}

// defaults < config file < explicit flags
SearchConfig resolve_config(const CommonOptions &o) {
  SearchConfig c = default_search_config();
  c.population_size = kCliDefaultPopulation;
  if (!o.config.empty())
    c = load_config(o.config, c);
  if (o.pop_opt && o.pop_opt->count())
    c.population_size = o.pop;
  if (o.iters_opt && o.iters_opt->count())
    c.iterations = o.iters;
  c.seed = o.seed;
  return c;
}

std::ofstream open_output(const fs::path &path) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os)
    throw Error("cannot write " + path.string());
  return os;
}

std::string trace_name(Algorithm a, std::size_t pop) {
  return "trace_" + std::string(to_string(a)) + "_" + std::to_string(pop) + ".csv";
}

void write_trace(const fs::path &dir, const TrainedHybrid &h) {
  auto os = open_output(dir / trace_name(h.algorithm, h.config.population_size));
  write_trace_csv(os, h.trace);
}

void print_report(const std::string &label, const metrics::EvaluationReport &r) {
  auto phase = [](const char *name, const metrics::PhaseMetrics &m) {
    std::cout << "  " << name << " (n=" << m.count << "): RMSE " << m.rmse << "  MAPE " << m.mape << "%  MAE "
              << m.mae << "  R " << m.r << '\n';
  };
  std::cout << label << '\n';
  phase("training", r.training);
  if (r.testing)
    phase("testing ", *r.testing);
}

int run_synth(std::size_t n, std::uint64_t seed, double noise, const std::string &out) {
  auto data = synthesize(reference_summary(), n, seed, {noise});
  const fs::path path = fs::path(out) / "dataset.csv";
  auto os = open_output(path);
  write_csv(os, data);
  std::cout << "wrote " << data.size() << " records to " << path.string() << '\n';
  return 0;
}

int run_summarize(const std::string &data_path, const std::string &out) {
  auto data = load_csv(data_path);
  auto summary = summarize(data);
  write_summary_csv(std::cout, summary);
  auto os = open_output(fs::path(out) / "summary.csv");
  write_summary_csv(os, summary);
  return 0;
}

int run_train(const CommonOptions &o) {
  auto data = load_csv(o.data);
  auto algorithm = parse_algorithm(o.algo);
  auto config = resolve_config(o);
  auto h = train_hybrid(data, algorithm, config, o.seed);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  save_model((dir / "model.json").string(), h.stored());
  write_trace(dir, h);
  auto os = open_output(dir / "report.csv");
  write_report_csv(os, h);
  print_report(hybrid_label(algorithm) + " (S_P=" + std::to_string(config.population_size) +
                   ", T=" + std::to_string(config.iterations) + ")",
               h.report);
  return 0;
}

int run_sweep(const CommonOptions &o, std::vector<std::size_t> sizes) {
  auto data = load_csv(o.data);
  auto algorithm = parse_algorithm(o.algo);
  auto config = resolve_config(o);
  auto sweep = population_sweep(data, algorithm, sizes, config, o.seed);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  for (const auto &e : sweep.entries)
    write_trace(dir, e.hybrid);
  auto os = open_output(dir / ("sweep_" + std::string(to_string(algorithm)) + ".csv"));
  write_sweep_csv(os, sweep);
  for (const auto &e : sweep.entries)
    std::cout << "S_P=" << e.population_size << "  training RMSE " << e.hybrid.report.training.rmse
              << "  testing RMSE " << (e.hybrid.report.testing ? e.hybrid.report.testing->rmse : 0.0) << '\n';
  std::cout << "best population size (training RMSE): " << sweep.best_population_size << '\n';
  return 0;
}

int run_compare(const CommonOptions &o, const std::vector<std::string> &algos,
                const std::map<std::string, std::size_t> &pop_overrides) {
  auto data = load_csv(o.data);
  auto base = resolve_config(o);
  std::vector<std::pair<Algorithm, SearchConfig>> runs;
  for (const auto &name : algos) {
    auto a = parse_algorithm(name);
    SearchConfig c = base;
    if (auto it = pop_overrides.find(name); it != pop_overrides.end() && it->second > 0)
      c.population_size = it->second;
    runs.emplace_back(a, c);
  }
  auto cmp = compare_algorithms(data, runs, o.seed);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  for (const auto &e : cmp.entries) {
    if (!e.hybrid)
      continue;
    write_trace(dir, *e.hybrid);
    save_model((dir / ("model_" + std::string(to_string(e.algorithm)) + ".json")).string(), e.hybrid->stored());
  }
  auto os = open_output(dir / "comparison.csv");
  write_comparison_csv(os, cmp);

  for (const auto &e : cmp.entries) {
    if (e.hybrid)
      print_report(hybrid_label(e.algorithm), e.hybrid->report);
    else
      std::cout << hybrid_label(e.algorithm) << " failed: " << e.error << '\n';
  }
  std::cout << "ranking by testing RMSE:";
  for (auto i : cmp.ranking)
    std::cout << ' ' << hybrid_label(cmp.entries[i].algorithm);
  std::cout << '\n'
            << (cmp.leader_dominates ? "leader is best on every index\n"
                                     : "indices disagree on the order; ranked by testing RMSE\n");
  return 0;
}

int run_predict(const std::string &model_path, bool frozen, const std::string &input, const std::string &out) {
  std::optional<StoredModel> model;
  if (!frozen) {
    if (model_path.empty())
      throw Error("predict needs --model <file> or --frozen");
    model = load_model(model_path);
  }
  std::ifstream in(input);
  if (!in)
    throw Error("cannot open " + input);
  const fs::path path = fs::path(out) / "predictions.csv";
  auto os = open_output(path);
  predict_csv(in, os, model);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Train and evaluate metaheuristic-optimised neural networks for concrete UCS"};
  app.require_subcommand(1);

  // synth
  std::size_t synth_n = 323;
  std::uint64_t synth_seed = 1;
  double synth_noise = 2.0;
  std::string synth_out = ".";
  auto *synth = app.add_subcommand("synth", "Generate a planted surrogate dataset");
  synth->add_option("--n", synth_n, "Number of records")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  synth->add_option("--noise", synth_noise, "Gaussian noise std on UCS, MPa")->capture_default_str();
  synth->add_option("--out", synth_out, "Output directory")->capture_default_str();

  // summarize
  std::string sum_data;
  std::string sum_out = ".";
  auto *summ = app.add_subcommand("summarize", "Descriptive statistics in table layout");
  summ->add_option("--data", sum_data, "Dataset CSV")->required();
  summ->add_option("--out", sum_out, "Output directory")->capture_default_str();

  // train
  CommonOptions train_o;
  auto *train = app.add_subcommand("train", "Train one hybrid on an 80/20 split");
  train->add_option("--data", train_o.data, "Dataset CSV")->required();
  train->add_option("--algo", train_o.algo, "sbo|hgso|sfo|vsa")->capture_default_str();
  train->add_option("--out", train_o.out, "Output directory")->capture_default_str();
  add_search_flags(train, train_o);

  // sweep
  CommonOptions sweep_o;
  std::vector<std::size_t> sweep_sizes(kDefaultSweepSizes.begin(), kDefaultSweepSizes.end());
  auto *sweep = app.add_subcommand("sweep", "Population-size sweep for one algorithm");
  sweep->add_option("--data", sweep_o.data, "Dataset CSV")->required();
  sweep->add_option("--algo", sweep_o.algo, "sbo|hgso|sfo|vsa")->capture_default_str();
  sweep->add_option("--out", sweep_o.out, "Output directory")->capture_default_str();
  sweep->add_option("--sizes", sweep_sizes, "Population sizes")->delimiter(',')->capture_default_str();
  add_search_flags(sweep, sweep_o);

  // compare
  CommonOptions cmp_o;
  std::vector<std::string> cmp_algos = {"hgso", "sfo", "vsa", "sbo"};
  std::map<std::string, std::size_t> cmp_pops;
  auto *compare = app.add_subcommand("compare", "Train several hybrids on one split and rank them");
  compare->add_option("--data", cmp_o.data, "Dataset CSV")->required();
  compare->add_option("--algos", cmp_algos, "Algorithms to compare")->delimiter(',')->capture_default_str();
  compare->add_option("--out", cmp_o.out, "Output directory")->capture_default_str();
  add_search_flags(compare, cmp_o);
  for (const char *a : {"sbo", "hgso", "sfo", "vsa"})
    compare->add_option(std::string("--pop-") + a, cmp_pops[a], std::string("Population size for ") + a);

  // predict
  std::string pred_model;
  std::string pred_data;
  std::string pred_out = ".";
  bool pred_frozen = false;
  auto *predict = app.add_subcommand("predict", "Predict UCS for every row of a CSV");
  predict->add_option("--model", pred_model, "Model JSON written by train/compare");
  predict->add_option("--data", pred_data, "Input CSV with the eight feature columns")->required();
  predict->add_option("--out", pred_out, "Output directory")->capture_default_str();
  predict->add_flag("--frozen", pred_frozen,
                    "Use the published network on raw, unscaled columns (formula check only)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth)
      return run_synth(synth_n, synth_seed, synth_noise, synth_out);
    if (*summ)
      return run_summarize(sum_data, sum_out);
    if (*train)
      return run_train(train_o);
    if (*sweep)
      return run_sweep(sweep_o, sweep_sizes);
    if (*compare)
      return run_compare(cmp_o, cmp_algos, cmp_pops);
    if (*predict)
      return run_predict(pred_model, pred_frozen, pred_data, pred_out);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
