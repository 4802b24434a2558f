#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ebm/errors.hpp"
#include "ebm/harness.hpp"

using namespace ebm;

namespace {

// Every subcommand that trains or tunes shares the ExperimentConfig
// surface. Flags are collected as strings and funnelled through
// apply_setting so the CLI and the config file accept the same keys and
// the same validation; flags are applied after the file, so they win.
struct ConfigFlags {
  std::string config_file;
  std::vector<std::pair<std::string, std::string*>> values;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "INI-style key=value file");
    auto opt = [&](const std::string& flag, const std::string& key,
                   const std::string& help) {
      auto* holder = new std::string;  // lives for the process
      values.emplace_back(key, holder);
      app->add_option(flag, *holder, help)
          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    };
    opt("--data", "dataset.path", "dataset file");
    opt("--format", "dataset.format", "idx | semeion | csv");
    opt("--width", "dataset.width", "image width (csv)");
    opt("--height", "dataset.height", "image height (csv)");
    opt("--threshold", "dataset.threshold", "binarization threshold (idx)");
    opt("--model", "model", "dbn | dbm");
    opt("--layers", "layers", "number of stacked layers");
    opt("--learner", "learner", "cd | pcd");
    opt("--sweeps", "sweeps", "DBM mean-field sweeps");
    opt("--optimizer", "optimizer",
        "ihs | aiwpso | cs | fa | bsa | jade | cobide | rs");
    opt("--agents", "agents", "population size");
    opt("--iters", "iters", "optimizer iterations");
    opt("--runs", "runs", "independent runs");
    opt("--epochs", "epochs", "training epochs per fitness evaluation");
    opt("--batch", "batch", "mini-batch size");
    opt("--train-fraction", "train_fraction", "training split fraction");
    opt("--train-count", "train_count", "training images (overrides fraction)");
    opt("--test-count", "test_count", "test images");
    opt("--seed", "seed", "master seed");
    opt("--out", "out", "output directory");
    app->add_option("--set", sets, "extra key=value setting")
        ->take_all();
  }

  ExperimentConfig build() const {
    ExperimentConfig cfg;
    if (!config_file.empty()) load_config_file(cfg, config_file);
    for (const auto& [key, holder] : values)
      if (!holder->empty()) apply_setting(cfg, key, *holder);
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

int cmd_tune(const ConfigFlags& flags) {
  const ExperimentConfig cfg = flags.build();
  const RunReport report = run_experiment(cfg);
  if (!cfg.out_dir.empty()) emit_outputs(report, cfg.out_dir);
  std::printf("%s  runs=%zu  mean_test_mse=%.6f  std=%.6f\n",
              algorithm_name(cfg.optimizer.algorithm).c_str(),
              report.runs.size(), report.mean_test_mse, report.std_test_mse);
  if (cfg.out_dir.empty())
    std::cout << report_to_json(report);
  return 0;
}

int cmd_train(const ConfigFlags& flags, const std::vector<int>& ns,
              double eta, double phi, double lambda) {
  const ExperimentConfig cfg = flags.build();
  if (ns.empty()) throw ConfigError("train: give at least one --n");
  std::vector<LayerHyperparams> hp;
  for (int n : ns) hp.push_back({n, eta, phi, lambda});

  const BinaryDataset ds = load_dataset(cfg);
  Rng rng(cfg.master_seed);
  const StackedModel model =
      train_from_hyperparams(hp, ds.images, cfg.model, cfg.learner,
                             cfg.epochs, cfg.batch_size, rng);
  const double mse = reconstruction_mse(model, ds.images, cfg.dbm_sweeps);
  std::printf("train_mse=%.6f\n", mse);
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    save_model(model, (std::filesystem::path(cfg.out_dir) / "model.bin")
                          .string());
  }
  return 0;
}

int cmd_reconstruct(const ConfigFlags& flags, const std::string& model_path) {
  const ExperimentConfig cfg = flags.build();
  const StackedModel model = load_model(model_path);
  const BinaryDataset ds = load_dataset(cfg);
  std::printf("mse=%.6f\n",
              reconstruction_mse(model, ds.images, cfg.dbm_sweeps));
  return 0;
}

int cmd_stats(const std::vector<std::string>& report_paths) {
  std::vector<RunReport> reports;
  for (const std::string& path : report_paths) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open report " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    reports.push_back(report_from_json(buffer.str()));
  }
  const ComparisonMatrix matrix = compare_reports(reports);
  for (std::size_t i = 0; i < matrix.names.size(); ++i)
    for (std::size_t j = i + 1; j < matrix.names.size(); ++j) {
      std::printf("%s vs %s: ", matrix.names[i].c_str(),
                  matrix.names[j].c_str());
      const auto& cell = matrix.cells[i][j];
      if (!cell) {
        std::printf("no nonzero differences\n");
      } else {
        std::printf("W=%.1f p=%.6g n=%d %s\n", cell->w_statistic,
                    cell->p_value, cell->n_effective,
                    cell->significant_at_0_05 ? "significant"
                                              : "not significant");
      }
    }
  return 0;
}

int cmd_bench(const std::string& alg_name, int agents, int iters, int dims,
              std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.agents = agents;
  cfg.iterations = iters;

  const SearchSpace space(Vector::Constant(dims, -5.0),
                          Vector::Constant(dims, 5.0));

  const FitnessFn sphere = [](const Candidate& c) {
    return c.x.squaredNorm();
  };

  std::vector<Algorithm> algs;
  if (alg_name == "all") {
    algs = {Algorithm::IHS, Algorithm::AIWPSO, Algorithm::CS,
            Algorithm::FA,  Algorithm::BSA,    Algorithm::JADE,
            Algorithm::COBIDE, Algorithm::RS};
  } else {
    algs = {algorithm_from_name(alg_name)};
  }
  for (Algorithm alg : algs) {
    cfg.algorithm = alg;
    const OptResult res = run_optimizer(cfg, space, sphere, seed);
    std::printf("%-7s best=%.6e evals=%ld effective=%ld time=%.3fs\n",
                algorithm_name(alg).c_str(), *res.best.fitness,
                res.evaluations, res.effective_evaluations,
                res.trace.back().elapsed_seconds);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperparameter tuning for deep Boltzmann-family models"};
  app.require_subcommand(1);

  ConfigFlags tune_flags, train_flags, recon_flags;

  CLI::App* tune = app.add_subcommand("tune", "run the full experiment");
  tune_flags.attach(tune);

  CLI::App* train =
      app.add_subcommand("train", "train with fixed hyperparameters");
  train_flags.attach(train);
  std::vector<int> train_ns;
  double train_eta = 0.1, train_phi = 0.001, train_lambda = 0.1;
  train->add_option("--n", train_ns, "hidden units per layer")->take_all();
  train->add_option("--eta", train_eta, "learning rate");
  train->add_option("--phi", train_phi, "momentum");
  train->add_option("--lambda", train_lambda, "weight decay");

  CLI::App* recon =
      app.add_subcommand("reconstruct", "score a saved model on a dataset");
  recon_flags.attach(recon);
  std::string model_path;
  recon->add_option("--model-file", model_path, "serialized model")
      ->required();

  CLI::App* stats =
      app.add_subcommand("stats", "pairwise Wilcoxon over report.json files");
  std::vector<std::string> report_paths;
  stats->add_option("reports", report_paths, "report.json files")
      ->required()
      ->expected(-2);

  CLI::App* bench =
      app.add_subcommand("bench", "optimizers on the sphere function");
  std::string bench_alg = "all";
  int bench_agents = 5, bench_iters = 200, bench_dims = 5;
  std::uint64_t bench_seed = 42;
  bench->add_option("--optimizer", bench_alg, "algorithm name or 'all'");
  bench->add_option("--agents", bench_agents, "population size");
  bench->add_option("--iters", bench_iters, "iterations");
  bench->add_option("--dims", bench_dims, "problem dimension");
  bench->add_option("--seed", bench_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(tune)) return cmd_tune(tune_flags);
    if (app.got_subcommand(train))
      return cmd_train(train_flags, train_ns, train_eta, train_phi,
                       train_lambda);
    if (app.got_subcommand(recon))
      return cmd_reconstruct(recon_flags, model_path);
    if (app.got_subcommand(stats)) return cmd_stats(report_paths);
    if (app.got_subcommand(bench))
      return cmd_bench(bench_alg, bench_agents, bench_iters, bench_dims,
                       bench_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
