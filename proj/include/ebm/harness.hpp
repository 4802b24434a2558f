#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ebm/datasets.hpp"
#include "ebm/deep.hpp"
#include "ebm/hyperspace.hpp"
#include "ebm/metaheuristics.hpp"
#include "ebm/stats.hpp"

namespace ebm {

/// Everything needed to reproduce one tuning experiment.
struct ExperimentConfig {
  std::string dataset_path;
  std::string dataset_format = "idx";  // idx | semeion | csv
  int csv_width = 28;
  int csv_height = 28;
  int binarize_threshold = 127;

  ModelKind model = ModelKind::DBN;
  int layers = 1;
  Learner learner = Learner::CD;
  int dbm_sweeps = 3;

  OptimizerConfig optimizer;  // algorithm, agents, iterations, parameters

  int runs = 20;
  int epochs = 10;
  int batch_size = 20;

  // Either an explicit train/test subsample (train_count > 0) or a
  // fraction split over the whole dataset.
  double train_fraction = 0.02;
  Eigen::Index train_count = 0;
  Eigen::Index test_count = 0;  // 0 = everything not in train

  SearchSpace::LayerBounds bounds;
  std::uint64_t master_seed = 42;
  std::string out_dir;
};

/// Apply one "key=value" setting (config file line or CLI --set).
/// Unknown keys raise ConfigError.
void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value);

/// INI-style file: key=value per line, '#' and ';' comments.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

BinaryDataset load_dataset(const ExperimentConfig& cfg);

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<LayerHyperparams> best_hyperparams;
  double best_train_mse = 0.0;  // fitness of the winning candidate
  double test_mse = 0.0;
  std::vector<TracePoint> trace;        // optimizer convergence
  std::vector<double> epoch_log_pl;     // layer-0 retraining curve
  std::vector<double> epoch_train_mse;  // layer-0 retraining curve
  long evaluations = 0;
  long effective_evaluations = 0;
  int nan_fitness_count = 0;
  double elapsed_seconds = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  double mean_test_mse = 0.0;
  double std_test_mse = 0.0;
};

/// Decode the candidate, train an L-layer stack greedily on the training
/// images and return the reconstruction MSE over that same set. A pure
/// function of (candidate.x, candidate.eval_seed).
double fitness_of(const Candidate& candidate, const SearchSpace& space,
                  const Matrix& train, ModelKind kind, Learner learner,
                  int epochs, int batch_size, int dbm_sweeps = 3,
                  double init_sigma = 0.01);

/// Train a stack from decoded hyperparameters; exposed for the `train`
/// CLI subcommand and for retraining the tuning winner.
StackedModel train_from_hyperparams(
    const std::vector<LayerHyperparams>& hp, const Matrix& train,
    ModelKind kind, Learner learner, int epochs, int batch_size, Rng& rng,
    const EpochObserver& observer = nullptr, double init_sigma = 0.01);

/// The full protocol: `runs` independently seeded resampled splits, one
/// optimizer run each, retrain of the winner, test-set evaluation.
RunReport run_experiment(const ExperimentConfig& cfg);

/// Pairwise Wilcoxon matrix over the reports' per-run test MSE vectors.
/// Empty cells mean the test had no nonzero differences.
struct ComparisonMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<WilcoxonResult>>> cells;
};
ComparisonMatrix compare_reports(const std::vector<RunReport>& reports);

/// Writes report.json, convergence.csv and pl_curve.csv into `dir`.
void emit_outputs(const RunReport& report, const std::string& dir);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& json_text);

/// JSON with the wall-clock fields zeroed; two runs of the same config
/// and seed must agree byte for byte on this form.
std::string canonical_report_json(const RunReport& report);

}  // namespace ebm
