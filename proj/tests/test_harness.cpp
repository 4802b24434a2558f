#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ebm/errors.hpp"
#include "ebm/harness.hpp"
#include "oracles.hpp"

using namespace ebm;

namespace {

namespace fs = std::filesystem;

// A small glyph corpus written out as CSV once per process.
const std::string& glyph_csv() {
  static const std::string path = [] {
    const std::string p =
        (fs::temp_directory_path() / "ebm_harness_glyphs.csv").string();
    save_csv_binary(oracle::make_glyph_dataset(40, 99), p);
    return p;
  }();
  return path;
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.dataset_path = glyph_csv();
  cfg.dataset_format = "csv";
  cfg.csv_width = 28;
  cfg.csv_height = 28;
  cfg.optimizer.algorithm = Algorithm::RS;
  cfg.optimizer.agents = 3;
  cfg.optimizer.iterations = 1;
  cfg.runs = 1;
  cfg.epochs = 2;
  cfg.batch_size = 4;
  cfg.train_count = 8;
  cfg.test_count = 8;
  cfg.bounds.n_min = 5;
  cfg.bounds.n_max = 10;  // keep the desk test fast
  cfg.master_seed = 4242;
  return cfg;
}

}  // namespace

TEST_CASE("apply_setting maps keys and rejects unknowns") {
  ExperimentConfig cfg;
  apply_setting(cfg, "model", "dbm");
  CHECK(cfg.model == ModelKind::DBM);
  apply_setting(cfg, "learner", "pcd");
  CHECK(cfg.learner == Learner::PCD);
  apply_setting(cfg, "optimizer", "jade");
  CHECK(cfg.optimizer.algorithm == Algorithm::JADE);
  apply_setting(cfg, "layers", "2");
  CHECK(cfg.layers == 2);
  apply_setting(cfg, "opt.ihs.hmcr", "0.9");
  CHECK(cfg.optimizer.ihs.hmcr == 0.9);
  apply_setting(cfg, "opt.cs.schedule", "true");
  CHECK(cfg.optimizer.cs.schedule);
  apply_setting(cfg, "space.n_max", "50");
  CHECK(cfg.bounds.n_max == 50.0);
  apply_setting(cfg, "seed", "77");
  CHECK(cfg.master_seed == 77);

  CHECK_THROWS_AS(apply_setting(cfg, "nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "epochs", "many"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "model", "hopfield"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "opt.cs.schedule", "perhaps"),
                  ConfigError);
}

TEST_CASE("config files parse comments and whitespace") {
  const std::string path =
      (fs::temp_directory_path() / "ebm_test_config.ini").string();
  {
    std::ofstream out(path);
    out << "# experiment setup\n"
        << "optimizer = cs   ; trailing comment\n"
        << "\n"
        << "  agents=7\n"
        << "opt.cs.p = 0.4\n";
  }
  ExperimentConfig cfg;
  load_config_file(cfg, path);
  fs::remove(path);
  CHECK(cfg.optimizer.algorithm == Algorithm::CS);
  CHECK(cfg.optimizer.agents == 7);
  CHECK(cfg.optimizer.cs.p == 0.4);

  {
    std::ofstream out(path);
    out << "agents\n";
  }
  ExperimentConfig bad;
  CHECK_THROWS_AS(load_config_file(bad, path), ConfigError);
  fs::remove(path);
  CHECK_THROWS_AS(load_config_file(bad, path + ".missing"), ConfigError);
}

TEST_CASE("fitness is a bounded pure function of candidate and seed") {
  const BinaryDataset glyphs = oracle::make_glyph_dataset(10, 1);
  SearchSpace::LayerBounds bounds;
  bounds.n_max = 12;
  const SearchSpace space = SearchSpace::for_layers(1, bounds);
  Rng rng(2);
  Candidate c = sample_uniform(space, rng);
  c.eval_seed = 555;

  const double f1 = fitness_of(c, space, glyphs.images, ModelKind::DBN,
                               Learner::CD, 2, 5);
  const double f2 = fitness_of(c, space, glyphs.images, ModelKind::DBN,
                               Learner::CD, 2, 5);
  CHECK(f1 == f2);  // bit-identical
  CHECK(f1 >= 0.0);
  CHECK(f1 <= 1.0);

  // zero training + zero init collapses to the constant-0.5 output
  const double untrained = fitness_of(c, space, glyphs.images, ModelKind::DBN,
                                      Learner::CD, 0, 5, 3, 0.0);
  CHECK(untrained == 0.25);
}

TEST_CASE("a one-run random-search experiment matches the hand-stepped oracle") {
  const ExperimentConfig cfg = tiny_config();
  const RunReport report = run_experiment(cfg);
  REQUIRE(report.runs.size() == 1);
  const RunResult& run = report.runs[0];

  // Re-derive the whole run from the documented seed tree.
  const std::uint64_t run_seed = derive_seed(cfg.master_seed, {0});
  CHECK(run.seed == run_seed);

  const BinaryDataset ds = load_dataset(cfg);
  Rng split_rng(derive_seed(run_seed, {0}));
  const BinaryDataset permuted = subsample(ds, ds.size(), split_rng);
  const Matrix train = permuted.images.topRows(8);
  const Matrix test = permuted.images.middleRows(8, 8);

  const SearchSpace space = SearchSpace::for_layers(1, cfg.bounds);
  const std::uint64_t opt_seed = derive_seed(run_seed, {1});
  Rng sample_rng(derive_seed(opt_seed, {0}));
  const std::uint64_t eval_base = derive_seed(opt_seed, {1});

  Candidate best;
  double best_fitness = 1e300;
  for (std::uint64_t round = 0; round <= 1; ++round)
    for (std::uint64_t i = 0; i < 3; ++i) {
      Candidate c = sample_uniform(space, sample_rng);
      c.eval_seed = derive_seed(eval_base, {round, i});
      const double f = fitness_of(c, space, train, cfg.model, cfg.learner,
                                  cfg.epochs, cfg.batch_size);
      if (f < best_fitness) {
        best_fitness = f;
        best = c;
      }
    }

  CHECK(run.best_train_mse == best_fitness);
  CHECK(run.evaluations == 6);
  REQUIRE(run.trace.size() == 2);
  CHECK(run.trace.back().best_fitness == best_fitness);
  CHECK(run.best_hyperparams[0].n == decode(space, best.x)[0].n);

  // retraining the winner reproduces the reported test error
  Rng retrain_rng(best.eval_seed);
  const StackedModel model = train_from_hyperparams(
      decode(space, best.x), train, cfg.model, cfg.learner, cfg.epochs,
      cfg.batch_size, retrain_rng);
  CHECK(run.test_mse == reconstruction_mse(model, test));

  // learning curves cover every epoch of the layer-0 retrain
  CHECK(run.epoch_train_mse.size() == 2);
  CHECK(run.epoch_log_pl.size() == 2);
}

TEST_CASE("identical configs give byte-identical canonical reports") {
  ExperimentConfig cfg = tiny_config();
  cfg.optimizer.algorithm = Algorithm::IHS;
  cfg.runs = 2;
  const RunReport a = run_experiment(cfg);
  const RunReport b = run_experiment(cfg);
  CHECK(canonical_report_json(a) == canonical_report_json(b));
}

TEST_CASE("reports survive the JSON round trip") {
  ExperimentConfig cfg = tiny_config();
  cfg.optimizer.algorithm = Algorithm::CS;
  cfg.optimizer.agents = 4;
  cfg.runs = 2;
  const RunReport report = run_experiment(cfg);
  const RunReport loaded = report_from_json(report_to_json(report));
  CHECK(report_to_json(loaded) == report_to_json(report));
  CHECK(loaded.runs.size() == report.runs.size());
  CHECK(loaded.config.optimizer.algorithm == Algorithm::CS);
}

TEST_CASE("emit_outputs writes the three report files") {
  ExperimentConfig cfg = tiny_config();
  cfg.runs = 2;
  cfg.optimizer.iterations = 3;
  const RunReport report = run_experiment(cfg);

  const fs::path dir = fs::temp_directory_path() / "ebm_outputs";
  fs::remove_all(dir);
  emit_outputs(report, dir.string());

  REQUIRE(fs::exists(dir / "report.json"));
  REQUIRE(fs::exists(dir / "convergence.csv"));
  REQUIRE(fs::exists(dir / "pl_curve.csv"));

  auto count_lines = [](const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    return n;
  };
  // header + runs * (iterations + 1) trace rows
  CHECK(count_lines(dir / "convergence.csv") == 1 + 2 * 4);
  // header + runs * epochs curve rows
  CHECK(count_lines(dir / "pl_curve.csv") == 1 + 2 * 2);

  std::ifstream in(dir / "report.json");
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str() == report_to_json(report));
  fs::remove_all(dir);
}

TEST_CASE("compare_reports: self-comparison yields empty cells") {
  ExperimentConfig cfg = tiny_config();
  cfg.runs = 5;
  const RunReport report = run_experiment(cfg);
  const ComparisonMatrix matrix = compare_reports({report, report});
  REQUIRE(matrix.cells.size() == 2);
  for (const auto& row : matrix.cells)
    for (const auto& cell : row) CHECK(!cell.has_value());
}

TEST_CASE("compare_reports is symmetric across different seeds") {
  ExperimentConfig cfg = tiny_config();
  cfg.runs = 6;
  const RunReport a = run_experiment(cfg);
  cfg.master_seed = 777;
  const RunReport b = run_experiment(cfg);
  const ComparisonMatrix matrix = compare_reports({a, b});
  REQUIRE(matrix.cells[0][1].has_value());
  REQUIRE(matrix.cells[1][0].has_value());
  CHECK(matrix.cells[0][1]->p_value == matrix.cells[1][0]->p_value);
  CHECK(matrix.cells[0][1]->w_statistic == matrix.cells[1][0]->w_statistic);

  ExperimentConfig short_cfg = tiny_config();
  short_cfg.runs = 2;
  const RunReport short_report = run_experiment(short_cfg);
  CHECK_THROWS_AS(compare_reports({a, short_report}), ContractError);
  CHECK_THROWS_AS(compare_reports({a}), ContractError);
}

TEST_CASE("invalid experiment configs are rejected up front") {
  ExperimentConfig cfg = tiny_config();
  cfg.runs = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

  ExperimentConfig no_data = tiny_config();
  no_data.dataset_path.clear();
  CHECK_THROWS_AS(run_experiment(no_data), ConfigError);

  ExperimentConfig too_big = tiny_config();
  too_big.train_count = 30;
  too_big.test_count = 30;  // corpus only has 40 images
  CHECK_THROWS_AS(run_experiment(too_big), ConfigError);
}
