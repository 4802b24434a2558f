#include "ebm/harness.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ebm/errors.hpp"

namespace ebm {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value '" + value + "' for " + key);
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value '" + value + "' for " + key);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("bad boolean value '" + value + "' for " + key);
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value) {
  if (key == "dataset.path") { cfg.dataset_path = value; return; }
  if (key == "dataset.format") {
    if (value != "idx" && value != "semeion" && value != "csv")
      throw ConfigError("dataset.format must be idx, semeion or csv");
    cfg.dataset_format = value;
    return;
  }
  if (key == "dataset.width") { cfg.csv_width = static_cast<int>(parse_long(key, value)); return; }
  if (key == "dataset.height") { cfg.csv_height = static_cast<int>(parse_long(key, value)); return; }
  if (key == "dataset.threshold") { cfg.binarize_threshold = static_cast<int>(parse_long(key, value)); return; }
  if (key == "model") {
    if (value == "dbn") cfg.model = ModelKind::DBN;
    else if (value == "dbm") cfg.model = ModelKind::DBM;
    else throw ConfigError("model must be dbn or dbm");
    return;
  }
  if (key == "layers") { cfg.layers = static_cast<int>(parse_long(key, value)); return; }
  if (key == "learner") {
    if (value == "cd") cfg.learner = Learner::CD;
    else if (value == "pcd") cfg.learner = Learner::PCD;
    else throw ConfigError("learner must be cd or pcd");
    return;
  }
  if (key == "sweeps") { cfg.dbm_sweeps = static_cast<int>(parse_long(key, value)); return; }
  if (key == "optimizer") { cfg.optimizer.algorithm = algorithm_from_name(value); return; }
  if (key == "agents") { cfg.optimizer.agents = static_cast<int>(parse_long(key, value)); return; }
  if (key == "iters" || key == "iterations") { cfg.optimizer.iterations = static_cast<int>(parse_long(key, value)); return; }
  if (key == "runs") { cfg.runs = static_cast<int>(parse_long(key, value)); return; }
  if (key == "epochs") { cfg.epochs = static_cast<int>(parse_long(key, value)); return; }
  if (key == "batch" || key == "batch_size") { cfg.batch_size = static_cast<int>(parse_long(key, value)); return; }
  if (key == "train_fraction") { cfg.train_fraction = parse_double(key, value); return; }
  if (key == "train_count") { cfg.train_count = parse_long(key, value); return; }
  if (key == "test_count") { cfg.test_count = parse_long(key, value); return; }
  if (key == "seed") { cfg.master_seed = static_cast<std::uint64_t>(parse_long(key, value)); return; }
  if (key == "out") { cfg.out_dir = value; return; }

  if (key == "space.n_min") { cfg.bounds.n_min = parse_double(key, value); return; }
  if (key == "space.n_max") { cfg.bounds.n_max = parse_double(key, value); return; }
  if (key == "space.eta_min") { cfg.bounds.eta_min = parse_double(key, value); return; }
  if (key == "space.eta_max") { cfg.bounds.eta_max = parse_double(key, value); return; }
  if (key == "space.phi_min") { cfg.bounds.phi_min = parse_double(key, value); return; }
  if (key == "space.phi_max") { cfg.bounds.phi_max = parse_double(key, value); return; }
  if (key == "space.lambda_min") { cfg.bounds.lambda_min = parse_double(key, value); return; }
  if (key == "space.lambda_max") { cfg.bounds.lambda_max = parse_double(key, value); return; }

  if (key == "opt.ihs.hmcr") { cfg.optimizer.ihs.hmcr = parse_double(key, value); return; }
  if (key == "opt.ihs.par_min") { cfg.optimizer.ihs.par_min = parse_double(key, value); return; }
  if (key == "opt.ihs.par_max") { cfg.optimizer.ihs.par_max = parse_double(key, value); return; }
  if (key == "opt.ihs.bw_min") { cfg.optimizer.ihs.bw_min = parse_double(key, value); return; }
  if (key == "opt.ihs.bw_max") { cfg.optimizer.ihs.bw_max = parse_double(key, value); return; }
  if (key == "opt.aiwpso.c1") { cfg.optimizer.aiwpso.c1 = parse_double(key, value); return; }
  if (key == "opt.aiwpso.c2") { cfg.optimizer.aiwpso.c2 = parse_double(key, value); return; }
  if (key == "opt.aiwpso.w") { cfg.optimizer.aiwpso.w = parse_double(key, value); return; }
  if (key == "opt.aiwpso.w_min") { cfg.optimizer.aiwpso.w_min = parse_double(key, value); return; }
  if (key == "opt.aiwpso.w_max") { cfg.optimizer.aiwpso.w_max = parse_double(key, value); return; }
  if (key == "opt.cs.tau") { cfg.optimizer.cs.tau = parse_double(key, value); return; }
  if (key == "opt.cs.tau_min") { cfg.optimizer.cs.tau_min = parse_double(key, value); return; }
  if (key == "opt.cs.tau_max") { cfg.optimizer.cs.tau_max = parse_double(key, value); return; }
  if (key == "opt.cs.p") { cfg.optimizer.cs.p = parse_double(key, value); return; }
  if (key == "opt.cs.p_min") { cfg.optimizer.cs.p_min = parse_double(key, value); return; }
  if (key == "opt.cs.p_max") { cfg.optimizer.cs.p_max = parse_double(key, value); return; }
  if (key == "opt.cs.schedule") { cfg.optimizer.cs.schedule = parse_bool(key, value); return; }
  if (key == "opt.fa.gamma") { cfg.optimizer.fa.gamma = parse_double(key, value); return; }
  if (key == "opt.fa.beta") { cfg.optimizer.fa.beta0 = parse_double(key, value); return; }
  if (key == "opt.fa.alpha") { cfg.optimizer.fa.alpha = parse_double(key, value); return; }
  if (key == "opt.bsa.mix_rate") { cfg.optimizer.bsa.mix_rate = parse_double(key, value); return; }
  if (key == "opt.bsa.F") { cfg.optimizer.bsa.F = parse_double(key, value); return; }
  if (key == "opt.jade.c") { cfg.optimizer.jade.c = parse_double(key, value); return; }
  if (key == "opt.jade.g") { cfg.optimizer.jade.g = parse_double(key, value); return; }
  if (key == "opt.cobide.pb") { cfg.optimizer.cobide.pb = parse_double(key, value); return; }
  if (key == "opt.cobide.ps") { cfg.optimizer.cobide.ps = parse_double(key, value); return; }

  throw ConfigError("unknown config key '" + key + "'");
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.resize(comment);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

BinaryDataset load_dataset(const ExperimentConfig& cfg) {
  if (cfg.dataset_path.empty()) throw ConfigError("no dataset path given");
  if (cfg.dataset_format == "idx")
    return load_idx(cfg.dataset_path, cfg.binarize_threshold);
  if (cfg.dataset_format == "semeion") return load_semeion(cfg.dataset_path);
  return load_csv_binary(cfg.dataset_path, cfg.csv_width, cfg.csv_height);
}

// ---------------------------------------------------------------------------
// Fitness and training

double fitness_of(const Candidate& candidate, const SearchSpace& space,
                  const Matrix& train, ModelKind kind, Learner learner,
                  int epochs, int batch_size, int dbm_sweeps,
                  double init_sigma) {
  const auto hp = decode(space, candidate.x);
  Rng rng(candidate.eval_seed);
  const StackedModel model = train_from_hyperparams(
      hp, train, kind, learner, epochs, batch_size, rng, nullptr, init_sigma);
  return reconstruction_mse(model, train, dbm_sweeps);
}

StackedModel train_from_hyperparams(
    const std::vector<LayerHyperparams>& hp, const Matrix& train,
    ModelKind kind, Learner learner, int epochs, int batch_size, Rng& rng,
    const EpochObserver& observer, double init_sigma) {
  StackedModel model;
  model.kind = kind;
  int below = static_cast<int>(train.cols());
  std::vector<TrainConfig> cfgs;
  for (const LayerHyperparams& layer_hp : hp) {
    model.layers.push_back(init_layer(below, layer_hp.n, rng, init_sigma));
    below = layer_hp.n;
    TrainConfig tc;
    tc.eta = layer_hp.eta;
    tc.alpha = layer_hp.phi;
    tc.lambda = layer_hp.lambda;
    tc.epochs = epochs;
    tc.batch_size = batch_size;
    tc.learner = learner;
    cfgs.push_back(tc);
  }
  train_greedy(model, train, cfgs, rng, observer);
  return model;
}

// ---------------------------------------------------------------------------
// Experiment loop

namespace {

std::pair<BinaryDataset, BinaryDataset> make_split(
    const ExperimentConfig& cfg, const BinaryDataset& ds, Rng& rng) {
  if (cfg.train_count > 0) {
    const Eigen::Index test_n = cfg.test_count > 0
                                    ? cfg.test_count
                                    : ds.size() - cfg.train_count;
    if (cfg.train_count + test_n > ds.size())
      throw ConfigError("train_count + test_count exceeds dataset size");
    const BinaryDataset permuted = subsample(ds, ds.size(), rng);
    BinaryDataset train = permuted;
    train.images = permuted.images.topRows(cfg.train_count);
    BinaryDataset test = permuted;
    test.images = permuted.images.middleRows(cfg.train_count, test_n);
    return {std::move(train), std::move(test)};
  }
  return split_train_test(ds, cfg.train_fraction, rng);
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.runs < 1 || cfg.epochs < 1 || cfg.batch_size < 1 || cfg.layers < 1)
    throw ConfigError("runs, epochs, batch_size and layers must be >= 1");

  const BinaryDataset dataset = load_dataset(cfg);
  const SearchSpace space = SearchSpace::for_layers(cfg.layers, cfg.bounds);

  RunReport report;
  report.config = cfg;

  for (int r = 0; r < cfg.runs; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult run;
    run.seed = derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(r)});

    Rng split_rng(derive_seed(run.seed, {0}));
    const auto [train, test] = make_split(cfg, dataset, split_rng);

    const FitnessFn fitness = [&](const Candidate& c) {
      return fitness_of(c, space, train.images, cfg.model, cfg.learner,
                        cfg.epochs, cfg.batch_size, cfg.dbm_sweeps);
    };
    OptResult opt = run_optimizer(cfg.optimizer, space, fitness,
                                  derive_seed(run.seed, {1}));

    run.best_hyperparams = decode(space, opt.best.x);
    run.best_train_mse = *opt.best.fitness;
    run.trace = std::move(opt.trace);
    run.evaluations = opt.evaluations;
    run.effective_evaluations = opt.effective_evaluations;
    run.nan_fitness_count = opt.nan_fitness_count;

    // Retrain the winner with its evaluation seed (reproducing the exact
    // model the optimizer scored) and record the layer-0 learning curves.
    Rng retrain_rng(opt.best.eval_seed);
    Rng pl_rng(derive_seed(run.seed, {2}));
    const EpochObserver observer = [&](int layer, int /*epoch*/,
                                       const RbmLayer& state, double err) {
      if (layer != 0) return;
      run.epoch_train_mse.push_back(err);
      run.epoch_log_pl.push_back(
          log_pseudo_likelihood(state, train.images, pl_rng));
    };
    const StackedModel model = train_from_hyperparams(
        run.best_hyperparams, train.images, cfg.model, cfg.learner,
        cfg.epochs, cfg.batch_size, retrain_rng, observer);

    run.test_mse = reconstruction_mse(model, test.images, cfg.dbm_sweeps);
    run.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report.runs.push_back(std::move(run));
  }

  std::vector<double> test_mses;
  for (const RunResult& run : report.runs) test_mses.push_back(run.test_mse);
  if (test_mses.size() >= 2) {
    std::tie(report.mean_test_mse, report.std_test_mse) =
        summarize(test_mses);
  } else {
    report.mean_test_mse = test_mses.front();
    report.std_test_mse = 0.0;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Reports

ComparisonMatrix compare_reports(const std::vector<RunReport>& reports) {
  if (reports.size() < 2)
    throw ContractError("compare_reports: need at least two reports");
  const std::size_t runs = reports.front().runs.size();
  for (const RunReport& r : reports)
    if (r.runs.size() != runs)
      throw ContractError("compare_reports: unequal run counts");

  ComparisonMatrix matrix;
  for (const RunReport& r : reports)
    matrix.names.push_back(algorithm_name(r.config.optimizer.algorithm));

  matrix.cells.assign(reports.size(), {});
  for (std::size_t i = 0; i < reports.size(); ++i) {
    matrix.cells[i].assign(reports.size(), std::nullopt);
    for (std::size_t j = 0; j < reports.size(); ++j) {
      if (i == j) continue;
      std::vector<double> xs, ys;
      for (std::size_t k = 0; k < runs; ++k) {
        xs.push_back(reports[i].runs[k].test_mse);
        ys.push_back(reports[j].runs[k].test_mse);
      }
      try {
        matrix.cells[i][j] = wilcoxon_signed_rank(xs, ys);
      } catch (const ContractError&) {
        // identical samples: no effective observations
      }
    }
  }
  return matrix;
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json config_to_json(const ExperimentConfig& cfg) {
  const OptimizerConfig& o = cfg.optimizer;
  return Json{
      {"dataset_path", cfg.dataset_path},
      {"dataset_format", cfg.dataset_format},
      {"csv_width", cfg.csv_width},
      {"csv_height", cfg.csv_height},
      {"binarize_threshold", cfg.binarize_threshold},
      {"model", cfg.model == ModelKind::DBM ? "dbm" : "dbn"},
      {"layers", cfg.layers},
      {"learner", cfg.learner == Learner::PCD ? "pcd" : "cd"},
      {"dbm_sweeps", cfg.dbm_sweeps},
      {"optimizer",
       Json{{"algorithm", algorithm_name(o.algorithm)},
            {"agents", o.agents},
            {"iterations", o.iterations},
            {"ihs", Json{{"hmcr", o.ihs.hmcr},
                         {"par_min", o.ihs.par_min},
                         {"par_max", o.ihs.par_max},
                         {"bw_min", o.ihs.bw_min},
                         {"bw_max", o.ihs.bw_max}}},
            {"aiwpso", Json{{"c1", o.aiwpso.c1},
                            {"c2", o.aiwpso.c2},
                            {"w", o.aiwpso.w},
                            {"w_min", o.aiwpso.w_min},
                            {"w_max", o.aiwpso.w_max}}},
            {"cs", Json{{"tau", o.cs.tau},
                        {"tau_min", o.cs.tau_min},
                        {"tau_max", o.cs.tau_max},
                        {"p", o.cs.p},
                        {"p_min", o.cs.p_min},
                        {"p_max", o.cs.p_max},
                        {"schedule", o.cs.schedule}}},
            {"fa", Json{{"gamma", o.fa.gamma},
                        {"beta", o.fa.beta0},
                        {"alpha", o.fa.alpha}}},
            {"bsa", Json{{"mix_rate", o.bsa.mix_rate}, {"F", o.bsa.F}}},
            {"jade", Json{{"c", o.jade.c}, {"g", o.jade.g}}},
            {"cobide", Json{{"pb", o.cobide.pb}, {"ps", o.cobide.ps}}}}},
      {"runs", cfg.runs},
      {"epochs", cfg.epochs},
      {"batch_size", cfg.batch_size},
      {"train_fraction", cfg.train_fraction},
      {"train_count", cfg.train_count},
      {"test_count", cfg.test_count},
      {"bounds", Json{{"n_min", cfg.bounds.n_min},
                      {"n_max", cfg.bounds.n_max},
                      {"eta_min", cfg.bounds.eta_min},
                      {"eta_max", cfg.bounds.eta_max},
                      {"phi_min", cfg.bounds.phi_min},
                      {"phi_max", cfg.bounds.phi_max},
                      {"lambda_min", cfg.bounds.lambda_min},
                      {"lambda_max", cfg.bounds.lambda_max}}},
      {"master_seed", cfg.master_seed},
  };
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  cfg.dataset_path = j.at("dataset_path").get<std::string>();
  cfg.dataset_format = j.at("dataset_format").get<std::string>();
  cfg.csv_width = j.at("csv_width").get<int>();
  cfg.csv_height = j.at("csv_height").get<int>();
  cfg.binarize_threshold = j.at("binarize_threshold").get<int>();
  cfg.model = j.at("model").get<std::string>() == "dbm" ? ModelKind::DBM
                                                        : ModelKind::DBN;
  cfg.layers = j.at("layers").get<int>();
  cfg.learner = j.at("learner").get<std::string>() == "pcd" ? Learner::PCD
                                                            : Learner::CD;
  cfg.dbm_sweeps = j.at("dbm_sweeps").get<int>();
  const Json& o = j.at("optimizer");
  cfg.optimizer.algorithm =
      algorithm_from_name(o.at("algorithm").get<std::string>());
  cfg.optimizer.agents = o.at("agents").get<int>();
  cfg.optimizer.iterations = o.at("iterations").get<int>();
  const Json& ihs = o.at("ihs");
  cfg.optimizer.ihs = {ihs.at("hmcr"), ihs.at("par_min"), ihs.at("par_max"),
                       ihs.at("bw_min"), ihs.at("bw_max")};
  const Json& pso = o.at("aiwpso");
  cfg.optimizer.aiwpso = {pso.at("c1"), pso.at("c2"), pso.at("w"),
                          pso.at("w_min"), pso.at("w_max")};
  const Json& cs = o.at("cs");
  cfg.optimizer.cs = {cs.at("tau"), cs.at("tau_min"), cs.at("tau_max"),
                      cs.at("p"),   cs.at("p_min"),   cs.at("p_max"),
                      cs.at("schedule").get<bool>()};
  const Json& fa = o.at("fa");
  cfg.optimizer.fa = {fa.at("gamma"), fa.at("beta"), fa.at("alpha")};
  const Json& bsa = o.at("bsa");
  cfg.optimizer.bsa = {bsa.at("mix_rate"), bsa.at("F")};
  const Json& jade = o.at("jade");
  cfg.optimizer.jade = {jade.at("c"), jade.at("g")};
  const Json& cobide = o.at("cobide");
  cfg.optimizer.cobide = {cobide.at("pb"), cobide.at("ps")};
  cfg.runs = j.at("runs").get<int>();
  cfg.epochs = j.at("epochs").get<int>();
  cfg.batch_size = j.at("batch_size").get<int>();
  cfg.train_fraction = j.at("train_fraction").get<double>();
  cfg.train_count = j.at("train_count").get<Eigen::Index>();
  cfg.test_count = j.at("test_count").get<Eigen::Index>();
  const Json& b = j.at("bounds");
  cfg.bounds = {b.at("n_min"),      b.at("n_max"),     b.at("eta_min"),
                b.at("eta_max"),    b.at("phi_min"),   b.at("phi_max"),
                b.at("lambda_min"), b.at("lambda_max")};
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  return cfg;
}

Json report_to_json_value(const RunReport& report) {
  Json runs = Json::array();
  for (const RunResult& run : report.runs) {
    Json hp = Json::array();
    for (const LayerHyperparams& layer : run.best_hyperparams)
      hp.push_back(Json{{"n", layer.n},
                        {"eta", layer.eta},
                        {"phi", layer.phi},
                        {"lambda", layer.lambda}});
    Json trace = Json::array();
    for (const TracePoint& p : run.trace)
      trace.push_back(Json{{"iteration", p.iteration},
                           {"best_fitness", p.best_fitness},
                           {"mean_fitness", p.mean_fitness},
                           {"elapsed_seconds", p.elapsed_seconds}});
    runs.push_back(Json{{"seed", run.seed},
                        {"best_hyperparams", std::move(hp)},
                        {"best_train_mse", run.best_train_mse},
                        {"test_mse", run.test_mse},
                        {"trace", std::move(trace)},
                        {"epoch_log_pl", run.epoch_log_pl},
                        {"epoch_train_mse", run.epoch_train_mse},
                        {"evaluations", run.evaluations},
                        {"effective_evaluations", run.effective_evaluations},
                        {"nan_fitness_count", run.nan_fitness_count},
                        {"elapsed_seconds", run.elapsed_seconds}});
  }
  return Json{{"config", config_to_json(report.config)},
              {"runs", std::move(runs)},
              {"mean_test_mse", report.mean_test_mse},
              {"std_test_mse", report.std_test_mse}};
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  return report_to_json_value(report).dump(2) + "\n";
}

RunReport report_from_json(const std::string& json_text) {
  const Json j = Json::parse(json_text);
  RunReport report;
  report.config = config_from_json(j.at("config"));
  for (const Json& jr : j.at("runs")) {
    RunResult run;
    run.seed = jr.at("seed").get<std::uint64_t>();
    for (const Json& jh : jr.at("best_hyperparams"))
      run.best_hyperparams.push_back({jh.at("n").get<int>(), jh.at("eta"),
                                      jh.at("phi"), jh.at("lambda")});
    run.best_train_mse = jr.at("best_train_mse").get<double>();
    run.test_mse = jr.at("test_mse").get<double>();
    for (const Json& jp : jr.at("trace"))
      run.trace.push_back({jp.at("iteration").get<int>(),
                           jp.at("best_fitness").get<double>(),
                           jp.at("mean_fitness").get<double>(),
                           jp.at("elapsed_seconds").get<double>()});
    run.epoch_log_pl = jr.at("epoch_log_pl").get<std::vector<double>>();
    run.epoch_train_mse =
        jr.at("epoch_train_mse").get<std::vector<double>>();
    run.evaluations = jr.at("evaluations").get<long>();
    run.effective_evaluations =
        jr.at("effective_evaluations").get<long>();
    run.nan_fitness_count = jr.at("nan_fitness_count").get<int>();
    run.elapsed_seconds = jr.at("elapsed_seconds").get<double>();
    report.runs.push_back(std::move(run));
  }
  report.mean_test_mse = j.at("mean_test_mse").get<double>();
  report.std_test_mse = j.at("std_test_mse").get<double>();
  return report;
}

std::string canonical_report_json(const RunReport& report) {
  Json j = report_to_json_value(report);
  for (Json& run : j.at("runs")) {
    run["elapsed_seconds"] = 0.0;
    for (Json& p : run.at("trace")) p["elapsed_seconds"] = 0.0;
  }
  return j.dump(2) + "\n";
}

void emit_outputs(const RunReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("emit_outputs: cannot create " + dir);

  {
    std::ofstream out(fs::path(dir) / "report.json");
    if (!out) throw DataError("emit_outputs: cannot write report.json");
    out << report_to_json(report);
  }
  {
    std::ofstream out(fs::path(dir) / "convergence.csv");
    if (!out) throw DataError("emit_outputs: cannot write convergence.csv");
    out << "run,iteration,best_fitness,mean_fitness,elapsed_s\n";
    for (std::size_t r = 0; r < report.runs.size(); ++r)
      for (const TracePoint& p : report.runs[r].trace)
        out << r << ',' << p.iteration << ',' << fmt_double(p.best_fitness)
            << ',' << fmt_double(p.mean_fitness) << ','
            << fmt_double(p.elapsed_seconds) << '\n';
  }
  {
    std::ofstream out(fs::path(dir) / "pl_curve.csv");
    if (!out) throw DataError("emit_outputs: cannot write pl_curve.csv");
    out << "run,epoch,log_pl,mse\n";
    for (std::size_t r = 0; r < report.runs.size(); ++r) {
      const RunResult& run = report.runs[r];
      for (std::size_t e = 0; e < run.epoch_log_pl.size(); ++e)
        out << r << ',' << e + 1 << ',' << fmt_double(run.epoch_log_pl[e])
            << ',' << fmt_double(run.epoch_train_mse[e]) << '\n';
    }
  }
}

}  // namespace ebm
