#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ebm/hyperspace.hpp"

namespace ebm {

enum class Algorithm { IHS, AIWPSO, CS, FA, BSA, JADE, COBIDE, RS };

Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm alg);

struct IhsParams {
  double hmcr = 0.7;
  double par_min = 0.1;
  double par_max = 0.7;
  double bw_min = 1.0;   // bandwidth, percent of each dimension's range
  double bw_max = 10.0;
};

struct AiwpsoParams {
  double c1 = 1.7;
  double c2 = 1.7;
  double w = 0.7;      // initial inertia weight
  double w_min = 0.5;
  double w_max = 1.5;
};

struct CsParams {
  double tau = 0.1;    // Levy step scale
  double tau_min = 0.5;
  double tau_max = 1.0;
  double p = 0.25;     // abandonment fraction
  double p_min = 0.05;
  double p_max = 0.5;
  bool schedule = false;  // when set, tau and p move linearly between
                          // their bounds over the iterations
};

struct FaParams {
  double gamma = 1.0;  // light absorption
  double beta0 = 1.0;  // attractiveness at distance zero
  double alpha = 0.2;  // random-walk scale, fraction of the range
};

struct BsaParams {
  double mix_rate = 1.0;
  double F = 3.0;  // amplitude of the search-direction matrix
};

struct JadeParams {
  double c = 0.1;   // adaptation rate for mu_F / mu_CR
  double g = 0.05;  // greediness: fraction of top agents used as p-best
};

struct CobideParams {
  double pb = 0.4;  // probability of eigen-coordinate crossover
  double ps = 0.5;  // fraction of the population used for the covariance
};

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::RS;
  int agents = 5;
  int iterations = 50;
  IhsParams ihs;
  AiwpsoParams aiwpso;
  CsParams cs;
  FaParams fa;
  BsaParams bsa;
  JadeParams jade;
  CobideParams cobide;
};

/// Uniform ask/tell front end over the eight search strategies,
/// minimising a black-box fitness over a SearchSpace.
///
/// The first ask() returns the uniformly sampled initial population
/// (iteration 0); every later ask() returns this iteration's proposals:
/// one candidate for IHS, `agents` candidates for everything else.
/// Proposals carry eval_seed values derived from (seed, iteration,
/// index), so fitness evaluation may run in parallel without changing
/// results. ask() twice without an intervening tell() is an error.
class Optimizer {
 public:
  Optimizer(OptimizerConfig cfg, SearchSpace space, std::uint64_t seed);
  ~Optimizer();
  Optimizer(Optimizer&&) noexcept;
  Optimizer& operator=(Optimizer&&) noexcept;

  std::vector<Candidate> ask();
  void tell(std::vector<Candidate> evaluated);

  /// Best candidate ever told; never worsens.
  const Candidate& best() const;
  /// Mean fitness of the current population.
  double population_mean_fitness() const;
  /// Completed ask/tell rounds, counting the initial population as 0.
  int iteration() const;
  /// Total candidates handed out for evaluation.
  long evaluations() const;
  /// Evaluations that competed for a slot; for CS this excludes the
  /// unconditional abandonment replacements, for all other algorithms
  /// it equals evaluations().
  long effective_evaluations() const;
  /// CoBiDE only: iterations where the eigendecomposition failed and the
  /// crossover fell back to standard coordinates.
  int eigen_fallbacks() const;

  struct Strategy;  // implementation detail, defined in the .cpp

 private:
  std::unique_ptr<Strategy> impl_;
};

/// sigma_u of Mantegna's Levy-step algorithm (0.6966 for beta = 1.5).
double mantegna_sigma(double beta);

/// IHS pitch-adjusting rate at schedule position pos in [0, 1]
/// (linear par_min -> par_max).
double ihs_par_at(const IhsParams& p, double pos);

/// IHS bandwidth at schedule position pos (exponential bw_max -> bw_min),
/// in percent of each dimension's range.
double ihs_bandwidth_at(const IhsParams& p, double pos);

/// AIWPSO inertia weight from last iteration's personal-best successes.
double aiwpso_inertia(const AiwpsoParams& p, int successes, int agents);

/// Lehmer mean sum(f^2)/sum(f) of the successful F values.
double lehmer_mean(const std::vector<double>& values);

/// Orthonormal eigenvector basis (columns) of the sample covariance of
/// `points`; used by CoBiDE's eigen crossover. Requires >= 2 points.
Matrix covariance_eigenbasis(const std::vector<Vector>& points);

struct TracePoint {
  int iteration = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double elapsed_seconds = 0.0;
};

struct OptResult {
  Candidate best;
  std::vector<TracePoint> trace;  // entry 0 is the initial population
  long evaluations = 0;
  long effective_evaluations = 0;
  int nan_fitness_count = 0;  // NaN results quarantined as worst
};

using FitnessFn = std::function<double(const Candidate&)>;

/// Full optimisation loop: initial population plus cfg.iterations
/// ask/evaluate/tell rounds. Deterministic for a fixed seed. Candidates
/// whose fitness comes back NaN are assigned the worst representable
/// finite value and counted in nan_fitness_count.
OptResult run_optimizer(const OptimizerConfig& cfg, const SearchSpace& space,
                        const FitnessFn& fitness, std::uint64_t seed);

}  // namespace ebm
