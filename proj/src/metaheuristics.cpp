#include "ebm/metaheuristics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ebm/errors.hpp"

namespace ebm {

Algorithm algorithm_from_name(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
  if (s == "ihs") return Algorithm::IHS;
  if (s == "aiwpso" || s == "pso") return Algorithm::AIWPSO;
  if (s == "cs") return Algorithm::CS;
  if (s == "fa") return Algorithm::FA;
  if (s == "bsa") return Algorithm::BSA;
  if (s == "jade") return Algorithm::JADE;
  if (s == "cobide") return Algorithm::COBIDE;
  if (s == "rs" || s == "random") return Algorithm::RS;
  throw ConfigError("unknown optimizer '" + name + "'");
}

std::string algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::IHS: return "ihs";
    case Algorithm::AIWPSO: return "aiwpso";
    case Algorithm::CS: return "cs";
    case Algorithm::FA: return "fa";
    case Algorithm::BSA: return "bsa";
    case Algorithm::JADE: return "jade";
    case Algorithm::COBIDE: return "cobide";
    case Algorithm::RS: return "rs";
  }
  return "?";
}

double mantegna_sigma(double beta) {
  const double num = std::tgamma(1.0 + beta) *
                     std::sin(std::numbers::pi * beta / 2.0);
  const double den = std::tgamma((1.0 + beta) / 2.0) * beta *
                     std::pow(2.0, (beta - 1.0) / 2.0);
  return std::pow(num / den, 1.0 / beta);
}

double ihs_par_at(const IhsParams& p, double pos) {
  return p.par_min + (p.par_max - p.par_min) * pos;
}

double ihs_bandwidth_at(const IhsParams& p, double pos) {
  return p.bw_max * std::pow(p.bw_min / p.bw_max, pos);
}

double aiwpso_inertia(const AiwpsoParams& p, int successes, int agents) {
  return p.w_min + (p.w_max - p.w_min) * static_cast<double>(successes) /
                       static_cast<double>(agents);
}

double lehmer_mean(const std::vector<double>& values) {
  if (values.empty()) throw ContractError("lehmer_mean: empty input");
  double sum = 0.0, sum_sq = 0.0;
  for (double v : values) {
    sum += v;
    sum_sq += v * v;
  }
  return sum_sq / sum;
}

Matrix covariance_eigenbasis(const std::vector<Vector>& points) {
  if (points.size() < 2)
    throw ContractError("covariance_eigenbasis: need at least 2 points");
  const auto dims = points.front().size();
  Vector mean = Vector::Zero(dims);
  for (const Vector& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Matrix cov = Matrix::Zero(dims, dims);
  for (const Vector& p : points) {
    const Vector centered = p - mean;
    cov += centered * centered.transpose();
  }
  cov /= static_cast<double>(points.size() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.info() != Eigen::Success)
    throw ContractError("covariance_eigenbasis: eigendecomposition failed");
  return solver.eigenvectors();
}

namespace {

constexpr double kLevyBeta = 1.5;

void require(bool ok, const char* msg) {
  if (!ok) throw ConfigError(msg);
}

void check_probability(double p, const char* name) {
  if (p < 0.0 || p > 1.0)
    throw ConfigError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

// ---------------------------------------------------------------------------
// Strategy base: bookkeeping shared by all algorithms.

struct Optimizer::Strategy {
  OptimizerConfig cfg;
  SearchSpace space;
  Rng rng;
  std::uint64_t eval_seed_base;
  std::vector<Candidate> population;
  Candidate best_;
  bool has_best_ = false;
  bool awaiting_tell_ = false;
  int tells_ = 0;  // completed rounds including the initial population
  std::size_t pending_ = 0;
  long evals_ = 0;
  long effective_evals_ = 0;
  int eigen_fallbacks_ = 0;
  long last_replacements_ = 0;  // proposals absorbed unconditionally

  Strategy(OptimizerConfig c, SearchSpace s, std::uint64_t seed)
      : cfg(std::move(c)),
        space(std::move(s)),
        rng(derive_seed(seed, {0})),
        eval_seed_base(derive_seed(seed, {1})) {}
  virtual ~Strategy() = default;

  virtual void on_init() {}
  virtual std::vector<Candidate> propose() = 0;
  virtual void absorb(std::vector<Candidate>& evaluated) = 0;

  // Linear position of the current round inside [0, 1]; round 1 maps to
  // 0 and round `iterations` to 1.
  double schedule_pos() const {
    if (cfg.iterations <= 1) return 0.0;
    return static_cast<double>(tells_ - 1) /
           static_cast<double>(cfg.iterations - 1);
  }

  std::size_t best_index() const {
    std::size_t idx = 0;
    for (std::size_t i = 1; i < population.size(); ++i)
      if (*population[i].fitness < *population[idx].fitness) idx = i;
    return idx;
  }

  void update_best(const Candidate& c) {
    if (!has_best_ || *c.fitness < *best_.fitness) {
      best_ = c;
      has_best_ = true;
    }
  }

  std::vector<Candidate> ask() {
    if (awaiting_tell_)
      throw ContractError("Optimizer::ask called twice without tell");
    last_replacements_ = 0;
    std::vector<Candidate> proposals;
    if (tells_ == 0) {
      proposals.reserve(static_cast<std::size_t>(cfg.agents));
      for (int i = 0; i < cfg.agents; ++i)
        proposals.push_back(sample_uniform(space, rng));
    } else {
      proposals = propose();
    }
    for (std::size_t i = 0; i < proposals.size(); ++i) {
      proposals[i].x = space.clamp(std::move(proposals[i].x));
      proposals[i].fitness.reset();
      proposals[i].eval_seed = derive_seed(
          eval_seed_base, {static_cast<std::uint64_t>(tells_), i});
    }
    pending_ = proposals.size();
    evals_ += static_cast<long>(proposals.size());
    effective_evals_ +=
        static_cast<long>(proposals.size()) - last_replacements_;
    awaiting_tell_ = true;
    return proposals;
  }

  void tell(std::vector<Candidate> evaluated) {
    if (!awaiting_tell_)
      throw ContractError("Optimizer::tell without a pending ask");
    if (evaluated.size() != pending_)
      throw ContractError("Optimizer::tell: candidate count mismatch");
    for (const Candidate& c : evaluated) {
      if (!c.fitness.has_value())
        throw ContractError("Optimizer::tell: candidate without fitness");
      update_best(c);
    }
    if (tells_ == 0) {
      population = std::move(evaluated);
      on_init();
    } else {
      absorb(evaluated);
    }
    awaiting_tell_ = false;
    ++tells_;
  }
};

namespace {

using Strategy = Optimizer::Strategy;

// ---------------------------------------------------------------------------
// Improved Harmony Search: one improvisation per iteration against the
// harmony memory; PAR rises linearly, bandwidth decays exponentially.

struct IhsStrategy : Strategy {
  using Strategy::Strategy;

  std::vector<Candidate> propose() override {
    const IhsParams& p = cfg.ihs;
    const double pos = schedule_pos();
    const double par = ihs_par_at(p, pos);
    const double bw = ihs_bandwidth_at(p, pos);
    Candidate c;
    c.x = Vector(space.dims());
    for (int d = 0; d < space.dims(); ++d) {
      const double lo = space.lower()(d);
      const double hi = space.upper()(d);
      if (rng.uniform() < p.hmcr) {
        double value = population[rng.uniform_index(population.size())].x(d);
        if (rng.uniform() < par) {
          // bandwidth is a percentage of the dimension's range
          const double step = rng.uniform() * bw * 0.01 * (hi - lo);
          value += rng.bernoulli(0.5) ? step : -step;
        }
        c.x(d) = value;
      } else {
        c.x(d) = rng.uniform(lo, hi);
      }
    }
    return {std::move(c)};
  }

  void absorb(std::vector<Candidate>& evaluated) override {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < population.size(); ++i)
      if (*population[i].fitness > *population[worst].fitness) worst = i;
    if (*evaluated[0].fitness < *population[worst].fitness)
      population[worst] = std::move(evaluated[0]);
  }
};

// ---------------------------------------------------------------------------
// Adaptive inertia weight PSO: inertia follows the fraction of particles
// that improved their personal best in the last iteration.

struct AiwpsoStrategy : Strategy {
  using Strategy::Strategy;

  std::vector<Vector> velocity;
  std::vector<Candidate> pbest;
  double w = 0.0;

  void on_init() override {
    w = cfg.aiwpso.w;
    pbest = population;
    velocity.assign(population.size(), Vector::Zero(space.dims()));
  }

  std::vector<Candidate> propose() override {
    const AiwpsoParams& p = cfg.aiwpso;
    const Vector& gbest = best_.x;
    std::vector<Candidate> proposals(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
      Vector& v = velocity[i];
      const Vector& x = population[i].x;
      for (int d = 0; d < space.dims(); ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        v(d) = w * v(d) + p.c1 * r1 * (pbest[i].x(d) - x(d)) +
               p.c2 * r2 * (gbest(d) - x(d));
      }
      proposals[i].x = x + v;
    }
    return proposals;
  }

  void absorb(std::vector<Candidate>& evaluated) override {
    int successes = 0;
    for (std::size_t i = 0; i < evaluated.size(); ++i) {
      if (*evaluated[i].fitness < *pbest[i].fitness) {
        pbest[i] = evaluated[i];
        ++successes;
      }
      population[i] = std::move(evaluated[i]);
    }
    w = aiwpso_inertia(cfg.aiwpso, successes,
                       static_cast<int>(population.size()));
  }
};

// ---------------------------------------------------------------------------
// Cuckoo Search: Levy flights around the best nest, greedy per-nest
// replacement, worst nests abandoned and resampled.

struct CsStrategy : Strategy {
  using Strategy::Strategy;

  std::vector<bool> abandoned;

  double levy_step() {
    static const double sigma_u = mantegna_sigma(kLevyBeta);
    const double u = rng.normal(0.0, sigma_u);
    double v = rng.normal();
    while (v == 0.0) v = rng.normal();
    return u / std::pow(std::abs(v), 1.0 / kLevyBeta);
  }

  std::vector<Candidate> propose() override {
    const CsParams& p = cfg.cs;
    const double pos = schedule_pos();
    const double tau =
        p.schedule ? p.tau_min + (p.tau_max - p.tau_min) * pos : p.tau;
    const double pa = p.schedule ? p.p_min + (p.p_max - p.p_min) * pos : p.p;

    // Decide the abandonment set up front: the worst ceil(pa * agents)
    // nests, never the one holding the population best.
    const std::size_t n = population.size();
    abandoned.assign(n, false);
    std::size_t abandon_count = static_cast<std::size_t>(
        std::ceil(pa * static_cast<double>(n)));
    abandon_count = std::min(abandon_count, n > 0 ? n - 1 : 0);
    if (abandon_count > 0) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return *population[a].fitness >
                                *population[b].fitness;
                       });
      const std::size_t keep = best_index();
      std::size_t marked = 0;
      for (std::size_t idx : order) {
        if (marked == abandon_count) break;
        if (idx == keep) continue;
        abandoned[idx] = true;
        ++marked;
      }
      last_replacements_ = static_cast<long>(marked);
    }

    const Vector& gbest = best_.x;
    std::vector<Candidate> proposals(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (abandoned[i]) {
        proposals[i] = sample_uniform(space, rng);
        continue;
      }
      const Vector& x = population[i].x;
      Vector next = x;
      for (int d = 0; d < space.dims(); ++d)
        next(d) += tau * levy_step() * (x(d) - gbest(d));
      proposals[i].x = std::move(next);
    }
    return proposals;
  }

  void absorb(std::vector<Candidate>& evaluated) override {
    for (std::size_t i = 0; i < evaluated.size(); ++i) {
      if (abandoned[i] || *evaluated[i].fitness < *population[i].fitness)
        population[i] = std::move(evaluated[i]);
    }
  }
};

// ---------------------------------------------------------------------------
// Firefly Algorithm. Distances are measured in range-normalised
// coordinates so the light absorption is meaningful for mixed scales.

struct FaStrategy : Strategy {
  using Strategy::Strategy;

  std::vector<Candidate> propose() override {
    const FaParams& p = cfg.fa;
    const std::size_t n = population.size();
    const Vector range = space.upper() - space.lower();
    // standard geometric cooling of the random-walk scale
    const double alpha = p.alpha * std::pow(0.97, tells_ - 1);
    std::vector<Vector> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = population[i].x;
    const std::size_t brightest = best_index();

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (*population[j].fitness >= *population[i].fitness) continue;
        double r2 = 0.0;
        for (int d = 0; d < space.dims(); ++d) {
          const double diff = (pos[i](d) - pos[j](d)) / range(d);
          r2 += diff * diff;
        }
        const double attract = p.beta0 * std::exp(-p.gamma * r2);
        for (int d = 0; d < space.dims(); ++d)
          pos[i](d) += attract * (pos[j](d) - pos[i](d)) +
                       alpha * (rng.uniform() - 0.5) * range(d);
      }
      if (i == brightest) {
        for (int d = 0; d < space.dims(); ++d)
          pos[i](d) += alpha * (rng.uniform() - 0.5) * range(d);
      }
    }

    std::vector<Candidate> proposals(n);
    for (std::size_t i = 0; i < n; ++i) proposals[i].x = std::move(pos[i]);
    return proposals;
  }

  void absorb(std::vector<Candidate>& evaluated) override {
    population = std::move(evaluated);
  }
};

// ---------------------------------------------------------------------------
// Backtracking Search Algorithm.

struct BsaStrategy : Strategy {
  using Strategy::Strategy;

  std::vector<Vector> old_population;

  void on_init() override {
    old_population.clear();
    for (const Candidate& c : population) old_population.push_back(c.x);
  }

  std::vector<Candidate> propose() override {
    const BsaParams& p = cfg.bsa;
    const std::size_t n = population.size();

    if (rng.uniform() < 0.5) {
      old_population.clear();
      for (const Candidate& c : population) old_population.push_back(c.x);
    }
    // the historical population is reshuffled every iteration
    for (std::size_t i = n; i > 1; --i)
      std::swap(old_population[i - 1], old_population[rng.uniform_index(i)]);

    const double amplitude = p.F * rng.normal();
    // Two crossover map strategies, picked per iteration with equal
    // probability: a random-size subset of at most mix_rate * D
    // dimensions, or exactly one dimension.
    const bool single_dim = rng.uniform() < 0.5;
    const std::size_t dims = static_cast<std::size_t>(space.dims());
    std::vector<Candidate> proposals(n);
    std::vector<std::size_t> perm(dims);
    for (std::size_t i = 0; i < n; ++i) {
      Vector trial = population[i].x;
      if (single_dim) {
        const std::size_t d = rng.uniform_index(dims);
        trial(d) += amplitude * (old_population[i](d) - trial(d));
      } else {
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t k = dims; k > 1; --k)
          std::swap(perm[k - 1], perm[rng.uniform_index(k)]);
        const auto count = static_cast<std::size_t>(std::ceil(
            p.mix_rate * rng.uniform() * static_cast<double>(dims)));
        for (std::size_t k = 0; k < count && k < dims; ++k)
          trial(perm[k]) +=
              amplitude * (old_population[i](perm[k]) - trial(perm[k]));
      }
      proposals[i].x = std::move(trial);
    }
    return proposals;
  }

  void absorb(std::vector<Candidate>& evaluated) override {
    for (std::size_t i = 0; i < evaluated.size(); ++i)
      if (*evaluated[i].fitness < *population[i].fitness)
        population[i] = std::move(evaluated[i]);
  }
};

// ---------------------------------------------------------------------------
// JADE: DE/current-to-p-best with external archive and adaptive mu_F,
// mu_CR (Lehmer mean over successful F values).

struct JadeStrategy : Strategy {
  using Strategy::Strategy;

  std::vector<Vector> archive;
  double mu_f = 0.5;
  double mu_cr = 0.5;
  std::vector<double> trial_f;
  std::vector<double> trial_cr;

  std::vector<Candidate> propose() override {
    const JadeParams& p = cfg.jade;
    const std::size_t n = population.size();
    const std::size_t p_count = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(p.g * static_cast<double>(n))));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return *population[a].fitness < *population[b].fitness;
                     });

    trial_f.resize(n);
    trial_cr.resize(n);
    std::vector<Candidate> proposals(n);
    for (std::size_t i = 0; i < n; ++i) {
      double f;
      do {
        f = rng.cauchy(mu_f, 0.1);
      } while (f <= 0.0);
      f = std::min(f, 1.0);
      const double cr =
          std::clamp(rng.normal(mu_cr, 0.1), 0.0, 1.0);
      trial_f[i] = f;
      trial_cr[i] = cr;

      const Vector& x = population[i].x;
      const Vector& x_pbest =
          population[order[rng.uniform_index(p_count)]].x;
      std::size_t r1;
      do {
        r1 = rng.uniform_index(n);
      } while (r1 == i);
      std::size_t r2;
      do {
        r2 = rng.uniform_index(n + archive.size());
      } while (r2 == i || r2 == r1);
      const Vector& x_r2 =
          r2 < n ? population[r2].x : archive[r2 - n];

      const Vector mutant =
          x + f * (x_pbest - x) + f * (population[r1].x - x_r2);

      Vector trial = x;
      const std::size_t jrand =
          rng.uniform_index(static_cast<std::size_t>(space.dims()));
      for (int d = 0; d < space.dims(); ++d)
        if (static_cast<std::size_t>(d) == jrand || rng.uniform() < cr)
          trial(d) = mutant(d);
      proposals[i].x = std::move(trial);
    }
    return proposals;
  }

  void absorb(std::vector<Candidate>& evaluated) override {
    const JadeParams& p = cfg.jade;
    std::vector<double> good_f;
    std::vector<double> good_cr;
    for (std::size_t i = 0; i < evaluated.size(); ++i) {
      if (*evaluated[i].fitness < *population[i].fitness) {
        archive.push_back(population[i].x);
        good_f.push_back(trial_f[i]);
        good_cr.push_back(trial_cr[i]);
        population[i] = std::move(evaluated[i]);
      }
    }
    while (archive.size() > population.size())
      archive.erase(archive.begin() +
                    static_cast<std::ptrdiff_t>(
                        rng.uniform_index(archive.size())));
    if (!good_f.empty()) {
      const double lehmer = lehmer_mean(good_f);
      const double cr_mean =
          std::accumulate(good_cr.begin(), good_cr.end(), 0.0) /
          static_cast<double>(good_cr.size());
      mu_f = (1.0 - p.c) * mu_f + p.c * lehmer;
      mu_cr = (1.0 - p.c) * mu_cr + p.c * cr_mean;
    }
  }
};

// ---------------------------------------------------------------------------
// CoBiDE: rand/1 mutation with bimodal Cauchy F/CR; with probability pb
// the crossover runs in the eigenbasis of the covariance matrix of the
// best ps-fraction of the population.

struct CobideStrategy : Strategy {
  using Strategy::Strategy;

  std::vector<Candidate> propose() override {
    const CobideParams& p = cfg.cobide;
    const std::size_t n = population.size();
    const auto dims = static_cast<std::size_t>(space.dims());

    bool use_eigen = rng.uniform() < p.pb;
    Matrix basis;
    if (use_eigen) {
      const std::size_t count = std::max<std::size_t>(
          2, static_cast<std::size_t>(
                 std::ceil(p.ps * static_cast<double>(n))));
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return *population[a].fitness <
                                *population[b].fitness;
                       });
      const std::size_t used = std::min(count, n);
      std::vector<Vector> points;
      points.reserve(used);
      for (std::size_t k = 0; k < used; ++k)
        points.push_back(population[order[k]].x);
      try {
        basis = covariance_eigenbasis(points);
      } catch (const ContractError&) {
        use_eigen = false;
        ++eigen_fallbacks_;
      }
    }

    std::vector<Candidate> proposals(n);
    for (std::size_t i = 0; i < n; ++i) {
      double f;
      do {
        f = rng.cauchy(rng.bernoulli(0.5) ? 0.65 : 1.0, 0.1);
      } while (f <= 0.0);
      f = std::min(f, 1.0);
      double cr;
      do {
        cr = rng.cauchy(rng.bernoulli(0.5) ? 0.1 : 0.95, 0.1);
      } while (cr <= 0.0);
      cr = std::min(cr, 1.0);

      std::size_t r1, r2, r3;
      do {
        r1 = rng.uniform_index(n);
      } while (r1 == i);
      do {
        r2 = rng.uniform_index(n);
      } while (r2 == i || r2 == r1);
      do {
        r3 = rng.uniform_index(n);
      } while (r3 == i || r3 == r1 || r3 == r2);

      const Vector mutant = population[r1].x +
                            f * (population[r2].x - population[r3].x);
      const Vector& parent = population[i].x;
      const std::size_t jrand = rng.uniform_index(dims);

      Vector trial;
      if (use_eigen) {
        const Vector yp = basis.transpose() * parent;
        const Vector ym = basis.transpose() * mutant;
        Vector y = yp;
        for (int d = 0; d < space.dims(); ++d)
          if (static_cast<std::size_t>(d) == jrand || rng.uniform() < cr)
            y(d) = ym(d);
        trial = basis * y;
      } else {
        trial = parent;
        for (int d = 0; d < space.dims(); ++d)
          if (static_cast<std::size_t>(d) == jrand || rng.uniform() < cr)
            trial(d) = mutant(d);
      }
      proposals[i].x = std::move(trial);
    }
    return proposals;
  }

  void absorb(std::vector<Candidate>& evaluated) override {
    for (std::size_t i = 0; i < evaluated.size(); ++i)
      if (*evaluated[i].fitness < *population[i].fitness)
        population[i] = std::move(evaluated[i]);
  }
};

// ---------------------------------------------------------------------------

struct RsStrategy : Strategy {
  using Strategy::Strategy;

  std::vector<Candidate> propose() override {
    std::vector<Candidate> proposals;
    proposals.reserve(population.size());
    for (std::size_t i = 0; i < population.size(); ++i)
      proposals.push_back(sample_uniform(space, rng));
    return proposals;
  }

  void absorb(std::vector<Candidate>& evaluated) override {
    population = std::move(evaluated);
  }
};

std::unique_ptr<Strategy> make_strategy(OptimizerConfig cfg, SearchSpace space,
                                        std::uint64_t seed) {
  require(cfg.iterations >= 1, "optimizer: iterations must be >= 1");
  const bool single_ok =
      cfg.algorithm == Algorithm::IHS || cfg.algorithm == Algorithm::RS;
  require(cfg.agents >= (single_ok ? 1 : 2),
          "optimizer: not enough agents for this algorithm");
  check_probability(cfg.ihs.hmcr, "ihs.hmcr");
  check_probability(cfg.ihs.par_min, "ihs.par_min");
  check_probability(cfg.ihs.par_max, "ihs.par_max");
  check_probability(cfg.cs.p, "cs.p");
  check_probability(cfg.bsa.mix_rate, "bsa.mix_rate");
  check_probability(cfg.jade.c, "jade.c");
  check_probability(cfg.jade.g, "jade.g");
  check_probability(cfg.cobide.pb, "cobide.pb");
  check_probability(cfg.cobide.ps, "cobide.ps");

  switch (cfg.algorithm) {
    case Algorithm::IHS:
      return std::make_unique<IhsStrategy>(std::move(cfg), std::move(space),
                                           seed);
    case Algorithm::AIWPSO:
      return std::make_unique<AiwpsoStrategy>(std::move(cfg),
                                              std::move(space), seed);
    case Algorithm::CS:
      return std::make_unique<CsStrategy>(std::move(cfg), std::move(space),
                                          seed);
    case Algorithm::FA:
      return std::make_unique<FaStrategy>(std::move(cfg), std::move(space),
                                          seed);
    case Algorithm::BSA:
      return std::make_unique<BsaStrategy>(std::move(cfg), std::move(space),
                                           seed);
    case Algorithm::JADE:
      require(cfg.agents >= 4, "jade: at least 4 agents required");
      return std::make_unique<JadeStrategy>(std::move(cfg), std::move(space),
                                            seed);
    case Algorithm::COBIDE:
      require(cfg.agents >= 4, "cobide: at least 4 agents required");
      return std::make_unique<CobideStrategy>(std::move(cfg),
                                              std::move(space), seed);
    case Algorithm::RS:
      return std::make_unique<RsStrategy>(std::move(cfg), std::move(space),
                                          seed);
  }
  throw ConfigError("optimizer: unknown algorithm");
}

}  // namespace

Optimizer::Optimizer(OptimizerConfig cfg, SearchSpace space,
                     std::uint64_t seed)
    : impl_(make_strategy(std::move(cfg), std::move(space), seed)) {}

Optimizer::~Optimizer() = default;
Optimizer::Optimizer(Optimizer&&) noexcept = default;
Optimizer& Optimizer::operator=(Optimizer&&) noexcept = default;

std::vector<Candidate> Optimizer::ask() { return impl_->ask(); }
void Optimizer::tell(std::vector<Candidate> evaluated) {
  impl_->tell(std::move(evaluated));
}

const Candidate& Optimizer::best() const {
  if (!impl_->has_best_)
    throw ContractError("Optimizer::best before any tell");
  return impl_->best_;
}

double Optimizer::population_mean_fitness() const {
  if (impl_->population.empty())
    throw ContractError("Optimizer: population not initialised");
  double sum = 0.0;
  for (const Candidate& c : impl_->population) sum += *c.fitness;
  return sum / static_cast<double>(impl_->population.size());
}

int Optimizer::iteration() const { return std::max(0, impl_->tells_ - 1); }
long Optimizer::evaluations() const { return impl_->evals_; }
long Optimizer::effective_evaluations() const {
  return impl_->effective_evals_;
}
int Optimizer::eigen_fallbacks() const { return impl_->eigen_fallbacks_; }

OptResult run_optimizer(const OptimizerConfig& cfg, const SearchSpace& space,
                        const FitnessFn& fitness, std::uint64_t seed) {
  Optimizer opt(cfg, space, seed);
  OptResult result;
  const auto start = std::chrono::steady_clock::now();

  const auto evaluate = [&](std::vector<Candidate>& proposals) {
    for (Candidate& c : proposals) {
      double f = fitness(c);
      if (std::isnan(f)) {
        f = std::numeric_limits<double>::max();
        ++result.nan_fitness_count;
      }
      c.fitness = f;
    }
  };

  for (int round = 0; round <= cfg.iterations; ++round) {
    std::vector<Candidate> proposals = opt.ask();
    evaluate(proposals);
    opt.tell(std::move(proposals));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    result.trace.push_back({round, *opt.best().fitness,
                            opt.population_mean_fitness(), elapsed});
  }

  result.best = opt.best();
  result.evaluations = opt.evaluations();
  result.effective_evaluations = opt.effective_evaluations();
  return result;
}

}  // namespace ebm
