#include "safegame/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "safegame/error.hpp"

namespace safegame {

namespace {

Eigen::VectorXd frequenciesOf(const Eigen::VectorXi& counts) {
  const double total = counts.sum();
  if (total == 0) return Eigen::VectorXd::Zero(counts.size());
  return counts.cast<double>() / total;
}

struct Start {
  std::mt19937_64 rng;
  Eigen::VectorXi counts;
};

Start initialize(const SimConfig& config) {
  Start s{std::mt19937_64(config.seed), {}};
  const Eigen::VectorXd x0 = config.initialFrequencies
                                 ? *config.initialFrequencies
                                 : uniformSimplexPoint(config.payoff.rows(), s.rng);
  s.counts = largestRemainder(x0, config.population);
  return s;
}

SimResult finish(SimResult r, const Eigen::VectorXi& counts, SimOutcome outcome, int rounds) {
  r.counts.push_back(counts);
  r.outcome = outcome;
  r.finalState = PopulationState(frequenciesOf(counts));
  r.roundsElapsed = rounds;
  return r;
}

}  // namespace

std::string_view toString(SimOutcome outcome) {
  switch (outcome) {
    case SimOutcome::equilibrium: return "equilibrium";
    case SimOutcome::extinction: return "extinction";
    case SimOutcome::maxRoundsReached: return "maxRoundsReached";
  }
  return "unknown";
}

void SimConfig::validate() const {
  if (payoff.rows() < 1 || payoff.rows() != payoff.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "simulation needs a square payoff matrix");
  }
  if (!payoff.allFinite() || !std::isfinite(phi)) {
    throw Error(ErrorCode::InvalidArgument, "payoffs and threshold must be finite");
  }
  if (population < 2) throw Error(ErrorCode::OutOfRange, "population must be at least 2");
  if (maxRounds < 1) throw Error(ErrorCode::OutOfRange, "maxRounds must be at least 1");
  if (patience < 1) throw Error(ErrorCode::OutOfRange, "patience must be at least 1");
  if (mode == SimMode::stochastic) {
    if (!sigma) throw Error(ErrorCode::InvalidArgument, "stochastic mode needs a sigma matrix");
    if (sigma->rows() != payoff.rows() || sigma->cols() != payoff.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "sigma matrix must match the payoff matrix");
    }
    if (!sigma->allFinite() || (sigma->array() < 0.0).any()) {
      throw Error(ErrorCode::OutOfRange, "sigma entries must be finite and nonnegative");
    }
  }
  if (initialFrequencies) {
    if (initialFrequencies->size() != payoff.rows()) {
      throw Error(ErrorCode::DimensionMismatch, "initial state has the wrong number of types");
    }
    PopulationState check(*initialFrequencies);
    if (check.isExtinct()) throw Error(ErrorCode::OutOfRange, "initial state is empty");
  }
}

PopulationState stepDeterministic(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                  const PopulationState& state, double phi) {
  if (payoff.rows() != state.types() || payoff.cols() != state.types()) {
    throw Error(ErrorCode::DimensionMismatch, "state does not match the payoff matrix");
  }
  if (state.isExtinct()) return state;
  const Eigen::VectorXd fitness = payoff * state.frequencies();
  Eigen::VectorXd next = state.frequencies();
  bool culled = false;
  for (Eigen::Index i = 0; i < next.size(); ++i) {
    if (fitness(i) < phi && next(i) > 0.0) {
      next(i) = 0.0;
      culled = true;
    }
  }
  if (!culled) return state;
  const double total = next.sum();
  if (total == 0.0) return PopulationState::extinct(state.types());
  return PopulationState(next / total);
}

FitnessModel fitnessDistribution(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                 const Eigen::Ref<const Eigen::MatrixXd>& sigma,
                                 const PopulationState& state, long population) {
  const Eigen::Index n = state.types();
  if (payoff.rows() != n || payoff.cols() != n || sigma.rows() != n || sigma.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "payoff, sigma and state disagree in size");
  }
  if (population < 1) throw Error(ErrorCode::OutOfRange, "population must be positive");
  const Eigen::VectorXd& x = state.frequencies();
  FitnessModel model;
  model.means = payoff * x;
  model.stddevs = ((sigma.array().square().matrix() * x).array().sqrt() /
                   std::sqrt(static_cast<double>(population)))
                      .matrix();
  return model;
}

Eigen::Matrix2d hawkDoveSigma() {
  Eigen::Matrix2d s;
  s << 75.0, 15.0,
       15.0, 25.0;
  return s;
}

Eigen::VectorXi largestRemainder(const Eigen::Ref<const Eigen::VectorXd>& weights, long total) {
  const double sum = weights.sum();
  if (!(sum > 0.0) || (weights.array() < 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "largest-remainder weights must be nonnegative and nonzero");
  }
  const Eigen::Index n = weights.size();
  Eigen::VectorXi counts(n);
  std::vector<double> fraction(static_cast<std::size_t>(n));
  long assigned = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double quota = weights(i) / sum * static_cast<double>(total);
    const double whole = std::floor(quota);
    counts(i) = static_cast<int>(whole);
    fraction[static_cast<std::size_t>(i)] = quota - whole;
    assigned += counts(i);
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return fraction[static_cast<std::size_t>(a)] > fraction[static_cast<std::size_t>(b)];
  });
  // Floating-point quotas can leave the remainder off by one either way.
  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
    if (weights(order[k]) > 0.0) {
      ++counts(order[k]);
      ++assigned;
    }
  }
  for (std::size_t k = order.size(); assigned > total; ) {
    k = (k == 0 ? order.size() : k) - 1;
    if (counts(order[k]) > 0) {
      --counts(order[k]);
      --assigned;
    }
  }
  return counts;
}

Eigen::VectorXd uniformSimplexPoint(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) e(i) = -std::log1p(-unit(rng));
  return e / e.sum();
}

double sampleFitness(const FitnessModel& model, Eigen::Index type, std::mt19937_64& rng) {
  const double sd = model.stddevs(type);
  if (sd == 0.0) return model.means(type);
  return std::normal_distribution<double>(model.means(type), sd)(rng);
}

SimResult runDeterministic(const SimConfig& config) {
  config.validate();
  if (config.mode != SimMode::deterministic) {
    throw Error(ErrorCode::InvalidArgument, "runDeterministic needs deterministic mode");
  }
  auto [rng, counts] = initialize(config);
  const Eigen::Index n = counts.size();
  SimResult result{{}, {}, SimOutcome::maxRoundsReached, PopulationState::extinct(n), 0, config.seed};

  for (int round = 1; round <= config.maxRounds; ++round) {
    const PopulationState state(frequenciesOf(counts));
    const Eigen::VectorXd fitness = config.payoff * state.frequencies();
    Eigen::VectorXi culled = Eigen::VectorXi::Zero(n);
    Eigen::VectorXd meanFitness = Eigen::VectorXd::Constant(n, std::nan(""));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (counts(i) == 0) continue;
      meanFitness(i) = fitness(i);
      if (fitness(i) < config.phi) culled(i) = counts(i);
    }
    result.rounds.push_back({state, meanFitness, culled});
    result.counts.push_back(counts);
    if (culled.sum() == 0) {
      return finish(std::move(result), counts, SimOutcome::equilibrium, round);
    }
    counts -= culled;
    if (counts.sum() == 0) {
      return finish(std::move(result), counts, SimOutcome::extinction, round);
    }
    counts = largestRemainder(counts.cast<double>(), config.population);
  }
  return finish(std::move(result), counts, SimOutcome::maxRoundsReached, config.maxRounds);
}

SimResult runStochastic(const SimConfig& config) {
  config.validate();
  if (config.mode != SimMode::stochastic) {
    throw Error(ErrorCode::InvalidArgument, "runStochastic needs stochastic mode");
  }
  auto [rng, counts] = initialize(config);
  const Eigen::Index n = counts.size();
  SimResult result{{}, {}, SimOutcome::maxRoundsReached, PopulationState::extinct(n), 0, config.seed};

  int unchanged = 0;
  for (int round = 1; round <= config.maxRounds; ++round) {
    const PopulationState state(frequenciesOf(counts));
    const FitnessModel model = fitnessDistribution(config.payoff, *config.sigma, state, config.population);
    Eigen::VectorXi survivors = Eigen::VectorXi::Zero(n);
    Eigen::VectorXd meanFitness = Eigen::VectorXd::Constant(n, std::nan(""));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (counts(i) == 0) continue;
      double sum = 0.0;
      for (int k = 0; k < counts(i); ++k) {
        const double sample = sampleFitness(model, i, rng);
        sum += sample;
        if (sample >= config.phi) ++survivors(i);
      }
      meanFitness(i) = sum / counts(i);
    }
    result.rounds.push_back({state, meanFitness, counts - survivors});
    result.counts.push_back(counts);
    if (survivors.sum() == 0) {
      return finish(std::move(result), survivors, SimOutcome::extinction, round);
    }
    const Eigen::VectorXi next = largestRemainder(survivors.cast<double>(), config.population);
    unchanged = next == counts ? unchanged + 1 : 0;
    counts = next;
    if (unchanged >= config.patience) {
      return finish(std::move(result), counts, SimOutcome::equilibrium, round);
    }
  }
  return finish(std::move(result), counts, SimOutcome::maxRoundsReached, config.maxRounds);
}

SimResult runSimulation(const SimConfig& config) {
  return config.mode == SimMode::deterministic ? runDeterministic(config) : runStochastic(config);
}

}  // namespace safegame
