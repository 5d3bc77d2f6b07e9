#ifndef SAFEGAME_SIM_HPP
#define SAFEGAME_SIM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "safegame/truncation.hpp"

namespace safegame {

enum class SimMode { deterministic, stochastic };
enum class SimOutcome { equilibrium, extinction, maxRoundsReached };

std::string_view toString(SimOutcome outcome);

struct SimConfig {
  Eigen::MatrixXd payoff;  // n×n row matrix A
  long population = 1000;
  double phi = 0.0;
  int maxRounds = 1000;
  SimMode mode = SimMode::deterministic;
  std::uint64_t seed = 0;
  std::optional<Eigen::MatrixXd> sigma;  // per-interaction stddevs, stochastic only
  int patience = 10;                     // unchanged rounds that end a stochastic run
  // Overrides the seeded Dirichlet(1..1) initial draw when set.
  std::optional<Eigen::VectorXd> initialFrequencies;

  void validate() const;
};

// Per-type normal approximation of averaged payoffs.
struct FitnessModel {
  Eigen::VectorXd means;    // A·x
  Eigen::VectorXd stddevs;  // sqrt(Σ_j σ_ij² x_j) / sqrt(N)
};

struct SimRound {
  PopulationState state;          // composition entering the round
  Eigen::VectorXd meanFitness;    // realized mean fitness per type (NaN if absent)
  Eigen::VectorXi culled;         // individuals culled per type
};

struct SimResult {
  std::vector<SimRound> rounds;
  std::vector<Eigen::VectorXi> counts;  // counts entering each round, plus the final one
  SimOutcome outcome;
  PopulationState finalState;
  int roundsElapsed;
  std::uint64_t seed;
};

/// One deterministic culling step on frequencies: types with (Ax)_i < phi
/// vanish and the survivors are renormalized.
PopulationState stepDeterministic(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                  const PopulationState& state, double phi);

FitnessModel fitnessDistribution(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                 const Eigen::Ref<const Eigen::MatrixXd>& sigma,
                                 const PopulationState& state, long population);

// One individual's fitness draw for `type`: Normal(mean, stddev²).
double sampleFitness(const FitnessModel& model, Eigen::Index type, std::mt19937_64& rng);

// Per-interaction standard deviations (75, 15; 15, 25) for the Hawk-Dove example.
Eigen::Matrix2d hawkDoveSigma();

/// Integer counts summing to `total`, proportional to `weights`, by the
/// largest-remainder method (ties to the lower index).
Eigen::VectorXi largestRemainder(const Eigen::Ref<const Eigen::VectorXd>& weights, long total);

// Dirichlet(1, ..., 1) draw.
Eigen::VectorXd uniformSimplexPoint(Eigen::Index n, std::mt19937_64& rng);

SimResult runDeterministic(const SimConfig& config);
SimResult runStochastic(const SimConfig& config);
SimResult runSimulation(const SimConfig& config);

}  // namespace safegame

#endif  // SAFEGAME_SIM_HPP
