#ifndef SAFEGAME_CORE_HPP
#define SAFEGAME_CORE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "safegame/error.hpp"

namespace safegame {

enum class Side { row, column };

constexpr Side opponent(Side side) noexcept {
  return side == Side::row ? Side::column : Side::row;
}

std::string_view toString(Side side);

// Tolerance for probability vectors coming out of the LP solvers.
inline constexpr double kProbabilityTol = 1e-9;

/// Two-player normal-form game (A, B). Row i / column j is a pure strategy;
/// A(i, j) is the row player's payoff and B(i, j) the column player's.
template <typename Scalar>
class BasicGame {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicGame(Matrix rowMatrix, Matrix colMatrix,
            std::vector<std::string> rowLabels = {},
            std::vector<std::string> colLabels = {})
      : a_(std::move(rowMatrix)),
        b_(std::move(colMatrix)),
        rowLabels_(std::move(rowLabels)),
        colLabels_(std::move(colLabels)) {
    if (a_.rows() < 1 || a_.cols() < 1) {
      throw Error(ErrorCode::DimensionMismatch, "game needs at least one row and one column");
    }
    if (a_.rows() != b_.rows() || a_.cols() != b_.cols()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "A is " + std::to_string(a_.rows()) + "x" + std::to_string(a_.cols()) +
                      " but B is " + std::to_string(b_.rows()) + "x" +
                      std::to_string(b_.cols()));
    }
    if (!a_.allFinite() || !b_.allFinite()) {
      throw Error(ErrorCode::InvalidArgument, "payoff entries must be finite");
    }
    if (!rowLabels_.empty() && std::ssize(rowLabels_) != a_.rows()) {
      throw Error(ErrorCode::DimensionMismatch, "row label count does not match A");
    }
    if (!colLabels_.empty() && std::ssize(colLabels_) != a_.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "column label count does not match A");
    }
  }

  // Symmetric game: B = Aᵀ.
  static BasicGame symmetric(const Matrix& a, std::vector<std::string> labels = {}) {
    return BasicGame(a, a.transpose(), labels, labels);
  }

  const Matrix& rowMatrix() const noexcept { return a_; }
  const Matrix& colMatrix() const noexcept { return b_; }
  const Matrix& payoffMatrix(Side side) const noexcept {
    return side == Side::row ? a_ : b_;
  }

  Eigen::Index rows() const noexcept { return a_.rows(); }
  Eigen::Index cols() const noexcept { return a_.cols(); }
  Eigen::Index strategyCount(Side side) const noexcept {
    return side == Side::row ? rows() : cols();
  }

  const std::vector<std::string>& rowLabels() const noexcept { return rowLabels_; }
  const std::vector<std::string>& colLabels() const noexcept { return colLabels_; }

 private:
  Matrix a_;
  Matrix b_;
  std::vector<std::string> rowLabels_;
  std::vector<std::string> colLabels_;
};

using Game = BasicGame<double>;

/// Probability vector over one player's pure strategies. Entries down to
/// -kProbabilityTol are clamped to zero; anything further off is rejected.
template <typename Scalar>
class BasicMixedStrategy {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicMixedStrategy(Vector weights, Side side) : weights_(std::move(weights)), side_(side) {
    if (weights_.size() == 0) {
      throw Error(ErrorCode::DimensionMismatch, "empty strategy");
    }
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (!std::isfinite(static_cast<double>(weights_(i))) ||
          weights_(i) < Scalar(-kProbabilityTol)) {
        throw Error(ErrorCode::OutOfRange, "strategy weight " + std::to_string(i) +
                                               " is negative or not finite");
      }
      if (weights_(i) < Scalar(0)) weights_(i) = Scalar(0);
    }
    const Scalar total = weights_.sum();
    using std::abs;
    if (abs(total - Scalar(1)) > Scalar(kProbabilityTol)) {
      throw Error(ErrorCode::OutOfRange,
                  "strategy weights sum to " + std::to_string(static_cast<double>(total)));
    }
    weights_ /= total;
  }

  static BasicMixedStrategy pure(Side side, Eigen::Index size, Eigen::Index index) {
    return BasicMixedStrategy(Vector::Unit(size, index), side);
  }

  static BasicMixedStrategy uniform(Side side, Eigen::Index size) {
    return BasicMixedStrategy(Vector::Constant(size, Scalar(1) / Scalar(size)), side);
  }

  const Vector& weights() const noexcept { return weights_; }
  Side side() const noexcept { return side_; }
  Eigen::Index size() const noexcept { return weights_.size(); }
  Scalar operator[](Eigen::Index i) const { return weights_(i); }

  // Indices with positive weight.
  std::vector<Eigen::Index> support(Scalar tol = Scalar(kProbabilityTol)) const {
    std::vector<Eigen::Index> s;
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (weights_(i) > tol) s.push_back(i);
    }
    return s;
  }

 private:
  Vector weights_;
  Side side_;
};

using MixedStrategy = BasicMixedStrategy<double>;

/// A player's payoffs against each opponent pure strategy: a = Aᵀp for the
/// row player, b = Bq for the column player.
template <typename Scalar>
struct BasicPortfolio {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
  Side owner;

  Scalar worst() const { return values.minCoeff(); }
};

using Portfolio = BasicPortfolio<double>;

struct RiskProfile {
  double theta;  // risk-aversion threshold in [0, 1]
  double phi;    // matching minimum payoff requirement
};

// Expression-level portfolio: Mᵀw for the row side, Mw for the column side.
template <typename DerivedM, typename DerivedW>
auto portfolioValues(const Eigen::MatrixBase<DerivedM>& payoff,
                     const Eigen::MatrixBase<DerivedW>& weights, Side side) {
  using Scalar = typename DerivedM::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out;
  if (side == Side::row) {
    out.noalias() = payoff.transpose() * weights;
  } else {
    out.noalias() = payoff * weights;
  }
  return out;
}

template <typename Scalar>
BasicPortfolio<Scalar> portfolio(const BasicGame<Scalar>& game,
                                 const BasicMixedStrategy<Scalar>& strategy) {
  const Side side = strategy.side();
  if (strategy.size() != game.strategyCount(side)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(toString(side)) + " strategy has " +
                    std::to_string(strategy.size()) + " entries, game has " +
                    std::to_string(game.strategyCount(side)));
  }
  return {portfolioValues(game.payoffMatrix(side), strategy.weights(), side), side};
}

/// Worst portfolio entry rescaled so that min(M) maps to 0 and the maximin
/// value maps to 1. M is the owner's payoff matrix.
template <typename Scalar>
Scalar riskAversion(const BasicPortfolio<Scalar>& portfolio, const BasicGame<Scalar>& game,
                    Scalar maximinValue) {
  const Scalar floor = game.payoffMatrix(portfolio.owner).minCoeff();
  if (!(floor < maximinValue)) {
    throw Error(ErrorCode::DegenerateScale,
                "maximin value does not exceed the matrix minimum");
  }
  return (portfolio.worst() - floor) / (maximinValue - floor);
}

// phi = floor + theta * (maximin - floor).
double thresholdToRequirement(double theta, double matrixMin, double maximinValue);

/// Same, with the maximin value of `side` computed by the LP module.
double thresholdToRequirement(double theta, const Game& game, Side side);

RiskProfile makeRiskProfile(double theta, const Game& game, Side side);

/// Decision rule of a partially malicious player: anything below the
/// requirement is worth `sentinel`; above it, g(opponent payoff).
class MaliceUtility {
 public:
  using Transform = std::function<double(double)>;

  // Sentinel defaults to -(max|A| + max|B| + 1e6); g defaults to g(x) = -x.
  explicit MaliceUtility(const Game& game);
  MaliceUtility(const Game& game, double sentinel, Transform g = nullptr);

  double operator()(double piRow, double piCol, double phi) const;
  double sentinel() const noexcept { return sentinel_; }

 private:
  double sentinel_;
  Transform g_;
};

double defaultSentinel(const Game& game);

double maliceUtility(double piRow, double piCol, double phi, double sentinel);

/// Mutual best-response check; every pure deviation may gain at most `tol`.
bool verifyNash(const Game& game, const MixedStrategy& p, const MixedStrategy& q,
                double tol = 1e-9);

}  // namespace safegame

#endif  // SAFEGAME_CORE_HPP
