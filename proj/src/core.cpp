#include "safegame/core.hpp"

#include <limits>

#include "safegame/lp.hpp"

namespace safegame {

std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::UnboundedRegion: return "UnboundedRegion";
    case ErrorCode::InfeasibleRegion: return "InfeasibleRegion";
    case ErrorCode::EmptyRestriction: return "EmptyRestriction";
    case ErrorCode::InfeasibleRequirement: return "InfeasibleRequirement";
    case ErrorCode::Not2x2: return "Not2x2";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view toString(Side side) { return side == Side::row ? "row" : "column"; }

double thresholdToRequirement(double theta, double matrixMin, double maximinValue) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "theta must lie in [0, 1], got " + std::to_string(theta));
  }
  if (!(matrixMin < maximinValue)) {
    throw Error(ErrorCode::DegenerateScale, "maximin value does not exceed the matrix minimum");
  }
  return matrixMin + theta * (maximinValue - matrixMin);
}

double thresholdToRequirement(double theta, const Game& game, Side side) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "theta must lie in [0, 1], got " + std::to_string(theta));
  }
  const double floor = game.payoffMatrix(side).minCoeff();
  return thresholdToRequirement(theta, floor, maximin(game, side).value);
}

RiskProfile makeRiskProfile(double theta, const Game& game, Side side) {
  return {theta, thresholdToRequirement(theta, game, side)};
}

double defaultSentinel(const Game& game) {
  return -(game.rowMatrix().cwiseAbs().maxCoeff() + game.colMatrix().cwiseAbs().maxCoeff() +
           1e6);
}

double maliceUtility(double piRow, double piCol, double phi, double sentinel) {
  return piCol < phi ? sentinel : -piRow;
}

MaliceUtility::MaliceUtility(const Game& game) : sentinel_(defaultSentinel(game)) {}

MaliceUtility::MaliceUtility(const Game& game, double sentinel, Transform g)
    : sentinel_(sentinel), g_(std::move(g)) {
  const double bound = -game.rowMatrix().cwiseAbs().maxCoeff() - 1.0;
  if (!std::isfinite(sentinel) || !(sentinel < bound)) {
    throw Error(ErrorCode::OutOfRange,
                "sentinel must be finite and below " + std::to_string(bound));
  }
}

double MaliceUtility::operator()(double piRow, double piCol, double phi) const {
  if (piCol < phi) return sentinel_;
  return g_ ? g_(piRow) : -piRow;
}

bool verifyNash(const Game& game, const MixedStrategy& p, const MixedStrategy& q, double tol) {
  if (p.size() != game.rows() || q.size() != game.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "strategy sizes do not match the game");
  }
  const Eigen::VectorXd& pw = p.weights();
  const Eigen::VectorXd& qw = q.weights();
  // Payoff of each pure row against q, and each pure column against p.
  const Eigen::VectorXd rowPayoffs = game.rowMatrix() * qw;
  const Eigen::VectorXd colPayoffs = game.colMatrix().transpose() * pw;
  const double rowValue = pw.dot(rowPayoffs);
  const double colValue = qw.dot(colPayoffs);
  return rowPayoffs.maxCoeff() <= rowValue + tol && colPayoffs.maxCoeff() <= colValue + tol;
}

}  // namespace safegame
