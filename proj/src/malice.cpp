#include "safegame/malice.hpp"

#include "safegame/lp.hpp"
#include "safegame/polytope.hpp"

namespace safegame {

RestrictedStrategySet restrictedVertices(const Game& game, double phi, Side side) {
  // A row player's own portfolio is Aᵀp; a column player's is Bq.
  const Eigen::MatrixXd own = side == Side::row ? Eigen::MatrixXd(game.rowMatrix().transpose())
                                                : game.colMatrix();
  HRep h = HRep::simplex(own.cols());
  h.addInequalities(own, Eigen::VectorXd::Constant(own.rows(), phi));
  const VRep v = hToV(h);
  return {v.asColumns(own.cols()), phi, side};
}

Eigen::VectorXd payoffsAgainstVertices(const Game& game, const RestrictedStrategySet& restricted,
                                       const MixedStrategy& strategy) {
  if (strategy.side() == restricted.side) {
    throw Error(ErrorCode::InvalidArgument, "strategy must belong to the restricted player's opponent");
  }
  if (restricted.side == Side::row) {
    return restricted.vertices.transpose() * game.colMatrix() * strategy.weights();
  }
  return restricted.vertices.transpose() * game.rowMatrix().transpose() * strategy.weights();
}

DefensiveSolution generalizedMaximin(const Game& game, const RestrictedStrategySet& restricted) {
  if (restricted.empty()) {
    throw Error(ErrorCode::EmptyRestriction,
                "no " + std::string(toString(restricted.side)) + " mixture reaches phi = " +
                    std::to_string(restricted.phi));
  }
  const Side defender = opponent(restricted.side);
  if (restricted.vertices.rows() != game.strategyCount(restricted.side)) {
    throw Error(ErrorCode::DimensionMismatch, "restricted vertices do not match the game");
  }
  // Defender payoffs against each restricted vertex: P_φᵀB (vertex × column)
  // for a column defender, A·Q_φ (row × vertex) for a row defender.
  const double baseline = maximin(game, defender).value;
  if (defender == Side::column) {
    const Eigen::MatrixXd m = restricted.vertices.transpose() * game.colMatrix();
    MaximinResult r = columnMaximin(m);
    return {std::move(r.strategy), r.value, baseline};
  }
  const Eigen::MatrixXd m = game.rowMatrix() * restricted.vertices;  // m×k
  MaximinResult r = rowMaximin(m);
  return {std::move(r.strategy), r.value, baseline};
}

AttackSolution generalizedMinimax(const Game& game, double phi, Side malicious) {
  // Variables: the malicious mixture s (size m) and the free cap v.
  const Eigen::MatrixXd own = malicious == Side::row ? Eigen::MatrixXd(game.rowMatrix().transpose())
                                                     : game.colMatrix();
  const Eigen::MatrixXd victim = malicious == Side::row ? Eigen::MatrixXd(game.colMatrix().transpose())
                                                        : game.rowMatrix();
  const Eigen::Index m = own.cols();
  const Eigen::Index n = own.rows();

  Eigen::VectorXd objective = Eigen::VectorXd::Zero(m + 1);
  objective(m) = 1.0;
  LinearProgram lp(objective, Sense::minimize);
  lp.setLowerBound(m, kFreeVariable);

  Eigen::MatrixXd cap(victim.rows(), m + 1);
  cap << victim, -Eigen::VectorXd::Ones(victim.rows());
  lp.addConstraints(cap, Relation::lessEqual, Eigen::VectorXd::Zero(victim.rows()));

  Eigen::MatrixXd requirement(n, m + 1);
  requirement << own, Eigen::VectorXd::Zero(n);
  lp.addConstraints(requirement, Relation::greaterEqual, Eigen::VectorXd::Constant(n, phi));

  Eigen::RowVectorXd total = Eigen::RowVectorXd::Ones(m + 1);
  total(m) = 0.0;
  lp.addConstraint(total, Relation::equal, 1.0);

  const LpSolution sol = solveLp(lp);
  if (sol.status == LpStatus::infeasible) {
    throw Error(ErrorCode::InfeasibleRequirement,
                "no " + std::string(toString(malicious)) + " mixture reaches phi = " +
                    std::to_string(phi));
  }
  if (sol.status != LpStatus::optimal) {
    throw Error(ErrorCode::NumericalFailure, "generalized minimax program is unbounded");
  }
  const Eigen::VectorXd& x = *sol.point;
  return {MixedStrategy(x.head(m), malicious), x(m)};
}

}  // namespace safegame
