#ifndef SAFEGAME_MALICE_HPP
#define SAFEGAME_MALICE_HPP

#include <Eigen/Dense>

#include "safegame/core.hpp"

namespace safegame {

/// Vertex strategies P_φ = [p₀ … p_k] of a malicious player restricted to
/// mixtures whose own portfolio never drops below φ.
struct RestrictedStrategySet {
  Eigen::MatrixXd vertices;  // one strategy per column
  double phi;
  Side side;  // the restricted (malicious) player

  Eigen::Index count() const noexcept { return vertices.cols(); }
  bool empty() const noexcept { return vertices.cols() == 0; }
};

struct DefensiveSolution {
  MixedStrategy strategy;
  double guaranteedValue;
  double baselineMaximin;
};

struct AttackSolution {
  MixedStrategy strategy;  // the malicious player's mixture
  double value;            // cap on the opponent's best-response payoff
};

RestrictedStrategySet restrictedVertices(const Game& game, double phi, Side side);

/// Maximin of the opponent of `restricted.side` when the malicious player
/// can only mix over the restricted vertices. Throws EmptyRestriction.
DefensiveSolution generalizedMaximin(const Game& game, const RestrictedStrategySet& restricted);

/// The malicious player's side of the same problem: minimize the opponent's
/// best-response payoff subject to the own-payoff requirement. Throws
/// InfeasibleRequirement when no mixture meets `phi`.
AttackSolution generalizedMinimax(const Game& game, double phi, Side malicious = Side::row);

// Opponent's payoffs against each restricted vertex when it plays `strategy`.
Eigen::VectorXd payoffsAgainstVertices(const Game& game, const RestrictedStrategySet& restricted,
                                       const MixedStrategy& strategy);

}  // namespace safegame

#endif  // SAFEGAME_MALICE_HPP
