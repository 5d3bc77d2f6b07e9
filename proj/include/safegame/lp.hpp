#ifndef SAFEGAME_LP_HPP
#define SAFEGAME_LP_HPP

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <vector>

#include "safegame/core.hpp"

namespace safegame {

enum class Sense { minimize, maximize };
enum class Relation { greaterEqual, lessEqual, equal };
enum class LpStatus { optimal, infeasible, unbounded };

inline constexpr double kFeasibilityTol = 1e-8;
inline constexpr double kOptimalityTol = 1e-9;
inline constexpr double kFreeVariable = -std::numeric_limits<double>::infinity();

/// Dense linear program over x ∈ Rⁿ with per-variable lower bounds
/// (default 0; kFreeVariable for an unbounded variable).
class LinearProgram {
 public:
  explicit LinearProgram(Eigen::VectorXd objective, Sense sense = Sense::minimize);

  LinearProgram& addConstraint(const Eigen::Ref<const Eigen::RowVectorXd>& coefficients,
                               Relation relation, double rhs);
  LinearProgram& addConstraints(const Eigen::Ref<const Eigen::MatrixXd>& coefficients,
                                Relation relation,
                                const Eigen::Ref<const Eigen::VectorXd>& rhs);
  LinearProgram& setLowerBound(Eigen::Index variable, double bound);

  Eigen::Index variableCount() const noexcept { return objective_.size(); }
  Eigen::Index constraintCount() const noexcept { return coefficients_.rows(); }
  const Eigen::VectorXd& objective() const noexcept { return objective_; }
  Sense sense() const noexcept { return sense_; }
  const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
  const Eigen::VectorXd& rhs() const noexcept { return rhs_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }
  const Eigen::VectorXd& lowerBounds() const noexcept { return lower_; }

  // Largest violation of any constraint or bound at x, measured on rows
  // scaled to unit max-coefficient.
  double maxViolation(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  Eigen::VectorXd objective_;
  Sense sense_;
  Eigen::MatrixXd coefficients_;
  Eigen::VectorXd rhs_;
  std::vector<Relation> relations_;
  Eigen::VectorXd lower_;
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::optional<Eigen::VectorXd> point;  // present iff optimal
  double objectiveValue = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
};

/// Two-phase dense tableau simplex with Bland's rule. Throws
/// NumericalFailure after 50·(columns + rows) pivots.
LpSolution solveLp(const LinearProgram& lp);

struct MaximinResult {
  double value;
  MixedStrategy strategy;
};

/// max over column mixtures q of min(Mq). Shifts M by k = 1 - min(M) and
/// solves min 1ᵀx s.t. (M + k)x >= 1, x >= 0; then q = x/Σx, v = 1/Σx - k.
MaximinResult columnMaximin(const Eigen::Ref<const Eigen::MatrixXd>& payoff);

/// max over row mixtures p of min(Mᵀp).
MaximinResult rowMaximin(const Eigen::Ref<const Eigen::MatrixXd>& payoff);

// Maximin of `side` in `game` (A for the row player, B for the column player).
MaximinResult maximin(const Game& game, Side side);

}  // namespace safegame

#endif  // SAFEGAME_LP_HPP
