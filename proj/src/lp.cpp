#include "safegame/lp.hpp"

#include <cmath>
#include <string>

namespace safegame {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kRatioTieTol = 1e-12;

double rowScale(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  const double s = row.cwiseAbs().maxCoeff();
  return s > 0.0 ? s : 1.0;
}

// Dense simplex tableau. Rows 0..m-1 hold constraints, row m the reduced
// costs; the last column holds the right-hand side (and -objective in the
// cost row).
class Tableau {
 public:
  Tableau(Eigen::MatrixXd table, std::vector<Eigen::Index> basis, long iterationCap)
      : t_(std::move(table)), basis_(std::move(basis)), cap_(iterationCap) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index rhsCol() const { return t_.cols() - 1; }
  Eigen::MatrixXd& table() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }
  int iterations() const { return iterations_; }
  double costRowRhs() const { return t_(rows(), rhsCol()); }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
    if (++iterations_ > cap_) {
      throw Error(ErrorCode::NumericalFailure,
                  "simplex exceeded " + std::to_string(cap_) + " pivots");
    }
  }

  // Bland's rule over columns [0, eligibleCols). Returns false if unbounded.
  bool optimize(Eigen::Index eligibleCols) {
    const Eigen::Index m = rows();
    for (;;) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < eligibleCols; ++j) {
        if (t_(m, j) < -kOptimalityTol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;

      Eigen::Index leaving = -1;
      double best = 0.0;
      for (Eigen::Index r = 0; r < m; ++r) {
        const double a = t_(r, entering);
        if (a <= kPivotTol) continue;
        const double ratio = t_(r, rhsCol()) / a;
        if (leaving < 0 || ratio < best - kRatioTieTol ||
            (ratio <= best + kRatioTieTol && basis_[static_cast<std::size_t>(r)] <
                                                 basis_[static_cast<std::size_t>(leaving)])) {
          leaving = r;
          best = ratio;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  long cap_;
  int iterations_ = 0;
};

}  // namespace

LinearProgram::LinearProgram(Eigen::VectorXd objective, Sense sense)
    : objective_(std::move(objective)),
      sense_(sense),
      coefficients_(0, objective_.size()),
      lower_(Eigen::VectorXd::Zero(objective_.size())) {
  if (!objective_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "objective must be finite");
  }
}

LinearProgram& LinearProgram::addConstraint(const Eigen::Ref<const Eigen::RowVectorXd>& coefficients,
                                            Relation relation, double rhs) {
  if (coefficients.size() != variableCount()) {
    throw Error(ErrorCode::DimensionMismatch,
                "constraint has " + std::to_string(coefficients.size()) +
                    " coefficients, program has " + std::to_string(variableCount()) +
                    " variables");
  }
  if (!coefficients.allFinite() || !std::isfinite(rhs)) {
    throw Error(ErrorCode::InvalidArgument, "constraint data must be finite");
  }
  const Eigen::Index r = coefficients_.rows();
  coefficients_.conservativeResize(r + 1, Eigen::NoChange);
  coefficients_.row(r) = coefficients;
  rhs_.conservativeResize(r + 1);
  rhs_(r) = rhs;
  relations_.push_back(relation);
  return *this;
}

LinearProgram& LinearProgram::addConstraints(const Eigen::Ref<const Eigen::MatrixXd>& coefficients,
                                             Relation relation,
                                             const Eigen::Ref<const Eigen::VectorXd>& rhs) {
  if (coefficients.rows() != rhs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "constraint matrix and rhs disagree");
  }
  for (Eigen::Index i = 0; i < coefficients.rows(); ++i) {
    addConstraint(coefficients.row(i), relation, rhs(i));
  }
  return *this;
}

LinearProgram& LinearProgram::setLowerBound(Eigen::Index variable, double bound) {
  if (variable < 0 || variable >= variableCount()) {
    throw Error(ErrorCode::DimensionMismatch, "no such variable");
  }
  if (std::isnan(bound) || bound == std::numeric_limits<double>::infinity()) {
    throw Error(ErrorCode::InvalidArgument, "lower bound must be finite or -inf");
  }
  lower_(variable) = bound;
  return *this;
}

double LinearProgram::maxViolation(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < constraintCount(); ++i) {
    const double s = rowScale(coefficients_.row(i));
    const double r = (coefficients_.row(i).dot(x) - rhs_(i)) / s;
    switch (relations_[static_cast<std::size_t>(i)]) {
      case Relation::greaterEqual: worst = std::max(worst, -r); break;
      case Relation::lessEqual: worst = std::max(worst, r); break;
      case Relation::equal: worst = std::max(worst, std::abs(r)); break;
    }
  }
  for (Eigen::Index j = 0; j < variableCount(); ++j) {
    if (std::isfinite(lower_(j))) worst = std::max(worst, lower_(j) - x(j));
  }
  return worst;
}

LpSolution solveLp(const LinearProgram& lp) {
  const Eigen::Index n = lp.variableCount();
  const Eigen::Index m = lp.constraintCount();

  // Substitute x_j = l_j + y_j, or x_j = y⁺ - y⁻ for free variables.
  std::vector<Eigen::Index> posCol(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> negCol(static_cast<std::size_t>(n), -1);
  Eigen::Index structural = 0;
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    posCol[static_cast<std::size_t>(j)] = structural++;
    if (std::isfinite(lp.lowerBounds()(j))) {
      shift(j) = lp.lowerBounds()(j);
    } else {
      negCol[static_cast<std::size_t>(j)] = structural++;
    }
  }
  auto expand = [&](const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(structural);
    for (Eigen::Index j = 0; j < n; ++j) {
      out(posCol[static_cast<std::size_t>(j)]) = row(j);
      if (negCol[static_cast<std::size_t>(j)] >= 0) out(negCol[static_cast<std::size_t>(j)]) = -row(j);
    }
    return out;
  };

  // Scaled rows; zero rows are checked immediately and dropped.
  struct Row {
    Eigen::RowVectorXd coef;
    double rhs;
    Relation rel;
  };
  std::vector<Row> kept;
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::RowVectorXd coef = expand(lp.coefficients().row(i));
    double rhs = lp.rhs()(i) - lp.coefficients().row(i).dot(shift);
    const double s = coef.cwiseAbs().maxCoeff();
    const Relation rel = lp.relations()[static_cast<std::size_t>(i)];
    if (s == 0.0) {
      const double tol = kFeasibilityTol * std::max(1.0, std::abs(lp.rhs()(i)));
      const bool ok = (rel == Relation::greaterEqual && rhs <= tol) ||
                      (rel == Relation::lessEqual && rhs >= -tol) ||
                      (rel == Relation::equal && std::abs(rhs) <= tol);
      if (!ok) return {LpStatus::infeasible, std::nullopt};
      continue;
    }
    kept.push_back({coef / s, rhs / s, rel});
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(kept.size());
  Eigen::Index slacks = 0;
  for (const Row& r : kept) slacks += (r.rel != Relation::equal);
  const Eigen::Index firstArtificial = structural + slacks;
  const Eigen::Index cols = firstArtificial + rows;
  const long cap = 50L * static_cast<long>(cols + rows);

  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(rows + 1, cols + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  Eigen::Index slack = structural;
  double rhsScale = 1.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Row& r = kept[static_cast<std::size_t>(i)];
    table.row(i).head(structural) = r.coef;
    if (r.rel == Relation::greaterEqual) table(i, slack++) = -1.0;
    if (r.rel == Relation::lessEqual) table(i, slack++) = 1.0;
    table(i, cols) = r.rhs;
    if (r.rhs < 0.0) table.row(i) *= -1.0;
    table(i, firstArtificial + i) = 1.0;
    basis[static_cast<std::size_t>(i)] = firstArtificial + i;
    rhsScale = std::max(rhsScale, std::abs(r.rhs));
  }

  // Phase 1: minimize the sum of artificials.
  table.row(rows).head(firstArtificial) = -table.topRows(rows).leftCols(firstArtificial).colwise().sum();
  table(rows, cols) = -table.topRows(rows).col(cols).sum();
  Tableau tab(std::move(table), std::move(basis), cap);
  tab.optimize(cols);
  if (-tab.costRowRhs() > kFeasibilityTol * rhsScale) {
    return {LpStatus::infeasible, std::nullopt, std::numeric_limits<double>::quiet_NaN(),
            tab.iterations()};
  }

  // Drive zero-level artificials out of the basis; rows where that fails
  // are redundant.
  std::vector<Eigen::Index> keepRows;
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (tab.basis()[static_cast<std::size_t>(r)] >= firstArtificial) {
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < firstArtificial; ++j) {
        if (std::abs(tab.table()(r, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col < 0) continue;
      tab.pivot(r, col);
    }
    keepRows.push_back(r);
  }

  const Eigen::Index rows2 = static_cast<Eigen::Index>(keepRows.size());
  Eigen::MatrixXd table2(rows2 + 1, firstArtificial + 1);
  std::vector<Eigen::Index> basis2(static_cast<std::size_t>(rows2));
  for (Eigen::Index i = 0; i < rows2; ++i) {
    const Eigen::Index r = keepRows[static_cast<std::size_t>(i)];
    table2.row(i).head(firstArtificial) = tab.table().row(r).head(firstArtificial);
    table2(i, firstArtificial) = tab.table()(r, cols);
    basis2[static_cast<std::size_t>(i)] = tab.basis()[static_cast<std::size_t>(r)];
  }

  // Phase 2 on a unit-scaled minimization objective.
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(firstArtificial);
  {
    const Eigen::VectorXd obj = lp.sense() == Sense::minimize ? lp.objective() : -lp.objective();
    cost.head(structural) = expand(obj.transpose()).transpose();
    const double s = cost.cwiseAbs().maxCoeff();
    if (s > 0.0) cost /= s;
  }
  table2.row(rows2).setZero();
  table2.row(rows2).head(firstArtificial) = cost.transpose();
  for (Eigen::Index i = 0; i < rows2; ++i) {
    const double cb = cost(basis2[static_cast<std::size_t>(i)]);
    if (cb != 0.0) table2.row(rows2) -= cb * table2.row(i);
  }
  Tableau tab2(std::move(table2), std::move(basis2), cap - tab.iterations());
  const bool bounded = tab2.optimize(firstArtificial);
  const int iterations = tab.iterations() + tab2.iterations();
  if (!bounded) {
    return {LpStatus::unbounded, std::nullopt, std::numeric_limits<double>::quiet_NaN(),
            iterations};
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(firstArtificial);
  for (Eigen::Index i = 0; i < rows2; ++i) {
    y(tab2.basis()[static_cast<std::size_t>(i)]) = std::max(0.0, tab2.table()(i, firstArtificial));
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    x(j) = shift(j) + y(posCol[static_cast<std::size_t>(j)]);
    if (negCol[static_cast<std::size_t>(j)] >= 0) x(j) -= y(negCol[static_cast<std::size_t>(j)]);
  }

  const double violation = lp.maxViolation(x);
  if (violation > 1e3 * kFeasibilityTol * std::max(1.0, x.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NumericalFailure,
                "solution violates constraints by " + std::to_string(violation));
  }
  return {LpStatus::optimal, x, lp.objective().dot(x), iterations};
}

MaximinResult columnMaximin(const Eigen::Ref<const Eigen::MatrixXd>& payoff) {
  if (payoff.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "maximin of an empty matrix");
  }
  const double k = 1.0 - payoff.minCoeff();
  const Eigen::MatrixXd shifted = payoff.array() + k;

  LinearProgram lp(Eigen::VectorXd::Ones(payoff.cols()), Sense::minimize);
  lp.addConstraints(shifted, Relation::greaterEqual, Eigen::VectorXd::Ones(payoff.rows()));
  const LpSolution sol = solveLp(lp);
  if (sol.status != LpStatus::optimal) {
    throw Error(ErrorCode::NumericalFailure, "maximin program was not solved to optimality");
  }
  const Eigen::VectorXd& x = *sol.point;
  const double total = x.sum();
  return {1.0 / total - k, MixedStrategy(x / total, Side::column)};
}

MaximinResult rowMaximin(const Eigen::Ref<const Eigen::MatrixXd>& payoff) {
  MaximinResult r = columnMaximin(payoff.transpose());
  return {r.value, MixedStrategy(r.strategy.weights(), Side::row)};
}

MaximinResult maximin(const Game& game, Side side) {
  return side == Side::row ? rowMaximin(game.rowMatrix()) : columnMaximin(game.colMatrix());
}

}  // namespace safegame
