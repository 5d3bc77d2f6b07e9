#ifndef SAFEGAME_POLYTOPE_HPP
#define SAFEGAME_POLYTOPE_HPP

#include <Eigen/Dense>
#include <vector>

namespace safegame {

inline constexpr double kDedupeTol = 1e-7;

/// H-representation: inequalities C_i x >= y_i and equalities C_e x = y_e.
class HRep {
 public:
  explicit HRep(Eigen::Index dimension);

  HRep& addInequality(const Eigen::Ref<const Eigen::RowVectorXd>& coefficients, double rhs);
  HRep& addInequalities(const Eigen::Ref<const Eigen::MatrixXd>& coefficients,
                        const Eigen::Ref<const Eigen::VectorXd>& rhs);
  HRep& addEquality(const Eigen::Ref<const Eigen::RowVectorXd>& coefficients, double rhs);

  // 1ᵀx = 1 and x >= 0.
  static HRep simplex(Eigen::Index dimension);

  Eigen::Index dimension() const noexcept { return dimension_; }
  const Eigen::MatrixXd& inequalityMatrix() const noexcept { return ineq_; }
  const Eigen::VectorXd& inequalityRhs() const noexcept { return ineqRhs_; }
  const Eigen::MatrixXd& equalityMatrix() const noexcept { return eq_; }
  const Eigen::VectorXd& equalityRhs() const noexcept { return eqRhs_; }

 private:
  Eigen::Index dimension_;
  Eigen::MatrixXd ineq_;
  Eigen::VectorXd ineqRhs_;
  Eigen::MatrixXd eq_;
  Eigen::VectorXd eqRhs_;
};

/// V-representation of a bounded polytope: its extreme points, deduplicated
/// and sorted lexicographically.
struct VRep {
  std::vector<Eigen::VectorXd> vertices;

  bool empty() const noexcept { return vertices.empty(); }
  std::size_t size() const noexcept { return vertices.size(); }

  // Vertices as the columns of a d×k matrix.
  Eigen::MatrixXd asColumns(Eigen::Index dimension) const;
};

/// Extreme points of a bounded region via double description. The empty
/// region yields an empty VRep; a recession direction throws UnboundedRegion.
VRep hToV(const HRep& h);

bool contains(const HRep& h, const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 1e-7);

/// Minimizer of each objective over the region (one LP per objective).
std::vector<Eigen::VectorXd> extremePointsByLp(const HRep& h,
                                               const std::vector<Eigen::VectorXd>& objectives);

// Symmetric Hausdorff distance (L∞) between two finite point sets.
double hausdorffDistance(const std::vector<Eigen::VectorXd>& a,
                         const std::vector<Eigen::VectorXd>& b);

}  // namespace safegame

#endif  // SAFEGAME_POLYTOPE_HPP
