#ifndef SAFEGAME_TRUNCATION_HPP
#define SAFEGAME_TRUNCATION_HPP

#include <Eigen/Dense>
#include <vector>

#include "safegame/polytope.hpp"

namespace safegame {

using Support = std::vector<Eigen::Index>;

/// Type frequencies of a population. An extinct population has an empty
/// support and all-zero frequencies; otherwise frequencies sum to 1.
class PopulationState {
 public:
  explicit PopulationState(Eigen::VectorXd frequencies);

  static PopulationState extinct(Eigen::Index types);

  const Eigen::VectorXd& frequencies() const noexcept { return x_; }
  const Support& support() const noexcept { return support_; }
  Eigen::Index types() const noexcept { return x_.size(); }
  bool isExtinct() const noexcept { return support_.empty(); }
  double operator[](Eigen::Index i) const { return x_(i); }

  friend bool operator==(const PopulationState& a, const PopulationState& b) {
    return a.support_ == b.support_ && a.x_ == b.x_;
  }

 private:
  Eigen::VectorXd x_;
  Support support_;
};

struct SafeSpaceSlice {
  Support support;
  double phi;
  VRep vertices;  // embedded in the full simplex, zero off-support
  double maximinOfSupport;

  bool empty() const noexcept { return vertices.empty(); }
};

// A' = A - phi·11ᵀ.
Eigen::MatrixXd shiftedMatrix(const Eigen::Ref<const Eigen::MatrixXd>& payoff, double phi);

// {x : 1ᵀx = 1, x >= 0, Ax >= phi·1}.
HRep safeSpaceConstraints(const Eigen::Ref<const Eigen::MatrixXd>& payoff, double phi);

SafeSpaceSlice safeSpaceFullSupport(const Eigen::Ref<const Eigen::MatrixXd>& payoff, double phi);

/// Slice for the sub-game on `support` (rows and columns outside it removed),
/// with vertices embedded back into the full dimension.
SafeSpaceSlice safeSpaceForSupport(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                   const Support& support, double phi);

/// Nonempty slices over every nonempty support, largest supports first,
/// lexicographic within a size. n <= 20.
std::vector<SafeSpaceSlice> safeSpaceAllSupports(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                                 double phi);

// Every nonempty subset of {0..n-1}, ordered as above.
std::vector<Support> enumerateSupports(Eigen::Index n);

struct BoundaryPoint {
  double phi;
  double lower;  // min surviving x₁ in the full-support safe space
  double upper;  // max surviving x₁
  bool empty;    // no safe state; lower = upper = 0
};

/// Safe interval of x₁ for a 2×2 game, per threshold. Throws Not2x2.
std::vector<BoundaryPoint> twoByTwoBoundary(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                            const std::vector<double>& phiGrid);

// `count` evenly spaced values on [lo, hi]; count == 1 gives {lo}.
std::vector<double> linearGrid(double lo, double hi, int count);

// Default threshold sweep: min(A) to the column maximin of A.
std::vector<double> defaultPhiGrid(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                   int count = 101);

}  // namespace safegame

#endif  // SAFEGAME_TRUNCATION_HPP
