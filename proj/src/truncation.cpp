#include "safegame/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "safegame/error.hpp"
#include "safegame/lp.hpp"

namespace safegame {

PopulationState::PopulationState(Eigen::VectorXd frequencies) : x_(std::move(frequencies)) {
  if (x_.size() == 0) throw Error(ErrorCode::DimensionMismatch, "population has no types");
  if (!x_.allFinite() || (x_.array() < 0.0).any()) {
    throw Error(ErrorCode::OutOfRange, "frequencies must be finite and nonnegative");
  }
  const double total = x_.sum();
  if (total == 0.0) return;  // extinct
  if (std::abs(total - 1.0) > kProbabilityTol) {
    throw Error(ErrorCode::OutOfRange, "frequencies sum to " + std::to_string(total));
  }
  for (Eigen::Index i = 0; i < x_.size(); ++i) {
    if (x_(i) > 0.0) support_.push_back(i);
  }
}

PopulationState PopulationState::extinct(Eigen::Index types) {
  return PopulationState(Eigen::VectorXd::Zero(types));
}

Eigen::MatrixXd shiftedMatrix(const Eigen::Ref<const Eigen::MatrixXd>& payoff, double phi) {
  return payoff.array() - phi;
}

HRep safeSpaceConstraints(const Eigen::Ref<const Eigen::MatrixXd>& payoff, double phi) {
  HRep h = HRep::simplex(payoff.cols());
  h.addInequalities(payoff, Eigen::VectorXd::Constant(payoff.rows(), phi));
  return h;
}

SafeSpaceSlice safeSpaceFullSupport(const Eigen::Ref<const Eigen::MatrixXd>& payoff, double phi) {
  if (payoff.rows() != payoff.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "safe spaces need a square payoff matrix");
  }
  Support all(static_cast<std::size_t>(payoff.rows()));
  for (Eigen::Index i = 0; i < payoff.rows(); ++i) all[static_cast<std::size_t>(i)] = i;
  return {std::move(all), phi, hToV(safeSpaceConstraints(payoff, phi)),
          columnMaximin(payoff).value};
}

SafeSpaceSlice safeSpaceForSupport(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                   const Support& support, double phi) {
  const Eigen::Index n = payoff.rows();
  if (payoff.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "safe spaces need a square payoff matrix");
  }
  if (support.empty()) throw Error(ErrorCode::InvalidArgument, "empty support");
  const Eigen::Index k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      sub(i, j) = payoff(support[static_cast<std::size_t>(i)], support[static_cast<std::size_t>(j)]);
    }
  }
  SafeSpaceSlice local = safeSpaceFullSupport(sub, phi);
  for (Eigen::VectorXd& v : local.vertices.vertices) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < k; ++i) full(support[static_cast<std::size_t>(i)]) = v(i);
    v = std::move(full);
  }
  local.support = support;
  return local;
}

std::vector<Support> enumerateSupports(Eigen::Index n) {
  if (n < 1 || n > 20) throw Error(ErrorCode::OutOfRange, "support enumeration needs 1 <= n <= 20");
  std::vector<Support> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Support s;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Support& a, const Support& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  return out;
}

std::vector<SafeSpaceSlice> safeSpaceAllSupports(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                                 double phi) {
  std::vector<SafeSpaceSlice> out;
  for (const Support& s : enumerateSupports(payoff.rows())) {
    SafeSpaceSlice slice = safeSpaceForSupport(payoff, s, phi);
    if (!slice.empty()) out.push_back(std::move(slice));
  }
  return out;
}

std::vector<BoundaryPoint> twoByTwoBoundary(const Eigen::Ref<const Eigen::MatrixXd>& payoff,
                                            const std::vector<double>& phiGrid) {
  if (payoff.rows() != 2 || payoff.cols() != 2) {
    throw Error(ErrorCode::Not2x2, "boundary analytics need a 2x2 matrix, got " +
                                       std::to_string(payoff.rows()) + "x" +
                                       std::to_string(payoff.cols()));
  }
  std::vector<BoundaryPoint> out;
  out.reserve(phiGrid.size());
  for (double phi : phiGrid) {
    const Eigen::Matrix2d shifted = shiftedMatrix(payoff, phi);
    // (A'x)_i = a'_i2 + (a'_i1 - a'_i2) x₁ >= 0 on x₁ ∈ [0, 1].
    double lo = 0.0;
    double hi = 1.0;
    bool empty = false;
    for (Eigen::Index i = 0; i < 2; ++i) {
      const double intercept = shifted(i, 1);
      const double slope = shifted(i, 0) - shifted(i, 1);
      if (slope == 0.0) {
        empty = empty || intercept < 0.0;
      } else if (slope > 0.0) {
        lo = std::max(lo, -intercept / slope);
      } else {
        hi = std::min(hi, -intercept / slope);
      }
    }
    empty = empty || lo > hi;
    out.push_back(empty ? BoundaryPoint{phi, 0.0, 0.0, true} : BoundaryPoint{phi, lo, hi, false});
  }
  return out;
}

std::vector<double> linearGrid(double lo, double hi, int count) {
  if (count < 1) throw Error(ErrorCode::OutOfRange, "grid needs at least one point");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  }
  return grid;
}

std::vector<double> defaultPhiGrid(const Eigen::Ref<const Eigen::MatrixXd>& payoff, int count) {
  return linearGrid(payoff.minCoeff(), columnMaximin(payoff).value, count);
}

}  // namespace safegame
