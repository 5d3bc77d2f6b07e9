// Independent oracles and fixtures shared by the unit, property and
// acceptance tests. Nothing here calls the LP solver or the double
// description code, so agreement with them is meaningful.
#ifndef SAFEGAME_TEST_SUPPORT_HPP
#define SAFEGAME_TEST_SUPPORT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "safegame/error.hpp"
#include "safegame/polytope.hpp"

namespace testing {

// True iff `f` throws a safegame::Error carrying `code`.
inline bool throwsCode(const std::function<void()>& f, safegame::ErrorCode code) {
  try {
    f();
  } catch (const safegame::Error& e) {
    return e.code() == code;
  }
  return false;
}

inline std::string dataPath(const std::string& name) {
  return std::string(SAFEGAME_DATA_DIR) + "/" + name;
}

inline Eigen::MatrixXd hawkDove() {
  Eigen::MatrixXd a(2, 2);
  a << -25, 45,
        5, 15;
  return a;
}

inline Eigen::MatrixXd threeType() {
  Eigen::MatrixXd a(3, 3);
  a << 64, -58, 50,
      -34, 51, -66,
       75, -1, 11;
  return a;
}

inline Eigen::MatrixXd example4x3A() {
  Eigen::MatrixXd a(4, 3);
  a << -62, 44, 62,
       -42, 4, 62,
        24, -77, -68,
        28, 80, 53;
  return a;
}

inline Eigen::MatrixXd example4x3B() {
  Eigen::MatrixXd b(4, 3);
  b << 13, -33, -63,
      -76, -90, 34,
      -30, -63, -39,
       85, -33, -24;
  return b;
}

inline Eigen::MatrixXd randomMatrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                    double lo = -100.0, double hi = 100.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

inline Eigen::VectorXd randomSimplexPoint(std::mt19937_64& rng, Eigen::Index n) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = e(rng);
  return x / x.sum();
}

// max over column mixtures q (2 or 3 columns) of min_i (M q)_i.
// A step-1e-3 simplex grid, then repeated local zoom grids around the
// incumbent (hill-climbing at each scale) until the cell is below 1e-9.
inline double gridColumnMaximin(const Eigen::MatrixXd& m, double step = 1e-3) {
  const Eigen::Index n = m.cols();
  auto value = [&](const Eigen::VectorXd& q) { return (m * q).minCoeff(); };
  Eigen::VectorXd best = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double bestValue = value(best);
  auto consider = [&](const Eigen::VectorXd& q) {
    if ((q.array() < -1e-15).any()) return;
    const double v = value(q);
    if (v > bestValue) bestValue = v, best = q;
  };
  const int steps = static_cast<int>(std::lround(1.0 / step));
  Eigen::VectorXd q(n);
  if (n == 1) return m.minCoeff();
  if (n == 2) {
    for (int i = 0; i <= steps; ++i) {
      q << i * step, 1.0 - i * step;
      consider(q);
    }
  } else if (n == 3) {
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; i + j <= steps; ++j) {
        q << i * step, j * step, 1.0 - (i + j) * step;
        consider(q);
      }
    }
  } else {
    throw std::invalid_argument("grid oracle supports at most 3 columns");
  }
  for (double h = step; h > 1e-9; h /= 10.0) {
    for (int climb = 0; climb < 10000; ++climb) {
      const Eigen::VectorXd centre = best;
      const double before = bestValue;
      for (int i = -20; i <= 20; ++i) {
        if (n == 2) {
          q << centre(0) + i * h / 10, centre(1) - i * h / 10;
          consider(q);
          continue;
        }
        for (int j = -20; j <= 20; ++j) {
          q << centre(0) + i * h / 10, centre(1) + j * h / 10, centre(2) - (i + j) * h / 10;
          consider(q);
        }
      }
      if (!(bestValue > before)) break;
    }
  }
  return bestValue;
}

// Every intersection of the equalities with dim - #eq inequalities that
// has full rank and is feasible.
inline std::vector<Eigen::VectorXd> bruteForceVertices(const safegame::HRep& h) {
  const Eigen::Index d = h.dimension();
  const Eigen::MatrixXd& g = h.inequalityMatrix();
  const Eigen::VectorXd& r = h.inequalityRhs();
  const Eigen::MatrixXd& e = h.equalityMatrix();
  const Eigen::VectorXd& er = h.equalityRhs();
  const Eigen::Index need = d - e.rows();
  std::vector<Eigen::VectorXd> out;
  if (need < 0 || need > g.rows()) return out;
  std::vector<bool> pick(static_cast<std::size_t>(g.rows()), false);
  std::fill(pick.begin(), pick.begin() + need, true);
  do {
    Eigen::MatrixXd sys(d, d);
    Eigen::VectorXd rhs(d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      if (!pick[static_cast<std::size_t>(i)]) continue;
      sys.row(k) = g.row(i);
      rhs(k++) = r(i);
    }
    sys.bottomRows(e.rows()) = e;
    rhs.tail(e.rows()) = er;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    lu.setThreshold(1e-10);
    if (lu.rank() < d) continue;
    const Eigen::VectorXd x = lu.solve(rhs);
    if (!safegame::contains(h, x, 1e-9)) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Eigen::VectorXd& v) {
      return (v - x).cwiseAbs().maxCoeff() <= 1e-7;
    });
    if (!dup) out.push_back(x);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

// Two point sets agree as sets within `tol` (L-infinity).
inline bool sameVertexSet(const std::vector<Eigen::VectorXd>& a,
                          const std::vector<Eigen::VectorXd>& b, double tol) {
  auto covered = [tol](const std::vector<Eigen::VectorXd>& from,
                       const std::vector<Eigen::VectorXd>& to) {
    return std::all_of(from.begin(), from.end(), [&](const Eigen::VectorXd& x) {
      return std::any_of(to.begin(), to.end(), [&](const Eigen::VectorXd& y) {
        return (x - y).cwiseAbs().maxCoeff() <= tol;
      });
    });
  };
  return a.size() == b.size() && covered(a, b) && covered(b, a);
}

}  // namespace testing

#endif  // SAFEGAME_TEST_SUPPORT_HPP
