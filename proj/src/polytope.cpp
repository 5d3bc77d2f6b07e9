#include "safegame/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "safegame/error.hpp"
#include "safegame/lp.hpp"

namespace safegame {

namespace {

constexpr double kZeroTol = 1e-9;   // sign test on unit rays against unit rows
constexpr double kRankTol = 1e-9;
constexpr double kActiveTol = 1e-7;  // active-set detection when polishing

// Generator of the homogenized cone {(y, t) : H (y, t) >= 0}, together with
// the indices of processed constraints it satisfies with equality.
struct Ray {
  Eigen::VectorXd z;
  std::vector<int> zeros;  // sorted
};

int rankOf(const Eigen::MatrixXd& rows, const std::vector<int>& pick) {
  if (pick.empty()) return 0;
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(pick.size()), rows.cols());
  for (std::size_t i = 0; i < pick.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = rows.row(pick[i]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
  lu.setThreshold(kRankTol);
  return static_cast<int>(lu.rank());
}

bool lexLess(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Feasibility of {x : Cx >= r, Ex = e} by LP with free variables.
bool regionFeasible(const HRep& h) {
  LinearProgram lp(Eigen::VectorXd::Zero(h.dimension()));
  for (Eigen::Index j = 0; j < h.dimension(); ++j) lp.setLowerBound(j, kFreeVariable);
  lp.addConstraints(h.inequalityMatrix(), Relation::greaterEqual, h.inequalityRhs());
  lp.addConstraints(h.equalityMatrix(), Relation::equal, h.equalityRhs());
  return solveLp(lp).status == LpStatus::optimal;
}

// Snap a vertex onto the exact intersection of its active constraints.
Eigen::VectorXd polish(const HRep& h, const Eigen::VectorXd& x) {
  const Eigen::Index d = h.dimension();
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < h.inequalityMatrix().rows(); ++i) {
    const double scale = std::max(1.0, h.inequalityMatrix().row(i).cwiseAbs().maxCoeff());
    if (std::abs(h.inequalityMatrix().row(i).dot(x) - h.inequalityRhs()(i)) <= kActiveTol * scale) {
      active.push_back(i);
    }
  }
  const Eigen::Index k = static_cast<Eigen::Index>(active.size()) + h.equalityMatrix().rows();
  Eigen::MatrixXd m(k, d);
  Eigen::VectorXd rhs(k);
  Eigen::Index r = 0;
  for (Eigen::Index i : active) {
    m.row(r) = h.inequalityMatrix().row(i);
    rhs(r++) = h.inequalityRhs()(i);
  }
  m.bottomRows(h.equalityMatrix().rows()) = h.equalityMatrix();
  rhs.tail(h.equalityMatrix().rows()) = h.equalityRhs();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  if (qr.rank() < d) return x;
  const Eigen::VectorXd refined = qr.solve(rhs);
  if ((refined - x).cwiseAbs().maxCoeff() > 1e-6 || !contains(h, refined, 1e-9)) return x;
  // Round-off residue on coordinates that are zero in exact arithmetic.
  return refined.unaryExpr([](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }).eval();
}

}  // namespace

HRep::HRep(Eigen::Index dimension)
    : dimension_(dimension), ineq_(0, dimension), eq_(0, dimension) {
  if (dimension < 1) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
}

HRep& HRep::addInequality(const Eigen::Ref<const Eigen::RowVectorXd>& coefficients, double rhs) {
  if (coefficients.size() != dimension_) {
    throw Error(ErrorCode::DimensionMismatch, "inequality has wrong length");
  }
  ineq_.conservativeResize(ineq_.rows() + 1, Eigen::NoChange);
  ineq_.bottomRows(1) = coefficients;
  ineqRhs_.conservativeResize(ineqRhs_.size() + 1);
  ineqRhs_(ineqRhs_.size() - 1) = rhs;
  return *this;
}

HRep& HRep::addInequalities(const Eigen::Ref<const Eigen::MatrixXd>& coefficients,
                            const Eigen::Ref<const Eigen::VectorXd>& rhs) {
  if (coefficients.rows() != rhs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "inequality matrix and rhs disagree");
  }
  for (Eigen::Index i = 0; i < coefficients.rows(); ++i) addInequality(coefficients.row(i), rhs(i));
  return *this;
}

HRep& HRep::addEquality(const Eigen::Ref<const Eigen::RowVectorXd>& coefficients, double rhs) {
  if (coefficients.size() != dimension_) {
    throw Error(ErrorCode::DimensionMismatch, "equality has wrong length");
  }
  eq_.conservativeResize(eq_.rows() + 1, Eigen::NoChange);
  eq_.bottomRows(1) = coefficients;
  eqRhs_.conservativeResize(eqRhs_.size() + 1);
  eqRhs_(eqRhs_.size() - 1) = rhs;
  return *this;
}

HRep HRep::simplex(Eigen::Index dimension) {
  HRep h(dimension);
  h.addEquality(Eigen::RowVectorXd::Ones(dimension), 1.0);
  h.addInequalities(Eigen::MatrixXd::Identity(dimension, dimension),
                    Eigen::VectorXd::Zero(dimension));
  return h;
}

Eigen::MatrixXd VRep::asColumns(Eigen::Index dimension) const {
  Eigen::MatrixXd m(dimension, static_cast<Eigen::Index>(vertices.size()));
  for (std::size_t j = 0; j < vertices.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vertices[j];
  return m;
}

bool contains(const HRep& h, const Eigen::Ref<const Eigen::VectorXd>& x, double tol) {
  if (x.size() != h.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(x.size()) +
                                                  " coordinates, region has " +
                                                  std::to_string(h.dimension()));
  }
  if (h.inequalityMatrix().rows() > 0 &&
      ((h.inequalityMatrix() * x - h.inequalityRhs()).array() < -tol).any()) {
    return false;
  }
  if (h.equalityMatrix().rows() > 0 &&
      ((h.equalityMatrix() * x - h.equalityRhs()).array().abs() > tol).any()) {
    return false;
  }
  return true;
}

VRep hToV(const HRep& h) {
  const Eigen::Index d = h.dimension();

  // Parametrize the affine hull of the equalities: x = x0 + N y.
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(d, d);
  if (h.equalityMatrix().rows() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h.equalityMatrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(kRankTol);
    const Eigen::Index rank = svd.rank();
    x0 = svd.solve(h.equalityRhs());
    const double residual = (h.equalityMatrix() * x0 - h.equalityRhs()).cwiseAbs().maxCoeff();
    if (residual > 1e-9 * std::max(1.0, h.equalityRhs().cwiseAbs().maxCoeff())) return {};
    basis = svd.matrixV().rightCols(d - rank);
  }
  const Eigen::Index k = basis.cols();

  if (k == 0) {
    if (contains(h, x0, kDedupeTol)) return {{x0}};
    return {};
  }

  // Homogenized rows (G_i, -g_i): G_i y - g_i t >= 0, plus t >= 0 first.
  const Eigen::MatrixXd g = h.inequalityMatrix() * basis;
  const Eigen::VectorXd slack = h.inequalityRhs() - h.inequalityMatrix() * x0;
  std::vector<Eigen::RowVectorXd> rowList;
  {
    Eigen::RowVectorXd t = Eigen::RowVectorXd::Zero(k + 1);
    t(k) = 1.0;
    rowList.push_back(t);
  }
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    Eigen::RowVectorXd row(k + 1);
    row.head(k) = g.row(i);
    row(k) = -slack(i);
    const double gn = g.row(i).norm();
    if (gn <= kRankTol * std::max(1.0, std::abs(slack(i)))) {
      // 0 >= slack·t with t > 0 for any point: infeasible when slack > 0.
      if (slack(i) > kZeroTol) return {};
      continue;
    }
    rowList.push_back(row / row.norm());
  }
  const Eigen::Index dim = k + 1;
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(rowList.size()), dim);
  for (std::size_t i = 0; i < rowList.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = rowList[i];

  // Greedy choice of dim independent rows for the initial simplicial cone.
  std::vector<int> initial;
  std::vector<int> rest;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    std::vector<int> trial = initial;
    trial.push_back(static_cast<int>(i));
    if (static_cast<Eigen::Index>(initial.size()) < dim &&
        rankOf(rows, trial) == static_cast<int>(trial.size())) {
      initial = std::move(trial);
    } else {
      rest.push_back(static_cast<int>(i));
    }
  }
  if (static_cast<Eigen::Index>(initial.size()) < dim) {
    // The cone has a lineality space: either empty or unbounded.
    if (regionFeasible(h)) {
      throw Error(ErrorCode::UnboundedRegion, "region contains a line");
    }
    return {};
  }

  Eigen::MatrixXd h0(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) h0.row(i) = rows.row(initial[static_cast<std::size_t>(i)]);
  const Eigen::MatrixXd inv = h0.inverse();
  std::vector<Ray> rays;
  for (Eigen::Index j = 0; j < dim; ++j) {
    Ray ray{inv.col(j).normalized(), {}};
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (i != j) ray.zeros.push_back(initial[static_cast<std::size_t>(i)]);
    }
    std::sort(ray.zeros.begin(), ray.zeros.end());
    rays.push_back(std::move(ray));
  }

  for (int c : rest) {
    const Eigen::RowVectorXd a = rows.row(c);
    std::vector<std::size_t> plus, minus;
    std::vector<double> value(rays.size());
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = a.dot(rays[r].z);
      if (value[r] > kZeroTol) {
        plus.push_back(r);
        next.push_back(rays[r]);
      } else if (value[r] < -kZeroTol) {
        minus.push_back(r);
      } else {
        Ray zr = rays[r];
        zr.zeros.insert(std::upper_bound(zr.zeros.begin(), zr.zeros.end(), c), c);
        next.push_back(std::move(zr));
      }
    }
    for (std::size_t p : plus) {
      for (std::size_t q : minus) {
        std::vector<int> common;
        std::set_intersection(rays[p].zeros.begin(), rays[p].zeros.end(), rays[q].zeros.begin(),
                              rays[q].zeros.end(), std::back_inserter(common));
        if (static_cast<Eigen::Index>(common.size()) < dim - 2) continue;
        if (rankOf(rows, common) != dim - 2) continue;
        Ray nr;
        nr.z = (value[p] * rays[q].z - value[q] * rays[p].z).normalized();
        nr.zeros = std::move(common);
        nr.zeros.insert(std::upper_bound(nr.zeros.begin(), nr.zeros.end(), c), c);
        next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
    if (rays.empty()) return {};
  }

  VRep out;
  bool recession = false;
  for (const Ray& ray : rays) {
    const double t = ray.z(k);
    if (t > kZeroTol) {
      Eigen::VectorXd x = x0 + basis * (ray.z.head(k) / t);
      out.vertices.push_back(polish(h, x));
    } else {
      recession = true;
    }
  }
  if (out.vertices.empty()) return {};
  if (recession) throw Error(ErrorCode::UnboundedRegion, "region has a recession direction");

  std::sort(out.vertices.begin(), out.vertices.end(), lexLess);
  std::vector<Eigen::VectorXd> unique;
  for (Eigen::VectorXd& v : out.vertices) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const Eigen::VectorXd& u) {
      return (u - v).cwiseAbs().maxCoeff() <= kDedupeTol;
    });
    if (!dup) unique.push_back(std::move(v));
  }
  out.vertices = std::move(unique);
  return out;
}

std::vector<Eigen::VectorXd> extremePointsByLp(const HRep& h,
                                               const std::vector<Eigen::VectorXd>& objectives) {
  std::vector<Eigen::VectorXd> out;
  for (const Eigen::VectorXd& c : objectives) {
    if (c.size() != h.dimension()) {
      throw Error(ErrorCode::DimensionMismatch, "objective has wrong length");
    }
    LinearProgram lp(c, Sense::minimize);
    for (Eigen::Index j = 0; j < h.dimension(); ++j) lp.setLowerBound(j, kFreeVariable);
    lp.addConstraints(h.inequalityMatrix(), Relation::greaterEqual, h.inequalityRhs());
    lp.addConstraints(h.equalityMatrix(), Relation::equal, h.equalityRhs());
    const LpSolution sol = solveLp(lp);
    if (sol.status == LpStatus::infeasible) {
      throw Error(ErrorCode::InfeasibleRegion, "region is empty");
    }
    if (sol.status == LpStatus::unbounded) {
      throw Error(ErrorCode::UnboundedRegion, "objective is unbounded on the region");
    }
    out.push_back(*sol.point);
  }
  return out;
}

double hausdorffDistance(const std::vector<Eigen::VectorXd>& a,
                         const std::vector<Eigen::VectorXd>& b) {
  if (a.empty() || b.empty()) {
    return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  auto directed = [](const std::vector<Eigen::VectorXd>& from, const std::vector<Eigen::VectorXd>& to) {
    double worst = 0.0;
    for (const Eigen::VectorXd& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Eigen::VectorXd& q : to) best = std::min(best, (p - q).cwiseAbs().maxCoeff());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace safegame
