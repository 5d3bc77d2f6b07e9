#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "safegame/lp.hpp"
#include "safegame/polytope.hpp"
#include "test_support.hpp"

using namespace safegame;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Simplex ∩ { A x ≥ φ }.
HRep thresholdRegion(const Eigen::MatrixXd& a, double phi) {
  HRep h = HRep::simplex(a.cols());
  h.addInequalities(a, Eigen::VectorXd::Constant(a.rows(), phi));
  return h;
}

// Simplex in dimension d with `extra` random half-spaces that keep the
// simplex barycentre strictly feasible.
HRep randomRegion(std::mt19937_64& rng, Eigen::Index d, int extra) {
  HRep h = HRep::simplex(d);
  std::uniform_real_distribution<double> slack(0.0, 0.3);
  const Eigen::VectorXd centre = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  for (int k = 0; k < extra; ++k) {
    const Eigen::RowVectorXd c = testing::randomMatrix(rng, 1, d, -1, 1);
    h.addInequality(c, c.dot(centre) - slack(rng));
  }
  return h;
}

// Whether x lies within tol of conv(points), by a feasibility LP.
bool inHull(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& points, double tol) {
  if (points.empty()) return false;
  const Eigen::Index k = static_cast<Eigen::Index>(points.size());
  const Eigen::Index d = x.size();
  Eigen::MatrixXd p(d, k);
  for (Eigen::Index j = 0; j < k; ++j) p.col(j) = points[static_cast<std::size_t>(j)];
  LinearProgram lp(Eigen::VectorXd::Zero(k));
  lp.addConstraint(Eigen::RowVectorXd::Ones(k), Relation::equal, 1.0);
  lp.addConstraints(p, Relation::lessEqual, x.array() + tol);
  lp.addConstraints(p, Relation::greaterEqual, x.array() - tol);
  return solveLp(lp).status == LpStatus::optimal;
}

}  // namespace

TEST_CASE("simplex corners") {
  const VRep v = hToV(HRep::simplex(3));
  REQUIRE(v.size() == 3);
  std::vector<Eigen::VectorXd> expected{vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})};
  CHECK(testing::sameVertexSet(v.vertices, expected, 1e-12));
  CHECK(v.asColumns(3).colwise().sum().isApprox(Eigen::RowVectorXd::Ones(3)));
}

TEST_CASE("hawk-dove threshold region at phi = 10") {
  const HRep h = thresholdRegion(testing::hawkDove(), 10);
  const VRep v = hToV(h);
  CHECK(testing::sameVertexSet(v.vertices, {vec({0, 1}), vec({0.5, 0.5})}, 1e-12));
  CHECK(testing::sameVertexSet(v.vertices, testing::bruteForceVertices(h), 1e-9));
}

TEST_CASE("threshold region above the column maximin is empty") {
  CHECK(hToV(thresholdRegion(testing::hawkDove(), 15.5)).empty());
  CHECK(hToV(thresholdRegion(testing::threeType(), 6.3)).empty());
}

TEST_CASE("region pinned to one point") {
  const VRep v = hToV(thresholdRegion(testing::hawkDove(), 15));
  REQUIRE(v.size() == 1);
  CHECK((v.vertices[0] - vec({0, 1})).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("unbounded and degenerate inputs") {
  HRep quadrant(2);
  quadrant.addInequality(Eigen::RowVector2d(1, 0), 0);
  quadrant.addInequality(Eigen::RowVector2d(0, 1), 0);
  CHECK(testing::throwsCode([&] { hToV(quadrant); }, ErrorCode::UnboundedRegion));

  HRep line(2);
  line.addEquality(Eigen::RowVector2d(1, 1), 1);
  CHECK(testing::throwsCode([&] { hToV(line); }, ErrorCode::UnboundedRegion));

  HRep inconsistent(2);
  inconsistent.addEquality(Eigen::RowVector2d(1, 1), 1);
  inconsistent.addEquality(Eigen::RowVector2d(1, 1), 2);
  CHECK(hToV(inconsistent).empty());

  HRep point(2);
  point.addEquality(Eigen::RowVector2d(1, 0), 0.25);
  point.addEquality(Eigen::RowVector2d(0, 1), 0.75);
  const VRep p = hToV(point);
  REQUIRE(p.size() == 1);
  CHECK(p.vertices[0].isApprox(vec({0.25, 0.75})));

  // Redundant copies of the same facet.
  HRep doubled = HRep::simplex(3);
  doubled.addInequality(Eigen::RowVector3d(1, 0, 0), 0);
  doubled.addInequality(Eigen::RowVector3d(2, 0, 0), 0);
  CHECK(hToV(doubled).size() == 3);

  CHECK(testing::throwsCode([] { HRep(0); }, ErrorCode::DimensionMismatch));
  HRep h(3);
  CHECK(testing::throwsCode([&] { h.addInequality(Eigen::RowVector2d(1, 1), 0); },
                            ErrorCode::DimensionMismatch));
}

TEST_CASE("membership") {
  const HRep simplex = HRep::simplex(3);
  CHECK(contains(simplex, vec({1, 0, 0})));
  CHECK_FALSE(contains(simplex, vec({2, -1, 0})));
  CHECK(contains(thresholdRegion(testing::hawkDove(), 0), vec({0.5, 0.5})));
  CHECK_FALSE(contains(thresholdRegion(testing::hawkDove(), 0), vec({0.9, 0.1})));
  CHECK(testing::throwsCode([&] { contains(simplex, vec({1, 0})); }, ErrorCode::DimensionMismatch));
}

TEST_CASE("extreme points by LP") {
  const HRep h = thresholdRegion(testing::hawkDove(), 0);
  const auto pts = extremePointsByLp(h, {vec({1, 0}), vec({-1, 0})});
  REQUIRE(pts.size() == 2);
  CHECK(pts[0](0) == doctest::Approx(0).scale(1));
  CHECK(pts[1](0) == doctest::Approx(9.0 / 14.0));
  const VRep v = hToV(h);
  CHECK(testing::sameVertexSet(pts, v.vertices, 1e-9));

  const auto corner = extremePointsByLp(HRep::simplex(3), {vec({1, 0, 0})});
  CHECK(corner[0](0) == doctest::Approx(0).scale(1));

  const auto pinned = extremePointsByLp(thresholdRegion(testing::hawkDove(), 15),
                                        {vec({1, 0}), vec({-1, 0})});
  for (const auto& p : pinned) CHECK((p - vec({0, 1})).cwiseAbs().maxCoeff() <= 1e-9);

  CHECK(testing::throwsCode(
      [] { extremePointsByLp(thresholdRegion(testing::hawkDove(), 20), {vec({1, 0})}); },
      ErrorCode::InfeasibleRegion));
}

TEST_CASE("hausdorff distance") {
  CHECK(hausdorffDistance({vec({0, 0})}, {vec({0, 0})}) == 0.0);
  CHECK(hausdorffDistance({vec({0, 0}), vec({1, 0})}, {vec({0, 0})}) == 1.0);
}

TEST_CASE("property: soundness, extremality and completeness on random regions") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const HRep h = randomRegion(rng, d, 1 + trial % 6);
    const VRep v = hToV(h);
    REQUIRE_FALSE(v.empty());
    for (const Eigen::VectorXd& x : v.vertices) CHECK(contains(h, x, 1e-7));
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::vector<Eigen::VectorXd> others;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (j != i) others.push_back(v.vertices[j]);
      CHECK_FALSE(inHull(v.vertices[i], others, 1e-7));
    }
    CHECK(testing::sameVertexSet(v.vertices, testing::bruteForceVertices(h), 1e-6));
  }
}

TEST_CASE("property: completeness on random four-dimensional regions with empty cases") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> phi(-60, 60);
  int empty = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const Eigen::MatrixXd a = testing::randomMatrix(rng, 1 + trial % 4, 4);
    const HRep h = thresholdRegion(a, phi(rng));
    const VRep v = hToV(h);
    const auto oracle = testing::bruteForceVertices(h);
    empty += v.empty();
    CHECK(v.empty() == oracle.empty());
    CHECK(testing::sameVertexSet(v.vertices, oracle, 1e-6));
  }
  CHECK(empty > 0);
}

TEST_CASE("property: raising the threshold never enlarges the region") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> phi(-80, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const Eigen::MatrixXd a = testing::randomMatrix(rng, n, n);
    double lo = phi(rng), hi = phi(rng);
    if (lo > hi) std::swap(lo, hi);
    const HRep loRegion = thresholdRegion(a, lo);
    const VRep hiVertices = hToV(thresholdRegion(a, hi));
    for (const auto& x : hiVertices.vertices) CHECK(contains(loRegion, x, 1e-7));
    // Sampled points of the smaller region are in the larger one.
    if (hiVertices.empty()) continue;
    for (int s = 0; s < 10; ++s) {
      const Eigen::VectorXd w = testing::randomSimplexPoint(rng, static_cast<Eigen::Index>(hiVertices.size()));
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (std::size_t k = 0; k < hiVertices.size(); ++k) x += w(static_cast<Eigen::Index>(k)) * hiVertices.vertices[k];
      CHECK(contains(loRegion, x, 1e-7));
    }
  }
}
