#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gkpd/kernel.hpp"
#include "gkpd/meb.hpp"
#include "gkpd/rng.hpp"

using namespace gkpd;

namespace {

Matrix random_points(SeededRng& rng, int k, int dim, double spread) {
  Matrix m(k, dim);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = spread * rng.normal();
  return m;
}

Vector random_weights(SeededRng& rng, int k) {
  Vector w(k);
  for (int i = 0; i < k; ++i) w(i) = rng.uniform(-1.0, 0.0);
  return w;
}

// Pairwise power matrix for coordinates: |p_i - p_j|^2 - w_i - w_j.
Matrix power_matrix(const Matrix& points, const Vector& weights) {
  const int k = static_cast<int>(points.rows());
  Matrix d(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      d(i, j) = (points.row(i) - points.row(j)).squaredNorm() - weights(i) - weights(j);
  return d;
}

}  // namespace

TEST_CASE("single point ball") {
  Matrix p(1, 3);
  p << 1.0, 2.0, -1.0;
  Vector w(1);
  w << -0.4;
  const MebSolution sol = meb_coordinates(p, w);
  CHECK(sol.radius_sq == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(sol.lambda(0) == 1.0);
  CHECK(sol.support == std::vector<int>{0});
  REQUIRE(sol.center.has_value());
  CHECK((*sol.center - p.row(0).transpose()).norm() <= 1e-15);

  const MebSolution oracle = meb_oracle(p, w);
  CHECK(oracle.radius_sq == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("two point balls in closed form") {
  // Points 0 and 1 on the line with weights (0, 1): the heavier ball already
  // covers the lighter one, center 0, radius 0.
  Matrix p(2, 1);
  p << 0.0, 1.0;
  Vector w(2);
  w << 0.0, 1.0;
  const MebSolution pinned = meb_coordinates(p, w);
  CHECK(pinned.radius_sq == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(pinned.center.has_value());
  CHECK(std::abs((*pinned.center)(0)) <= 1e-9);

  // Equal weights: center at the midpoint, radius d^2/4 - w.
  Matrix q(2, 2);
  q << 0.0, 0.0, 3.0, 0.0;
  Vector wq(2);
  wq << -0.25, -0.25;
  const MebSolution mid = meb_coordinates(q, wq);
  CHECK(mid.radius_sq == doctest::Approx(9.0 / 4.0 + 0.25).epsilon(1e-12));
  CHECK((*mid.center)(0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(mid.lambda(0) == doctest::Approx(0.5).epsilon(1e-9));

  // General 1D closed form: center offset s = (d^2 + w1 - w2) / (2d) from the
  // first point, when that lands inside the segment.
  SeededRng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const double d = rng.uniform(0.5, 3.0);
    Vector w2(2);
    w2 << rng.uniform(-0.2, 0.0), rng.uniform(-0.2, 0.0);
    Matrix p2(2, 1);
    p2 << 0.0, d;
    const double s = (d * d + w2(0) - w2(1)) / (2.0 * d);
    if (s <= 0.0 || s >= d) continue;
    const MebSolution sol = meb_coordinates(p2, w2);
    CHECK((*sol.center)(0) == doctest::Approx(s).epsilon(1e-9));
    CHECK(sol.radius_sq == doctest::Approx(s * s - w2(0)).epsilon(1e-9));
  }
}

TEST_CASE("gram mode closed forms") {
  Matrix ones = Matrix::Ones(3, 3);
  Vector zero = Vector::Zero(3);
  CHECK(meb_gram(ones, zero).radius_sq == doctest::Approx(0.0).epsilon(1e-12));

  Matrix one = Matrix::Ones(1, 1);
  Vector w1(1);
  w1 << -0.7;
  CHECK(meb_gram(one, w1).radius_sq == doctest::Approx(0.7).epsilon(1e-14));

  // k = 2 with zero weights: radius (1 - kbar) / 2 = D_K^2 / 4 at lambda
  // (1/2, 1/2).
  for (double kbar : {0.1, 0.5, 0.9}) {
    Matrix g(2, 2);
    g << 1.0, kbar, kbar, 1.0;
    const MebSolution sol = meb_gram(g, Vector::Zero(2));
    CHECK(sol.radius_sq == doctest::Approx((1.0 - kbar) / 2.0).epsilon(1e-12));
    CHECK(sol.lambda(0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sol.lambda(1) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_FALSE(sol.center.has_value());
  }

  Matrix bad(2, 2);
  bad << 1.0, 0.4, 0.1, 1.0;
  CHECK_THROWS_AS(meb_gram(bad, Vector::Zero(2)), std::invalid_argument);
  Matrix offdiag(2, 2);
  offdiag << 2.0, 0.4, 0.4, 2.0;
  CHECK_THROWS_AS(meb_gram(offdiag, Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("decomposition radius closed forms") {
  Vector e1(3);
  e1 << 0.0, 1.0, 0.0;
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 0.2;
  d(1, 1) = 0.8;  // -2 w_1 with w_1 = -0.4
  d(2, 2) = 0.6;
  CHECK(decomposition_radius(e1, d) == doctest::Approx(0.4).epsilon(1e-14));

  // k = 2, lambda (1/2, 1/2), weights (w, w), squared distance dsq:
  // value d^2/4 - w.
  const double w = -0.3;
  const double dsq = 2.0;
  Matrix pd(2, 2);
  pd << -2.0 * w, dsq - 2.0 * w, dsq - 2.0 * w, -2.0 * w;
  Vector half(2);
  half << 0.5, 0.5;
  CHECK(decomposition_radius(half, pd) == doctest::Approx(dsq / 4.0 - w).epsilon(1e-14));

  Matrix pd0(2, 2);
  pd0 << 0.0, dsq, dsq, 0.0;
  CHECK(decomposition_radius(half, pd0) == doctest::Approx(dsq / 4.0).epsilon(1e-14));

  Vector not_simplex(2);
  not_simplex << 0.7, 0.7;
  CHECK_THROWS_AS(decomposition_radius(not_simplex, pd0), std::invalid_argument);
}

TEST_CASE("decomposition consistency on random instances") {
  SeededRng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = rng.uniform_int(1, 8);
    const int dim = rng.uniform_int(1, 5);
    const Matrix pts = random_points(rng, k, dim, 1.5);
    const Vector w = random_weights(rng, k);
    const MebSolution sol = meb_coordinates(pts, w);
    const double decomposed = decomposition_radius(sol.lambda, power_matrix(pts, w));
    CHECK(std::abs(sol.radius_sq - decomposed) <= 1e-8 * std::max(1.0, std::abs(sol.radius_sq)));
  }
}

TEST_CASE("support attains the maximum power distance") {
  SeededRng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = rng.uniform_int(2, 7);
    const Matrix pts = random_points(rng, k, 3, 1.5);
    const Vector w = random_weights(rng, k);
    const MebSolution sol = meb_coordinates(pts, w);
    REQUIRE(sol.center.has_value());
    for (int idx : sol.support) {
      const double power = (pts.row(idx).transpose() - *sol.center).squaredNorm() - w(idx);
      CHECK(std::abs(power - sol.radius_sq) <= 1e-8 * std::max(1.0, std::abs(sol.radius_sq)));
    }
    // Convex combination structure of the center.
    CHECK((pts.transpose() * sol.lambda - *sol.center).norm() <= 1e-12);
    CHECK(std::abs(sol.lambda.sum() - 1.0) <= 1e-12);
    CHECK(sol.lambda.minCoeff() >= 0.0);
    for (int i = 0; i < k; ++i) {
      const bool in_support =
          std::find(sol.support.begin(), sol.support.end(), i) != sol.support.end();
      if (!in_support) CHECK(sol.lambda(i) == 0.0);
    }
  }
}

TEST_CASE("uniqueness from many starts") {
  SeededRng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = rng.uniform_int(3, 8);
    const Matrix pts = random_points(rng, k, 3, 1.5);
    const Vector w = random_weights(rng, k);
    const Matrix q = pts * pts.transpose();
    Vector a(k);
    for (int i = 0; i < k; ++i) a(i) = pts.row(i).squaredNorm() - w(i);

    double first_radius = 0.0;
    Vector first_center;
    for (int init_id = 0; init_id < 5; ++init_id) {
      Vector init(k);
      for (int i = 0; i < k; ++i) init(i) = rng.uniform(0.05, 1.0);
      init /= init.sum();
      const SimplexQpResult res = frank_wolfe_simplex_quadratic(q, a, init);
      const Vector center = pts.transpose() * res.lambda;
      double radius = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < k; ++i)
        radius = std::max(radius, (pts.row(i).transpose() - center).squaredNorm() - w(i));
      if (init_id == 0) {
        first_radius = radius;
        first_center = center;
      } else {
        CHECK(std::abs(radius - first_radius) <= 1e-8 * std::max(1.0, std::abs(first_radius)));
        CHECK((center - first_center).norm() <= 1e-6);
      }
    }
  }
}

TEST_CASE("enumeration agrees with frank-wolfe") {
  SeededRng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = rng.uniform_int(2, 6);
    const Matrix pts = random_points(rng, k, 3, 1.2);
    const Vector w = random_weights(rng, k);
    const Matrix q = pts * pts.transpose();
    Vector a(k);
    for (int i = 0; i < k; ++i) a(i) = pts.row(i).squaredNorm() - w(i);
    const SimplexQpResult exact = maximize_simplex_quadratic(q, a);
    const SimplexQpResult iterative =
        frank_wolfe_simplex_quadratic(q, a, Vector::Constant(k, 1.0 / k));
    CHECK(std::abs(exact.value - iterative.value) <= 1e-8 * std::max(1.0, std::abs(exact.value)));
  }
}

TEST_CASE("oracle equivalence") {
  Matrix pair(2, 2);
  pair << 0.0, 0.0, 2.0, 0.0;
  Vector wp = Vector::Constant(2, -0.3);
  const MebSolution oracle_pair = meb_oracle(pair, wp);
  CHECK(oracle_pair.radius_sq == doctest::Approx(1.0 + 0.3).epsilon(1e-4));

  SeededRng rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = rng.uniform_int(1, 6);
    const int dim = rng.uniform_int(1, 3);
    const Matrix pts = random_points(rng, k, dim, 1.0);
    const Vector w = random_weights(rng, k);
    const MebSolution fast = meb_coordinates(pts, w);
    const MebSolution slow = meb_oracle(pts, w);
    CHECK(std::abs(fast.radius_sq - slow.radius_sq) <=
          1e-4 * std::max(1.0, std::abs(fast.radius_sq)));
  }

  Matrix too_big(9, 2);
  too_big.setZero();
  CHECK_THROWS_AS(meb_oracle(too_big, Vector::Zero(9)), std::invalid_argument);
}

TEST_CASE("variance identity") {
  SeededRng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = rng.uniform_int(1, 8);
    const int dim = rng.uniform_int(1, 4);
    const Matrix pts = random_points(rng, k, dim, 2.0);
    Vector lambda(k);
    for (int i = 0; i < k; ++i) lambda(i) = rng.uniform(0.01, 1.0);
    lambda /= lambda.sum();
    const Vector c = pts.transpose() * lambda;

    double lhs = 0.0;
    for (int i = 0; i < k; ++i) lhs += lambda(i) * (pts.row(i).transpose() - c).squaredNorm();
    double rhs = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        rhs += lambda(i) * lambda(j) * (pts.row(i) - pts.row(j)).squaredNorm();
    rhs *= 0.5;
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("gram and coordinate formulations agree on unit vectors") {
  // Rows on the unit sphere make the linear-algebra Gram a legal kernel-style
  // Gram (unit diagonal), and then both formulations describe the same ball.
  SeededRng rng(67);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = rng.uniform_int(2, 6);
    Matrix pts = random_points(rng, k, 5, 1.0);
    for (int i = 0; i < k; ++i) pts.row(i) /= pts.row(i).norm();
    const Vector w = random_weights(rng, k);
    const Matrix g = pts * pts.transpose();
    const MebSolution via_gram = meb_gram(g, w);
    const MebSolution via_coords = meb_coordinates(pts, w);
    CHECK(std::abs(via_gram.radius_sq - via_coords.radius_sq) <=
          1e-8 * std::max(1.0, std::abs(via_coords.radius_sq)));
  }
}

TEST_CASE("kernel gram balls match decomposition") {
  KernelConfig cfg{1.0};
  SeededRng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = rng.uniform_int(1, 6);
    const Matrix pts = random_points(rng, k, 3, 1.0);
    const Vector w = random_weights(rng, k);
    const Matrix g = gram(pts, cfg).entries();
    const MebSolution sol = meb_gram(g, w);
    Matrix pd(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        pd(i, j) = 2.0 * (1.0 - g(i, j)) - w(i) - w(j);
    const double decomposed = decomposition_radius(sol.lambda, pd);
    CHECK(std::abs(sol.radius_sq - decomposed) <= 1e-8 * std::max(1.0, std::abs(sol.radius_sq)));
  }
}
