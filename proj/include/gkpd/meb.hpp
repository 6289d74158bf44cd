#pragma once

#include <optional>
#include <vector>

#include "gkpd/types.hpp"

namespace gkpd {

// Smallest enclosing ball of power-distance balls. radius_sq may be negative
// for positive weights; it is reported as-is, clamping is a caller decision.
struct MebSolution {
  double radius_sq = 0.0;
  Vector lambda;                  // simplex coefficients, exact zeros off support
  std::vector<int> support;       // indices with lambda > 0, ascending
  std::optional<Vector> center;   // coordinate mode only
};

// Minimizes max_i (|x - p_i|^2 - w_i) over x. Solved through the concave dual
// max_{lambda in simplex} sum lambda_i (|p_i|^2 - w_i) - |sum lambda_i p_i|^2;
// the center is the lambda-combination of the points and radius_sq is read
// back from the primal, so dual and primal stay two separate routes.
MebSolution meb_coordinates(const Matrix& points, const Vector& weights);

// Same ball in a kernel feature space described only by a unit-diagonal Gram
// matrix: max over the simplex of 1 - sum lambda_i w_i - lambda^T K lambda.
MebSolution meb_gram(const Matrix& gram, const Vector& weights);

// 1/2 lambda^T D lambda for a pairwise power-distance matrix D (diagonal
// -2 w_i). At the optimal lambda this equals radius_sq.
double decomposition_radius(const Vector& lambda, const Matrix& pairwise_power);

// Reference radius by dense grid search over the bounding box of the points,
// refined by ellipsoid cuts on subgradients of the max. Ignores all solver
// structure on purpose. Small instances only: k <= 8 points, dimension <= 4.
MebSolution meb_oracle(const Matrix& points, const Vector& weights);

struct SimplexQpResult {
  Vector lambda;
  double value = 0.0;
};

// max_{lambda in simplex} lambda^T a - lambda^T q lambda for PSD q.
// k <= 10 is solved exactly by support-subset enumeration (equality KKT
// systems, best feasible candidate, lexicographically smallest optimal
// support); larger k falls back to away-step Frank-Wolfe.
SimplexQpResult maximize_simplex_quadratic(const Matrix& q, const Vector& a);

// The Frank-Wolfe path, exposed so tests can probe solution uniqueness from
// many starting points. Stops at duality gap <= tol (relative to the value
// scale) or max_iter.
SimplexQpResult frank_wolfe_simplex_quadratic(const Matrix& q, const Vector& a,
                                              const Vector& init, double tol = 1e-12,
                                              int max_iter = 100000);

}  // namespace gkpd
