#include "gkpd/meb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gkpd {

namespace {

constexpr int kEnumerationLimit = 10;  // 2^k subset systems stay cheap up to here

void validate_quadratic_inputs(const Matrix& q, const Vector& a) {
  if (q.rows() != q.cols()) throw std::invalid_argument("simplex qp: square matrix required");
  if (q.rows() == 0) throw std::invalid_argument("simplex qp: empty problem");
  if (q.rows() != a.size()) throw std::invalid_argument("simplex qp: size mismatch");
  if (!q.allFinite() || !a.allFinite())
    throw std::invalid_argument("simplex qp: non-finite input");
}

double qp_value(const Matrix& q, const Vector& a, const Vector& lambda) {
  return lambda.dot(a) - lambda.dot(q * lambda);
}

std::vector<int> support_of(const Vector& lambda) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > 0.0) s.push_back(static_cast<int>(i));
  return s;
}

// Equality-constrained KKT system for one candidate support: gradients equal
// on the support, coefficients sum to one. Returns false when inconsistent.
bool solve_support_system(const Matrix& q, const Vector& a, const std::vector<int>& subset,
                          Vector* lambda_out) {
  const int m = static_cast<int>(subset.size());
  Matrix sys = Matrix::Zero(m + 1, m + 1);
  Vector rhs(m + 1);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) sys(r, c) = 2.0 * q(subset[r], subset[c]);
    sys(r, m) = 1.0;
    sys(m, r) = 1.0;
    rhs(r) = a(subset[r]);
  }
  rhs(m) = 1.0;
  Eigen::FullPivLU<Matrix> lu(sys);
  const Vector z = lu.solve(rhs);
  if (!z.allFinite()) return false;
  const double residual = (sys * z - rhs).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff())) return false;

  Vector lambda = Vector::Zero(a.size());
  for (int r = 0; r < m; ++r) {
    const double v = z(r);
    if (v < -1e-10) return false;
    lambda(subset[r]) = std::max(v, 0.0);
  }
  const double total = lambda.sum();
  if (total <= 0.0) return false;
  lambda /= total;
  *lambda_out = std::move(lambda);
  return true;
}

SimplexQpResult enumerate_supports(const Matrix& q, const Vector& a) {
  const int k = static_cast<int>(a.size());
  SimplexQpResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<int> best_support;

  std::vector<int> subset;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    subset.clear();
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) subset.push_back(i);

    Vector lambda;
    if (!solve_support_system(q, a, subset, &lambda)) continue;
    const double value = qp_value(q, a, lambda);
    std::vector<int> sup = support_of(lambda);
    const bool first = best_support.empty();
    const double tie = first ? 0.0 : 1e-12 * std::max(1.0, std::abs(best.value));
    const bool wins = first || value > best.value + tie;
    const bool ties = !wins && value > best.value - tie &&
                      std::lexicographical_compare(sup.begin(), sup.end(), best_support.begin(),
                                                   best_support.end());
    if (wins || ties) {
      best.value = value;
      best.lambda = std::move(lambda);
      best_support = std::move(sup);
    }
  }
  if (!best.lambda.size())
    throw std::runtime_error("simplex qp: no feasible support candidate (degenerate input)");
  return best;
}

}  // namespace

SimplexQpResult frank_wolfe_simplex_quadratic(const Matrix& q, const Vector& a,
                                              const Vector& init, double tol, int max_iter) {
  validate_quadratic_inputs(q, a);
  if (init.size() != a.size()) throw std::invalid_argument("frank_wolfe: init size mismatch");
  if (init.minCoeff() < -1e-12 || std::abs(init.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("frank_wolfe: init not in the simplex");

  const Eigen::Index k = a.size();
  Vector lambda = init.cwiseMax(0.0);
  lambda /= lambda.sum();

  for (int iter = 0; iter < max_iter; ++iter) {
    const Vector grad = a - 2.0 * (q * lambda);
    const double grad_dot_lambda = grad.dot(lambda);

    Eigen::Index fw_idx = 0;
    grad.maxCoeff(&fw_idx);
    const double fw_gap = grad(fw_idx) - grad_dot_lambda;
    const double scale = std::max(1.0, std::abs(qp_value(q, a, lambda)));
    if (fw_gap <= tol * scale) break;

    Eigen::Index away_idx = -1;
    double away_grad = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i) {
      if (lambda(i) > 0.0 && grad(i) < away_grad) {
        away_grad = grad(i);
        away_idx = i;
      }
    }
    const double away_gap = grad_dot_lambda - away_grad;

    Vector dir;
    double gamma_max = 0.0;
    if (fw_gap >= away_gap || lambda(away_idx) >= 1.0) {
      dir = -lambda;
      dir(fw_idx) += 1.0;
      gamma_max = 1.0;
    } else {
      dir = lambda;
      dir(away_idx) -= 1.0;
      gamma_max = lambda(away_idx) / (1.0 - lambda(away_idx));
    }
    const double num = grad.dot(dir);
    const double den = 2.0 * dir.dot(q * dir);
    double gamma = (den > 0.0) ? num / den : gamma_max;
    gamma = std::clamp(gamma, 0.0, gamma_max);
    if (gamma <= 0.0) break;
    lambda += gamma * dir;
    lambda = lambda.cwiseMax(0.0);
    lambda /= lambda.sum();
  }

  // Dust off the support so off-support entries are exact zeros.
  for (Eigen::Index i = 0; i < k; ++i)
    if (lambda(i) < 1e-12) lambda(i) = 0.0;
  lambda /= lambda.sum();
  return SimplexQpResult{lambda, qp_value(q, a, lambda)};
}

SimplexQpResult maximize_simplex_quadratic(const Matrix& q, const Vector& a) {
  validate_quadratic_inputs(q, a);
  const int k = static_cast<int>(a.size());
  if (k == 1) {
    Vector lambda(1);
    lambda(0) = 1.0;
    return SimplexQpResult{lambda, a(0) - q(0, 0)};
  }
  if (k <= kEnumerationLimit) return enumerate_supports(q, a);
  const Vector uniform = Vector::Constant(k, 1.0 / k);
  return frank_wolfe_simplex_quadratic(q, a, uniform);
}

MebSolution meb_coordinates(const Matrix& points, const Vector& weights) {
  if (points.rows() == 0) throw std::invalid_argument("meb_coordinates: empty point set");
  if (points.rows() != weights.size())
    throw std::invalid_argument("meb_coordinates: points/weights size mismatch");
  if (!points.allFinite() || !weights.allFinite())
    throw std::invalid_argument("meb_coordinates: non-finite input");

  const Eigen::Index k = points.rows();
  const Matrix q = points * points.transpose();
  Vector a(k);
  for (Eigen::Index i = 0; i < k; ++i) a(i) = points.row(i).squaredNorm() - weights(i);

  const SimplexQpResult dual = maximize_simplex_quadratic(q, a);
  const Vector center = points.transpose() * dual.lambda;

  double radius_sq = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k; ++i) {
    const double power = (points.row(i).transpose() - center).squaredNorm() - weights(i);
    radius_sq = std::max(radius_sq, power);
  }

  MebSolution sol;
  sol.radius_sq = radius_sq;
  sol.lambda = dual.lambda;
  sol.support = support_of(dual.lambda);
  sol.center = center;
  return sol;
}

MebSolution meb_gram(const Matrix& gram, const Vector& weights) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("meb_gram: square matrix required");
  if (gram.rows() == 0) throw std::invalid_argument("meb_gram: empty matrix");
  if (gram.rows() != weights.size())
    throw std::invalid_argument("meb_gram: gram/weights size mismatch");
  if (!gram.allFinite() || !weights.allFinite())
    throw std::invalid_argument("meb_gram: non-finite input");
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    if (std::abs(gram(i, i) - 1.0) > 1e-9)
      throw std::invalid_argument("meb_gram: diagonal entry off 1 at " + std::to_string(i));
    for (Eigen::Index j = i + 1; j < gram.cols(); ++j)
      if (std::abs(gram(i, j) - gram(j, i)) > 1e-9)
        throw std::invalid_argument("meb_gram: asymmetric input");
  }

  const Vector a = Vector::Ones(weights.size()) - weights;
  const SimplexQpResult dual = maximize_simplex_quadratic(gram, a);

  MebSolution sol;
  sol.radius_sq = dual.value;
  sol.lambda = dual.lambda;
  sol.support = support_of(dual.lambda);
  return sol;
}

double decomposition_radius(const Vector& lambda, const Matrix& pairwise_power) {
  if (pairwise_power.rows() != pairwise_power.cols())
    throw std::invalid_argument("decomposition_radius: square matrix required");
  if (lambda.size() != pairwise_power.rows())
    throw std::invalid_argument("decomposition_radius: size mismatch");
  if (!lambda.allFinite() || !pairwise_power.allFinite())
    throw std::invalid_argument("decomposition_radius: non-finite input");
  if (lambda.minCoeff() < -1e-9 || std::abs(lambda.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("decomposition_radius: lambda outside the simplex");
  const double asym = (pairwise_power - pairwise_power.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * std::max(1.0, pairwise_power.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("decomposition_radius: asymmetric power matrix");
  return 0.5 * lambda.dot(pairwise_power * lambda);
}

namespace {

double max_power(const Matrix& points, const Vector& weights, const Vector& x) {
  double value = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    value = std::max(value, (points.row(i).transpose() - x).squaredNorm() - weights(i));
  return value;
}

}  // namespace

MebSolution meb_oracle(const Matrix& points, const Vector& weights) {
  if (points.rows() == 0) throw std::invalid_argument("meb_oracle: empty point set");
  if (points.rows() != weights.size())
    throw std::invalid_argument("meb_oracle: points/weights size mismatch");
  if (points.rows() > 8 || points.cols() > 4)
    throw std::invalid_argument("meb_oracle: instance too large (k <= 8, dim <= 4)");

  const Eigen::Index d = points.cols();
  const Eigen::Index k = points.rows();
  // The optimal center is a convex combination of the points, so the initial
  // bounding box always contains it.
  const Vector lo = points.colwise().minCoeff();
  const Vector hi = points.colwise().maxCoeff();

  // Dense grid pass over the bounding box seeds the incumbent.
  constexpr int kGrid = 9;
  Vector best_x = 0.5 * (lo + hi);
  double best_value = max_power(points, weights, best_x);
  {
    Vector x(d), step(d);
    for (Eigen::Index c = 0; c < d; ++c) step(c) = (hi(c) - lo(c)) / (kGrid - 1);
    std::vector<int> idx(d, 0);
    while (true) {
      for (Eigen::Index c = 0; c < d; ++c) x(c) = lo(c) + step(c) * idx[c];
      const double value = max_power(points, weights, x);
      if (value < best_value) {
        best_value = value;
        best_x = x;
      }
      Eigen::Index c = 0;
      while (c < d && ++idx[c] == kGrid) idx[c++] = 0;
      if (c == d) break;
    }
  }

  // Refinement by subgradient cuts. Axis-aligned box shrinking stalls on
  // valleys that are flat in one direction and kinked in another, so the
  // incumbent is polished with a central-cut ellipsoid instead: each step
  // evaluates the attaining quadratic's gradient, discards the half-space
  // where the objective can only grow, and the enclosing ellipsoid contracts
  // geometrically around the true center because the objective is convex.
  auto value_and_grad = [&](const Vector& at, Vector& grad) {
    double best = -std::numeric_limits<double>::infinity();
    Eigen::Index arg = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double v = (points.row(i).transpose() - at).squaredNorm() - weights(i);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    grad = 2.0 * (at - points.row(arg).transpose());
    return best;
  };

  if (d == 1) {
    // One variable: golden-section on the bracket, the objective is unimodal.
    double a = lo(0), b = hi(0);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
    Vector probe(1);
    probe(0) = c1;
    double f1 = max_power(points, weights, probe);
    probe(0) = c2;
    double f2 = max_power(points, weights, probe);
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
      if (f1 < f2) {
        b = c2;
        c2 = c1;
        f2 = f1;
        c1 = b - phi * (b - a);
        probe(0) = c1;
        f1 = max_power(points, weights, probe);
      } else {
        a = c1;
        c1 = c2;
        f1 = f2;
        c2 = a + phi * (b - a);
        probe(0) = c2;
        f2 = max_power(points, weights, probe);
      }
      const double better = std::min(f1, f2);
      if (better < best_value) {
        best_value = better;
        best_x(0) = f1 < f2 ? c1 : c2;
      }
    }
  } else {
    const double n = double(d);
    const double radius = 0.5 * (hi - lo).norm() + 1e-9;
    Vector x = 0.5 * (lo + hi);
    Vector grad(d);
    double value = value_and_grad(x, grad);
    if (value < best_value) {
      best_value = value;
      best_x = x;
    }
    Matrix shape = Matrix::Identity(d, d) * (radius * radius);
    for (int it = 0; it < 2500; ++it) {
      const double denom_sq = grad.dot(shape * grad);
      if (!(denom_sq > 0.0)) break;
      const Vector cut = shape * grad / std::sqrt(denom_sq);
      x -= cut / (n + 1.0);
      shape = (n * n / (n * n - 1.0)) * (shape - (2.0 / (n + 1.0)) * (cut * cut.transpose()));
      shape = 0.5 * (shape + shape.transpose()).eval();
      value = value_and_grad(x, grad);
      if (value < best_value) {
        best_value = value;
        best_x = x;
      }
    }
  }

  MebSolution sol;
  sol.radius_sq = best_value;
  sol.center = best_x;
  // The grid knows nothing about simplex coefficients; report the attaining
  // set as the support surrogate.
  double attain = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    attain = std::max(attain, (points.row(i).transpose() - best_x).squaredNorm() - weights(i));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double power = (points.row(i).transpose() - best_x).squaredNorm() - weights(i);
    if (power >= attain - 1e-7 * std::max(1.0, std::abs(attain)))
      sol.support.push_back(static_cast<int>(i));
  }
  sol.lambda = Vector::Zero(points.rows());
  return sol;
}

}  // namespace gkpd
