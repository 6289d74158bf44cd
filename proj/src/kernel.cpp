#include "gkpd/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gkpd {

namespace {

void validate_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

double kernel_from_sq(double sq_dist, const KernelConfig& config) {
  return std::exp(-sq_dist / (2.0 * config.sigma * config.sigma));
}

// Pairwise squared Euclidean distances between rows.
Matrix pairwise_sq(const Matrix& points) {
  const Eigen::Index n = points.rows();
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (points.row(i) - points.row(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

}  // namespace

void validate(const KernelConfig& config) {
  if (!(std::isfinite(config.sigma) && config.sigma > 0.0))
    throw std::invalid_argument("kernel bandwidth sigma must be finite and > 0");
}

double gaussian_kernel(const Vector& x, const Vector& y, const KernelConfig& config) {
  validate(config);
  if (x.size() != y.size())
    throw std::invalid_argument("kernel: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  return kernel_from_sq((x - y).squaredNorm(), config);
}

double kernel_distance_sq(const Vector& x, const Vector& y, const KernelConfig& config) {
  return 2.0 * (1.0 - gaussian_kernel(x, y, config));
}

double kappa(const Matrix& p, const Matrix& q, const KernelConfig& config) {
  validate(config);
  if (p.rows() == 0 || q.rows() == 0) throw std::invalid_argument("kappa: empty point set");
  if (p.cols() != q.cols()) throw std::invalid_argument("kappa: dimension mismatch");
  validate_finite(p, "kappa");
  validate_finite(q, "kappa");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < q.rows(); ++j)
      sum += kernel_from_sq((p.row(i) - q.row(j)).squaredNorm(), config);
  return sum / (static_cast<double>(p.rows()) * static_cast<double>(q.rows()));
}

GramMatrix::GramMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("GramMatrix: square matrix required");
  if (entries_.rows() == 0) throw std::invalid_argument("GramMatrix: empty matrix");
  validate_finite(entries_, "GramMatrix");
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if (std::abs(entries_(i, i) - 1.0) > 1e-9)
      throw std::invalid_argument("GramMatrix: diagonal entry off 1 at " + std::to_string(i));
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
      if (std::abs(entries_(i, j) - entries_(j, i)) > 1e-9)
        throw std::invalid_argument("GramMatrix: asymmetry at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      if (!(entries_(i, j) > 0.0 && entries_(i, j) <= 1.0 + 1e-12))
        throw std::invalid_argument("GramMatrix: entry outside (0, 1] at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
    }
  }
}

GramMatrix gram(const Matrix& points, const KernelConfig& config) {
  validate(config);
  validate_finite(points, "gram");
  const Eigen::Index n = points.rows();
  if (n == 0) throw std::invalid_argument("gram: empty point set");
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = kernel_from_sq((points.row(i) - points.row(j)).squaredNorm(), config);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return GramMatrix(std::move(k));
}

Vector kernel_weights(const Matrix& points, const KernelConfig& config) {
  validate(config);
  validate_finite(points, "kernel_weights");
  const Eigen::Index n = points.rows();
  if (n == 0) throw std::invalid_argument("kernel_weights: empty point set");
  Matrix dsq = pairwise_sq(points);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      dsq(i, j) = 2.0 * (1.0 - kernel_from_sq(dsq(i, j), config));
  const double half_grand_mean =
      dsq.sum() / (2.0 * static_cast<double>(n) * static_cast<double>(n));
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = -(dsq.row(i).mean() - half_grand_mean);
  return w;
}

WeightedPointCloud::WeightedPointCloud(Matrix points, KernelConfig config)
    : points_(std::move(points)), config_(config) {
  weights_ = kernel_weights(points_, config_);
}

double dist_to_measure_sq(const Vector& x, const Matrix& points, const KernelConfig& config) {
  Matrix xr(1, x.size());
  xr.row(0) = x.transpose();
  return kappa(points, points, config) + 1.0 - 2.0 * kappa(points, xr, config);
}

double power_distance(int i, int j, const WeightedPointCloud& cloud) {
  if (i < 0 || j < 0 || i >= cloud.size() || j >= cloud.size())
    throw std::invalid_argument("power_distance: vertex index out of range");
  const double dsq =
      (i == j) ? 0.0
               : 2.0 * (1.0 - kernel_from_sq(
                                  (cloud.points().row(i) - cloud.points().row(j)).squaredNorm(),
                                  cloud.config()));
  return dsq - cloud.weights()(i) - cloud.weights()(j);
}

Matrix power_distance_matrix(const WeightedPointCloud& cloud) {
  const int n = cloud.size();
  Matrix d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = -2.0 * cloud.weights()(i);
    for (int j = i + 1; j < n; ++j) {
      const double v = power_distance(i, j, cloud);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

Matrix power_distance_matrix(const Matrix& points, const Vector& weights) {
  if (points.rows() != weights.size())
    throw std::invalid_argument("power_distance_matrix: points/weights size mismatch");
  validate_finite(points, "power_distance_matrix");
  const Eigen::Index n = points.rows();
  Matrix d = pairwise_sq(points);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) -= weights(i) + weights(j);
  return d;
}

GkpdWitness gkpd_nearest(const Vector& x, const WeightedPointCloud& cloud) {
  if (x.size() != cloud.dim()) throw std::invalid_argument("gkpd_nearest: dimension mismatch");
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cloud.size(); ++i) {
    const double dsq = 2.0 * (1.0 - kernel_from_sq((x.transpose() - cloud.points().row(i)).squaredNorm(),
                                                   cloud.config()));
    const double v = dsq - cloud.weights()(i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return GkpdWitness{best, best_value};
}

double gkpd_eval(const Vector& x, const WeightedPointCloud& cloud) {
  return gkpd_nearest(x, cloud).value;
}

}  // namespace gkpd
