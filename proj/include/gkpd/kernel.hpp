#pragma once

#include "gkpd/types.hpp"

namespace gkpd {

struct KernelConfig {
  double sigma = 1.0;
};

// Throws std::invalid_argument unless sigma is finite and > 0.
void validate(const KernelConfig& config);

// K(x, y) = exp(-|x - y|^2 / (2 sigma^2)), in (0, 1], symmetric.
double gaussian_kernel(const Vector& x, const Vector& y, const KernelConfig& config);

// D_K^2(x, y) = 2 (1 - K(x, y)), in [0, 2).
double kernel_distance_sq(const Vector& x, const Vector& y, const KernelConfig& config);

// Mean kernel value between the empirical measures on the rows of p and q.
double kappa(const Matrix& p, const Matrix& q, const KernelConfig& config);

// Entries K(p_i, p_j); symmetric with unit diagonal. Rejects (via the
// GramMatrix constructor) anything asymmetric or out of (0, 1].
class GramMatrix {
 public:
  explicit GramMatrix(Matrix entries);
  const Matrix& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.rows()); }

 private:
  Matrix entries_;
};

GramMatrix gram(const Matrix& points, const KernelConfig& config);

// w(p_i) = -(mean_j D_K^2(p_i, p_j) - grand_mean(D_K^2) / 2); every entry <= 0
// because it is a negated squared kernel distance to the empirical measure.
Vector kernel_weights(const Matrix& points, const KernelConfig& config);

// Points with their kernel-distance weights; the constructor is the only place
// weights are computed, so cloud.weights() always matches kernel_weights().
class WeightedPointCloud {
 public:
  WeightedPointCloud(Matrix points, KernelConfig config);
  const Matrix& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  const KernelConfig& config() const { return config_; }
  int size() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }

 private:
  Matrix points_;
  Vector weights_;
  KernelConfig config_;
};

// Squared kernel distance from x to the uniform empirical measure on the rows
// of points: kappa(P, P) + 1 - 2 kappa(P, {x}). Deliberately written in kappa
// terms so it is an independent check on kernel_weights.
double dist_to_measure_sq(const Vector& x, const Matrix& points, const KernelConfig& config);

// D(p_i^, p_j^) = D_K^2(p_i, p_j) - w_i - w_j; diagonal is -2 w_i.
double power_distance(int i, int j, const WeightedPointCloud& cloud);

// Full pairwise power-distance matrix of the cloud.
Matrix power_distance_matrix(const WeightedPointCloud& cloud);

// Same construction for explicit coordinates under squared Euclidean distance.
Matrix power_distance_matrix(const Matrix& points, const Vector& weights);

struct GkpdWitness {
  int index;     // argmin point
  double value;  // min_p (D_K^2(x, p) - w(p))
};

GkpdWitness gkpd_nearest(const Vector& x, const WeightedPointCloud& cloud);

// Squared Gaussian kernel power distance from x to the cloud; nonnegative
// because the weights are nonpositive.
double gkpd_eval(const Vector& x, const WeightedPointCloud& cloud);

}  // namespace gkpd
