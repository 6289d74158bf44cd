#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gkpd/kernel.hpp"
#include "gkpd/types.hpp"

namespace gkpd {

// Random Fourier feature map for the Gaussian kernel. Rows of omega are the
// frequency vectors (t/2 of them); each maps x to a scaled (cos, sin) block,
// so the image dimension is t and E |f(x) - f(y)|^2 = D_K^2(x, y) exactly.
struct RffMap {
  Matrix omega;         // (t/2) x ambient_dim
  double sigma = 1.0;
  int t = 0;            // even, >= 2
  std::uint64_t seed = 0;
  double scale = 0.0;   // sqrt(2 / t)
};

// Frequencies drawn i.i.d. N(0, sigma^-2) per coordinate from the portable
// generator; byte-identical across runs at equal seed.
RffMap sample_rff(int ambient_dim, int t, const KernelConfig& config, std::uint64_t seed);

Vector apply_rff(const RffMap& map, const Vector& x);

// Row i is apply_rff(points.row(i)). threads > 1 splits rows across threads;
// the result does not depend on the split.
Matrix apply_rff_all(const RffMap& map, const Matrix& points, int threads = 1);

enum class DimensionMode { point_count, diameter };

struct TargetDimensionRequest {
  DimensionMode mode = DimensionMode::point_count;
  int n = 0;                   // point-count mode
  double diameter_ratio = 0.0; // diameter mode: r
  int ambient_dim = 0;         // diameter mode: D
  double epsilon = 0.0;
  double delta = 0.0;
  double constant = 8.0;       // C
};

// Target image dimension, rounded up to the next even integer, never below 2.
// point_count mode: C eps^-2 ln(n / delta); diameter mode:
// C eps^-2 D ln(r D / (eps delta)).
int target_dimension(const TargetDimensionRequest& request);

// Image-space weights by the same combinatorial formula as kernel_weights,
// with squared Euclidean distances in place of kernel distances.
Vector recompute_weights(const Matrix& images);

struct PairError {
  int i = 0;
  int j = 0;
  double rel_error = 0.0;
};

struct WeightError {
  int index = 0;
  double rel_error = 0.0;
};

// Per-pair relative error of squared image distance against D_K^2 and
// per-point relative error of recomputed weights against the originals.
// Pairs with D_K^2 = 0 and weights equal to 0 are excluded (identical points)
// and counted. fraction_within is measured against the stored epsilon.
struct DistortionReport {
  double epsilon = 0.0;
  double max_rel_error = 0.0;
  double fraction_within = 1.0;
  double max_weight_rel_error = 0.0;
  int excluded_pairs = 0;
  int excluded_weights = 0;
  std::vector<PairError> pair_errors;
  std::vector<WeightError> weight_errors;
};

DistortionReport distortion_report(const WeightedPointCloud& cloud, const RffMap& map,
                                   double epsilon);

// JSON (de)serialization. Round-tripping an RffMap reproduces apply_rff
// bit-for-bit: doubles are written in shortest round-trip form.
std::string rff_map_to_json(const RffMap& map);
RffMap rff_map_from_json(const std::string& text);
std::string distortion_report_to_json(const DistortionReport& report);

}  // namespace gkpd
