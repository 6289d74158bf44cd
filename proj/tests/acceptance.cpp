// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Each criterion carries its own runtime budget; exceeding it is a failure
// even when the checks themselves pass.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gkpd/compare.hpp"
#include "gkpd/filtration.hpp"
#include "gkpd/harness.hpp"
#include "gkpd/io.hpp"
#include "gkpd/kernel.hpp"
#include "gkpd/meb.hpp"
#include "gkpd/persistence.hpp"
#include "gkpd/pipeline.hpp"
#include "gkpd/rff.hpp"
#include "gkpd/rng.hpp"

using namespace gkpd;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

Matrix random_points(SeededRng& rng, int k, int dims, double spread) {
  Matrix pts(k, dims);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < dims; ++j) pts(i, j) = spread * rng.normal();
  return pts;
}

Vector random_weights(SeededRng& rng, int k) {
  Vector w(k);
  for (int i = 0; i < k; ++i) w(i) = -rng.uniform01();
  return w;
}

std::string fmt(double value) {
  std::ostringstream out;
  out.precision(3);
  out << value;
  return out.str();
}

// ---- criterion 1: radius decomposition at the optimal coefficients --------

Outcome ball_decomposition() {
  SeededRng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int k = rng.uniform_int(1, 8);
    const int dims = rng.uniform_int(1, 5);
    const Matrix pts = random_points(rng, k, dims, 1.5);
    const Vector w = random_weights(rng, k);
    const MebSolution sol = meb_coordinates(pts, w);
    const double decomposed = decomposition_radius(sol.lambda, power_distance_matrix(pts, w));
    const double rel =
        std::abs(sol.radius_sq - decomposed) / std::max(1.0, std::abs(sol.radius_sq));
    worst = std::max(worst, rel);
  }
  return {worst <= 1e-8, "500 instances, max rel gap " + fmt(worst)};
}

// ---- criterion 2: solver against the grid-search oracle -------------------

Outcome solver_vs_oracle() {
  SeededRng rng(102);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = rng.uniform_int(1, 6);
    const int dims = rng.uniform_int(1, 3);
    const Matrix pts = random_points(rng, k, dims, 1.2);
    const Vector w = random_weights(rng, k);
    const double solved = std::sqrt(std::max(0.0, meb_coordinates(pts, w).radius_sq));
    const double reference = std::sqrt(std::max(0.0, meb_oracle(pts, w).radius_sq));
    const double rel = std::abs(solved - reference) / std::max(reference, 1e-6);
    worst = std::max(worst, rel);
  }
  return {worst <= 1e-4, "100 instances, max relative radius gap " + fmt(worst)};
}

// ---- criterion 3: objective identity at arbitrary simplex points ----------

Outcome variance_identity() {
  SeededRng rng(103);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = rng.uniform_int(1, 8);
    const int dims = rng.uniform_int(1, 5);
    const Matrix pts = random_points(rng, k, dims, 1.5);
    const Vector w = random_weights(rng, k);

    Vector lambda(k);
    for (int i = 0; i < k; ++i)
      lambda(i) = (rng.uniform01() < 0.25 && k > 1) ? 0.0 : rng.uniform01();
    if (lambda.sum() == 0.0) lambda(0) = 1.0;
    lambda /= lambda.sum();

    const Vector center = pts.transpose() * lambda;
    double objective = -center.squaredNorm();
    for (int i = 0; i < k; ++i) objective += lambda(i) * (pts.row(i).squaredNorm() - w(i));
    const double decomposed = decomposition_radius(lambda, power_distance_matrix(pts, w));
    const double gap = std::abs(objective - decomposed) / std::max(1.0, std::abs(objective));
    worst = std::max(worst, gap);
  }
  return {worst <= 1e-10, "1000 instances, max rel gap " + fmt(worst)};
}

// ---- criterion 4: feature map unbiasedness --------------------------------

Outcome rff_unbiased() {
  const KernelConfig cfg{0.9};
  SeededRng rng(104);
  int inside = 0;
  double worst_sigmas = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const int dims = rng.uniform_int(1, 6);
    const Matrix xy = random_points(rng, 2, dims, 1.0);
    const Vector x = xy.row(0).transpose();
    const Vector y = xy.row(1).transpose();
    const double expected = kernel_distance_sq(x, y, cfg);

    constexpr int kSeeds = 200;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
      const RffMap map = sample_rff(dims, 64, cfg, 40000 + 1000 * pair + s);
      const double est = (apply_rff(map, x) - apply_rff(map, y)).squaredNorm();
      sum += est;
      sum_sq += est * est;
    }
    const double mean = sum / kSeeds;
    const double variance = (sum_sq - kSeeds * mean * mean) / (kSeeds - 1);
    const double stderr_mean = std::sqrt(std::max(variance, 1e-300) / kSeeds);
    const double sigmas = std::abs(mean - expected) / stderr_mean;
    worst_sigmas = std::max(worst_sigmas, sigmas);
    if (sigmas <= 3.0) ++inside;
  }
  return {inside == 20, "20 pairs x 200 seeds, worst deviation " + fmt(worst_sigmas) +
                            " standard errors"};
}

// ---- criteria 5-7 share one cloud and one batch of maps -------------------

struct MapTrial {
  RffMap map;
  DistortionReport report;
  bool pairwise_pass = false;
};

struct DistortionBatch {
  Matrix points;
  std::optional<WeightedPointCloud> cloud;
  int t = 0;
  std::vector<MapTrial> trials;
};

const DistortionBatch& distortion_batch() {
  static const DistortionBatch batch = [] {
    DistortionBatch b;
    DatasetSpec spec;
    spec.kind = DatasetKind::gaussian_clusters;
    spec.n = 100;
    spec.ambient_dim = 20;
    spec.noise = 1.0;
    spec.seed = 42;
    b.points = generate(spec);
    const KernelConfig cfg{1.0};
    b.cloud.emplace(b.points, cfg);

    TargetDimensionRequest request;
    request.mode = DimensionMode::point_count;
    request.n = 100;
    request.epsilon = 0.3;
    request.delta = 0.1;
    request.constant = 8.0;
    b.t = target_dimension(request);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      MapTrial trial;
      trial.map = sample_rff(20, b.t, cfg, seed);
      trial.report = distortion_report(*b.cloud, trial.map, 0.3);
      trial.pairwise_pass = trial.report.max_rel_error < 0.3;
      b.trials.push_back(std::move(trial));
    }
    return b;
  }();
  return batch;
}

Outcome distortion_statistics() {
  const DistortionBatch& batch = distortion_batch();
  if (batch.t != 616)
    return {false, "dimension rule produced t=" + std::to_string(batch.t) + ", expected 616"};
  int passing = 0;
  for (const auto& trial : batch.trials)
    if (trial.pairwise_pass) ++passing;
  return {passing >= 18,
          "t=616, " + std::to_string(passing) + "/20 maps under the 0.3 pairwise bound"};
}

Outcome weight_inheritance() {
  const DistortionBatch& batch = distortion_batch();
  const double eps = 0.3;
  int checked_maps = 0;
  int exceptions = 0;
  const Vector& w = batch.cloud->weights();
  for (const auto& trial : batch.trials) {
    if (!trial.pairwise_pass) continue;
    ++checked_maps;
    const Vector reduced = recompute_weights(apply_rff_all(trial.map, batch.points));
    for (int i = 0; i < w.size(); ++i)
      if (std::abs(reduced(i) - w(i)) > eps * std::abs(w(i))) ++exceptions;
  }
  return {checked_maps > 0 && exceptions == 0,
          std::to_string(checked_maps) + " passing maps, " + std::to_string(exceptions) +
              " weight exceptions"};
}

Outcome simplex_distortion() {
  const DistortionBatch& batch = distortion_batch();
  const double eps = 0.3;
  const KernelConfig cfg{1.0};
  const Matrix sub = batch.points.topRows(12);
  const WeightedPointCloud sub_cloud(sub, cfg);
  const FilteredComplex kernel_side = build_filtration_gkpd(sub_cloud, 2);
  std::map<std::vector<int>, double> kernel_values;
  for (const auto& s : kernel_side.simplices) kernel_values.emplace(s.vertices, s.value);

  int certified = 0;
  int violations = 0;
  double worst_ratio = 1.0;
  for (const auto& trial : batch.trials) {
    const DistortionReport sub_report = distortion_report(sub_cloud, trial.map, eps);
    if (!(sub_report.max_rel_error < eps && sub_report.max_weight_rel_error < eps)) continue;
    ++certified;
    const Matrix embedded = apply_rff_all(trial.map, sub);
    const FilteredComplex image_side =
        build_filtration_euclidean(embedded, recompute_weights(embedded), 2);
    if (image_side.simplices.size() != kernel_side.simplices.size()) {
      ++violations;
      continue;
    }
    for (const auto& s : image_side.simplices) {
      const double reference = kernel_values.at(s.vertices);
      if (s.value < (1.0 - eps) * reference - 1e-12 ||
          s.value > (1.0 + eps) * reference + 1e-12) {
        ++violations;
        continue;
      }
      if (reference > 1e-12) {
        const double ratio = s.value / reference;
        worst_ratio = std::max(worst_ratio, std::max(ratio, 1.0 / ratio));
      }
    }
  }
  return {certified >= 10 && violations == 0,
          std::to_string(certified) + " certified maps, " + std::to_string(violations) +
              " simplex violations, worst value ratio " + fmt(worst_ratio)};
}

// ---- criterion 8: end-to-end certification rate ---------------------------

Outcome end_to_end() {
  namespace fs = std::filesystem;
  std::string root = (fs::temp_directory_path() / "gkpd_accept_XXXXXX").string();
  if (mkdtemp(root.data()) == nullptr) return {false, "mkdtemp failed"};

  int passing = 0;
  int errors = 0;
  std::string first_error;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    DatasetSpec spec;
    spec.kind = DatasetKind::embedded_circle_highD;
    spec.n = 40;
    spec.ambient_dim = 50;
    spec.noise = 0.0;
    spec.outliers = 5;
    spec.seed = split_seed(seed, "dataset");

    const std::string run_dir = root + "/run" + std::to_string(seed);
    const std::string input = run_dir + "_points.csv";
    PipelineConfig config;
    config.input_path = input;
    config.output_dir = run_dir;
    config.sigma = 1.0;
    config.epsilon = 0.25;
    config.delta = 0.1;
    config.d_max = 2;
    config.seed = seed;
    try {
      write_csv_matrix(input, generate(spec));
      const PipelineResult result = run_pipeline(config);
      if (result.exit_code == 0) ++passing;
      if (result.exit_code == 1) ++errors;
    } catch (const std::exception& e) {
      ++errors;
      if (first_error.empty()) first_error = e.what();
    }
  }
  std::error_code ec;
  fs::remove_all(root, ec);

  std::string detail = std::to_string(passing) + "/20 seeds certified at epsilon 0.25";
  if (errors > 0) detail += ", " + std::to_string(errors) + " errors (" + first_error + ")";
  return {passing >= 18 && errors == 0, detail};
}

// ---- criterion 9: reduction against hand values and rank oracle -----------

Outcome persistence_correctness() {
  Matrix tri(3, 2);
  tri << 0.0, 0.0, 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0;
  const FilteredComplex complex = build_filtration_euclidean(tri, Vector::Zero(3), 2);
  const PersistenceDiagram diagram = compute_persistence(complex);

  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  bool exact = diagram.points.size() == 4 && diagram.truncated.empty();
  if (exact) {
    exact = near(diagram.points[0].birth, 0.0) && near(diagram.points[0].death, 0.25) &&
            near(diagram.points[1].birth, 0.0) && near(diagram.points[1].death, 0.25) &&
            near(diagram.points[2].birth, 0.0) && std::isinf(diagram.points[2].death) &&
            diagram.points[3].degree == 1 && near(diagram.points[3].birth, 0.25) &&
            near(diagram.points[3].death, 1.0 / 3.0);
  }
  if (!exact) return {false, "equilateral diagram differs from the hand reduction"};

  const KernelConfig cfg{1.0};
  SeededRng rng(109);
  long checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 7);
    const Matrix pts = random_points(rng, n, 2, 1.3);
    const WeightedPointCloud cloud(pts, cfg);
    const FilteredComplex random_complex = build_filtration_gkpd(cloud, 2);
    const PersistenceDiagram bars = compute_persistence(random_complex, true);
    for (const auto& s : random_complex.simplices) {
      const std::vector<long> betti = betti_oracle(random_complex, s.value);
      for (int degree = 0; degree <= 2; ++degree) {
        if (alive_bars(bars, degree, s.value) != betti[static_cast<std::size_t>(degree)])
          return {false, "bar count disagrees with the rank oracle at value " + fmt(s.value)};
        ++checks;
      }
    }
  }
  return {true, "hand diagram exact, " + std::to_string(checks) + " oracle comparisons"};
}

// ---- criterion 10: evaluation sandwich ------------------------------------

Outcome sandwich_bound() {
  SeededRng rng(110);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const KernelConfig cfg{0.6 + rng.uniform01()};
    const int n = rng.uniform_int(2, 9);
    const int dims = rng.uniform_int(1, 4);
    const Matrix pts = random_points(rng, n, dims, 1.5);
    const WeightedPointCloud cloud(pts, cfg);

    Vector x(dims);
    const double spread = rng.uniform01() < 0.2 ? 4.5 : 1.5;
    for (int j = 0; j < dims; ++j) x(j) = spread * rng.normal();

    const double d_sq = dist_to_measure_sq(x, pts, cfg);
    const double f_sq = gkpd_eval(x, cloud);
    const GkpdWitness witness = gkpd_nearest(x, cloud);
    const double hop = kernel_distance_sq(pts.row(witness.index).transpose(), x, cfg);
    if (!(d_sq <= 2.0 * f_sq + 1e-12)) ++violations;
    if (!(2.0 * f_sq <= 4.0 * d_sq + 6.0 * hop + 1e-12)) ++violations;
  }
  return {violations == 0, "1000 instances, " + std::to_string(violations) + " violations"};
}

struct Criterion {
  int id;
  const char* label;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "ball radius decomposition", 10.0, ball_decomposition},
      {2, "solver matches grid oracle", 60.0, solver_vs_oracle},
      {3, "simplex objective identity", 5.0, variance_identity},
      {4, "feature map unbiasedness", 30.0, rff_unbiased},
      {5, "pairwise distortion rate", 120.0, distortion_statistics},
      {6, "weight distortion inheritance", 120.0, weight_inheritance},
      {7, "simplex value distortion", 120.0, simplex_distortion},
      {8, "end-to-end certification rate", 300.0, end_to_end},
      {9, "persistence correctness", 30.0, persistence_correctness},
      {10, "evaluation sandwich", 5.0, sandwich_bound},
  };

  bool all_ok = true;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.limit_seconds) {
      outcome.ok = false;
      outcome.detail += ", over the " + fmt(criterion.limit_seconds) + " s budget";
    }
    all_ok = all_ok && outcome.ok;
    std::cout << (outcome.ok ? "PASS" : "FAIL") << " criterion " << criterion.id << ": "
              << criterion.label << " (" << outcome.detail << ", " << fmt(elapsed) << " s)\n";
  }
  std::cout << (all_ok ? "acceptance: all criteria pass" : "acceptance: FAILURES above") << "\n";
  return all_ok ? 0 : 1;
}
