#include "gkpd/rff.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "gkpd/io.hpp"
#include "gkpd/parallel.hpp"
#include "gkpd/rng.hpp"

namespace gkpd {

namespace {

void validate_map(const RffMap& map) {
  if (map.t < 2 || map.t % 2 != 0)
    throw std::invalid_argument("rff map: t must be even and >= 2");
  if (map.omega.rows() != map.t / 2)
    throw std::invalid_argument("rff map: omega must have t/2 rows");
  if (map.omega.cols() < 1) throw std::invalid_argument("rff map: empty ambient dimension");
  if (!(std::isfinite(map.sigma) && map.sigma > 0.0))
    throw std::invalid_argument("rff map: sigma must be finite and > 0");
  if (std::abs(map.scale - std::sqrt(2.0 / map.t)) > 1e-12)
    throw std::invalid_argument("rff map: scale inconsistent with t");
  if (!map.omega.allFinite()) throw std::invalid_argument("rff map: non-finite frequency");
}

}  // namespace

RffMap sample_rff(int ambient_dim, int t, const KernelConfig& config, std::uint64_t seed) {
  validate(config);
  if (ambient_dim < 1) throw std::invalid_argument("sample_rff: ambient_dim must be >= 1");
  if (t < 2 || t % 2 != 0) throw std::invalid_argument("sample_rff: t must be even and >= 2");

  RffMap map;
  map.sigma = config.sigma;
  map.t = t;
  map.seed = seed;
  map.scale = std::sqrt(2.0 / t);
  map.omega.resize(t / 2, ambient_dim);
  // Row-major fill order is part of the reproducibility contract.
  SeededRng rng(seed);
  const double inv_sigma = 1.0 / config.sigma;
  for (Eigen::Index r = 0; r < map.omega.rows(); ++r)
    for (Eigen::Index c = 0; c < map.omega.cols(); ++c) map.omega(r, c) = rng.normal() * inv_sigma;
  return map;
}

Vector apply_rff(const RffMap& map, const Vector& x) {
  validate_map(map);
  if (x.size() != map.omega.cols())
    throw std::invalid_argument("apply_rff: dimension mismatch");
  const Vector theta = map.omega * x;
  Vector out(map.t);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    out(2 * i) = map.scale * std::cos(theta(i));
    out(2 * i + 1) = map.scale * std::sin(theta(i));
  }
  return out;
}

Matrix apply_rff_all(const RffMap& map, const Matrix& points, int threads) {
  validate_map(map);
  if (points.cols() != map.omega.cols())
    throw std::invalid_argument("apply_rff_all: dimension mismatch");
  Matrix images(points.rows(), map.t);
  parallel_for(static_cast<int>(points.rows()), threads, [&](int i) {
    images.row(i) = apply_rff(map, points.row(i).transpose()).transpose();
  });
  return images;
}

int target_dimension(const TargetDimensionRequest& request) {
  if (!(request.epsilon > 0.0 && request.epsilon <= 1.0))
    throw std::invalid_argument("target_dimension: epsilon must be in (0, 1]");
  if (!(request.delta > 0.0 && request.delta < 1.0))
    throw std::invalid_argument("target_dimension: delta must be in (0, 1)");
  if (!(request.constant > 0.0))
    throw std::invalid_argument("target_dimension: constant must be > 0");

  double raw = 0.0;
  const double eps_sq = request.epsilon * request.epsilon;
  if (request.mode == DimensionMode::point_count) {
    if (request.n < 1) throw std::invalid_argument("target_dimension: n must be >= 1");
    raw = request.constant / eps_sq * std::log(request.n / request.delta);
  } else {
    if (!(request.diameter_ratio > 0.0))
      throw std::invalid_argument("target_dimension: diameter_ratio must be > 0");
    if (request.ambient_dim < 1)
      throw std::invalid_argument("target_dimension: ambient_dim must be >= 1");
    raw = request.constant / eps_sq * request.ambient_dim *
          std::log(request.diameter_ratio * request.ambient_dim /
                   (request.epsilon * request.delta));
  }
  long long t = static_cast<long long>(std::ceil(raw));
  if (t < 2) t = 2;
  if (t % 2 != 0) ++t;
  if (t > (1LL << 30)) throw std::invalid_argument("target_dimension: t overflows sane bounds");
  return static_cast<int>(t);
}

Vector recompute_weights(const Matrix& images) {
  const Eigen::Index n = images.rows();
  if (n == 0) throw std::invalid_argument("recompute_weights: empty image set");
  if (!images.allFinite()) throw std::invalid_argument("recompute_weights: non-finite image");
  Matrix dsq(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dsq(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (images.row(i) - images.row(j)).squaredNorm();
      dsq(i, j) = v;
      dsq(j, i) = v;
    }
  }
  const double half_grand_mean =
      dsq.sum() / (2.0 * static_cast<double>(n) * static_cast<double>(n));
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = -(dsq.row(i).mean() - half_grand_mean);
  return w;
}

DistortionReport distortion_report(const WeightedPointCloud& cloud, const RffMap& map,
                                   double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("distortion_report: epsilon must be > 0");
  const Matrix images = apply_rff_all(map, cloud.points());
  const Vector image_weights = recompute_weights(images);

  DistortionReport report;
  report.epsilon = epsilon;

  int within = 0;
  int included = 0;
  for (int i = 0; i < cloud.size(); ++i) {
    for (int j = i + 1; j < cloud.size(); ++j) {
      const double ref =
          kernel_distance_sq(cloud.points().row(i).transpose(), cloud.points().row(j).transpose(),
                             cloud.config());
      if (ref == 0.0) {
        ++report.excluded_pairs;
        continue;
      }
      const double img = (images.row(i) - images.row(j)).squaredNorm();
      const double rel = std::abs(img - ref) / ref;
      report.pair_errors.push_back(PairError{i, j, rel});
      report.max_rel_error = std::max(report.max_rel_error, rel);
      ++included;
      if (rel <= epsilon) ++within;
    }
  }
  report.fraction_within = included > 0 ? static_cast<double>(within) / included : 1.0;

  for (int i = 0; i < cloud.size(); ++i) {
    const double ref = cloud.weights()(i);
    if (ref == 0.0) {
      ++report.excluded_weights;
      continue;
    }
    const double rel = std::abs(image_weights(i) - ref) / std::abs(ref);
    report.weight_errors.push_back(WeightError{i, rel});
    report.max_weight_rel_error = std::max(report.max_weight_rel_error, rel);
  }
  return report;
}

std::string rff_map_to_json(const RffMap& map) {
  validate_map(map);
  nlohmann::json j;
  j["sigma"] = map.sigma;
  j["t"] = map.t;
  j["seed"] = map.seed;
  j["scale"] = map.scale;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < map.omega.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < map.omega.cols(); ++c) row.push_back(map.omega(r, c));
    rows.push_back(std::move(row));
  }
  j["omega"] = std::move(rows);
  return j.dump(2) + "\n";
}

RffMap rff_map_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("rff map json: ") + e.what());
  }
  RffMap map;
  try {
    map.sigma = j.at("sigma").get<double>();
    map.t = j.at("t").get<int>();
    map.seed = j.at("seed").get<std::uint64_t>();
    map.scale = j.at("scale").get<double>();
    const auto& rows = j.at("omega");
    if (!rows.is_array() || rows.empty())
      throw std::invalid_argument("rff map json: omega must be a non-empty array");
    const std::size_t cols = rows.front().size();
    map.omega.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw std::invalid_argument("rff map json: ragged omega");
      for (std::size_t c = 0; c < cols; ++c)
        map.omega(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            rows[r][c].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("rff map json: ") + e.what());
  }
  validate_map(map);
  return map;
}

std::string distortion_report_to_json(const DistortionReport& report) {
  nlohmann::json j;
  j["epsilon"] = report.epsilon;
  j["max_rel_error"] = report.max_rel_error;
  j["fraction_within"] = report.fraction_within;
  j["max_weight_rel_error"] = report.max_weight_rel_error;
  j["excluded_pairs"] = report.excluded_pairs;
  j["excluded_weights"] = report.excluded_weights;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& e : report.pair_errors) pairs.push_back({e.i, e.j, e.rel_error});
  j["pair_errors"] = std::move(pairs);
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& e : report.weight_errors) weights.push_back({e.index, e.rel_error});
  j["weight_errors"] = std::move(weights);
  return j.dump(2) + "\n";
}

}  // namespace gkpd
