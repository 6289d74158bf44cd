#include "gkpd/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkpd/filtration.hpp"
#include "gkpd/io.hpp"
#include "gkpd/persistence.hpp"
#include "gkpd/rng.hpp"

namespace gkpd {

namespace {

constexpr const char* kArtifactNames[] = {
    "weights.csv",           "rff_map.json",
    "embedded.csv",          "weights_reduced.csv",
    "complex_gkpd.txt",      "complex_euclidean.txt",
    "diagram_gkpd.json",     "diagram_gkpd.csv",
    "diagram_euclidean.json", "diagram_euclidean.csv",
    "distortion_report.json", "certificate.json",
    "run_log.txt",
};

void validate_config(const PipelineConfig& config) {
  if (config.input_path.empty()) throw std::invalid_argument("pipeline: input path is required");
  if (config.output_dir.empty())
    throw std::invalid_argument("pipeline: output directory is required");
  if (!(std::isfinite(config.sigma) && config.sigma > 0.0))
    throw std::invalid_argument("pipeline: sigma must be finite and > 0");
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw std::invalid_argument("pipeline: epsilon must lie in (0, 1)");
  if (!(config.delta > 0.0 && config.delta < 1.0))
    throw std::invalid_argument("pipeline: delta must lie in (0, 1)");
  if (!(config.constant > 0.0)) throw std::invalid_argument("pipeline: constant must be > 0");
  if (config.d_max < 1) throw std::invalid_argument("pipeline: d_max must be >= 1");
  if (config.t_override && (*config.t_override < 2 || *config.t_override % 2 != 0))
    throw std::invalid_argument("pipeline: t override must be an even integer >= 2");
  if (config.mode == DimensionMode::diameter && !config.diameter_ratio)
    throw std::invalid_argument("pipeline: diameter mode needs a diameter ratio");
  if (!(config.slack >= 0.0)) throw std::invalid_argument("pipeline: slack must be >= 0");
  if (config.threads < 1) throw std::invalid_argument("pipeline: threads must be >= 1");
  if (config.value_cap && !std::isfinite(*config.value_cap))
    throw std::invalid_argument("pipeline: value cap must be finite");
}

std::string stream_to_string(const FilteredComplex& complex) {
  std::ostringstream out;
  write_complex(out, complex);
  return out.str();
}

std::string diagram_csv_string(const PersistenceDiagram& diagram) {
  std::ostringstream out;
  write_diagram_csv(out, diagram);
  return out.str();
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  validate_config(config);

  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  std::vector<std::string> paths;
  for (const char* name : kArtifactNames) paths.push_back((fs::path(config.output_dir) / name).string());
  // Check every target before writing the first one, so a refused run leaves
  // the directory untouched.
  for (const auto& path : paths) refuse_existing(path, config.force);
  auto artifact = [&](const char* name) { return (fs::path(config.output_dir) / name).string(); };

  const Matrix points = read_csv_matrix(config.input_path);
  const int n = static_cast<int>(points.rows());
  const int ambient_dim = static_cast<int>(points.cols());

  const KernelConfig kernel_config{config.sigma};
  const WeightedPointCloud cloud(points, kernel_config);
  write_csv_vector(artifact("weights.csv"), cloud.weights());

  int t = 0;
  if (config.t_override) {
    t = *config.t_override;
  } else {
    TargetDimensionRequest request;
    request.mode = config.mode;
    request.n = n;
    request.diameter_ratio = config.diameter_ratio.value_or(0.0);
    request.ambient_dim = ambient_dim;
    request.epsilon = config.epsilon;
    request.delta = config.delta;
    request.constant = config.constant;
    t = target_dimension(request);
  }

  const std::uint64_t rff_seed = split_seed(config.seed, "rff");
  const RffMap map = sample_rff(ambient_dim, t, kernel_config, rff_seed);
  write_text_file(artifact("rff_map.json"), rff_map_to_json(map));

  const Matrix embedded = apply_rff_all(map, points, config.threads);
  write_csv_matrix(artifact("embedded.csv"), embedded);

  const Vector weights_reduced = recompute_weights(embedded);
  write_csv_vector(artifact("weights_reduced.csv"), weights_reduced);

  const DistortionReport report = distortion_report(cloud, map, config.epsilon);
  write_text_file(artifact("distortion_report.json"), distortion_report_to_json(report));

  const FilteredComplex complex_gkpd =
      build_filtration_gkpd(cloud, config.d_max, config.value_cap, config.threads);
  write_text_file(artifact("complex_gkpd.txt"), stream_to_string(complex_gkpd));

  const FilteredComplex complex_euclidean = build_filtration_euclidean(
      embedded, weights_reduced, config.d_max, config.value_cap, config.threads);
  write_text_file(artifact("complex_euclidean.txt"), stream_to_string(complex_euclidean));

  const PersistenceDiagram diagram_gkpd = compute_persistence(complex_gkpd);
  write_text_file(artifact("diagram_gkpd.json"), diagram_to_json(diagram_gkpd));
  write_text_file(artifact("diagram_gkpd.csv"), diagram_csv_string(diagram_gkpd));

  const PersistenceDiagram diagram_euclidean = compute_persistence(complex_euclidean);
  write_text_file(artifact("diagram_euclidean.json"), diagram_to_json(diagram_euclidean));
  write_text_file(artifact("diagram_euclidean.csv"), diagram_csv_string(diagram_euclidean));

  const InterleavingCertificate certificate =
      certify_interleaving(diagram_gkpd, diagram_euclidean, config.epsilon, config.slack);
  write_text_file(artifact("certificate.json"), certificate_to_json(certificate));

  std::ostringstream log;
  log << "input: " << config.input_path << "\n";
  log << "points: n=" << n << " ambient_dim=" << ambient_dim << "\n";
  log << "kernel: sigma=" << format_double(config.sigma) << "\n";
  log << "seed: master=" << config.seed << " rff=" << rff_seed << "\n";
  log << "dimension: mode="
      << (config.mode == DimensionMode::point_count ? "point_count" : "diameter")
      << " C=" << format_double(config.constant) << " epsilon=" << format_double(config.epsilon)
      << " delta=" << format_double(config.delta);
  if (config.mode == DimensionMode::diameter)
    log << " r=" << format_double(*config.diameter_ratio) << " D=" << ambient_dim;
  else
    log << " n=" << n;
  log << " -> t=" << t << (config.t_override ? " (override)" : "") << "\n";
  log << "filtration: d_max=" << config.d_max;
  if (config.value_cap) log << " value_cap=" << format_double(*config.value_cap);
  log << " simplices_gkpd=" << complex_gkpd.simplices.size()
      << " simplices_euclidean=" << complex_euclidean.simplices.size() << "\n";
  log << "distortion: max_rel_error=" << format_double(report.max_rel_error)
      << " fraction_within=" << format_double(report.fraction_within)
      << " max_weight_rel_error=" << format_double(report.max_weight_rel_error) << "\n";
  for (const auto& degree : certificate.degrees)
    log << "certificate: degree=" << degree.degree << " factor=" << format_double(degree.factor)
        << "\n";
  log << "certificate: factor_measured=" << format_double(certificate.factor_measured)
      << " factor_bound=" << format_double(certificate.factor_bound)
      << " pass=" << (certificate.pass ? "true" : "false") << "\n";
  write_text_file(artifact("run_log.txt"), log.str());

  PipelineResult result;
  result.exit_code = certificate.pass ? 0 : 2;
  result.t = t;
  result.certificate = certificate;
  return result;
}

}  // namespace gkpd
