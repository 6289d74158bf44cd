#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gkpd/compare.hpp"
#include "gkpd/rff.hpp"

namespace gkpd {

// Everything one end-to-end run needs. epsilon, delta and constant feed the
// image-dimension rule unless t_override pins t directly; the master seed is
// split per component, so one integer replays the whole run.
struct PipelineConfig {
  std::string input_path;
  std::string output_dir;
  double sigma = 1.0;
  double epsilon = 0.3;
  double delta = 0.1;
  double constant = 8.0;
  int d_max = 2;
  std::optional<double> value_cap;
  std::optional<int> t_override;  // even, >= 2
  DimensionMode mode = DimensionMode::point_count;
  std::optional<double> diameter_ratio;  // required in diameter mode
  std::uint64_t seed = 0;
  double slack = 0.05;
  int threads = 1;
  bool force = false;
};

struct PipelineResult {
  int exit_code = 1;  // 0 certificate pass, 2 certificate fail
  int t = 0;
  InterleavingCertificate certificate;
};

// Full chain: kernel weights, feature map, embedding, recomputed weights,
// both filtrations, both diagrams, distortion report, interleaving
// certificate. Writes the fixed artifact set into output_dir (see README) and
// refuses to overwrite any existing artifact unless force is set. Config and
// I/O problems throw; a failing certificate is exit_code 2, not an exception.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace gkpd
