// gkpd: weighted Cech persistence for point clouds under the Gaussian kernel
// power distance, with a random Fourier feature reduction and an interleaving
// certificate comparing the two resulting diagrams.
//
// Subcommands mirror the library modules ("gkpd <subcommand> --help" lists
// flags); the pipeline subcommand chains them and running the chain by hand on
// the intermediate files is guaranteed to reproduce its artifacts byte for
// byte. Exit codes: 0 success / certificate pass, 2 certificate fail, 1 any
// other failure.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gkpd/filtration.hpp"
#include "gkpd/harness.hpp"
#include "gkpd/io.hpp"
#include "gkpd/kernel.hpp"
#include "gkpd/persistence.hpp"
#include "gkpd/pipeline.hpp"
#include "gkpd/rff.hpp"
#include "gkpd/rng.hpp"

namespace {

using namespace gkpd;

DimensionMode parse_mode(const std::string& name) {
  if (name == "point_count") return DimensionMode::point_count;
  if (name == "diameter") return DimensionMode::diameter;
  throw std::invalid_argument("mode must be point_count or diameter, got '" + name + "'");
}

std::string join(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

struct GenerateOpts {
  std::string kind = "circle_with_outliers";
  int n = 0;
  int dim = 2;
  double noise = 0.0;
  int outliers = 0;
  std::uint64_t seed = 0;
  std::string output;
  bool force = false;
};

int cmd_generate(const GenerateOpts& opts) {
  DatasetSpec spec;
  spec.kind = dataset_kind_from_string(opts.kind);
  spec.n = opts.n;
  spec.ambient_dim = opts.dim;
  spec.noise = opts.noise;
  spec.outliers = opts.outliers;
  spec.seed = split_seed(opts.seed, "dataset");
  const Matrix points = generate(spec);
  refuse_existing(opts.output, opts.force);
  write_csv_matrix(opts.output, points);
  std::cout << "wrote " << points.rows() << " points to " << opts.output << "\n";
  return 0;
}

struct WeightsOpts {
  std::string input;
  std::string output;
  double sigma = 1.0;
  bool force = false;
};

int cmd_weights(const WeightsOpts& opts) {
  const Matrix points = read_csv_matrix(opts.input);
  const WeightedPointCloud cloud(points, KernelConfig{opts.sigma});
  refuse_existing(opts.output, opts.force);
  write_csv_vector(opts.output, cloud.weights());
  std::cout << "wrote " << cloud.size() << " weights to " << opts.output << "\n";
  return 0;
}

struct EmbedOpts {
  std::string input;
  std::string outdir;
  double sigma = 1.0;
  double epsilon = 0.3;
  double delta = 0.1;
  double constant = 8.0;
  std::string mode = "point_count";
  double diameter_ratio = 0.0;
  bool has_ratio = false;
  int t_override = 0;
  bool has_t = false;
  std::uint64_t seed = 0;
  int threads = 1;
  bool force = false;
};

int cmd_embed(const EmbedOpts& opts) {
  const Matrix points = read_csv_matrix(opts.input);
  const KernelConfig kernel_config{opts.sigma};
  const WeightedPointCloud cloud(points, kernel_config);

  std::filesystem::create_directories(opts.outdir);
  const std::string map_path = join(opts.outdir, "rff_map.json");
  const std::string embedded_path = join(opts.outdir, "embedded.csv");
  const std::string weights_path = join(opts.outdir, "weights_reduced.csv");
  const std::string report_path = join(opts.outdir, "distortion_report.json");
  for (const auto& path : {map_path, embedded_path, weights_path, report_path})
    refuse_existing(path, opts.force);

  int t = 0;
  if (opts.has_t) {
    if (opts.t_override < 2 || opts.t_override % 2 != 0)
      throw std::invalid_argument("embed: --t must be an even integer >= 2");
    t = opts.t_override;
  } else {
    TargetDimensionRequest request;
    request.mode = parse_mode(opts.mode);
    if (request.mode == DimensionMode::diameter && !opts.has_ratio)
      throw std::invalid_argument("embed: diameter mode needs --diameter-ratio");
    request.n = static_cast<int>(points.rows());
    request.diameter_ratio = opts.diameter_ratio;
    request.ambient_dim = static_cast<int>(points.cols());
    request.epsilon = opts.epsilon;
    request.delta = opts.delta;
    request.constant = opts.constant;
    t = target_dimension(request);
  }

  const RffMap map =
      sample_rff(static_cast<int>(points.cols()), t, kernel_config, split_seed(opts.seed, "rff"));
  write_text_file(map_path, rff_map_to_json(map));
  const Matrix embedded = apply_rff_all(map, points, opts.threads);
  write_csv_matrix(embedded_path, embedded);
  write_csv_vector(weights_path, recompute_weights(embedded));
  write_text_file(report_path, distortion_report_to_json(distortion_report(cloud, map, opts.epsilon)));
  std::cout << "embedded " << points.rows() << " points into dimension " << t << " under "
            << opts.outdir << "\n";
  return 0;
}

struct FiltrationOpts {
  std::string metric;
  std::string input;
  std::string weights_path;
  std::string output;
  double sigma = 1.0;
  int d_max = 2;
  double cap = 0.0;
  bool has_cap = false;
  int threads = 1;
  bool force = false;
};

int cmd_filtration(const FiltrationOpts& opts) {
  const std::optional<double> cap =
      opts.has_cap ? std::optional<double>(opts.cap) : std::nullopt;
  FilteredComplex complex;
  if (opts.metric == "gkpd") {
    const Matrix points = read_csv_matrix(opts.input);
    const WeightedPointCloud cloud(points, KernelConfig{opts.sigma});
    complex = build_filtration_gkpd(cloud, opts.d_max, cap, opts.threads);
  } else if (opts.metric == "euclidean") {
    if (opts.weights_path.empty())
      throw std::invalid_argument("filtration: euclidean metric needs --weights");
    const Matrix points = read_csv_matrix(opts.input);
    const Vector weights = read_csv_vector(opts.weights_path);
    complex = build_filtration_euclidean(points, weights, opts.d_max, cap, opts.threads);
  } else {
    throw std::invalid_argument("filtration: --metric must be gkpd or euclidean, got '" +
                                opts.metric + "'");
  }
  refuse_existing(opts.output, opts.force);
  std::ostringstream out;
  write_complex(out, complex);
  write_text_file(opts.output, out.str());
  std::cout << "wrote " << complex.simplices.size() << " simplices to " << opts.output << "\n";
  return 0;
}

struct PersistenceOpts {
  std::string input;
  std::string output;
  std::string csv;
  int d_max = 0;
  bool has_dmax = false;
  bool keep_zero = false;
  bool force = false;
};

int cmd_persistence(const PersistenceOpts& opts) {
  std::istringstream in(read_text_file(opts.input));
  FilteredComplex complex = read_complex(in);
  // read_complex infers d_max from the largest simplex present; a value cap
  // can prune an entire dimension, in which case --dmax restores the intended
  // truncation degree.
  if (opts.has_dmax) {
    if (opts.d_max < complex.d_max)
      throw std::invalid_argument("persistence: --dmax is below a simplex dimension in the input");
    complex.d_max = opts.d_max;
  }
  const PersistenceDiagram diagram = compute_persistence(complex, opts.keep_zero);
  refuse_existing(opts.output, opts.force);
  write_text_file(opts.output, diagram_to_json(diagram));
  if (!opts.csv.empty()) {
    refuse_existing(opts.csv, opts.force);
    std::ostringstream out;
    write_diagram_csv(out, diagram);
    write_text_file(opts.csv, out.str());
  }
  std::cout << "wrote " << (diagram.points.size() + diagram.truncated.size()) << " bars to "
            << opts.output << "\n";
  return 0;
}

struct CompareOpts {
  std::string diagram_a;
  std::string diagram_b;
  std::string output;
  double epsilon = 0.0;
  double slack = 0.05;
  bool force = false;
};

int cmd_compare(const CompareOpts& opts) {
  const PersistenceDiagram a = diagram_from_json(read_text_file(opts.diagram_a));
  const PersistenceDiagram b = diagram_from_json(read_text_file(opts.diagram_b));
  const InterleavingCertificate certificate = certify_interleaving(a, b, opts.epsilon, opts.slack);
  if (!opts.output.empty()) {
    refuse_existing(opts.output, opts.force);
    write_text_file(opts.output, certificate_to_json(certificate));
  }
  std::cout << "certificate " << (certificate.pass ? "pass" : "fail")
            << " factor=" << format_double(certificate.factor_measured)
            << " bound=" << format_double(certificate.factor_bound) << "\n";
  return certificate.pass ? 0 : 2;
}

struct PipelineOpts {
  PipelineConfig config;
  std::string mode = "point_count";
  double cap = 0.0;
  bool has_cap = false;
  int t_override = 0;
  bool has_t = false;
  double diameter_ratio = 0.0;
  bool has_ratio = false;
};

int cmd_pipeline(PipelineOpts opts) {
  opts.config.mode = parse_mode(opts.mode);
  if (opts.has_cap) opts.config.value_cap = opts.cap;
  if (opts.has_t) opts.config.t_override = opts.t_override;
  if (opts.has_ratio) opts.config.diameter_ratio = opts.diameter_ratio;
  const PipelineResult result = run_pipeline(opts.config);
  std::cout << "pipeline t=" << result.t << " certificate "
            << (result.certificate.pass ? "pass" : "fail")
            << " factor=" << format_double(result.certificate.factor_measured)
            << " bound=" << format_double(result.certificate.factor_bound) << " -> "
            << opts.config.output_dir << "\n";
  return result.exit_code;
}

std::string trim_copy(std::string text) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!text.empty() && is_space(static_cast<unsigned char>(text.front())))
    text.erase(text.begin());
  while (!text.empty() && is_space(static_cast<unsigned char>(text.back()))) text.pop_back();
  return text;
}

// Expands "--config FILE" into the file's key=value pairs, injected right
// after the subcommand name so explicit flags still win. The option parser
// only processes config files attached to the root command, while ours belong
// to subcommands, hence the manual pass.
std::vector<std::string> expand_config(const CLI::App& app, int argc, char** argv) {
  std::vector<std::string> tokens(argv + 1, argv + argc);
  const CLI::App* sub = nullptr;
  std::size_t sub_pos = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (const CLI::App* found = app.get_subcommand_no_throw(tokens[i])) {
      sub = found;
      sub_pos = i;
      break;
    }
  }
  if (sub == nullptr) return tokens;

  std::string path;
  for (std::size_t i = sub_pos + 1; i < tokens.size(); ++i) {
    if (tokens[i] == "--config" && i + 1 < tokens.size())
      path = tokens[i + 1];
    else if (tokens[i].rfind("--config=", 0) == 0)
      path = tokens[i].substr(9);
  }
  if (path.empty()) return tokens;

  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot read " + path);
  std::vector<std::string> injected;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string entry = trim_copy(line);
    if (entry.empty() || entry.front() == '#' || entry.front() == ';') continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key=value on line " + std::to_string(line_no) +
                               " of " + path);
    const std::string key = trim_copy(entry.substr(0, eq));
    std::string value = trim_copy(entry.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.empty())
      throw std::runtime_error("config: empty key on line " + std::to_string(line_no) + " of " +
                               path);
    std::string name = "--" + key;
    const CLI::Option* option = sub->get_option_no_throw(name);
    if (option == nullptr && key.size() == 1) {
      name = "-" + key;
      option = sub->get_option_no_throw(name);
    }
    if (option == nullptr)
      throw std::runtime_error("config: unknown key '" + key + "' for subcommand " +
                               sub->get_name());
    if (option->get_expected_min() == 0) {
      std::string lowered = value;
      std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (lowered == "true" || lowered == "1" || lowered == "yes" || lowered == "on")
        injected.push_back(name);
      else if (lowered != "false" && lowered != "0" && lowered != "no" && lowered != "off")
        throw std::runtime_error("config: flag '" + key + "' takes true or false");
    } else {
      injected.push_back(name);
      injected.push_back(value);
    }
  }
  tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, injected.begin(),
                injected.end());
  return tokens;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Weighted Cech persistence under the Gaussian kernel power distance, with a random "
      "Fourier feature reduction and an interleaving certificate between the two diagrams."};
  app.require_subcommand(1);
  int exit_code = 0;
  std::string config_file;

  GenerateOpts gen;
  auto* sub_gen = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  sub_gen->add_option("--kind", gen.kind,
                      "circle_with_outliers | gaussian_clusters | uniform_cube | "
                      "embedded_circle_highD");
  sub_gen->add_option("--n", gen.n, "Core sample count")->required();
  sub_gen->add_option("--dim", gen.dim, "Ambient dimension");
  sub_gen->add_option("--noise", gen.noise, "Noise scale (cube side for uniform_cube)");
  sub_gen->add_option("--outliers", gen.outliers, "Extra uniform outliers (circle kinds)");
  sub_gen->add_option("--seed", gen.seed, "Master seed; the dataset stream is derived from it");
  sub_gen->add_option("-o,--output", gen.output, "Output CSV path")->required();
  sub_gen->add_flag("--force", gen.force, "Overwrite existing outputs");
  sub_gen->add_option("--config", config_file,
                      "Read defaults from a plain key=value file; explicit flags win");
  sub_gen->callback([&] { exit_code = cmd_generate(gen); });

  WeightsOpts wts;
  auto* sub_wts = app.add_subcommand("weights", "Kernel-distance weights of a point cloud");
  sub_wts->add_option("-i,--input", wts.input, "Input points CSV")->required();
  sub_wts->add_option("--sigma", wts.sigma, "Gaussian kernel bandwidth");
  sub_wts->add_option("-o,--output", wts.output, "Output weights CSV")->required();
  sub_wts->add_flag("--force", wts.force, "Overwrite existing outputs");
  sub_wts->add_option("--config", config_file,
                      "Read defaults from a plain key=value file; explicit flags win");
  sub_wts->callback([&] { exit_code = cmd_weights(wts); });

  EmbedOpts emb;
  auto* sub_emb = app.add_subcommand(
      "embed", "Random Fourier feature embedding with recomputed weights and distortion report");
  sub_emb->add_option("-i,--input", emb.input, "Input points CSV")->required();
  sub_emb->add_option("-o,--outdir", emb.outdir,
                      "Output directory (rff_map.json, embedded.csv, weights_reduced.csv, "
                      "distortion_report.json)")
      ->required();
  sub_emb->add_option("--sigma", emb.sigma, "Gaussian kernel bandwidth");
  sub_emb->add_option("--epsilon", emb.epsilon, "Distortion tolerance in (0, 1)");
  sub_emb->add_option("--delta", emb.delta, "Failure probability in (0, 1)");
  sub_emb->add_option("--constant", emb.constant, "Dimension-rule constant C");
  sub_emb->add_option("--mode", emb.mode, "Dimension rule: point_count | diameter");
  auto* opt_ratio_e = sub_emb->add_option("--diameter-ratio", emb.diameter_ratio,
                                          "Spread ratio r (diameter mode)");
  auto* opt_t_e = sub_emb->add_option("--t", emb.t_override, "Pin the image dimension (even, >= 2)");
  sub_emb->add_option("--seed", emb.seed, "Master seed; the feature stream is derived from it");
  sub_emb->add_option("--threads", emb.threads, "Worker threads");
  sub_emb->add_flag("--force", emb.force, "Overwrite existing outputs");
  sub_emb->add_option("--config", config_file,
                      "Read defaults from a plain key=value file; explicit flags win");
  sub_emb->callback([&] {
    emb.has_ratio = opt_ratio_e->count() > 0;
    emb.has_t = opt_t_e->count() > 0;
    exit_code = cmd_embed(emb);
  });

  FiltrationOpts fil;
  auto* sub_fil = app.add_subcommand("filtration", "Weighted Cech filtration of a point cloud");
  sub_fil->add_option("--metric", fil.metric, "gkpd | euclidean")->required();
  sub_fil->add_option("-i,--input", fil.input, "Input points CSV (embedded points for euclidean)")
      ->required();
  sub_fil->add_option("--weights", fil.weights_path, "Weights CSV (euclidean metric)");
  sub_fil->add_option("--sigma", fil.sigma, "Gaussian kernel bandwidth (gkpd metric)");
  sub_fil->add_option("--dmax", fil.d_max, "Top simplex dimension");
  auto* opt_cap = sub_fil->add_option("--cap", fil.cap, "Drop simplices above this value");
  sub_fil->add_option("--threads", fil.threads, "Worker threads");
  sub_fil->add_option("-o,--output", fil.output, "Output complex path")->required();
  sub_fil->add_flag("--force", fil.force, "Overwrite existing outputs");
  sub_fil->add_option("--config", config_file,
                      "Read defaults from a plain key=value file; explicit flags win");
  sub_fil->callback([&] {
    fil.has_cap = opt_cap->count() > 0;
    exit_code = cmd_filtration(fil);
  });

  PersistenceOpts per;
  auto* sub_per = app.add_subcommand("persistence", "Persistence diagram of a filtered complex");
  sub_per->add_option("-i,--input", per.input, "Input complex path")->required();
  sub_per->add_option("-o,--output", per.output, "Output diagram JSON path")->required();
  sub_per->add_option("--csv", per.csv, "Also write the diagram as CSV here");
  auto* opt_dmax = sub_per->add_option("--dmax", per.d_max,
                                       "Truncation degree when the top dimension was pruned away");
  sub_per->add_flag("--keep-zero", per.keep_zero, "Keep zero-persistence pairs");
  sub_per->add_flag("--force", per.force, "Overwrite existing outputs");
  sub_per->add_option("--config", config_file,
                      "Read defaults from a plain key=value file; explicit flags win");
  sub_per->callback([&] {
    per.has_dmax = opt_dmax->count() > 0;
    exit_code = cmd_persistence(per);
  });

  CompareOpts cmp;
  auto* sub_cmp = app.add_subcommand(
      "compare", "Interleaving certificate between two persistence diagrams");
  sub_cmp->add_option("-a,--diagram-a", cmp.diagram_a, "First diagram JSON")->required();
  sub_cmp->add_option("-b,--diagram-b", cmp.diagram_b, "Second diagram JSON")->required();
  sub_cmp->add_option("--epsilon", cmp.epsilon, "Distortion tolerance in (0, 1)")->required();
  sub_cmp->add_option("--slack", cmp.slack, "Multiplicative headroom on the bound");
  sub_cmp->add_option("-o,--output", cmp.output, "Write the certificate JSON here");
  sub_cmp->add_flag("--force", cmp.force, "Overwrite existing outputs");
  sub_cmp->add_option("--config", config_file,
                      "Read defaults from a plain key=value file; explicit flags win");
  sub_cmp->callback([&] { exit_code = cmd_compare(cmp); });

  PipelineOpts pip;
  auto* sub_pip = app.add_subcommand(
      "pipeline", "Full chain: weights, embedding, both filtrations, diagrams, certificate");
  sub_pip->add_option("-i,--input", pip.config.input_path, "Input points CSV")->required();
  sub_pip->add_option("-o,--outdir", pip.config.output_dir, "Artifact directory")->required();
  sub_pip->add_option("--sigma", pip.config.sigma, "Gaussian kernel bandwidth");
  sub_pip->add_option("--epsilon", pip.config.epsilon, "Distortion tolerance in (0, 1)");
  sub_pip->add_option("--delta", pip.config.delta, "Failure probability in (0, 1)");
  sub_pip->add_option("--constant", pip.config.constant, "Dimension-rule constant C");
  sub_pip->add_option("--dmax", pip.config.d_max, "Top simplex dimension");
  auto* opt_cap_p = sub_pip->add_option("--cap", pip.cap, "Drop simplices above this value");
  auto* opt_t_p = sub_pip->add_option("--t", pip.t_override, "Pin the image dimension (even, >= 2)");
  sub_pip->add_option("--mode", pip.mode, "Dimension rule: point_count | diameter");
  auto* opt_ratio_p = sub_pip->add_option("--diameter-ratio", pip.diameter_ratio,
                                          "Spread ratio r (diameter mode)");
  sub_pip->add_option("--seed", pip.config.seed, "Master seed for the whole run");
  sub_pip->add_option("--slack", pip.config.slack, "Multiplicative headroom on the bound");
  sub_pip->add_option("--threads", pip.config.threads, "Worker threads");
  sub_pip->add_flag("--force", pip.config.force, "Overwrite existing artifacts");
  sub_pip->add_option("--config", config_file,
                      "Read defaults from a plain key=value file; explicit flags win");
  sub_pip->callback([&] {
    pip.has_cap = opt_cap_p->count() > 0;
    pip.has_t = opt_t_p->count() > 0;
    pip.has_ratio = opt_ratio_p->count() > 0;
    exit_code = cmd_pipeline(pip);
  });

  // Config injection may duplicate an option the user also passed; the later
  // (explicit) occurrence wins.
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    for (CLI::Option* option : sub->get_options())
      option->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    std::vector<std::string> tokens = expand_config(app, argc, argv);
    std::reverse(tokens.begin(), tokens.end());
    app.parse(std::move(tokens));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
