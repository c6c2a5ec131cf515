// Copyright 2026 The Manifold Scattering Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "msx/pipeline.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <sstream>
#include <vector>

#include "msx/datasets.hpp"
#include "msx/eigen_io.hpp"
#include "msx/errors.hpp"
#include "msx/io.hpp"
#include "msx/learn.hpp"
#include "msx/random.hpp"

namespace msx {

using nlohmann::json;

void PipelineConfig::validate() const {
  scattering().validate();
  if (backend == BackendKind::kSpectral) {
    if (!kappa && !eigs_path) {
      throw Error(ErrorKind::kConfig, "the spectral backend needs --kappa or --eigs");
    }
    if (kappa && *kappa < 1) throw Error(ErrorKind::kParameter, "kappa must be positive");
  }
  if (backend == BackendKind::kMarkov && eigs_path) {
    throw Error(ErrorKind::kConfig, "--eigs only applies to the spectral backend");
  }
  if (kernel == KernelChoice::kAdaptive && !knn) {
    throw Error(ErrorKind::kConfig, "the adaptive kernel needs --knn");
  }
  if (kernel == KernelChoice::kGaussian && !dim && !eigs_path) {
    throw Error(ErrorKind::kConfig, "the Gaussian kernel needs the intrinsic dimension --dim");
  }
  if (epsilon && !(*epsilon > 0.0)) throw Error(ErrorKind::kParameter, "--eps must be positive");
  if (threshold && backend != BackendKind::kMarkov) {
    throw Error(ErrorKind::kConfig, "--threshold only applies to the Markov backend");
  }
}

ScatteringConfig PipelineConfig::scattering() const {
  ScatteringConfig s;
  s.J = J;
  s.Q = Q;
  s.max_order = order;
  s.backend = backend;
  s.wavelet = wavelet;
  return s;
}

json PipelineConfig::to_json() const {
  json j;
  j["backend"] = to_string(backend);
  j["kernel"] = kernel == KernelChoice::kGaussian ? "gaussian" : "adaptive";
  j["wavelet"] = to_string(wavelet);
  j["J"] = J;
  j["Q"] = Q;
  j["order"] = order;
  j["tau"] = tau;
  if (kappa) j["kappa"] = *kappa;
  if (epsilon) {
    j["eps"] = *epsilon;
  } else {
    j["eps"] = "auto";
  }
  j["eps_const"] = eps_const;
  if (dim) j["dim"] = *dim;
  if (knn) j["knn"] = *knn;
  if (threshold) j["threshold"] = *threshold;
  if (eigs_path) j["eigs"] = eigs_path->string();
  return j;
}

PointCloud make_cloud(Matrix coords, const PipelineConfig& cfg) {
  return PointCloud(std::move(coords), cfg.dim.value_or(1));
}

double resolve_epsilon(const PipelineConfig& cfg, Index n) {
  if (cfg.epsilon) return *cfg.epsilon;
  if (!cfg.dim) throw Error(ErrorKind::kConfig, "--eps auto needs the intrinsic dimension --dim");
  return epsilon_rule(n, *cfg.dim, cfg.eps_const);
}

SpectralHeatOperator laplacian_eigs(const PointCloud& cloud, Index kappa, double epsilon) {
  if (kappa < 1 || kappa > cloud.size()) {
    throw Error(ErrorKind::kParameter, "kappa = " + std::to_string(kappa) +
                                           " requires 1 <= kappa <= N = " +
                                           std::to_string(cloud.size()));
  }
  const AffinityGraph graph = gaussian_affinity(cloud, epsilon);
  return smallest_eigs(build_laplacian(graph, epsilon), kappa);
}

namespace {

AffinityGraph build_graph(const PointCloud& cloud, const PipelineConfig& cfg) {
  if (cfg.kernel == KernelChoice::kAdaptive) return adaptive_affinity(cloud, *cfg.knn);
  return gaussian_affinity(cloud, resolve_epsilon(cfg, cloud.size()));
}

}  // namespace

std::unique_ptr<HeatBackend> build_backend(const PointCloud& cloud, const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.backend == BackendKind::kSpectral) {
    if (cfg.eigs_path) {
      SpectralHeatOperator op = load_eigenpairs(*cfg.eigs_path);
      if (op.size() != cloud.size()) {
        throw Error(ErrorKind::kInput, "eigenpair file has " + std::to_string(op.size()) +
                                           " points, cloud has " + std::to_string(cloud.size()));
      }
      return std::make_unique<SpectralBackend>(std::move(op), cfg.tau);
    }
    if (*cfg.kappa > cloud.size()) {
      throw Error(ErrorKind::kParameter, "kappa = " + std::to_string(*cfg.kappa) +
                                             " exceeds N = " + std::to_string(cloud.size()));
    }
    // The adaptive kernel has no bandwidth; its Laplacian is (D - W) / N.
    const double eps = cfg.kernel == KernelChoice::kAdaptive ? 1.0 : resolve_epsilon(cfg, cloud.size());
    return std::make_unique<SpectralBackend>(
        smallest_eigs(build_laplacian(build_graph(cloud, cfg), eps), *cfg.kappa), cfg.tau);
  }
  MarkovOperator op = markov_operator(build_graph(cloud, cfg));
  if (cfg.threshold) op = sparsify(op, *cfg.threshold);
  return std::make_unique<MarkovBackend>(op, cfg.J);
}

FeatureTable extract_features(const PointCloud& cloud, const Matrix& signals,
                              const PipelineConfig& cfg) {
  const auto backend = build_backend(cloud, cfg);
  const ScatteringConfig scfg = cfg.scattering();
  FeatureTable table;
  table.labels = feature_labels(scfg);
  table.values = scattering_features_batch(*backend, scfg, signals);
  table.config = cfg.to_json();
  table.config["n_points"] = cloud.size();
  if (!cfg.epsilon && cfg.dim) table.config["eps_resolved"] = resolve_epsilon(cfg, cloud.size());
  return table;
}

namespace {

// "key = value" lines; '#' starts a comment. Keys are flag names without the
// leading dashes.
std::vector<std::string> config_file_args(const std::string& path) {
  std::vector<std::string> args;
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t lineno = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kConfig, path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config") throw Error(ErrorKind::kConfig, "config files cannot nest");
    if (value == "true") {
      args.push_back("--" + key);
    } else if (value != "false") {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
  return args;
}

// Splices the contents of --config FILE ahead of the other flags so that
// explicit flags win (options take the last value given).
std::vector<std::string> expand_config(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    std::size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      consumed = 1;
    } else {
      continue;
    }
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i + consumed));
    // Insert right after the subcommand name (argv[1]).
    const auto extra = config_file_args(path);
    args.insert(args.begin() + 2, extra.begin(), extra.end());
    break;
  }
  return args;
}

BackendKind parse_backend(const std::string& s) {
  if (s == "spectral") return BackendKind::kSpectral;
  if (s == "markov") return BackendKind::kMarkov;
  throw Error(ErrorKind::kConfig, "unknown backend '" + s + "'");
}

KernelChoice parse_kernel(const std::string& s) {
  if (s == "gaussian") return KernelChoice::kGaussian;
  if (s == "adaptive") return KernelChoice::kAdaptive;
  throw Error(ErrorKind::kConfig, "unknown kernel '" + s + "'");
}

WaveletVariant parse_wavelet(const std::string& s) {
  if (s == "plain") return WaveletVariant::kPlain;
  if (s == "sqrt") return WaveletVariant::kSqrt;
  throw Error(ErrorKind::kConfig, "unknown wavelet variant '" + s + "'");
}

std::optional<double> parse_eps(const std::string& s) {
  if (s.empty() || s == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kConfig, "--eps expects a number or 'auto', got '" + s + "'");
  }
}

std::vector<int> parse_digit_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kConfig, "--digits expects a comma-separated list, got '" + s + "'");
    }
  }
  return out;
}

struct OperatorFlags {
  std::string backend = "spectral";
  std::string kernel = "gaussian";
  std::string wavelet = "plain";
  std::string eps = "auto";
  double eps_const = kDefaultEpsilonConstant;
  int dim = 0;
  int knn = 0;
  long kappa = 0;
  double tau = 1.0;
  double threshold = -1.0;
  int J = 8;
  int Q = 4;
  int order = 2;
  std::string eigs;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--backend", backend, "spectral | markov")->capture_default_str();
    cmd->add_option("--kernel", kernel, "gaussian | adaptive")->capture_default_str();
    cmd->add_option("--wavelet", wavelet, "plain | sqrt")->capture_default_str();
    cmd->add_option("--J", J, "largest dyadic scale")->capture_default_str();
    cmd->add_option("--Q", Q, "largest moment exponent")->capture_default_str();
    cmd->add_option("--order", order, "scattering order (1-3)")->capture_default_str();
    cmd->add_option("--kappa", kappa, "eigenpairs kept by the spectral backend");
    cmd->add_option("--eps", eps, "Gaussian bandwidth or 'auto'")->capture_default_str();
    cmd->add_option("--eps-const", eps_const, "constant c in eps = c N^(-1/(d/2+3))")
        ->capture_default_str();
    cmd->add_option("--dim", dim, "intrinsic dimension d");
    cmd->add_option("--knn", knn, "k of the adaptive kernel");
    cmd->add_option("--tau", tau, "spectral time scale")->capture_default_str();
    cmd->add_option("--threshold", threshold, "Markov sparsification threshold");
    cmd->add_option("--eigs", eigs, "precomputed eigenpair JSON for the spectral backend");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    cfg.backend = parse_backend(backend);
    cfg.kernel = parse_kernel(kernel);
    cfg.wavelet = parse_wavelet(wavelet);
    cfg.J = J;
    cfg.Q = Q;
    cfg.order = order;
    if (kappa > 0) cfg.kappa = kappa;
    cfg.epsilon = parse_eps(eps);
    cfg.eps_const = eps_const;
    if (dim > 0) cfg.dim = dim;
    if (knn > 0) cfg.knn = knn;
    cfg.tau = tau;
    if (threshold >= 0.0) cfg.threshold = threshold;
    if (!eigs.empty()) cfg.eigs_path = eigs;
    cfg.validate();
    return cfg;
  }
};

void print_error(const std::exception& e) { std::cerr << "msx: " << e.what() << "\n"; }

}  // namespace

LabeledSignals mnist_sphere_signals(const MnistData& mnist, const PointCloud& cloud, Index count,
                                    std::uint64_t seed, const std::vector<int>& digits) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < mnist.labels.size(); ++i) {
    if (digits.empty() || std::find(digits.begin(), digits.end(), mnist.labels[i]) != digits.end()) {
      eligible.push_back(i);
    }
  }
  if (count < 1 || static_cast<std::size_t>(count) > eligible.size()) {
    throw Error(ErrorKind::kParameter, "requested " + std::to_string(count) + " digits but only " +
                                           std::to_string(eligible.size()) + " are eligible");
  }
  Rng rng(seed);
  const auto picks = sample_without_replacement(eligible.size(), static_cast<std::size_t>(count), rng);
  LabeledSignals out;
  out.signals.resize(count, cloud.size());
  out.labels.reserve(static_cast<std::size_t>(count));
  for (Index r = 0; r < count; ++r) {
    const std::size_t idx = eligible[picks[static_cast<std::size_t>(r)]];
    const Eigen::Matrix3d rotation = random_rotation(rng.next());
    out.signals.row(r) = project_digit(mnist.images[idx], cloud, rotation).transpose();
    out.labels.push_back(mnist.labels[idx]);
  }
  return out;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Manifold scattering features for point clouds", "msx"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;  // consumed by expand_config; declared for --help
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key = value file of flag defaults");
  };

  // gen-sphere
  auto* gen = app.add_subcommand("gen-sphere", "sample points uniformly on the unit sphere");
  long gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of points")->required();
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output point-cloud CSV")->required();
  add_config(gen);

  // mnist-sphere
  auto* mnist = app.add_subcommand("mnist-sphere", "project rotated MNIST digits onto a sphere");
  std::string m_images, m_labels, m_points, m_out, m_out_labels, m_digits;
  long m_count = 0;
  std::uint64_t m_seed = 0;
  mnist->add_option("--images", m_images, "IDX image file")->required();
  mnist->add_option("--labels", m_labels, "IDX label file")->required();
  mnist->add_option("--points", m_points, "spherical point-cloud CSV")->required();
  mnist->add_option("--count", m_count, "number of digits to project")->required();
  mnist->add_option("--seed", m_seed, "random seed")->capture_default_str();
  mnist->add_option("--digits", m_digits, "comma-separated digit classes to keep");
  mnist->add_option("--out", m_out, "output signals CSV")->required();
  mnist->add_option("--out-labels", m_out_labels, "output labels CSV")->required();
  add_config(mnist);

  // extract
  auto* extract = app.add_subcommand("extract", "compute scattering moments");
  OperatorFlags ex_flags;
  std::string ex_points, ex_signals, ex_out, ex_embed;
  long ex_dirac = 0;
  std::uint64_t ex_seed = 0;
  extract->add_option("--points", ex_points, "point-cloud CSV")->required();
  extract->add_option("--signals", ex_signals, "signals CSV, one row per signal");
  extract->add_option("--dirac", ex_dirac, "use this many random Dirac signals instead");
  extract->add_option("--seed", ex_seed, "seed for Dirac signals")->capture_default_str();
  extract->add_option("--embed", ex_embed, "concat | mean: one manifold-level row");
  extract->add_option("--out", ex_out, "output .json or .csv")->required();
  ex_flags.add_to(extract);
  add_config(extract);

  // eigs
  auto* eigs = app.add_subcommand("eigs", "smallest eigenpairs of the Gaussian-kernel Laplacian");
  std::string eg_points, eg_out, eg_eps = "auto";
  long eg_kappa = 0;
  int eg_dim = 0;
  double eg_const = kDefaultEpsilonConstant;
  eigs->add_option("--points", eg_points, "point-cloud CSV")->required();
  eigs->add_option("--kappa", eg_kappa, "number of eigenpairs")->required();
  eigs->add_option("--dim", eg_dim, "intrinsic dimension d")->required();
  eigs->add_option("--eps", eg_eps, "Gaussian bandwidth or 'auto'")->capture_default_str();
  eigs->add_option("--eps-const", eg_const, "constant c of the auto bandwidth")->capture_default_str();
  eigs->add_option("--out", eg_out, "eigenpair .json, or .csv of eigenvalues")->required();
  add_config(eigs);

  // classify
  auto* classify = app.add_subcommand("classify", "standardize, PCA and classify feature rows");
  std::string cl_features, cl_labels, cl_out, cl_model = "knn";
  int cl_knn = 5, cl_depth = 5, cl_leaf = 2, cl_pca = 0, cl_folds = 0;
  double cl_test_frac = 0.25;
  std::uint64_t cl_seed = 0;
  bool cl_loo = false, cl_raw = false;
  classify->add_option("--features", cl_features, "feature .json or .csv")->required();
  classify->add_option("--labels", cl_labels, "labels CSV")->required();
  classify->add_option("--model", cl_model, "knn | tree")->capture_default_str();
  classify->add_option("--knn", cl_knn, "neighbours for the k-NN model")->capture_default_str();
  classify->add_option("--max-depth", cl_depth, "tree depth limit")->capture_default_str();
  classify->add_option("--min-leaf", cl_leaf, "minimum rows per tree leaf")->capture_default_str();
  classify->add_option("--pca", cl_pca, "principal components kept (0 = off)")->capture_default_str();
  classify->add_option("--seed", cl_seed, "split seed")->capture_default_str();
  classify->add_option("--test-frac", cl_test_frac, "held-out fraction")->capture_default_str();
  classify->add_option("--folds", cl_folds, "stratified k-fold instead of a holdout split");
  classify->add_flag("--loo", cl_loo, "leave-one-out instead of a holdout split");
  classify->add_flag("--no-standardize", cl_raw, "skip per-column z-scoring");
  classify->add_option("--out", cl_out, "report JSON (stdout when omitted)");
  add_config(classify);

  try {
    const std::vector<std::string> args = expand_config(argc, argv);
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const Error& e) {
    print_error(e);
    return exit_code_for(e.kind());
  }

  try {
    if (*gen) {
      const PointCloud cloud = sample_sphere(gen_n, gen_seed);
      write_matrix_csv(gen_out, cloud.coords());
    } else if (*mnist) {
      const MnistData data = load_mnist_idx(m_images, m_labels);
      const PointCloud cloud = load_pointcloud_csv(m_points, 2);
      const LabeledSignals sig =
          mnist_sphere_signals(data, cloud, m_count, m_seed, parse_digit_list(m_digits));
      write_matrix_csv(m_out, sig.signals);
      write_labels_csv(m_out_labels, sig.labels);
    } else if (*extract) {
      const PipelineConfig cfg = ex_flags.resolve();
      const PointCloud cloud = make_cloud(read_matrix_csv(ex_points), cfg);
      if (ex_signals.empty() == (ex_dirac == 0)) {
        throw Error(ErrorKind::kConfig, "give exactly one of --signals and --dirac");
      }
      const Matrix signals = ex_dirac > 0 ? dirac_signals(cloud.size(), ex_dirac, ex_seed)
                                          : load_signals_csv(ex_signals);
      FeatureTable table;
      if (ex_embed.empty()) {
        table = extract_features(cloud, signals, cfg);
      } else {
        if (ex_embed != "concat" && ex_embed != "mean") {
          throw Error(ErrorKind::kConfig, "--embed expects concat or mean");
        }
        const auto backend = build_backend(cloud, cfg);
        const FeatureVector fv =
            manifold_embedding(*backend, cfg.scattering(), signals,
                               ex_embed == "concat" ? EmbeddingMode::kConcat : EmbeddingMode::kMean);
        table.labels = fv.labels;
        table.values = Eigen::Map<const Eigen::RowVectorXd>(fv.values.data(),
                                                            static_cast<Index>(fv.values.size()));
        table.config = cfg.to_json();
        table.config["embed"] = ex_embed;
        table.config["n_points"] = cloud.size();
      }
      if (ex_dirac > 0) {
        table.config["dirac"] = ex_dirac;
        table.config["seed"] = ex_seed;
      }
      save_features(ex_out, table);
    } else if (*eigs) {
      PipelineConfig cfg;
      cfg.dim = eg_dim;
      cfg.epsilon = parse_eps(eg_eps);
      cfg.eps_const = eg_const;
      const PointCloud cloud = make_cloud(read_matrix_csv(eg_points), cfg);
      const SpectralHeatOperator op = laplacian_eigs(cloud, eg_kappa, resolve_epsilon(cfg, cloud.size()));
      if (std::filesystem::path(eg_out).extension() == ".csv") {
        write_matrix_csv(eg_out, op.eigenvalues());
      } else {
        save_eigenpairs(eg_out, op);
      }
    } else if (*classify) {
      const FeatureTable table = load_features(cl_features);
      Dataset data{table.values, read_labels_csv(cl_labels)};
      ModelSpec model;
      if (cl_model == "knn") {
        model.kind = ModelKind::kKnn;
      } else if (cl_model == "tree") {
        model.kind = ModelKind::kTree;
      } else {
        throw Error(ErrorKind::kConfig, "unknown model '" + cl_model + "'");
      }
      model.k = cl_knn;
      model.max_depth = cl_depth;
      model.min_leaf = cl_leaf;
      model.pca_components = cl_pca;
      model.standardize = !cl_raw;
      SplitSpec split;
      split.seed = cl_seed;
      split.test_fraction = cl_test_frac;
      if (cl_loo && cl_folds > 0) throw Error(ErrorKind::kConfig, "--loo and --folds conflict");
      if (cl_loo) split.kind = SplitKind::kLeaveOneOut;
      if (cl_folds > 0) {
        split.kind = SplitKind::kKFold;
        split.folds = cl_folds;
      }
      const EvaluationReport report = evaluate(data, model, split);
      if (cl_out.empty()) {
        std::cout << report.to_json();
      } else {
        write_file_atomic(cl_out, report.to_json());
      }
    }
  } catch (const Error& e) {
    print_error(e);
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    print_error(e);
    return 4;
  }
  return 0;
}

}  // namespace msx
