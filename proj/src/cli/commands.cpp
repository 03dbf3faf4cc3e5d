#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "hafelm/bench.hpp"
#include "hafelm/cli.hpp"
#include "hafelm/dataset.hpp"
#include "hafelm/elm.hpp"
#include "hafelm/error.hpp"
#include "hafelm/eval.hpp"
#include "hafelm/model_io.hpp"
#include "hafelm/qho_cluster.hpp"
#include "hafelm/textrep.hpp"
#include "hafelm/variant.hpp"

namespace hafelm::cli {

namespace {

const char* const kDefaultCValues = "1,1e-1,1e-2,1e-3,1e-4,1e-5,1e-6,1e-7,1e-8";
const char* const kDefaultLValues = "100,200,300,400,500,600,700,800,900,1000";

struct RunConfig {
  std::string data;
  bool header = false;
  bool normalize = false;
  std::string model;
  std::string out;
  std::string report;
  std::string rows_out;

  std::string variant = "HA-FELM";
  double C = 1.0;
  std::size_t L = 100;
  std::string activation = "rbf";
  std::uint64_t seed = 0;

  double theta = 0.001;
  double alpha = 0.7;
  std::size_t k = 5;
  std::string density_mode;
  int grid = 0;
  int oscillators = 0;
  int probes = 32;
  std::uint64_t cluster_seed = 0;
  std::string merge = "connected";
  bool descent = false;
  bool by_class = false;

  std::string c_values = kDefaultCValues;
  std::string l_values = kDefaultLValues;
  std::string seeds = "0";
  std::string metric = "macro";
  double train_fraction = 0.7;
  std::uint64_t split_seed = 0;
  bool tune = false;

  std::string centers;
  std::string counts;
  double stddev = 1.0;
  double outliers = 0.0;
  std::string name = "data";

  std::string corpus;
  std::string vectors;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
  void warn(const std::string& msg) const { err << "warning: " << msg << '\n'; }
};

bool given(const CLI::App* app, const std::string& name) {
  const auto* opt = app->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorKind::Usage, std::string(flag) + " is required");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Usage, "cannot write " + path);
  return f;
}

/// Writes to `path`, or to `fallback` when path is empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  auto f = open_output(path);
  body(f);
}

Activation parse_activation(const std::string& s) {
  if (s == "rbf" || s == "RBF") return Activation::RBF;
  if (s == "sigmoid" || s == "SIGMOID") return Activation::Sigmoid;
  throw Error(ErrorKind::Usage, "unknown activation '" + s + "' (rbf|sigmoid)");
}

std::optional<DensityMode> parse_density_mode(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "fixed-k") return DensityMode::FixedK;
  if (s == "cluster-adaptive") return DensityMode::ClusterAdaptive;
  throw Error(ErrorKind::Usage, "unknown density mode '" + s + "' (fixed-k|cluster-adaptive)");
}

QhoParams qho_params(const RunConfig& rc) {
  QhoParams p;
  p.grid_resolution = rc.grid;
  p.oscillators = rc.oscillators;
  p.probes = rc.probes;
  p.seed = rc.cluster_seed;
  p.descent = rc.descent;
  if (rc.merge == "connected") {
    p.merge = MergeRule::Connected;
  } else if (rc.merge == "same-cell") {
    p.merge = MergeRule::SameCell;
  } else {
    throw Error(ErrorKind::Usage, "unknown merge rule '" + rc.merge + "' (connected|same-cell)");
  }
  if (p.grid_resolution < 0 || p.oscillators < 0 || p.probes < 1)
    throw Error(ErrorKind::Usage, "--grid and --oscillators must be >= 0 and --probes >= 1");
  return p;
}

MembershipSettings membership_settings(const RunConfig& rc) {
  MembershipSettings s;
  s.theta = rc.theta;
  s.alpha = rc.alpha;
  s.k = rc.k;
  s.density_mode = parse_density_mode(rc.density_mode);
  s.qho = qho_params(rc);
  MembershipConfig{s.theta, s.alpha, s.k, DensityMode::FixedK}.validate();
  return s;
}

TrainConfig train_config(const RunConfig& rc, Variant v) {
  TrainConfig tc;
  tc.C = rc.C;
  tc.L = rc.L;
  tc.kind = parse_activation(rc.activation);
  tc.solver = solver_for(v);
  tc.seed = rc.seed;
  tc.validate();
  return tc;
}

/// Loads the dataset and, with --normalize, fits min-max scaling on it.
std::pair<Dataset, std::optional<FeatureScaling>> load_training_data(const RunConfig& rc) {
  require(rc.data, "--data");
  Dataset ds = load_csv(rc.data, rc.header);
  if (!rc.normalize) return {std::move(ds), std::nullopt};
  auto scaling = FeatureScaling::fit(ds);
  return {scaling.apply(ds), scaling};
}

void warn_unused_flags(const CLI::App* app, Variant v, const Io& io) {
  const std::vector<std::string> density_flags = {"--k", "--density-mode", "--grid", "--oscillators",
                                                  "--probes", "--cluster-seed", "--merge", "--descent"};
  auto warn_each = [&](const std::vector<std::string>& flags) {
    for (const auto& f : flags)
      if (given(app, f)) io.warn(f + " is unused by " + variant_name(v));
  };
  if (!is_fuzzy(v)) {
    warn_each({"--alpha", "--theta"});
    warn_each(density_flags);
    if (v == Variant::ELM) warn_each({"--C"});
    return;
  }
  if (v == Variant::DI_FELM) {
    warn_each(density_flags);
    if (given(app, "--alpha")) io.warn("--alpha is fixed to 1 by DI-FELM");
  }
  if (v == Variant::DE_FELM) {
    warn_each({"--theta"});
    if (given(app, "--alpha")) io.warn("--alpha is fixed to 0 by DE-FELM");
  }
}

/// Relabels `ds` so its class indices follow the model's class names.
Dataset align_to_model(const Dataset& ds, const FelmModel& model) {
  if (ds.dim() != model.hidden.dim())
    throw Error(ErrorKind::Shape, "dataset has dimension " + std::to_string(ds.dim()) +
                                      ", model expects " + std::to_string(model.hidden.dim()));
  if (model.class_names.empty()) return ds;
  std::unordered_map<std::string, ClassIndex> index;
  for (std::size_t c = 0; c < model.class_names.size(); ++c) index.emplace(model.class_names[c], c);
  std::vector<ClassIndex> labels(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto name = ds.class_name(ds.label(i));
    const auto it = index.find(name);
    if (it == index.end()) throw Error(ErrorKind::Config, "class '" + name + "' is unknown to the model");
    labels[i] = it->second;
  }
  return Dataset(ds.features(), std::move(labels), model.num_classes, model.class_names);
}

/// Feature rows for prediction: d columns, optionally followed by a label.
Matrix load_feature_rows(const std::string& path, bool header, std::size_t d) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::EmptyInput, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool skip = header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (skip) {
      skip = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != d && fields.size() != d + 1)
      throw ParseError(line_no, "expected " + std::to_string(d) + " features");
    std::vector<double> row;
    for (std::size_t j = 0; j < d; ++j) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(fields[j], &used));
      } catch (const std::exception&) {
        throw ParseError(line_no, "non-numeric feature '" + fields[j] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "no rows to predict");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

BlobSpec blob_spec(const RunConfig& rc) {
  require(rc.centers, "--centers");
  require(rc.counts, "--counts");
  BlobSpec b;
  for (const auto& p : parse_point_list(rc.centers))
    b.centers.push_back(Eigen::Map<const Vector>(p.data(), static_cast<Eigen::Index>(p.size())));
  for (double c : parse_real_list(rc.counts)) {
    if (c < 0 || c != std::floor(c)) throw Error(ErrorKind::Usage, "--counts must be non-negative integers");
    b.counts.push_back(static_cast<std::size_t>(c));
  }
  b.stddev = rc.stddev;
  b.outlier_fraction = rc.outliers;
  return b;
}

GridSearchSpec grid_spec(const RunConfig& rc) {
  GridSearchSpec spec;
  spec.c_values = parse_real_list(rc.c_values);
  for (double l : parse_real_list(rc.l_values)) {
    if (l < 1 || l != std::floor(l)) throw Error(ErrorKind::Usage, "--l-values must be positive integers");
    spec.l_values.push_back(static_cast<std::size_t>(l));
  }
  spec.seeds = parse_seed_list(rc.seeds);
  if (rc.metric == "macro") {
    spec.selection_metric = SelectionMetric::MacroF1;
  } else if (rc.metric == "micro") {
    spec.selection_metric = SelectionMetric::MicroF1;
  } else {
    throw Error(ErrorKind::Usage, "unknown metric '" + rc.metric + "' (micro|macro)");
  }
  spec.kind = parse_activation(rc.activation);
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------

int cmd_train(const RunConfig& rc, const CLI::App* app, const Io& io) {
  const auto start = std::chrono::steady_clock::now();
  const Variant v = parse_variant(rc.variant);
  auto tc = train_config(rc, v);
  const auto ms = membership_settings(rc);
  require(rc.model, "--model");
  warn_unused_flags(app, v, io);

  auto [ds, scaling] = load_training_data(rc);
  const auto mem = compute_memberships(ds, v, ms);
  auto model = train_variant(ds, v, tc, mem.s);
  model.scaling = scaling;
  save_model(model, rc.model);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  emit(rc.report, io.out, [&](std::ostream& o) {
    o << "variant: " << variant_name(v) << '\n'
      << "N: " << ds.size() << '\n'
      << "d: " << ds.dim() << '\n'
      << "m: " << ds.num_classes() << '\n'
      << "C: " << format_double(tc.C) << '\n'
      << "L: " << tc.L << '\n'
      << "activation: " << (tc.kind == Activation::RBF ? "rbf" : "sigmoid") << '\n'
      << "seed: " << tc.seed << '\n';
    if (is_fuzzy(v)) {
      const auto mc = resolve_membership_config(v, ms);
      o << "theta: " << format_double(mc.theta) << '\n' << "alpha: " << format_double(mc.alpha) << '\n';
      if (mc.alpha < 1.0)
        o << "density_mode: " << (mc.density_mode == DensityMode::FixedK ? "fixed-k" : "cluster-adaptive") << '\n';
      if (mem.clusters) o << "cluster_count: " << mem.clusters->count << '\n';
    }
    o << "normalized: " << (scaling ? "yes" : "no") << '\n'
      << "residual_norm: " << format_double(model.residual_norm.value_or(0.0)) << '\n';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", seconds);
    o << "wall_time_s: " << buf << '\n';
  });
  return 0;
}

int cmd_predict(const RunConfig& rc, const Io& io) {
  require(rc.model, "--model");
  require(rc.data, "--data");
  const auto model = load_model(rc.model);
  const Matrix x = load_feature_rows(rc.data, rc.header, model.hidden.dim());
  emit(rc.out, io.out, [&](std::ostream& o) {
    o << "sample_index,label";
    for (std::size_t c = 0; c < model.num_classes; ++c) o << ",score_" << c;
    o << '\n';
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const auto p = predict(model, x.row(i).transpose());
      o << i << ',' << (p.label < model.class_names.size() ? model.class_names[p.label] : std::to_string(p.label));
      for (Eigen::Index c = 0; c < p.scores.size(); ++c) o << ',' << format_double(p.scores(c));
      o << '\n';
    }
  });
  return 0;
}

int cmd_eval(const RunConfig& rc, const Io& io) {
  require(rc.model, "--model");
  require(rc.data, "--data");
  const auto model = load_model(rc.model);
  const auto ds = align_to_model(load_csv(rc.data, rc.header), model);
  const auto rep = evaluate(model, ds);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "micro_f1: %.6f\nmacro_f1: %.6f\n", rep.micro_f1, rep.macro_f1);
  io.out << buf;
  if (!rc.out.empty()) {
    auto f = open_output(rc.out);
    write_per_class_csv(rep, ds, f);
  }
  return 0;
}

int cmd_cluster(const RunConfig& rc, const Io& io) {
  const auto params = qho_params(rc);
  auto [ds, scaling] = load_training_data(rc);
  const auto r = rc.by_class ? qho_cluster_by_class(ds, params) : qho_cluster(ds, params);
  if (r.oscillators_clamped) io.warn("oscillator count clamped to the sample count");
  io.out << "count=" << r.count << " centers=";
  for (std::size_t k = 0; k < r.centers.size(); ++k)
    io.out << (k ? ";" : "") << format_double(r.centers[k].x) << ',' << format_double(r.centers[k].y);
  io.out << '\n';
  emit(rc.out, io.out, [&](std::ostream& o) {
    o << "sample_index,cluster\n";
    for (std::size_t i = 0; i < r.assignment.size(); ++i) o << i << ',' << r.assignment[i] << '\n';
  });
  return 0;
}

int cmd_membership(const RunConfig& rc, const CLI::App* app, const Io& io) {
  const Variant v = parse_variant(rc.variant);
  const auto ms = membership_settings(rc);
  warn_unused_flags(app, v, io);
  auto [ds, scaling] = load_training_data(rc);
  const auto mem = compute_memberships(ds, v, ms);
  emit(rc.out, io.out, [&](std::ostream& o) {
    o << "sample_index,class,mu,omega,s\n";
    for (std::size_t i = 0; i < ds.size(); ++i)
      o << i << ',' << ds.class_name(ds.label(i)) << ',' << format_double(mem.mu[i]) << ','
        << format_double(mem.omega[i]) << ',' << format_double(mem.s[i]) << '\n';
  });
  return 0;
}

int cmd_gridsearch(const RunConfig& rc, const Io& io) {
  const Variant v = parse_variant(rc.variant);
  const auto spec = grid_spec(rc);
  auto ms = membership_settings(rc);
  require(rc.data, "--data");
  const auto full = load_csv(rc.data, rc.header);
  auto [train, val] = split(full, {rc.train_fraction, rc.split_seed, true});
  if (rc.normalize) {
    const auto scaling = FeatureScaling::fit(train);
    train = scaling.apply(train);
    val = scaling.apply(val);
  }
  const auto r = grid_search(train, val, spec, ms, v);
  io.out << format_grid_table(r);
  const auto& best = r.table[r.best_index];
  io.out << "best: C=" << format_double(best.C) << " L=" << best.L << '\n';
  if (!rc.out.empty()) {
    auto f = open_output(rc.out);
    write_grid_csv(r, f);
  }
  return 0;
}

int cmd_bench(const RunConfig& rc, const CLI::App* app, const Io& io) {
  BenchConfig cfg;
  if (!rc.data.empty()) {
    cfg.data = load_csv(rc.data, rc.header);
  } else {
    cfg.blobs = blob_spec(rc);
  }
  cfg.dataset_name = rc.name;
  cfg.seeds = parse_seed_list(rc.seeds);
  cfg.train_fraction = rc.train_fraction;
  cfg.normalize = rc.normalize;
  cfg.C = rc.C;
  cfg.L = rc.L;
  cfg.kind = parse_activation(rc.activation);
  cfg.membership = membership_settings(rc);
  TrainConfig{cfg.C, cfg.L}.validate();
  if (rc.tune) {
    auto spec = grid_spec(rc);
    spec.seeds = {cfg.seeds.front()};
    cfg.tune = spec;
    if (given(app, "--C") || given(app, "--L")) io.warn("--C/--L are replaced by the --tune search");
  }
  const auto r = run_bench(cfg);
  io.out << "C=" << format_double(r.C) << " L=" << r.L << " seeds=" << cfg.seeds.size() << '\n';
  io.out << format_bench_table({r});
  if (!rc.out.empty()) {
    auto f = open_output(rc.out);
    write_bench_summary_csv(r, f);
  }
  if (!rc.rows_out.empty()) {
    auto f = open_output(rc.rows_out);
    write_bench_rows_csv(r, f);
  }
  return 0;
}

int cmd_synth(const RunConfig& rc, const Io& io) {
  const auto b = blob_spec(rc);
  const auto ds = synth_blobs(b.centers, b.counts, b.stddev, b.outlier_fraction, rc.seed);
  emit(rc.out, io.out, [&](std::ostream& o) { write_csv(ds, o, rc.header); });
  return 0;
}

int cmd_vectorize(const RunConfig& rc, const Io& io) {
  require(rc.corpus, "--corpus");
  require(rc.vectors, "--vectors");
  const auto table = load_word_vectors(rc.vectors);
  if (table.duplicates_skipped() > 0)
    io.warn(std::to_string(table.duplicates_skipped()) + " duplicate word vector rows skipped");
  const auto docs = load_corpus(rc.corpus);
  std::size_t oov = 0;
  for (const auto& d : docs)
    for (const auto& t : d.tokens) oov += table.find(t) == nullptr;
  const auto ds = corpus_to_dataset(docs, table);
  io.err << "vectorized " << ds.size() << " documents, d=" << ds.dim() << ", m=" << ds.num_classes()
         << ", oov_tokens=" << oov << '\n';
  emit(rc.out, io.out, [&](std::ostream& o) { write_csv(ds, o, rc.header); });
  return 0;
}

// ---------------------------------------------------------------------------

void add_data_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--data", rc.data, "Dataset CSV: numeric features then a label column");
  sub->add_flag("--header", rc.header, "Input CSV starts with a header row");
}

void add_normalize_option(CLI::App* sub, RunConfig& rc) {
  sub->add_flag("--normalize", rc.normalize, "Min-max scale every feature to [0,1] using the training data");
}

void add_train_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--variant", rc.variant, "ELM | RELM | DI-FELM | DE-FELM | HA-FELM")->capture_default_str();
  sub->add_option("--C", rc.C, "Regularization trade-off C")->capture_default_str();
  sub->add_option("--L", rc.L, "Hidden node count L")->capture_default_str();
  sub->add_option("--activation", rc.activation, "Hidden activation: rbf | sigmoid")->capture_default_str();
  sub->add_option("--seed", rc.seed, "Hidden layer seed")->capture_default_str();
}

void add_cluster_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--grid", rc.grid, "Grid resolution g (0 = max(2, ceil(sqrt(N))))")->capture_default_str();
  sub->add_option("--oscillators", rc.oscillators, "Oscillator count m (0 = min(20, N))")->capture_default_str();
  sub->add_option("--probes", rc.probes, "Gaussian probes per round")->capture_default_str();
  sub->add_option("--cluster-seed", rc.cluster_seed, "Clustering seed")->capture_default_str();
  sub->add_option("--merge", rc.merge, "Center merge rule: connected | same-cell")->capture_default_str();
  sub->add_flag("--descent", rc.descent, "Debug: accept moves toward lower density");
}

void add_membership_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--theta", rc.theta, "Distance membership stabilizer theta")->capture_default_str();
  sub->add_option("--alpha", rc.alpha, "Hybrid mix alpha (distance weight)")->capture_default_str();
  sub->add_option("--k", rc.k, "Neighbor count for fixed-k density")->capture_default_str();
  sub->add_option("--density-mode", rc.density_mode,
                  "fixed-k | cluster-adaptive (default: fixed-k for DE-FELM, cluster-adaptive for HA-FELM)");
  add_cluster_options(sub, rc);
}

void add_grid_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--c-values", rc.c_values, "Comma-separated C grid")->capture_default_str();
  sub->add_option("--l-values", rc.l_values, "Comma-separated L grid")->capture_default_str();
  sub->add_option("--seeds", rc.seeds, "Seeds, e.g. 0-29 or 1,5,9")->capture_default_str();
  sub->add_option("--metric", rc.metric, "Selection metric: micro | macro")->capture_default_str();
  sub->add_option("--train-fraction", rc.train_fraction, "Training share of the stratified split")->capture_default_str();
}

void add_synth_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--centers", rc.centers, "Blob centers, e.g. \"0,0;4,0\"");
  sub->add_option("--counts", rc.counts, "Samples per blob, e.g. \"200,50\"");
  sub->add_option("--stddev", rc.stddev, "Blob standard deviation")->capture_default_str();
  sub->add_option("--outliers", rc.outliers, "Fraction of labels flipped per class")->capture_default_str();
}

/// Appends "--key=value" for config entries the command line did not set.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& app) {
  std::string config_path;
  std::string subcommand;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
    if (subcommand.empty() && !a.empty() && a[0] != '-' && (i == 0 || args[i - 1] != "--config")) subcommand = a;
  }
  if (config_path.empty() || subcommand.empty()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(subcommand);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  auto merged = args;
  for (const auto& [key, value] : read_config_file(config_path)) {
    const std::string flag = "--" + key;
    const bool on_cli = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (on_cli) continue;
    const auto* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr) throw Error(ErrorKind::Usage, "config key '" + key + "' is not an option of " + subcommand);
    if (opt->get_expected_max() == 0) {
      if (value == "true" || value == "1" || value == "yes") merged.push_back(flag);
    } else {
      merged.push_back(flag + "=" + value);
    }
  }
  return merged;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Fuzzy extreme learning machine toolkit with hybrid adaptive memberships", "hafelm"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "Plain-text key=value defaults; command-line flags take precedence");

  auto* train = app.add_subcommand("train", "Train a model and write it to --model");
  add_data_options(train, rc);
  add_normalize_option(train, rc);
  add_train_options(train, rc);
  add_membership_options(train, rc);
  train->add_option("--model", rc.model, "Output model file");
  train->add_option("--report", rc.report, "Write the training report here instead of stdout");

  auto* predict_cmd = app.add_subcommand("predict", "Predict labels for feature rows");
  add_data_options(predict_cmd, rc);
  predict_cmd->add_option("--model", rc.model, "Model file");
  predict_cmd->add_option("--out", rc.out, "Output CSV (default stdout)");

  auto* eval = app.add_subcommand("eval", "Micro/macro F1 of a model on a labeled dataset");
  add_data_options(eval, rc);
  eval->add_option("--model", rc.model, "Model file");
  eval->add_option("--out", rc.out, "Per-class CSV output");

  auto* cluster = app.add_subcommand("cluster", "Run CA-QHO clustering");
  add_data_options(cluster, rc);
  add_normalize_option(cluster, rc);
  add_cluster_options(cluster, rc);
  cluster->add_flag("--by-class", rc.by_class, "Cluster each class separately");
  cluster->add_option("--out", rc.out, "Assignment CSV output (default stdout)");

  auto* membership = app.add_subcommand("membership", "Dump mu, omega and s per sample");
  add_data_options(membership, rc);
  add_normalize_option(membership, rc);
  membership->add_option("--variant", rc.variant, "Membership variant")->capture_default_str();
  add_membership_options(membership, rc);
  membership->add_option("--out", rc.out, "Output CSV (default stdout)");

  auto* gridsearch = app.add_subcommand("gridsearch", "Select (C, L) on a stratified validation split");
  add_data_options(gridsearch, rc);
  add_normalize_option(gridsearch, rc);
  gridsearch->add_option("--variant", rc.variant, "Variant to tune")->capture_default_str();
  gridsearch->add_option("--activation", rc.activation, "Hidden activation: rbf | sigmoid")->capture_default_str();
  gridsearch->add_option("--split-seed", rc.split_seed, "Seed of the validation split")->capture_default_str();
  add_grid_options(gridsearch, rc);
  add_membership_options(gridsearch, rc);
  gridsearch->add_option("--out", rc.out, "Results CSV output");

  auto* bench = app.add_subcommand("bench", "Paired comparison of all variants over seeds");
  add_data_options(bench, rc);
  add_normalize_option(bench, rc);
  add_synth_options(bench, rc);
  bench->add_option("--name", rc.name, "Dataset name for the table")->capture_default_str();
  bench->add_option("--C", rc.C, "Regularization trade-off C")->capture_default_str();
  bench->add_option("--L", rc.L, "Hidden node count L")->capture_default_str();
  bench->add_option("--activation", rc.activation, "Hidden activation: rbf | sigmoid")->capture_default_str();
  bench->add_flag("--tune", rc.tune, "Pick C and L by one grid search on the first seed");
  add_grid_options(bench, rc);
  add_membership_options(bench, rc);
  bench->add_option("--out", rc.out, "Summary CSV output");
  bench->add_option("--rows-out", rc.rows_out, "Per-seed CSV output");

  auto* synth = app.add_subcommand("synth", "Write a synthetic Gaussian-blob dataset");
  add_synth_options(synth, rc);
  synth->add_option("--seed", rc.seed, "Generator seed")->capture_default_str();
  synth->add_flag("--header", rc.header, "Write a header row");
  synth->add_option("--out", rc.out, "Output CSV (default stdout)");

  auto* vectorize = app.add_subcommand("vectorize", "Mean-pool word vectors into a dataset CSV");
  vectorize->add_option("--corpus", rc.corpus, "Corpus file: label<TAB>text per line");
  vectorize->add_option("--vectors", rc.vectors, "Word vectors in text format");
  vectorize->add_flag("--header", rc.header, "Write a header row");
  vectorize->add_option("--out", rc.out, "Output CSV (default stdout)");

  const Io io{out, err};
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(args, app);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }
    if (train->parsed()) return cmd_train(rc, train, io);
    if (predict_cmd->parsed()) return cmd_predict(rc, io);
    if (eval->parsed()) return cmd_eval(rc, io);
    if (cluster->parsed()) return cmd_cluster(rc, io);
    if (membership->parsed()) return cmd_membership(rc, membership, io);
    if (gridsearch->parsed()) return cmd_gridsearch(rc, io);
    if (bench->parsed()) return cmd_bench(rc, bench, io);
    if (synth->parsed()) return cmd_synth(rc, io);
    if (vectorize->parsed()) return cmd_vectorize(rc, io);
    return 2;
  } catch (const Error& e) {
    err << "error[" << error_tag(e.kind()) << "] " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error[internal] " << e.what() << '\n';
    return 4;
  }
}

}  // namespace hafelm::cli
