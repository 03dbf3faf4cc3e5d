#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hafelm/dataset.hpp"
#include "hafelm/eval.hpp"
#include "hafelm/variant.hpp"

namespace hafelm {

struct BlobSpec {
  std::vector<Vector> centers;
  std::vector<std::size_t> counts;
  double stddev = 1.0;
  double outlier_fraction = 0.0;
};

struct BenchConfig {
  /// Exactly one of `data` or `blobs` is set. Blobs are redrawn per seed.
  std::optional<Dataset> data;
  std::optional<BlobSpec> blobs;
  std::string dataset_name = "data";

  std::vector<std::uint64_t> seeds{0};
  double train_fraction = 0.7;
  bool normalize = true;

  double C = 1.0;
  std::size_t L = 100;
  Activation kind = Activation::RBF;

  /// When set, (C, L) come from one grid search on an inner split of the
  /// first seed's training data.
  std::optional<GridSearchSpec> tune;
  Variant tune_variant = Variant::HA_FELM;

  MembershipSettings membership;
  std::vector<Variant> variants = all_variants();
};

struct BenchRow {
  Variant variant = Variant::ELM;
  std::uint64_t seed = 0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::size_t cluster_count = 0;
};

struct BenchSummary {
  Variant variant = Variant::ELM;
  double mean_micro = 0.0;
  double mean_macro = 0.0;
};

struct BenchResult {
  std::string dataset_name;
  double C = 0.0;
  std::size_t L = 0;
  /// Seed-major: every variant for seed 0, then for seed 1, ...
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summary;

  std::vector<double> macro_scores(Variant v) const;
  const BenchSummary& summary_for(Variant v) const;
};

/// For each seed: draw or reuse data, stratified split, optional min-max
/// scaling fitted on the training side, then train every variant with the
/// same hidden-layer seed so rows within a seed are paired.
BenchResult run_bench(const BenchConfig& cfg);

/// variant,seed,micro_f1,macro_f1,clusters
void write_bench_rows_csv(const BenchResult& r, std::ostream& out);
/// method,mfl,MF1 over seed means.
void write_bench_summary_csv(const BenchResult& r, std::ostream& out);
/// Method rows with an (mfl, MF1) column pair per dataset.
std::string format_bench_table(const std::vector<BenchResult>& results);

/// One-sided exact binomial sign test: P(X >= wins) for X ~ Bin(wins + losses, 1/2).
double sign_test_p_value(std::size_t wins, std::size_t losses);

}  // namespace hafelm
