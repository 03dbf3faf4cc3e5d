#include "hafelm/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "hafelm/error.hpp"

namespace hafelm {

std::vector<double> BenchResult::macro_scores(Variant v) const {
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.variant == v) out.push_back(r.macro_f1);
  return out;
}

const BenchSummary& BenchResult::summary_for(Variant v) const {
  for (const auto& s : summary)
    if (s.variant == v) return s;
  throw Error(ErrorKind::Config, std::string("variant ") + variant_name(v) + " was not benchmarked");
}

namespace {

Dataset data_for_seed(const BenchConfig& cfg, std::uint64_t seed) {
  if (cfg.data) return *cfg.data;
  const auto& b = *cfg.blobs;
  return synth_blobs(b.centers, b.counts, b.stddev, b.outlier_fraction, seed);
}

std::pair<Dataset, Dataset> prepare(const BenchConfig& cfg, std::uint64_t seed) {
  auto [train, test] = split(data_for_seed(cfg, seed), {cfg.train_fraction, seed, true});
  if (!cfg.normalize) return {std::move(train), std::move(test)};
  const auto scaling = FeatureScaling::fit(train);
  return {scaling.apply(train), scaling.apply(test)};
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
  if (cfg.data.has_value() == cfg.blobs.has_value())
    throw Error(ErrorKind::Usage, "bench needs exactly one of a dataset or a blob generator");
  if (cfg.seeds.empty() || cfg.variants.empty())
    throw Error(ErrorKind::Config, "bench needs at least one seed and one variant");

  BenchResult result;
  result.dataset_name = cfg.dataset_name;
  result.C = cfg.C;
  result.L = cfg.L;

  if (cfg.tune) {
    const auto [train, test] = prepare(cfg, cfg.seeds.front());
    const auto [inner_train, inner_val] = split(train, {0.7, cfg.seeds.front(), true});
    auto spec = *cfg.tune;
    spec.kind = cfg.kind;
    MembershipSettings ms = cfg.membership;
    ms.qho.seed = cfg.seeds.front();
    const auto gs = grid_search(inner_train, inner_val, spec, ms, cfg.tune_variant);
    result.C = gs.best.C;
    result.L = gs.best.L;
  }

  for (auto seed : cfg.seeds) {
    const auto [train, test] = prepare(cfg, seed);
    MembershipSettings ms = cfg.membership;
    ms.qho.seed = seed;
    for (auto v : cfg.variants) {
      const auto mem = compute_memberships(train, v, ms);
      TrainConfig tc;
      tc.C = result.C;
      tc.L = result.L;
      tc.kind = cfg.kind;
      tc.seed = seed;
      const auto model = train_variant(train, v, tc, mem.s);
      const auto rep = evaluate(model, test);
      result.rows.push_back({v, seed, rep.micro_f1, rep.macro_f1, mem.clusters ? mem.clusters->count : 0});
    }
  }

  for (auto v : cfg.variants) {
    BenchSummary s{v, 0.0, 0.0};
    std::size_t n = 0;
    for (const auto& r : result.rows) {
      if (r.variant != v) continue;
      s.mean_micro += r.micro_f1;
      s.mean_macro += r.macro_f1;
      ++n;
    }
    s.mean_micro /= static_cast<double>(n);
    s.mean_macro /= static_cast<double>(n);
    result.summary.push_back(s);
  }
  return result;
}

void write_bench_rows_csv(const BenchResult& r, std::ostream& out) {
  out << "variant,seed,micro_f1,macro_f1,clusters\n";
  char buf[160];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%llu,%.6f,%.6f,%zu\n", variant_name(row.variant),
                  static_cast<unsigned long long>(row.seed), row.micro_f1, row.macro_f1,
                  row.cluster_count);
    out << buf;
  }
}

void write_bench_summary_csv(const BenchResult& r, std::ostream& out) {
  out << "method,mfl,MF1\n";
  char buf[160];
  for (const auto& s : r.summary) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f\n", variant_name(s.variant), s.mean_micro, s.mean_macro);
    out << buf;
  }
}

std::string format_bench_table(const std::vector<BenchResult>& results) {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-10s", "method");
  out << buf;
  for (const auto& r : results) {
    std::snprintf(buf, sizeof(buf), " %17s", r.dataset_name.c_str());
    out << buf;
  }
  out << '\n';
  std::snprintf(buf, sizeof(buf), "%-10s", "");
  out << buf;
  for (std::size_t i = 0; i < results.size(); ++i) out << "       mfl     MF1";
  out << '\n';
  if (results.empty()) return out.str();
  for (const auto& s : results.front().summary) {
    std::snprintf(buf, sizeof(buf), "%-10s", variant_name(s.variant));
    out << buf;
    for (const auto& r : results) {
      const auto& rs = r.summary_for(s.variant);
      std::snprintf(buf, sizeof(buf), "   %7.3f %7.3f", rs.mean_micro, rs.mean_macro);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

double sign_test_p_value(std::size_t wins, std::size_t losses) {
  const std::size_t n = wins + losses;
  if (n == 0) return 1.0;
  // Sum C(n, k) / 2^n for k >= wins in log space.
  double p = 0.0;
  for (std::size_t k = wins; k <= n; ++k) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                            static_cast<double>(n) * std::log(2.0);
    p += std::exp(log_term);
  }
  return std::min(1.0, p);
}

}  // namespace hafelm
