#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hafelm/dataset.hpp"
#include "hafelm/elm.hpp"
#include "hafelm/variant.hpp"

namespace hafelm {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t m) : m_(m), counts_(m * m, 0) {}

  std::size_t num_classes() const { return m_; }
  std::size_t at(ClassIndex truth, ClassIndex pred) const { return counts_[truth * m_ + pred]; }
  void add(ClassIndex truth, ClassIndex pred) { ++counts_[truth * m_ + pred]; }
  std::size_t total() const;
  std::size_t correct() const;

 private:
  std::size_t m_;
  std::vector<std::size_t> counts_;
};

ConfusionMatrix confusion(const std::vector<ClassIndex>& truth, const std::vector<ClassIndex>& pred,
                          std::size_t m);

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct F1Report {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::vector<double> per_class_f1;
  std::vector<ClassScore> per_class;
};

/// 0/0 precision or recall counts as 0; macro-F1 averages over all m
/// classes, including ones absent from both truth and predictions.
F1Report f1_report(const ConfusionMatrix& cm);

F1Report evaluate(const FelmModel& model, const Dataset& ds);

/// class,precision,recall,f1,support with one row per class.
void write_per_class_csv(const F1Report& report, const Dataset& ds, std::ostream& out);

enum class SelectionMetric { MicroF1, MacroF1 };

struct GridSearchSpec {
  std::vector<double> c_values;
  std::vector<std::size_t> l_values;
  std::vector<std::uint64_t> seeds{0};
  SelectionMetric selection_metric = SelectionMetric::MacroF1;
  Activation kind = Activation::RBF;

  /// C in {10^0, ..., 10^-8}, L in {100, 200, ..., 1000}.
  static GridSearchSpec default_grid();
  void validate() const;
};

struct GridCellResult {
  double C = 0.0;
  std::size_t L = 0;
  double mean_micro = 0.0;
  double mean_macro = 0.0;
  bool ok = true;
  std::string failure;
};

struct GridSearchResult {
  TrainConfig best;
  std::size_t best_index = 0;
  /// Cells in c_values-major, l_values-minor order.
  std::vector<GridCellResult> table;

  double metric(const GridCellResult& cell) const;
  SelectionMetric selection_metric = SelectionMetric::MacroF1;
};

/// Index of the best successful cell: highest metric, then smaller L, then
/// larger C. Throws a search error when no cell succeeded.
std::size_t select_best_cell(const std::vector<GridCellResult>& table, SelectionMetric metric);

/// Trains one model per (C, L, seed), scores it on `val` and averages the
/// selection metric over seeds. Best cell: highest metric, then smaller L,
/// then larger C. Failed cells are recorded and skipped.
GridSearchResult grid_search(const Dataset& train, const Dataset& val, const GridSearchSpec& spec,
                             const MembershipSettings& membership, Variant variant);

void write_grid_csv(const GridSearchResult& result, std::ostream& out);
std::string format_grid_table(const GridSearchResult& result);

}  // namespace hafelm
