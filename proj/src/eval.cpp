#include "hafelm/eval.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include "hafelm/error.hpp"

namespace hafelm {

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::size_t ConfusionMatrix::correct() const {
  std::size_t t = 0;
  for (std::size_t c = 0; c < m_; ++c) t += at(c, c);
  return t;
}

ConfusionMatrix confusion(const std::vector<ClassIndex>& truth, const std::vector<ClassIndex>& pred,
                          std::size_t m) {
  if (truth.size() != pred.size())
    throw Error(ErrorKind::Alignment, "truth and prediction lengths differ");
  if (truth.empty()) throw Error(ErrorKind::EmptyInput, "no labels to compare");
  if (m < 1) throw Error(ErrorKind::Config, "class count must be >= 1");
  ConfusionMatrix cm(m);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= m || pred[i] >= m) throw Error(ErrorKind::Config, "label out of range");
    cm.add(truth[i], pred[i]);
  }
  return cm;
}

namespace {
double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }
}  // namespace

F1Report f1_report(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorKind::EmptyInput, "confusion matrix is empty");
  const auto m = cm.num_classes();
  F1Report r;
  std::size_t tp_all = 0, fp_all = 0, fn_all = 0;
  double macro_sum = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t tp = cm.at(c, c);
    std::size_t row = 0, col = 0;
    for (std::size_t k = 0; k < m; ++k) {
      row += cm.at(c, k);
      col += cm.at(k, c);
    }
    ClassScore s;
    s.precision = ratio(tp, col);
    s.recall = ratio(tp, row);
    s.f1 = harmonic(s.precision, s.recall);
    s.support = row;
    r.per_class.push_back(s);
    r.per_class_f1.push_back(s.f1);
    macro_sum += s.f1;
    tp_all += tp;
    fp_all += col - tp;
    fn_all += row - tp;
  }
  r.micro_f1 = harmonic(ratio(tp_all, tp_all + fp_all), ratio(tp_all, tp_all + fn_all));
  r.macro_f1 = macro_sum / static_cast<double>(m);
  return r;
}

F1Report evaluate(const FelmModel& model, const Dataset& ds) {
  if (ds.num_classes() > model.num_classes)
    throw Error(ErrorKind::Shape, "dataset has more classes than the model");
  return f1_report(confusion(ds.labels(), predict_labels(model, ds), model.num_classes));
}

void write_per_class_csv(const F1Report& report, const Dataset& ds, std::ostream& out) {
  out << "class,precision,recall,f1,support\n";
  char buf[160];
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& s = report.per_class[c];
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,%zu\n", s.precision, s.recall, s.f1, s.support);
    out << ds.class_name(c) << buf;
  }
}

GridSearchSpec GridSearchSpec::default_grid() {
  GridSearchSpec spec;
  for (int e = 0; e >= -8; --e) spec.c_values.push_back(std::pow(10.0, e));
  for (std::size_t l = 100; l <= 1000; l += 100) spec.l_values.push_back(l);
  return spec;
}

void GridSearchSpec::validate() const {
  if (c_values.empty() || l_values.empty() || seeds.empty())
    throw Error(ErrorKind::Config, "grid search needs non-empty C, L and seed lists");
  for (double c : c_values)
    if (!(c > 0.0)) throw Error(ErrorKind::Config, "grid C values must be > 0");
  for (auto l : l_values)
    if (l < 1) throw Error(ErrorKind::Config, "grid L values must be >= 1");
}

double GridSearchResult::metric(const GridCellResult& cell) const {
  return selection_metric == SelectionMetric::MicroF1 ? cell.mean_micro : cell.mean_macro;
}

std::size_t select_best_cell(const std::vector<GridCellResult>& table, SelectionMetric metric) {
  auto value = [metric](const GridCellResult& c) {
    return metric == SelectionMetric::MicroF1 ? c.mean_micro : c.mean_macro;
  };
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto& cell = table[k];
    if (!cell.ok) continue;
    if (!best) {
      best = k;
      continue;
    }
    const auto& b = table[*best];
    const double a = value(cell), v = value(b);
    if (a > v || (a == v && (cell.L < b.L || (cell.L == b.L && cell.C > b.C)))) best = k;
  }
  if (!best) throw Error(ErrorKind::Search, "every grid-search cell failed");
  return *best;
}

GridSearchResult grid_search(const Dataset& train, const Dataset& val, const GridSearchSpec& spec,
                             const MembershipSettings& membership, Variant variant) {
  spec.validate();
  const auto memberships = compute_memberships(train, variant, membership);
  const Matrix T = encode_targets(train);
  const auto bounds = FeatureBounds::of(train);
  const auto m = train.num_classes();

  GridSearchResult result;
  result.selection_metric = spec.selection_metric;
  const auto nc = spec.c_values.size();
  const auto nl = spec.l_values.size();
  result.table.resize(nc * nl);
  std::vector<std::size_t> successes(nc * nl, 0);
  for (std::size_t ci = 0; ci < nc; ++ci)
    for (std::size_t li = 0; li < nl; ++li) {
      auto& cell = result.table[ci * nl + li];
      cell.C = spec.c_values[ci];
      cell.L = spec.l_values[li];
    }

  // Hidden activations depend on (L, seed) only, so they are shared
  // across every C value.
  for (std::size_t li = 0; li < nl; ++li) {
    for (auto seed : spec.seeds) {
      TrainConfig cfg;
      cfg.L = spec.l_values[li];
      cfg.kind = spec.kind;
      cfg.seed = seed;
      cfg.solver = solver_for(variant);
      Matrix H_train, H_val;
      FelmModel model;
      try {
        model.hidden = init_hidden_layer(train.dim(), cfg, bounds);
        H_train = hidden_matrix(model.hidden, train);
        H_val = hidden_matrix(model.hidden, val);
      } catch (const Error& e) {
        for (std::size_t ci = 0; ci < nc; ++ci) {
          result.table[ci * nl + li].ok = false;
          result.table[ci * nl + li].failure = e.what();
        }
        continue;
      }
      for (std::size_t ci = 0; ci < nc; ++ci) {
        auto& cell = result.table[ci * nl + li];
        if (!cell.ok) continue;
        try {
          const Matrix beta = cfg.solver == Solver::ELM
                                  ? solve_output_weights_pinv(H_train, T)
                                  : solve_output_weights(H_train, T, memberships.s, spec.c_values[ci]);
          const Matrix scores = H_val * beta;
          std::vector<ClassIndex> pred(val.size());
          for (Eigen::Index i = 0; i < scores.rows(); ++i) {
            Eigen::Index best = 0;
            for (Eigen::Index c = 1; c < scores.cols(); ++c)
              if (scores(i, c) > scores(i, best)) best = c;
            pred[static_cast<std::size_t>(i)] = static_cast<ClassIndex>(best);
          }
          const auto rep = f1_report(confusion(val.labels(), pred, m));
          cell.mean_micro += rep.micro_f1;
          cell.mean_macro += rep.macro_f1;
          ++successes[ci * nl + li];
        } catch (const Error& e) {
          cell.ok = false;
          cell.failure = e.what();
        }
      }
    }
  }

  for (std::size_t k = 0; k < result.table.size(); ++k) {
    auto& cell = result.table[k];
    if (!cell.ok) {
      cell.mean_micro = cell.mean_macro = 0.0;
      continue;
    }
    cell.mean_micro /= static_cast<double>(successes[k]);
    cell.mean_macro /= static_cast<double>(successes[k]);
  }
  result.best_index = select_best_cell(result.table, spec.selection_metric);

  const auto& best = result.table[result.best_index];
  result.best.C = best.C;
  result.best.L = best.L;
  result.best.kind = spec.kind;
  result.best.solver = solver_for(variant);
  result.best.seed = spec.seeds.front();
  return result;
}

void write_grid_csv(const GridSearchResult& result, std::ostream& out) {
  out << "C,L,seed_mean_micro,seed_mean_macro,status\n";
  char buf[160];
  for (const auto& cell : result.table) {
    std::snprintf(buf, sizeof(buf), ",%zu,%.6f,%.6f,%s\n", cell.L, cell.mean_micro, cell.mean_macro,
                  cell.ok ? "ok" : "failed");
    out << format_double(cell.C) << buf;
  }
}

std::string format_grid_table(const GridSearchResult& result) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-10s %6s %10s %10s  %s\n", "C", "L", "mfl", "MF1", "status");
  out << buf;
  for (std::size_t k = 0; k < result.table.size(); ++k) {
    const auto& cell = result.table[k];
    std::snprintf(buf, sizeof(buf), "%-10g %6zu %10.4f %10.4f  %s%s\n", cell.C, cell.L,
                  cell.mean_micro, cell.mean_macro, cell.ok ? "ok" : "failed",
                  k == result.best_index ? "  *" : "");
    out << buf;
  }
  return out.str();
}

}  // namespace hafelm
