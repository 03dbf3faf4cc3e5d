#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hafelm/dataset.hpp"
#include "hafelm/membership.hpp"

namespace hafelm {

enum class Activation { RBF, Sigmoid };
enum class Solver { ELM, RELM, FELM };

/// Random, untrained hidden layer. For RBF nodes `weights` holds the
/// centers a_l and `params` the impact factors b_l; for sigmoid nodes they
/// hold the input weight rows and biases.
struct HiddenLayer {
  Activation kind = Activation::RBF;
  Matrix weights;  ///< L x d
  Vector params;   ///< L
  std::uint64_t seed = 0;

  std::size_t nodes() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(weights.cols()); }
};

struct TrainConfig {
  double C = 1.0;
  std::size_t L = 100;
  Activation kind = Activation::RBF;
  Solver solver = Solver::FELM;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FelmModel {
  HiddenLayer hidden;
  Matrix beta;  ///< L x m
  std::size_t num_classes = 0;
  std::vector<std::string> class_names;
  std::optional<double> residual_norm;
  /// Applied to raw inputs before the hidden layer when present.
  std::optional<FeatureScaling> scaling;
};

/// Feature bounds per dimension, used to place RBF centers.
struct FeatureBounds {
  Vector lo;
  Vector hi;
  static FeatureBounds of(const Dataset& ds);
};

HiddenLayer init_hidden_layer(std::size_t d, const TrainConfig& cfg, const FeatureBounds& bounds);

/// N x L activations: exp(-b_l * ||x_i - a_l||^2) for RBF nodes,
/// 1 / (1 + exp(-(w_l . x_i + b_l))) for sigmoid nodes.
Matrix hidden_matrix(const HiddenLayer& layer, const Matrix& features);
Matrix hidden_matrix(const HiddenLayer& layer, const Dataset& ds);

/// +1 at the true class, -1 elsewhere.
Matrix encode_targets(const Dataset& ds);

/// beta = H^T (S/C + H H^T)^{-1} T with S = diag(1/s_i): the N x N form.
Matrix solve_output_weights_dual(const Matrix& H, const Matrix& T, const MembershipVector& s,
                                 double C);

/// beta = (I/C + H^T diag(s) H)^{-1} H^T diag(s) T: the L x L form,
/// algebraically identical to the dual solve.
Matrix solve_output_weights_primal(const Matrix& H, const Matrix& T, const MembershipVector& s,
                                   double C);

/// Picks the cheaper of the two forms (primal when L < N).
Matrix solve_output_weights(const Matrix& H, const Matrix& T, const MembershipVector& s, double C);

/// Minimum-norm least squares H^+ T.
Matrix solve_output_weights_pinv(const Matrix& H, const Matrix& T);

FelmModel train_felm(const Dataset& ds, const MembershipVector& s, const TrainConfig& cfg);
FelmModel train_relm(const Dataset& ds, const TrainConfig& cfg);
FelmModel train_elm(const Dataset& ds, const TrainConfig& cfg);

/// Dispatches on cfg.solver; `s` is only read for FELM.
FelmModel train(const Dataset& ds, const TrainConfig& cfg, const MembershipVector& s);

struct Prediction {
  ClassIndex label = 0;
  Vector scores;
};

/// scores = h(x) beta; ties resolve to the lowest class index.
Prediction predict(const FelmModel& model, const Vector& x);
std::vector<ClassIndex> predict_labels(const FelmModel& model, const Dataset& ds);

}  // namespace hafelm
