#include "hafelm/elm.hpp"

#include <cmath>

#include "hafelm/error.hpp"
#include "hafelm/random.hpp"

namespace hafelm {

void TrainConfig::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw Error(ErrorKind::Config, "C must be > 0");
  if (L < 1) throw Error(ErrorKind::Config, "L must be >= 1");
}

FeatureBounds FeatureBounds::of(const Dataset& ds) {
  return {ds.features().colwise().minCoeff().transpose(),
          ds.features().colwise().maxCoeff().transpose()};
}

HiddenLayer init_hidden_layer(std::size_t d, const TrainConfig& cfg, const FeatureBounds& bounds) {
  cfg.validate();
  if (d < 1) throw Error(ErrorKind::Config, "hidden layer needs input dimension >= 1");
  if (static_cast<std::size_t>(bounds.lo.size()) != d || static_cast<std::size_t>(bounds.hi.size()) != d)
    throw Error(ErrorKind::Shape, "feature bounds do not match dimension");
  if (!bounds.lo.allFinite() || !bounds.hi.allFinite())
    throw Error(ErrorKind::Numeric, "feature bounds must be finite");

  const auto L = static_cast<Eigen::Index>(cfg.L);
  const auto D = static_cast<Eigen::Index>(d);
  HiddenLayer layer{cfg.kind, Matrix(L, D), Vector(L), cfg.seed};
  Rng rng(cfg.seed);
  for (Eigen::Index l = 0; l < L; ++l) {
    if (cfg.kind == Activation::RBF) {
      for (Eigen::Index j = 0; j < D; ++j) layer.weights(l, j) = rng.uniform(bounds.lo(j), bounds.hi(j));
      layer.params(l) = rng.uniform_open_closed();
    } else {
      for (Eigen::Index j = 0; j < D; ++j) layer.weights(l, j) = rng.uniform(-1.0, 1.0);
      layer.params(l) = rng.uniform(-1.0, 1.0);
    }
  }
  return layer;
}

Matrix hidden_matrix(const HiddenLayer& layer, const Matrix& features) {
  if (static_cast<std::size_t>(features.cols()) != layer.dim())
    throw Error(ErrorKind::Shape, "input dimension " + std::to_string(features.cols()) +
                                      " does not match hidden layer dimension " +
                                      std::to_string(layer.dim()));
  const auto L = static_cast<Eigen::Index>(layer.nodes());
  Matrix H(features.rows(), L);
  if (layer.kind == Activation::RBF) {
    for (Eigen::Index l = 0; l < L; ++l) {
      const Eigen::VectorXd sq = (features.rowwise() - layer.weights.row(l)).rowwise().squaredNorm();
      H.col(l) = (-layer.params(l) * sq.array()).exp().matrix();
    }
  } else {
    H = features * layer.weights.transpose();
    H.rowwise() += layer.params.transpose();
    H = (1.0 / (1.0 + (-H.array()).exp())).matrix();
  }
  if (!H.allFinite()) throw Error(ErrorKind::Numeric, "non-finite hidden activations");
  return H;
}

Matrix hidden_matrix(const HiddenLayer& layer, const Dataset& ds) {
  return hidden_matrix(layer, ds.features());
}

Matrix encode_targets(const Dataset& ds) {
  if (ds.num_classes() < 2) throw Error(ErrorKind::Config, "training needs at least 2 classes");
  Matrix T = Matrix::Constant(static_cast<Eigen::Index>(ds.size()),
                              static_cast<Eigen::Index>(ds.num_classes()), -1.0);
  for (std::size_t i = 0; i < ds.size(); ++i)
    T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(ds.label(i))) = 1.0;
  return T;
}

namespace {

void check_solve_inputs(const Matrix& H, const Matrix& T, const MembershipVector& s, double C) {
  if (H.rows() != T.rows()) throw Error(ErrorKind::Shape, "H and T differ in row count");
  if (static_cast<Eigen::Index>(s.size()) != H.rows())
    throw Error(ErrorKind::Alignment, "membership count differs from sample count");
  if (!(C > 0.0)) throw Error(ErrorKind::Config, "C must be > 0");
}

Matrix spd_solve(const Matrix& A, const Matrix& rhs) {
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::Numeric, "system is not positive definite");
  Matrix x = llt.solve(rhs);
  if (!x.allFinite()) throw Error(ErrorKind::Numeric, "non-finite output weights");
  return x;
}

Eigen::VectorXd as_vector(const MembershipVector& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.values().data(), static_cast<Eigen::Index>(s.size()));
}

}  // namespace

Matrix solve_output_weights_dual(const Matrix& H, const Matrix& T, const MembershipVector& s,
                                 double C) {
  check_solve_inputs(H, T, s, C);
  Matrix A = H * H.transpose();
  A.diagonal().array() += 1.0 / (C * as_vector(s).array());
  return H.transpose() * spd_solve(A, T);
}

Matrix solve_output_weights_primal(const Matrix& H, const Matrix& T, const MembershipVector& s,
                                   double C) {
  check_solve_inputs(H, T, s, C);
  const Eigen::VectorXd w = as_vector(s);
  const Matrix WH = w.asDiagonal() * H;
  Matrix A = H.transpose() * WH;
  A.diagonal().array() += 1.0 / C;
  return spd_solve(A, WH.transpose() * T);
}

Matrix solve_output_weights(const Matrix& H, const Matrix& T, const MembershipVector& s, double C) {
  return H.cols() < H.rows() ? solve_output_weights_primal(H, T, s, C)
                             : solve_output_weights_dual(H, T, s, C);
}

Matrix solve_output_weights_pinv(const Matrix& H, const Matrix& T) {
  if (H.rows() != T.rows()) throw Error(ErrorKind::Shape, "H and T differ in row count");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(H);
  Matrix beta = cod.solve(T);
  if (!beta.allFinite()) throw Error(ErrorKind::Numeric, "non-finite output weights");
  return beta;
}

namespace {

FelmModel fit(const Dataset& ds, const TrainConfig& cfg, const MembershipVector* s) {
  cfg.validate();
  if (s != nullptr && s->size() != ds.size())
    throw Error(ErrorKind::Alignment, "membership vector length differs from sample count");
  FelmModel model;
  model.hidden = init_hidden_layer(ds.dim(), cfg, FeatureBounds::of(ds));
  const Matrix H = hidden_matrix(model.hidden, ds);
  const Matrix T = encode_targets(ds);
  model.beta = s != nullptr ? solve_output_weights(H, T, *s, cfg.C) : solve_output_weights_pinv(H, T);
  model.num_classes = ds.num_classes();
  model.class_names = ds.class_names();
  model.residual_norm = (T - H * model.beta).norm();
  return model;
}

}  // namespace

FelmModel train_felm(const Dataset& ds, const MembershipVector& s, const TrainConfig& cfg) {
  return fit(ds, cfg, &s);
}

FelmModel train_relm(const Dataset& ds, const TrainConfig& cfg) {
  const auto ones = MembershipVector::ones(ds.size());
  return fit(ds, cfg, &ones);
}

FelmModel train_elm(const Dataset& ds, const TrainConfig& cfg) { return fit(ds, cfg, nullptr); }

FelmModel train(const Dataset& ds, const TrainConfig& cfg, const MembershipVector& s) {
  switch (cfg.solver) {
    case Solver::ELM: return train_elm(ds, cfg);
    case Solver::RELM: return train_relm(ds, cfg);
    case Solver::FELM: return train_felm(ds, s, cfg);
  }
  throw Error(ErrorKind::Config, "unknown solver");
}

Prediction predict(const FelmModel& model, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != model.hidden.dim())
    throw Error(ErrorKind::Shape, "input has dimension " + std::to_string(x.size()) +
                                      ", model expects " + std::to_string(model.hidden.dim()));
  const Vector input = model.scaling ? model.scaling->apply(x) : x;
  const Matrix h = hidden_matrix(model.hidden, Matrix(input.transpose()));
  Prediction p;
  p.scores = (h * model.beta).transpose();
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < p.scores.size(); ++c)
    if (p.scores(c) > p.scores(best)) best = c;
  p.label = static_cast<ClassIndex>(best);
  return p;
}

std::vector<ClassIndex> predict_labels(const FelmModel& model, const Dataset& ds) {
  if (ds.dim() != model.hidden.dim())
    throw Error(ErrorKind::Shape, "dataset has dimension " + std::to_string(ds.dim()) +
                                      ", model expects " + std::to_string(model.hidden.dim()));
  const Dataset input = model.scaling ? model.scaling->apply(ds) : ds;
  const Matrix scores = hidden_matrix(model.hidden, input) * model.beta;
  std::vector<ClassIndex> out(ds.size());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c)
      if (scores(i, c) > scores(i, best)) best = c;
    out[static_cast<std::size_t>(i)] = static_cast<ClassIndex>(best);
  }
  return out;
}

}  // namespace hafelm
