#include "hafelm/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "hafelm/error.hpp"

namespace hafelm {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw Error(ErrorKind::Parse, std::string("model field '") + what + "' has wrong row count");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::Parse, std::string("model field '") + what + "' has wrong column count");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

Vector vector_from_json(const json& j, Eigen::Index size, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size)
    throw Error(ErrorKind::Parse, std::string("model field '") + what + "' has wrong length");
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

void save_model(const FelmModel& model, std::ostream& out) {
  json j;
  j["format"] = "hafelm-model";
  j["format_version"] = kModelFormatVersion;
  j["kind"] = model.hidden.kind == Activation::RBF ? "RBF" : "SIGMOID";
  j["L"] = model.hidden.nodes();
  j["d"] = model.hidden.dim();
  j["m"] = model.num_classes;
  j["seed"] = model.hidden.seed;
  j["hidden_weights"] = matrix_to_json(model.hidden.weights);
  j["hidden_params"] = vector_to_json(model.hidden.params);
  j["beta"] = matrix_to_json(model.beta);
  j["class_names"] = model.class_names;
  j["residual_norm"] = model.residual_norm ? json(*model.residual_norm) : json(nullptr);
  if (model.scaling) {
    j["scaling"] = {{"mins", vector_to_json(model.scaling->mins)},
                    {"maxs", vector_to_json(model.scaling->maxs)}};
  } else {
    j["scaling"] = nullptr;
  }
  out << j.dump(1) << '\n';
}

void save_model(const FelmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Usage, "cannot write " + path.string());
  save_model(model, out);
}

FelmModel load_model(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "hafelm-model") throw Error(ErrorKind::Parse, "not a model file");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      throw Error(ErrorKind::Parse, "unsupported model format version " + std::to_string(version));
    FelmModel model;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "RBF") {
      model.hidden.kind = Activation::RBF;
    } else if (kind == "SIGMOID") {
      model.hidden.kind = Activation::Sigmoid;
    } else {
      throw Error(ErrorKind::Parse, "unknown activation '" + kind + "'");
    }
    const auto L = j.at("L").get<Eigen::Index>();
    const auto d = j.at("d").get<Eigen::Index>();
    const auto m = j.at("m").get<Eigen::Index>();
    if (L < 1 || d < 1 || m < 1) throw Error(ErrorKind::Parse, "model dimensions must be positive");
    model.hidden.seed = j.at("seed").get<std::uint64_t>();
    model.hidden.weights = matrix_from_json(j.at("hidden_weights"), L, d, "hidden_weights");
    model.hidden.params = vector_from_json(j.at("hidden_params"), L, "hidden_params");
    model.beta = matrix_from_json(j.at("beta"), L, m, "beta");
    model.num_classes = static_cast<std::size_t>(m);
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    if (!model.class_names.empty() && static_cast<Eigen::Index>(model.class_names.size()) != m)
      throw Error(ErrorKind::Parse, "class name count differs from m");
    if (!j.at("residual_norm").is_null()) model.residual_norm = j["residual_norm"].get<double>();
    if (!j.at("scaling").is_null()) {
      model.scaling = FeatureScaling{vector_from_json(j["scaling"].at("mins"), d, "scaling.mins"),
                                     vector_from_json(j["scaling"].at("maxs"), d, "scaling.maxs")};
    }
    if (!model.beta.allFinite() || !model.hidden.weights.allFinite() || !model.hidden.params.allFinite())
      throw Error(ErrorKind::Numeric, "model contains non-finite values");
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed model file: ") + e.what());
  }
}

FelmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::EmptyInput, "cannot open " + path.string());
  return load_model(in);
}

}  // namespace hafelm
