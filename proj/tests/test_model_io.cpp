#include <doctest.h>

#include <sstream>

#include "hafelm/dataset.hpp"
#include "hafelm/elm.hpp"
#include "hafelm/error.hpp"
#include "hafelm/model_io.hpp"

using namespace hafelm;

namespace {

FelmModel trained(Activation kind, bool scaled) {
  Vector a(3), b(3);
  a << 0, 1e-3, -7;
  b << 2.5, 1e5, 3;
  auto ds = synth_blobs({a, b}, {20, 15}, 0.37, 0.0, 3);
  std::optional<FeatureScaling> scaling;
  if (scaled) {
    scaling = FeatureScaling::fit(ds);
    ds = scaling->apply(ds);
  }
  TrainConfig cfg;
  cfg.kind = kind;
  cfg.L = 17;
  cfg.C = 0.125;
  cfg.seed = 99;
  auto model = train_felm(ds, MembershipVector::ones(ds.size()), cfg);
  model.class_names = {"left", "right"};
  model.scaling = scaling;
  return model;
}

}  // namespace

TEST_CASE("model round trip is bit exact") {
  for (auto kind : {Activation::RBF, Activation::Sigmoid}) {
    for (bool scaled : {false, true}) {
      const auto model = trained(kind, scaled);
      std::stringstream buf;
      save_model(model, buf);
      const auto back = load_model(buf);
      CHECK(back.hidden.kind == model.hidden.kind);
      CHECK(back.hidden.seed == model.hidden.seed);
      CHECK(back.hidden.weights == model.hidden.weights);
      CHECK(back.hidden.params == model.hidden.params);
      CHECK(back.beta == model.beta);
      CHECK(back.class_names == model.class_names);
      CHECK(back.residual_norm == model.residual_norm);
      REQUIRE(back.scaling.has_value() == scaled);
      if (scaled) {
        CHECK(back.scaling->mins == model.scaling->mins);
        CHECK(back.scaling->maxs == model.scaling->maxs);
      }
      Vector x(3);
      x << 1.1, 200.0, -2.0;
      CHECK(predict(back, x).scores == predict(model, x).scores);
    }
  }
}

TEST_CASE("load_model rejects malformed input") {
  const auto expect_error = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(load_model(in), Error);
  };
  expect_error("");
  expect_error("not json");
  expect_error(R"({"format":"something-else"})");
  std::stringstream buf;
  save_model(trained(Activation::RBF, false), buf);
  std::string text = buf.str();
  const auto pos = text.find("\"format_version\"");
  REQUIRE(pos != std::string::npos);
  text.replace(text.find(':', pos) + 1, 1, "9");
  expect_error(text);
}
