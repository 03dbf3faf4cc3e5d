#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "hafelm/dataset.hpp"
#include "hafelm/error.hpp"

using namespace hafelm;

namespace {

Dataset csv(const std::string& text, bool header = false) {
  std::istringstream in(text);
  return parse_csv(in, header);
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Dataset indexed(std::size_t n, std::size_t m = 2) {
  Matrix f(static_cast<Eigen::Index>(n), 1);
  std::vector<ClassIndex> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    f(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
    labels[i] = i % m;
  }
  return Dataset(f, labels, m);
}

}  // namespace

TEST_CASE("load_csv parses rows and remaps labels") {
  const auto ds = csv("1.0,2.0,a\n3.0,4.0,b\n");
  CHECK(ds.size() == 2);
  CHECK(ds.dim() == 2);
  CHECK(ds.num_classes() == 2);
  CHECK(ds.labels() == std::vector<ClassIndex>{0, 1});
  CHECK(ds.features()(1, 0) == 3.0);
}

TEST_CASE("load_csv keeps first-appearance class order") {
  const auto ds = csv("0,b\n1,a\n2,b\n3,a\n");
  CHECK(ds.num_classes() == 2);
  CHECK(ds.class_names() == std::vector<std::string>{"b", "a"});
  CHECK(ds.labels() == std::vector<ClassIndex>{0, 1, 0, 1});
}

TEST_CASE("load_csv skips headers when asked") {
  const auto ds = csv("x,y,label\n1,2,a\n3,4,b\n1,1,a\n", true);
  CHECK(ds.size() == 3);
  CHECK(ds.class_names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_csv errors") {
  SUBCASE("non-numeric feature names its line") {
    try {
      csv("1.0,x,a\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("ragged row") {
    try {
      csv("1,2,a\n1,b\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("empty file") {
    try {
      csv("");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EmptyInput);
    }
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", false), Error); }
}

TEST_CASE("csv round trip reproduces the dataset exactly") {
  const auto src = synth_blobs({vec({0.1, -3.0}), vec({7.25, 1e-7})}, {13, 9}, 0.731, 0.2, 99);
  for (bool header : {false, true}) {
    std::stringstream buf;
    write_csv(src, buf, header);
    const auto back = parse_csv(buf, header);
    CHECK(back.features() == src.features());
    CHECK(back.labels() == src.labels());
    CHECK(back.num_classes() == src.num_classes());
  }
}

TEST_CASE("dataset rejects invalid construction") {
  CHECK_THROWS_AS(Dataset(Matrix(0, 2), {}, 1), Error);
  CHECK_THROWS_AS(Dataset(Matrix::Zero(2, 2), {0, 2}, 2), Error);
  CHECK_THROWS_AS(Dataset(Matrix::Zero(2, 2), {0}, 2), Error);
  Matrix bad = Matrix::Zero(1, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Dataset(bad, {0}, 1), Error);
}

TEST_CASE("split is deterministic and exact") {
  const auto ds = indexed(10);
  const SplitSpec spec{0.8, 7, false};
  const auto [a, b] = split(ds, spec);
  CHECK(a.size() == 8);
  CHECK(b.size() == 2);
  const auto [a2, b2] = split(ds, spec);
  CHECK(a.features() == a2.features());
  CHECK(b.features() == b2.features());

  std::set<double> seen;
  for (Eigen::Index i = 0; i < a.features().rows(); ++i) seen.insert(a.features()(i, 0));
  for (Eigen::Index i = 0; i < b.features().rows(); ++i) CHECK(seen.insert(b.features()(i, 0)).second);
  CHECK(seen.size() == 10);
}

TEST_CASE("stratified split keeps class proportions") {
  Matrix f(10, 1);
  std::vector<ClassIndex> labels;
  for (int i = 0; i < 10; ++i) {
    f(i, 0) = i;
    labels.push_back(i < 8 ? 0 : 1);
  }
  const Dataset ds(f, labels, 2);
  const auto [train, test] = split(ds, {0.5, 3, true});
  CHECK(train.class_counts() == std::vector<std::size_t>{4, 1});
  CHECK(test.class_counts() == std::vector<std::size_t>{4, 1});
}

TEST_CASE("stratified remainder goes to the largest classes first") {
  // floor(0.7 * {7, 5, 3}) = {4, 3, 2} = 9; round(0.7 * 15) = 11.
  std::vector<ClassIndex> labels;
  for (ClassIndex c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < std::vector<std::size_t>{7, 5, 3}[c]; ++k) labels.push_back(c);
  const Dataset ds(Matrix::Random(15, 2), labels, 3);
  const auto [train, test] = split(ds, {0.7, 1, true});
  CHECK(train.class_counts() == std::vector<std::size_t>{5, 4, 2});
}

TEST_CASE("split property: partitions for many seeds and fractions") {
  const auto ds = indexed(37, 3);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const double fraction = 0.1 + 0.8 * static_cast<double>(seed) / 50.0;
    for (bool stratified : {false, true}) {
      const auto [a, b] = split(ds, {fraction, seed, stratified});
      CHECK(a.size() + b.size() == ds.size());
      std::vector<int> hits(ds.size(), 0);
      for (Eigen::Index i = 0; i < a.features().rows(); ++i) ++hits[static_cast<std::size_t>(a.features()(i, 0))];
      for (Eigen::Index i = 0; i < b.features().rows(); ++i) ++hits[static_cast<std::size_t>(b.features()(i, 0))];
      CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
      if (stratified) {
        const auto total = ds.class_counts();
        const auto tc = a.class_counts();
        for (std::size_t c = 0; c < 3; ++c)
          CHECK(std::abs(static_cast<double>(tc[c]) - fraction * static_cast<double>(total[c])) <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("split errors") {
  CHECK_THROWS_AS(split(indexed(1, 1), {0.5, 0, false}), Error);
  try {
    split(indexed(3), {0.1, 0, false});
    FAIL("expected degenerate split");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
  CHECK_THROWS_AS(split(indexed(4), {1.0, 0, false}), Error);
}

TEST_CASE("synth_blobs construction") {
  SUBCASE("class sizes and determinism") {
    const auto a = synth_blobs({vec({0, 0}), vec({10, 10})}, {90, 10}, 1.0, 0.0, 5);
    CHECK(a.class_counts() == std::vector<std::size_t>{90, 10});
    const auto b = synth_blobs({vec({0, 0}), vec({10, 10})}, {90, 10}, 1.0, 0.0, 5);
    CHECK(a.features() == b.features());
  }
  SUBCASE("label flips follow llround(fraction * count) per class") {
    const auto s = synth_blobs_detailed({vec({0, 0}), vec({10, 10})}, {50, 50}, 1.0, 0.1, 17);
    std::size_t flipped_a = 0, flipped_b = 0;
    for (std::size_t i = 0; i < s.data.size(); ++i) {
      const bool differs = s.data.label(i) != s.true_labels[i];
      CHECK(differs == s.flipped[i]);
      if (differs) (s.true_labels[i] == 0 ? flipped_a : flipped_b) += 1;
    }
    CHECK(flipped_a == 5);
    CHECK(flipped_b == 5);
  }
  SUBCASE("invalid configs") {
    CHECK_THROWS_AS(synth_blobs({vec({0})}, {10}, 1.0, 0.1, 0), Error);
    CHECK_THROWS_AS(synth_blobs({vec({0}), vec({1})}, {10}, 1.0, 0.0, 0), Error);
    CHECK_THROWS_AS(synth_blobs({vec({0}), vec({1, 2})}, {1, 1}, 1.0, 0.0, 0), Error);
    CHECK_THROWS_AS(synth_blobs({vec({0})}, {10}, 0.0, 0.0, 0), Error);
  }
}

TEST_CASE("widely separated clean blobs are nearest-centroid separable") {
  // Separation 14 with stddev 1; the centroid rule is the oracle.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::vector<Vector> centers{vec({0, 0}), vec({10, 10}), vec({-10, 10})};
    const auto ds = synth_blobs(centers, {40, 25, 10}, 1.0, 0.0, seed);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < centers.size(); ++c)
        if ((ds.row(i).transpose() - centers[c]).norm() < (ds.row(i).transpose() - centers[best]).norm()) best = c;
      correct += best == ds.label(i);
    }
    CHECK(correct == ds.size());
  }
}

TEST_CASE("feature scaling maps training data into [0,1]") {
  const auto ds = synth_blobs({vec({-5, 100}), vec({5, 300})}, {20, 20}, 3.0, 0.0, 1);
  const auto sc = FeatureScaling::fit(ds);
  const auto scaled = sc.apply(ds);
  CHECK(scaled.features().minCoeff() == doctest::Approx(0.0));
  CHECK(scaled.features().maxCoeff() == doctest::Approx(1.0));
  const Dataset flat(Matrix::Constant(3, 1, 2.0), {0, 1, 0}, 2);
  CHECK(FeatureScaling::fit(flat).apply(flat).features().cwiseAbs().maxCoeff() == 0.0);
}
