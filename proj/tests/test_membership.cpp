#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hafelm/dataset.hpp"
#include "hafelm/error.hpp"
#include "hafelm/membership.hpp"
#include "hafelm/random.hpp"
#include "hafelm/variant.hpp"

using namespace hafelm;

namespace {

Dataset points(std::vector<std::vector<double>> rows, std::vector<ClassIndex> labels = {},
               std::size_t m = 1) {
  if (labels.empty()) labels.assign(rows.size(), 0);
  Matrix f(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return Dataset(f, labels, m);
}

MembershipConfig fixed_k(std::size_t k) {
  MembershipConfig cfg;
  cfg.k = k;
  cfg.density_mode = DensityMode::FixedK;
  return cfg;
}

Dataset random_classes(Rng& rng, std::size_t m, std::size_t d, std::size_t per_class_max) {
  std::vector<ClassIndex> labels;
  std::vector<std::vector<double>> rows;
  for (ClassIndex c = 0; c < m; ++c) {
    const std::size_t n = 2 + rng.index(per_class_max - 1);
    const double spread = rng.uniform(0.1, 5.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> r(d);
      for (auto& v : r) v = rng.uniform(-10, 10) * 0.1 + spread * rng.normal();
      rows.push_back(r);
      labels.push_back(c);
    }
  }
  return points(rows, labels, m);
}

}  // namespace

TEST_CASE("class_center") {
  CHECK(class_center(points({{0, 0}, {2, 0}}), 0).isApprox(Vector::Unit(2, 0)));
  const auto single = class_center(points({{3, 4}}), 0);
  CHECK(single(0) == 3.0);
  CHECK(single(1) == 4.0);
  const auto tri = class_center(points({{0, 0}, {0, 3}, {3, 0}}), 0);
  CHECK(tri(0) == doctest::Approx(1.0));
  CHECK(tri(1) == doctest::Approx(1.0));
  try {
    class_center(points({{0}, {1}}, {0, 0}, 2), 1);
    FAIL("expected empty-class error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyClass);
  }
}

TEST_CASE("distance_membership examples") {
  const MembershipConfig cfg;
  const double end_value = std::exp(-1.0 / 1.001);
  CHECK(end_value == doctest::Approx(0.36825).epsilon(1e-4));

  const auto pair = distance_membership(points({{0, 0}, {2, 0}}), cfg);
  CHECK(pair[0] == doctest::Approx(end_value).epsilon(1e-12));
  CHECK(pair[1] == doctest::Approx(end_value).epsilon(1e-12));

  const auto same = distance_membership(points({{5, 5}, {5, 5}, {5, 5}}), cfg);
  for (std::size_t i = 0; i < 3; ++i) CHECK(same[i] == 1.0);

  const auto line = distance_membership(points({{0}, {1}, {2}}), cfg);
  CHECK(line[0] == doctest::Approx(end_value).epsilon(1e-12));
  CHECK(line[1] == 1.0);
  CHECK(line[2] == doctest::Approx(end_value).epsilon(1e-12));
}

TEST_CASE("distance_membership is computed within each class") {
  // Class 1 is far away; it must not affect class 0's center or d_max.
  const auto ds = points({{0}, {2}, {100}, {104}}, {0, 0, 1, 1}, 2);
  const auto mu = distance_membership(ds, MembershipConfig{});
  CHECK(mu[0] == doctest::Approx(std::exp(-1.0 / 1.001)));
  CHECK(mu[2] == doctest::Approx(std::exp(-2.0 / 2.001)));
}

TEST_CASE("density_membership fixed-k examples") {
  const auto pair = density_membership(points({{0}, {1}}), fixed_k(1));
  CHECK(pair[0] == doctest::Approx(1.0));
  CHECK(pair[1] == doctest::Approx(1.0));

  const auto line = density_membership(points({{0}, {1}, {2}}), fixed_k(2));
  const double ends = (std::exp(-1.0) + std::exp(-2.0)) / (2.0 * std::exp(-1.0));
  CHECK(ends == doctest::Approx(0.6839).epsilon(1e-4));
  CHECK(line[0] == doctest::Approx(ends).epsilon(1e-12));
  CHECK(line[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(line[2] == doctest::Approx(ends).epsilon(1e-12));
}

TEST_CASE("density_membership fixed-k rejects small classes") {
  try {
    density_membership(points({{0}, {1}, {5}, {6}, {7}}, {0, 0, 1, 1, 1}, 2), fixed_k(2));
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    CHECK(std::string(e.what()).find('0') != std::string::npos);
  }
}

TEST_CASE("density_membership cluster-adaptive") {
  const auto ds = points({{0}, {1}, {2}, {50}});
  ClusterResult clusters;
  clusters.assignment = {0, 0, 0, 1};
  clusters.count = 2;
  MembershipConfig cfg;
  cfg.density_mode = DensityMode::ClusterAdaptive;
  const auto omega = density_membership(ds, cfg, &clusters);
  CHECK(omega[3] == 1.0);
  CHECK(omega[1] == doctest::Approx(1.0));
  CHECK(omega[0] == doctest::Approx((std::exp(-1.0) + std::exp(-2.0)) / (2.0 * std::exp(-1.0))));
  CHECK_THROWS_AS(density_membership(ds, cfg, nullptr), Error);
}

TEST_CASE("hybrid_membership") {
  MembershipConfig cfg;
  cfg.alpha = 0.7;
  CHECK(hybrid_membership(MembershipVector({1.0}), MembershipVector({1.0}), cfg)[0] == 1.0);
  CHECK(hybrid_membership(MembershipVector({0.5}), MembershipVector({0.9}), cfg)[0] ==
        doctest::Approx(0.62).epsilon(1e-12));

  const MembershipVector mu({0.3, 0.9, 0.123456789});
  const MembershipVector omega({0.7, 0.2, 0.987654321});
  cfg.alpha = 1.0;
  CHECK(hybrid_membership(mu, omega, cfg).values() == mu.values());
  cfg.alpha = 0.0;
  CHECK(hybrid_membership(mu, omega, cfg).values() == omega.values());

  try {
    hybrid_membership(MembershipVector({0.5}), MembershipVector({0.5, 0.5}), cfg);
    FAIL("expected alignment error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Alignment);
  }
}

TEST_CASE("membership vectors reject values outside (0, 1]") {
  for (double bad : {0.0, -0.1, 1.0000001, std::nan("")}) {
    try {
      MembershipVector({0.5, bad});
      FAIL("expected membership-range error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MembershipRange);
    }
  }
}

TEST_CASE("config validation") {
  MembershipConfig cfg;
  cfg.theta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.alpha = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.k = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("property: range, hybrid bounds and distance monotonicity") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.index(3);
    const std::size_t d = 1 + rng.index(4);
    const auto ds = random_classes(rng, m, d, 12);
    MembershipConfig cfg;
    cfg.alpha = rng.uniform();
    cfg.k = 1;
    cfg.density_mode = DensityMode::FixedK;
    const auto mu = distance_membership(ds, cfg);
    const auto omega = density_membership(ds, cfg);
    const auto s = hybrid_membership(mu, omega, cfg);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      for (double v : {mu[i], omega[i], s[i]}) {
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
      }
      CHECK(s[i] >= std::min(mu[i], omega[i]));
      CHECK(s[i] <= std::max(mu[i], omega[i]));
    }
    for (ClassIndex c = 0; c < m; ++c) {
      const auto idx = ds.class_indices(c);
      const Vector center = class_center(ds, c);
      for (auto i : idx)
        for (auto j : idx) {
          const double di = (ds.row(i).transpose() - center).norm();
          const double dj = (ds.row(j).transpose() - center).norm();
          if (di < dj - 1e-12) CHECK(mu[i] > mu[j]);
        }
    }
  }
}

TEST_CASE("property: rigid transforms leave memberships unchanged") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = random_classes(rng, 2, 2, 15);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Eigen::Matrix2d rot;
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    const Eigen::RowVector2d shift(rng.uniform(-100, 100), rng.uniform(-100, 100));
    Matrix moved = ds.features() * rot.transpose();
    moved.rowwise() += shift;
    const auto moved_ds = ds.with_features(moved);

    const auto cfg = fixed_k(1);
    const auto mu_a = distance_membership(ds, cfg);
    const auto mu_b = distance_membership(moved_ds, cfg);
    const auto om_a = density_membership(ds, cfg);
    const auto om_b = density_membership(moved_ds, cfg);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(std::abs(mu_a[i] - mu_b[i]) <= 1e-9);
      CHECK(std::abs(om_a[i] - om_b[i]) <= 1e-9);
    }
  }
}

TEST_CASE("property: flipped-label outliers receive lower hybrid membership") {
  Vector a(2), b(2);
  a << 0, 0;
  b << 6, 0;
  MembershipSettings settings;
  std::size_t seeds_below = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto synth = synth_blobs_detailed({a, b}, {60, 60}, 1.0, 0.1, seed);
    settings.qho.seed = seed;
    const auto s = compute_memberships(synth.data, Variant::HA_FELM, settings).s;
    bool below = true;
    for (ClassIndex c = 0; c < 2; ++c) {
      double flipped_sum = 0, clean_sum = 0;
      std::size_t flipped_n = 0, clean_n = 0;
      for (std::size_t i = 0; i < synth.data.size(); ++i) {
        if (synth.data.label(i) != c) continue;
        if (synth.flipped[i]) {
          flipped_sum += s[i];
          ++flipped_n;
        } else {
          clean_sum += s[i];
          ++clean_n;
        }
      }
      REQUIRE(flipped_n > 0);
      below = below && flipped_sum / flipped_n < clean_sum / clean_n;
    }
    seeds_below += below;
  }
  CHECK(seeds_below == 30);
}
