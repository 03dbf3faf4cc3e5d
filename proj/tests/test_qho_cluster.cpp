#include <doctest.h>

#include <cmath>
#include <limits>

#include "hafelm/dataset.hpp"
#include "hafelm/error.hpp"
#include "hafelm/qho_cluster.hpp"
#include "hafelm/random.hpp"

using namespace hafelm;

namespace {

Dataset rows(const std::vector<std::vector<double>>& r) {
  Matrix f(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r[0].size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r[i].size(); ++j) f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[i][j];
  return Dataset(f, std::vector<ClassIndex>(r.size(), 0), 1);
}

Dataset two_blobs(std::uint64_t seed, double stddev, double sep) {
  Vector a(2), b(2);
  a << 0, 0;
  b << sep / std::sqrt(2.0), sep / std::sqrt(2.0);
  return synth_blobs({a, b}, {100, 100}, stddev, 0.0, seed);
}

QhoParams params(int g, int m, std::uint64_t seed) {
  QhoParams p;
  p.grid_resolution = g;
  p.oscillators = m;
  p.probes = 32;
  p.seed = seed;
  return p;
}

double purity(const ClusterResult& r, const Dataset& ds) {
  // Blob of origin is the generator label; map each cluster to its majority.
  std::vector<std::array<std::size_t, 2>> votes(r.count, {0, 0});
  for (std::size_t i = 0; i < ds.size(); ++i) ++votes[r.assignment[i]][ds.label(i)];
  std::size_t agree = 0;
  for (const auto& v : votes) agree += std::max(v[0], v[1]);
  return static_cast<double>(agree) / static_cast<double>(ds.size());
}

}  // namespace

TEST_CASE("project_2d") {
  SUBCASE("2-D passes through") {
    const auto p = project_2d(rows({{1, 2}, {3, -4}}));
    CHECK(p[1].x == 3.0);
    CHECK(p[1].y == -4.0);
  }
  SUBCASE("1-D pads with zero") {
    const auto p = project_2d(rows({{1}, {7}}));
    CHECK(p[1].x == 7.0);
    CHECK(p[0].y == 0.0);
    CHECK(p[1].y == 0.0);
  }
  SUBCASE("planar 3-D data keeps pairwise distances") {
    Rng rng(5);
    Eigen::Vector3d u(1, 2, 2), v(2, -2, 1);
    u.normalize();
    v.normalize();
    const Eigen::Vector3d origin(3, -1, 4);
    Matrix f(25, 3);
    for (int i = 0; i < 25; ++i)
      f.row(i) = (origin + rng.uniform(-5, 5) * u + rng.uniform(-2, 2) * v).transpose();
    const auto p = project_2d(f);
    for (int i = 0; i < 25; ++i)
      for (int j = 0; j < 25; ++j) {
        const double d3 = (f.row(i) - f.row(j)).norm();
        const double d2 = std::hypot(p[i].x - p[j].x, p[i].y - p[j].y);
        CHECK(std::abs(d3 - d2) <= 1e-9);
      }
  }
  SUBCASE("identical samples are degenerate") {
    try {
      project_2d(rows({{1, 1, 1}, {1, 1, 1}}));
      FAIL("expected degenerate error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Degenerate);
    }
  }
}

TEST_CASE("build_grid") {
  SUBCASE("unit square corners fill every cell once") {
    const auto grid = build_grid({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 2);
    for (int ix = 0; ix < 2; ++ix)
      for (int iy = 0; iy < 2; ++iy) CHECK(grid.count({ix, iy}) == 1);
    CHECK(grid.total() == 4);
  }
  SUBCASE("coincident points share one cell") {
    const auto grid = build_grid({{2, 2}, {2, 2}, {2, 2}}, 3);
    CHECK(grid.density_at({2, 2}) == 3);
    CHECK(grid.total() == 3);
  }
  SUBCASE("max boundary clamps into the last cell") {
    const auto grid = build_grid({{0, 0}, {10, 10}}, 5);
    CHECK(grid.cell_of({10, 10}) == Cell{4, 4});
    CHECK(grid.cell_of({1e9, -1e9}) == Cell{4, 0});
  }
}

TEST_CASE("gaussian_probe") {
  // 4 x 4 grid over [0,4]^2 with all mass in cell (3, 3).
  GridSpec spec{4, 0.0, 4.0, 0.0, 4.0};
  std::vector<int> counts(16, 0);
  counts[3 * 4 + 3] = 9;
  const DensityGrid grid(spec, counts);

  SUBCASE("seeded draws reach the dense cell; oracle replays the draws") {
    const OscillatorState state{{0.5, 0.5}, 4.0, 4.0, false};
    Rng oracle_rng(123);
    int dense_hits = 0;
    for (int k = 0; k < 64; ++k) {
      const double x = std::clamp(oracle_rng.normal(0.5, 4.0), 0.0, 4.0);
      const double y = std::clamp(oracle_rng.normal(0.5, 4.0), 0.0, 4.0);
      dense_hits += x >= 3.0 && y >= 3.0;
    }
    REQUIRE(dense_hits > 0);
    Rng rng(123);
    const auto p = gaussian_probe(grid, state, 64, rng);
    CHECK(grid.cell_of(p) == Cell{3, 3});
  }
  SUBCASE("ties go to the probe closest to the center") {
    const DensityGrid flat(spec, std::vector<int>(16, 1));
    const OscillatorState state{{2.0, 2.0}, 1.0, 1.0, false};
    Rng oracle_rng(9);
    double best = std::numeric_limits<double>::infinity();
    Point2 expect{};
    for (int k = 0; k < 16; ++k) {
      const double x = std::clamp(oracle_rng.normal(2.0, 1.0), 0.0, 4.0);
      const double y = std::clamp(oracle_rng.normal(2.0, 1.0), 0.0, 4.0);
      const double d = (x - 2.0) * (x - 2.0) + (y - 2.0) * (y - 2.0);
      if (d < best) {
        best = d;
        expect = {x, y};
      }
    }
    Rng rng(9);
    const auto p = gaussian_probe(flat, state, 16, rng);
    CHECK(p.x == expect.x);
    CHECK(p.y == expect.y);
    CHECK(flat.density_at(p) == flat.density_at(state.center));
  }
  SUBCASE("tiny sigma stays in the current cell") {
    const OscillatorState state{{1.5, 2.5}, 1e-6, 1e-6, false};
    Rng rng(1);
    CHECK(grid.cell_of(gaussian_probe(grid, state, 32, rng)) == Cell{1, 2});
  }
}

TEST_CASE("qho_cluster degenerate inputs") {
  SUBCASE("single tight blob gives one cluster") {
    Vector c(2);
    c << 3, 3;
    const auto ds = synth_blobs({c}, {80}, 0.3, 0.0, 4);
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      CHECK(qho_cluster(ds, params(10, 10, seed)).count == 1);
  }
  SUBCASE("one sample") {
    const auto r = qho_cluster(rows({{1, 2}}), params(5, 3, 0));
    CHECK(r.count == 1);
    CHECK(r.assignment == std::vector<std::size_t>{0});
  }
  SUBCASE("oscillator count is clamped to N") {
    const auto r = qho_cluster(rows({{0, 0}, {1, 1}, {2, 0}}), params(3, 10, 0));
    CHECK(r.oscillators_used == 3);
    CHECK(r.oscillators_clamped);
  }
}

TEST_CASE("qho_cluster invariants") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ds = two_blobs(seed, 1.0, 10.0);
    const int g = 5 + static_cast<int>(seed % 4) * 5;
    const int m = 1 + static_cast<int>(seed % 12);
    const auto r = qho_cluster(ds, params(g, m, seed));
    CHECK(r.count >= 1);
    CHECK(r.count <= static_cast<std::size_t>(m));
    CHECK(r.count <= static_cast<std::size_t>(g * g));
    CHECK(r.assignment.size() == ds.size());
    for (auto a : r.assignment) CHECK(a < r.count);

    const double w = 1.0 / g;  // relative cell width; sigma starts at range / 4
    const int bound = static_cast<int>(std::ceil(std::log2(0.25 / w))) + 1;
    for (const auto& t : r.traces) {
      CHECK(t.converged);
      CHECK(t.halvings <= bound);
      for (std::size_t k = 1; k < t.densities.size(); ++k) CHECK(t.densities[k] >= t.densities[k - 1]);
    }
  }
}

TEST_CASE("qho_cluster is deterministic per seed") {
  const auto ds = two_blobs(3, 1.0, 10.0);
  const auto a = qho_cluster(ds, params(20, 10, 42));
  const auto b = qho_cluster(ds, params(20, 10, 42));
  CHECK(a.count == b.count);
  CHECK(a.assignment == b.assignment);
  for (std::size_t i = 0; i < a.centers.size(); ++i) {
    CHECK(a.centers[i].x == b.centers[i].x);
    CHECK(a.centers[i].y == b.centers[i].y);
  }
}

TEST_CASE("qho_cluster recovers two blobs") {
  SUBCASE("stddev 0.5 at (0,0) and (10,10)") {
    std::size_t good = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto ds = two_blobs(seed, 0.5, 10.0 * std::sqrt(2.0));
      const auto r = qho_cluster(ds, params(20, 10, seed));
      good += r.count == 2 && purity(r, ds) >= 0.95;
    }
    CHECK(good >= 29);
  }
  SUBCASE("separation above 8 stddev") {
    std::size_t good = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto ds = two_blobs(100 + seed, 1.0, 9.0);
      good += qho_cluster(ds, params(20, 10, seed)).count == 2;
    }
    CHECK(good >= 27);
  }
}

TEST_CASE("qho_cluster_by_class never mixes classes") {
  Vector a(2), b(2);
  a << 0, 0;
  b << 1, 1;
  const auto ds = synth_blobs({a, b}, {50, 40}, 2.0, 0.0, 8);
  const auto r = qho_cluster_by_class(ds, params(0, 0, 1));
  std::vector<int> owner(r.count, -1);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto& o = owner[r.assignment[i]];
    if (o < 0) o = static_cast<int>(ds.label(i));
    CHECK(o == static_cast<int>(ds.label(i)));
  }
}
