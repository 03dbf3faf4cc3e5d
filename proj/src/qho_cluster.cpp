#include "hafelm/qho_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "hafelm/error.hpp"

namespace hafelm {

namespace {
constexpr double kFlatAxisPad = 1e-9;
constexpr std::uint64_t kSelectionStream = ~std::uint64_t{0};

bool all_rows_identical(const Matrix& f) {
  for (Eigen::Index i = 1; i < f.rows(); ++i)
    if (f.row(i) != f.row(0)) return false;
  return true;
}

double squared_distance(Point2 a, Point2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}
}  // namespace

std::vector<Point2> project_2d(const Matrix& f) {
  const auto n = f.rows();
  const auto d = f.cols();
  if (n < 2) throw Error(ErrorKind::Degenerate, "projection needs at least 2 samples");
  if (d < 1) throw Error(ErrorKind::Shape, "projection needs dimension >= 1");
  if (all_rows_identical(f)) throw Error(ErrorKind::Degenerate, "all samples are identical");

  std::vector<Point2> out(static_cast<std::size_t>(n));
  if (d <= 2) {
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = {f(i, 0), d == 2 ? f(i, 1) : 0.0};
    return out;
  }

  const Eigen::RowVectorXd mean = f.colwise().mean();
  const Matrix centered = f.rowwise() - mean;
  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  Matrix loadings = svd.matrixV().leftCols(std::min<Eigen::Index>(2, svd.matrixV().cols()));
  for (Eigen::Index c = 0; c < loadings.cols(); ++c) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (std::abs(loadings(j, c)) > 1e-12) {
        if (loadings(j, c) < 0) loadings.col(c) *= -1.0;
        break;
      }
    }
  }
  const Matrix proj = centered * loadings;
  for (Eigen::Index i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = {proj(i, 0), proj.cols() > 1 ? proj(i, 1) : 0.0};
  return out;
}

std::vector<Point2> project_2d(const Dataset& ds) { return project_2d(ds.features()); }

DensityGrid::DensityGrid(GridSpec spec, std::vector<int> counts)
    : spec_(spec), counts_(std::move(counts)) {
  if (spec_.resolution < 1) throw Error(ErrorKind::Config, "grid resolution must be >= 1");
  if (!(spec_.max_x > spec_.min_x && spec_.max_y > spec_.min_y))
    throw Error(ErrorKind::Degenerate, "grid bounds are degenerate");
  if (counts_.size() != static_cast<std::size_t>(spec_.resolution) * spec_.resolution)
    throw Error(ErrorKind::Shape, "grid counts do not match resolution");
}

Cell DensityGrid::cell_of(Point2 p) const {
  const int g = spec_.resolution;
  auto index = [g](double v, double lo, double hi) {
    const double t = std::floor(g * (v - lo) / (hi - lo));
    return static_cast<int>(std::clamp(t, 0.0, static_cast<double>(g - 1)));
  };
  return {index(p.x, spec_.min_x, spec_.max_x), index(p.y, spec_.min_y, spec_.max_y)};
}

Point2 DensityGrid::cell_center(Cell c) const {
  return {spec_.min_x + (c.ix + 0.5) * spec_.cell_width_x(),
          spec_.min_y + (c.iy + 0.5) * spec_.cell_width_y()};
}

Point2 DensityGrid::clamp(Point2 p) const {
  return {std::clamp(p.x, spec_.min_x, spec_.max_x), std::clamp(p.y, spec_.min_y, spec_.max_y)};
}

long DensityGrid::total() const { return std::accumulate(counts_.begin(), counts_.end(), 0L); }

DensityGrid build_grid(const std::vector<Point2>& points, int g) {
  if (g < 1) throw Error(ErrorKind::Config, "grid resolution must be >= 1");
  if (points.empty()) throw Error(ErrorKind::EmptyInput, "no points to grid");
  GridSpec spec;
  spec.resolution = g;
  spec.min_x = spec.max_x = points.front().x;
  spec.min_y = spec.max_y = points.front().y;
  for (const auto& p : points) {
    spec.min_x = std::min(spec.min_x, p.x);
    spec.max_x = std::max(spec.max_x, p.x);
    spec.min_y = std::min(spec.min_y, p.y);
    spec.max_y = std::max(spec.max_y, p.y);
  }
  if (!(spec.max_x > spec.min_x)) {
    spec.min_x -= kFlatAxisPad;
    spec.max_x += kFlatAxisPad;
  }
  if (!(spec.max_y > spec.min_y)) {
    spec.min_y -= kFlatAxisPad;
    spec.max_y += kFlatAxisPad;
  }
  DensityGrid grid(spec, std::vector<int>(static_cast<std::size_t>(g) * g, 0));
  std::vector<int> counts(static_cast<std::size_t>(g) * g, 0);
  for (const auto& p : points) {
    const auto c = grid.cell_of(p);
    ++counts[static_cast<std::size_t>(c.iy * g + c.ix)];
  }
  return DensityGrid(spec, std::move(counts));
}

Point2 gaussian_probe(const DensityGrid& grid, const OscillatorState& state, int probes, Rng& rng) {
  if (probes < 1) throw Error(ErrorKind::Config, "probe count must be >= 1");
  Point2 best{};
  int best_density = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < probes; ++k) {
    const double x = rng.normal(state.center.x, state.sigma_x);
    const double y = rng.normal(state.center.y, state.sigma_y);
    const Point2 p = grid.clamp({x, y});
    const int a = grid.density_at(p);
    const double dist = squared_distance(p, state.center);
    if (a > best_density || (a == best_density && dist < best_dist)) {
      best = p;
      best_density = a;
      best_dist = dist;
    }
  }
  return best;
}

int default_grid_resolution(std::size_t n) {
  return std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
}

int default_oscillator_count(std::size_t n) {
  return static_cast<int>(std::min<std::size_t>(20, n));
}

OscillatorTrace run_oscillator(const DensityGrid& grid, Point2 start, const QhoParams& params,
                               Rng& rng) {
  const auto& spec = grid.spec();
  const double wx = spec.cell_width_x();
  const double wy = spec.cell_width_y();
  OscillatorState state{grid.clamp(start), (spec.max_x - spec.min_x) / 4.0,
                        (spec.max_y - spec.min_y) / 4.0, false};
  OscillatorTrace trace;
  trace.start = state.center;
  trace.densities.push_back(grid.density_at(state.center));

  while (trace.rounds < params.max_rounds) {
    if (state.sigma_x < wx && state.sigma_y < wy) {
      state.converged = true;
      break;
    }
    const Point2 candidate = gaussian_probe(grid, state, params.probes, rng);
    const int current = grid.density_at(state.center);
    const int probed = grid.density_at(candidate);
    const bool accept = params.descent ? current - probed >= 0 : probed >= current;
    if (accept) state.center = candidate;
    // A plateau move is accepted but still counts as a failed round, which
    // keeps the number of rounds finite on flat density.
    if (!accept || probed == current) {
      state.sigma_x /= 2.0;
      state.sigma_y /= 2.0;
      ++trace.halvings;
    }
    ++trace.rounds;
    trace.densities.push_back(grid.density_at(state.center));
  }
  trace.final_center = state.center;
  trace.converged = state.converged;
  return trace;
}

namespace {

// Component id per cell, or -1 where the cell does not join any path.
std::vector<long> merge_components(const DensityGrid& grid, const QhoParams& params) {
  const int g = grid.resolution();
  std::vector<long> comp(static_cast<std::size_t>(g) * g, -1);
  if (params.merge == MergeRule::SameCell) return comp;
  long next = 0;
  std::vector<Cell> stack;
  for (int iy = 0; iy < g; ++iy) {
    for (int ix = 0; ix < g; ++ix) {
      const auto flat = static_cast<std::size_t>(iy * g + ix);
      if (comp[flat] >= 0 || grid.count({ix, iy}) < params.merge_min_density) continue;
      comp[flat] = next;
      stack.push_back({ix, iy});
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const Cell n{c.ix + dx, c.iy + dy};
            if (n.ix < 0 || n.iy < 0 || n.ix >= g || n.iy >= g) continue;
            const auto nf = static_cast<std::size_t>(n.iy * g + n.ix);
            if (comp[nf] >= 0 || grid.count(n) < params.merge_min_density) continue;
            comp[nf] = next;
            stack.push_back(n);
          }
        }
      }
      ++next;
    }
  }
  return comp;
}

ClusterResult single_cluster(Point2 center, std::size_t n) {
  ClusterResult r;
  r.centers = {center};
  r.assignment.assign(n, 0);
  r.count = 1;
  return r;
}

}  // namespace

ClusterResult qho_cluster(const Dataset& ds, const QhoParams& params) {
  const std::size_t n = ds.size();
  const auto& f = ds.features();
  if (params.grid_resolution < 0 || params.oscillators < 0 || params.probes < 1 ||
      params.merge_min_density < 1 || params.min_peak_density < 1)
    throw Error(ErrorKind::Config, "invalid CA-QHO parameters");
  if (n == 1 || all_rows_identical(f)) {
    auto r = single_cluster({f(0, 0), f.cols() > 1 ? f(0, 1) : 0.0}, n);
    r.oscillators_used = 1;
    return r;
  }

  const auto points = project_2d(f);
  const int g = params.grid_resolution > 0 ? params.grid_resolution : default_grid_resolution(n);
  const auto grid = build_grid(points, g);

  std::size_t m = params.oscillators > 0 ? static_cast<std::size_t>(params.oscillators)
                                         : static_cast<std::size_t>(default_oscillator_count(n));
  ClusterResult result;
  if (m > n) {
    m = n;
    result.oscillators_clamped = true;
  }
  result.grid_resolution = g;
  result.oscillators_used = m;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng selector(params.seed, kSelectionStream);
  for (std::size_t i = 0; i < m; ++i) std::swap(order[i], order[i + selector.index(n - i)]);

  result.traces.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rng rng(params.seed, i);
    result.traces.push_back(run_oscillator(grid, points[order[i]], params, rng));
  }

  // Group converged centers, keeping first-seen order.
  const auto component = merge_components(grid, params);
  std::vector<long> keys;
  std::vector<Point2> sums;
  std::vector<int> members;
  bool any_peak = false;
  for (const auto& t : result.traces) any_peak = any_peak || grid.density_at(t.final_center) >= params.min_peak_density;
  for (const auto& t : result.traces) {
    if (any_peak && grid.density_at(t.final_center) < params.min_peak_density) continue;
    const auto c = grid.cell_of(t.final_center);
    const auto flat = static_cast<long>(c.iy) * g + c.ix;
    const long key = component[static_cast<std::size_t>(flat)] >= 0
                         ? component[static_cast<std::size_t>(flat)]
                         : -1 - flat;
    const auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      sums.push_back(t.final_center);
      members.push_back(1);
    } else {
      const auto k = static_cast<std::size_t>(it - keys.begin());
      sums[k].x += t.final_center.x;
      sums[k].y += t.final_center.y;
      ++members[k];
    }
  }
  for (std::size_t k = 0; k < keys.size(); ++k)
    result.centers.push_back({sums[k].x / members[k], sums[k].y / members[k]});
  result.count = result.centers.size();

  result.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double best_d = squared_distance(points[i], result.centers[0]);
    for (std::size_t k = 1; k < result.centers.size(); ++k) {
      const double dk = squared_distance(points[i], result.centers[k]);
      if (dk < best_d) {
        best_d = dk;
        best = k;
      }
    }
    result.assignment[i] = best;
  }
  return result;
}

ClusterResult qho_cluster_by_class(const Dataset& ds, const QhoParams& params) {
  ClusterResult merged;
  merged.assignment.assign(ds.size(), 0);
  for (ClassIndex c = 0; c < ds.num_classes(); ++c) {
    const auto members = ds.class_indices(c);
    if (members.empty()) continue;
    QhoParams p = params;
    p.seed = splitmix64(params.seed + c);
    const auto r = qho_cluster(ds.subset(members), p);
    const auto offset = merged.centers.size();
    merged.centers.insert(merged.centers.end(), r.centers.begin(), r.centers.end());
    for (std::size_t k = 0; k < members.size(); ++k)
      merged.assignment[members[k]] = offset + r.assignment[k];
    merged.traces.insert(merged.traces.end(), r.traces.begin(), r.traces.end());
    merged.oscillators_used += r.oscillators_used;
    merged.oscillators_clamped = merged.oscillators_clamped || r.oscillators_clamped;
    merged.grid_resolution = std::max(merged.grid_resolution, r.grid_resolution);
  }
  merged.count = merged.centers.size();
  return merged;
}

}  // namespace hafelm
