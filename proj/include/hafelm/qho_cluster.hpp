#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "hafelm/dataset.hpp"
#include "hafelm/random.hpp"

namespace hafelm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Projects samples to the plane: d = 2 passes through, d = 1 pads y with
/// zero, d > 2 uses the top two principal components with each component
/// signed so its first nonzero loading is positive.
std::vector<Point2> project_2d(const Dataset& ds);
std::vector<Point2> project_2d(const Matrix& features);

struct GridSpec {
  int resolution = 1;
  double min_x = 0.0, max_x = 1.0;
  double min_y = 0.0, max_y = 1.0;

  double cell_width_x() const { return (max_x - min_x) / resolution; }
  double cell_width_y() const { return (max_y - min_y) / resolution; }
};

struct Cell {
  int ix = 0;
  int iy = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// g x g histogram of sample counts over a tight bounding box.
class DensityGrid {
 public:
  DensityGrid(GridSpec spec, std::vector<int> counts);

  const GridSpec& spec() const { return spec_; }
  int resolution() const { return spec_.resolution; }

  /// floor(g * (coord - min) / (max - min)) clamped to [0, g - 1].
  Cell cell_of(Point2 p) const;
  int count(Cell c) const { return counts_[static_cast<std::size_t>(c.iy * spec_.resolution + c.ix)]; }
  int density_at(Point2 p) const { return count(cell_of(p)); }
  Point2 cell_center(Cell c) const;
  Point2 clamp(Point2 p) const;
  long total() const;

 private:
  GridSpec spec_;
  std::vector<int> counts_;
};

/// Flat axes are widened by 1e-9 on each side.
DensityGrid build_grid(const std::vector<Point2>& points, int g);

struct OscillatorState {
  Point2 center;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  bool converged = false;
};

/// Draws `probes` points from N(center, diag(sigma^2)) clamped to the grid
/// and returns the one in the densest cell; ties go to the probe closest to
/// the current center, then to the earliest draw.
Point2 gaussian_probe(const DensityGrid& grid, const OscillatorState& state, int probes, Rng& rng);

enum class MergeRule {
  /// Centers merge only when they converge into the same cell.
  SameCell,
  /// Centers merge when their cells are joined by an 8-connected path of
  /// cells holding at least `merge_min_density` samples.
  Connected,
};

struct QhoParams {
  int grid_resolution = 0;  ///< 0 selects max(2, ceil(sqrt(N)))
  int oscillators = 0;      ///< 0 selects min(20, N)
  int probes = 32;
  std::uint64_t seed = 0;
  /// Accept a move when the old density is >= the new one, i.e. walk
  /// toward lower density. Debug comparison only.
  bool descent = false;
  /// Hard cap on probe rounds per oscillator.
  int max_rounds = 10000;
  MergeRule merge = MergeRule::Connected;
  int merge_min_density = 1;
  /// Converged centers whose cell holds fewer samples are discarded, unless
  /// that would discard every center.
  int min_peak_density = 2;
};

int default_grid_resolution(std::size_t n);
int default_oscillator_count(std::size_t n);

/// Path of one oscillator: the density of its cell after every round.
struct OscillatorTrace {
  Point2 start;
  Point2 final_center;
  std::vector<int> densities;
  int rounds = 0;
  int halvings = 0;
  bool converged = false;
};

struct ClusterResult {
  std::vector<Point2> centers;
  std::vector<std::size_t> assignment;
  std::size_t count = 0;

  // Diagnostics from the run.
  std::vector<OscillatorTrace> traces;
  int grid_resolution = 0;
  std::size_t oscillators_used = 0;
  bool oscillators_clamped = false;
};

/// Runs one oscillator to convergence on a fixed grid.
OscillatorTrace run_oscillator(const DensityGrid& grid, Point2 start, const QhoParams& params,
                               Rng& rng);

/// Full CA-QHO: project, grid, climb m oscillators started at random
/// samples, merge converged centers per `params.merge`, assign every
/// sample to its nearest center. m > N is clamped to N.
ClusterResult qho_cluster(const Dataset& ds, const QhoParams& params);

/// Clusters each class separately and concatenates the results with
/// globally unique cluster indices, so no cluster spans two classes.
/// Centers are expressed in each class's own projected plane.
ClusterResult qho_cluster_by_class(const Dataset& ds, const QhoParams& params);

}  // namespace hafelm
