#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hafelm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ClassIndex = std::size_t;

/// Labeled feature vectors. Immutable after construction; row i of the
/// feature matrix is sample i, and that index is what memberships,
/// cluster assignments and splits refer to.
class Dataset {
 public:
  Dataset(Matrix features, std::vector<ClassIndex> labels, std::size_t num_classes,
          std::vector<std::string> class_names = {});

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }
  std::size_t num_classes() const { return num_classes_; }

  const Matrix& features() const { return features_; }
  auto row(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)); }
  const std::vector<ClassIndex>& labels() const { return labels_; }
  ClassIndex label(std::size_t i) const { return labels_[i]; }

  /// Empty when the data carried no names.
  const std::vector<std::string>& class_names() const { return class_names_; }
  /// Name for a class index, falling back to its decimal index.
  std::string class_name(ClassIndex c) const;

  std::vector<std::size_t> class_counts() const;
  std::vector<std::size_t> class_indices(ClassIndex c) const;

  /// Samples at `indices` in the given order; class metadata is kept.
  Dataset subset(const std::vector<std::size_t>& indices) const;

  /// Same samples with a replacement feature matrix of identical row count.
  Dataset with_features(Matrix features) const;

 private:
  Matrix features_;
  std::vector<ClassIndex> labels_;
  std::size_t num_classes_;
  std::vector<std::string> class_names_;
};

/// Loads "f1,...,fd,label" rows. Labels are remapped to dense indices in
/// first-appearance order and the original strings become class names.
Dataset load_csv(const std::filesystem::path& path, bool has_header);
Dataset parse_csv(std::istream& in, bool has_header);

/// Writes rows in the format load_csv reads; values use shortest
/// round-trip formatting.
void write_csv(const Dataset& ds, const std::filesystem::path& path, bool header = false);
void write_csv(const Dataset& ds, std::ostream& out, bool header = false);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  bool stratified = true;
};

/// Seeded train/test partition. Stratified mode gives each class
/// floor(fraction * n_c) training samples and hands the remainder of
/// round(fraction * N) to the largest classes first (ties by class index).
/// Both sides keep the original relative sample order.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

/// Per-dimension bounds used for min-max scaling to [0, 1].
struct FeatureScaling {
  Vector mins;
  Vector maxs;

  static FeatureScaling fit(const Dataset& ds);
  /// Flat dimensions map to 0.
  Vector apply(const Vector& x) const;
  Dataset apply(const Dataset& ds) const;
};

/// Result of the synthetic blob generator with the ground truth kept.
struct SynthData {
  Dataset data;
  std::vector<ClassIndex> true_labels;
  std::vector<bool> flipped;
};

/// Isotropic Gaussian blobs, one per class, emitted class by class.
/// In each class llround(outlier_fraction * counts[c]) samples, chosen
/// uniformly, get their label moved to a uniformly random other class.
SynthData synth_blobs_detailed(const std::vector<Vector>& centers,
                               const std::vector<std::size_t>& counts, double stddev,
                               double outlier_fraction, std::uint64_t seed);

Dataset synth_blobs(const std::vector<Vector>& centers, const std::vector<std::size_t>& counts,
                    double stddev, double outlier_fraction, std::uint64_t seed);

}  // namespace hafelm
