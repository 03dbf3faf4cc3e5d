#include "hafelm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "hafelm/error.hpp"
#include "hafelm/random.hpp"

namespace hafelm {

Dataset::Dataset(Matrix features, std::vector<ClassIndex> labels, std::size_t num_classes,
                 std::vector<std::string> class_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      num_classes_(num_classes),
      class_names_(std::move(class_names)) {
  if (labels_.empty()) throw Error(ErrorKind::EmptyInput, "dataset has no samples");
  if (features_.cols() < 1) throw Error(ErrorKind::Shape, "dataset has zero feature dimension");
  if (static_cast<std::size_t>(features_.rows()) != labels_.size())
    throw Error(ErrorKind::Alignment, "feature rows and labels differ in length");
  if (num_classes_ < 1) throw Error(ErrorKind::Config, "dataset needs at least one class");
  if (!class_names_.empty() && class_names_.size() != num_classes_)
    throw Error(ErrorKind::Alignment, "class name count differs from class count");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= num_classes_)
      throw Error(ErrorKind::Config, "sample " + std::to_string(i) + " has label out of range");
  }
  if (!features_.allFinite()) throw Error(ErrorKind::Numeric, "dataset has non-finite features");
}

std::string Dataset::class_name(ClassIndex c) const {
  if (c < class_names_.size()) return class_names_[c];
  return std::to_string(c);
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes_, 0);
  for (auto l : labels_) ++counts[l];
  return counts;
}

std::vector<std::size_t> Dataset::class_indices(ClassIndex c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == c) out.push_back(i);
  return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Matrix f(static_cast<Eigen::Index>(indices.size()), features_.cols());
  std::vector<ClassIndex> l;
  l.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    f.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(indices[r]));
    l.push_back(labels_[indices[r]]);
  }
  return Dataset(std::move(f), std::move(l), num_classes_, class_names_);
}

Dataset Dataset::with_features(Matrix features) const {
  return Dataset(std::move(features), labels_, num_classes_, class_names_);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(std::istream& in, bool has_header) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<ClassIndex> labels;
  std::vector<std::string> names;
  std::unordered_map<std::string, ClassIndex> name_to_index;
  bool header_pending = has_header;

  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = split_fields(body);
    if (fields.size() < 2)
      throw ParseError(line_no, "expected at least one feature and a label");
    if (dim == 0) dim = fields.size() - 1;
    if (fields.size() - 1 != dim)
      throw ParseError(line_no, "expected " + std::to_string(dim + 1) + " fields, found " +
                                    std::to_string(fields.size()));
    for (std::size_t j = 0; j < dim; ++j) {
      double v = 0.0;
      if (!parse_double(fields[j], v))
        throw ParseError(line_no, "non-numeric feature '" + std::string(fields[j]) + "'");
      values.push_back(v);
    }
    const std::string label(fields.back());
    if (label.empty()) throw ParseError(line_no, "empty label");
    auto [it, inserted] = name_to_index.try_emplace(label, names.size());
    if (inserted) names.push_back(label);
    labels.push_back(it->second);
  }
  if (labels.empty()) throw Error(ErrorKind::EmptyInput, "no data rows");

  Matrix features(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j)
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * dim + j];
  const auto m = names.size();
  return Dataset(std::move(features), std::move(labels), m, std::move(names));
}

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::EmptyInput, "cannot open " + path.string());
  return parse_csv(in, has_header);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const Dataset& ds, std::ostream& out, bool header) {
  if (header) {
    for (std::size_t j = 0; j < ds.dim(); ++j) out << 'f' << j << ',';
    out << "label\n";
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.dim(); ++j)
      out << format_double(ds.features()(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j)))
          << ',';
    out << ds.class_name(ds.label(i)) << '\n';
  }
}

void write_csv(const Dataset& ds, const std::filesystem::path& path, bool header) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Usage, "cannot write " + path.string());
  write_csv(ds, out, header);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw Error(ErrorKind::Config, "train fraction must lie in (0, 1)");
  const std::size_t n = ds.size();
  if (n < 2) throw Error(ErrorKind::Degenerate, "cannot split fewer than 2 samples");

  Rng rng(spec.seed);
  std::vector<std::size_t> train_idx;
  if (!spec.stratified) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const auto n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * n + 1e-9));
    train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  } else {
    const auto counts = ds.class_counts();
    std::vector<std::size_t> quota(counts.size());
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 1)
        throw Error(ErrorKind::Config,
                    "stratified split needs at least 2 samples in class " + ds.class_name(c));
      quota[c] = static_cast<std::size_t>(std::floor(spec.train_fraction * counts[c] + 1e-9));
      assigned += quota[c];
    }
    const auto target = static_cast<std::size_t>(std::llround(spec.train_fraction * n));
    std::vector<std::size_t> by_size(counts.size());
    std::iota(by_size.begin(), by_size.end(), 0);
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](auto a, auto b) { return counts[a] > counts[b]; });
    for (auto c : by_size) {
      if (assigned >= target) break;
      if (quota[c] < counts[c]) {
        ++quota[c];
        ++assigned;
      }
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
      auto members = ds.class_indices(c);
      rng.shuffle(members);
      train_idx.insert(train_idx.end(), members.begin(),
                       members.begin() + static_cast<std::ptrdiff_t>(quota[c]));
    }
  }
  if (train_idx.empty() || train_idx.size() == n)
    throw Error(ErrorKind::Degenerate, "split leaves one side empty");

  std::sort(train_idx.begin(), train_idx.end());
  std::vector<bool> in_train(n, false);
  for (auto i : train_idx) in_train[i] = true;
  std::vector<std::size_t> test_idx;
  for (std::size_t i = 0; i < n; ++i)
    if (!in_train[i]) test_idx.push_back(i);
  return {ds.subset(train_idx), ds.subset(test_idx)};
}

FeatureScaling FeatureScaling::fit(const Dataset& ds) {
  return {ds.features().colwise().minCoeff().transpose(),
          ds.features().colwise().maxCoeff().transpose()};
}

Vector FeatureScaling::apply(const Vector& x) const {
  if (x.size() != mins.size()) throw Error(ErrorKind::Shape, "scaling dimension mismatch");
  Vector out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double range = maxs(j) - mins(j);
    out(j) = range > 0.0 ? (x(j) - mins(j)) / range : 0.0;
  }
  return out;
}

Dataset FeatureScaling::apply(const Dataset& ds) const {
  Matrix f(ds.features().rows(), ds.features().cols());
  for (Eigen::Index i = 0; i < f.rows(); ++i) f.row(i) = apply(Vector(ds.features().row(i).transpose())).transpose();
  return ds.with_features(std::move(f));
}

SynthData synth_blobs_detailed(const std::vector<Vector>& centers,
                               const std::vector<std::size_t>& counts, double stddev,
                               double outlier_fraction, std::uint64_t seed) {
  const std::size_t m = centers.size();
  if (m == 0 || counts.size() != m)
    throw Error(ErrorKind::Config, "centers and counts must be non-empty and equal in length");
  if (!(stddev > 0.0)) throw Error(ErrorKind::Config, "stddev must be positive");
  if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0))
    throw Error(ErrorKind::Config, "outlier fraction must lie in [0, 1)");
  if (outlier_fraction > 0.0 && m == 1)
    throw Error(ErrorKind::Config, "label-flip outliers need at least 2 classes");
  const auto d = centers.front().size();
  if (d < 1) throw Error(ErrorKind::Config, "centers must have dimension >= 1");
  for (const auto& c : centers)
    if (c.size() != d) throw Error(ErrorKind::Config, "centers differ in dimension");
  const std::size_t n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (n == 0) throw Error(ErrorKind::Config, "counts sum to zero");

  Rng rng(seed);
  Matrix features(static_cast<Eigen::Index>(n), d);
  std::vector<ClassIndex> truth;
  truth.reserve(n);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t k = 0; k < counts[c]; ++k, ++row) {
      for (Eigen::Index j = 0; j < d; ++j) features(row, j) = rng.normal(centers[c](j), stddev);
      truth.push_back(c);
    }
  }

  std::vector<ClassIndex> labels = truth;
  std::vector<bool> flipped(n, false);
  std::size_t offset = 0;
  for (std::size_t c = 0; c < m; ++c) {
    const auto n_flip = static_cast<std::size_t>(std::llround(outlier_fraction * counts[c]));
    std::vector<std::size_t> members(counts[c]);
    std::iota(members.begin(), members.end(), offset);
    rng.shuffle(members);
    for (std::size_t k = 0; k < n_flip && k < members.size(); ++k) {
      const auto i = members[k];
      auto other = rng.index(m - 1);
      if (other >= c) ++other;
      labels[i] = other;
      flipped[i] = true;
    }
    offset += counts[c];
  }
  return {Dataset(std::move(features), std::move(labels), m), std::move(truth),
          std::move(flipped)};
}

Dataset synth_blobs(const std::vector<Vector>& centers, const std::vector<std::size_t>& counts,
                    double stddev, double outlier_fraction, std::uint64_t seed) {
  return synth_blobs_detailed(centers, counts, stddev, outlier_fraction, seed).data;
}

}  // namespace hafelm
