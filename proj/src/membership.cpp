#include "hafelm/membership.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hafelm/error.hpp"

namespace hafelm {

void MembershipConfig::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw Error(ErrorKind::Config, "theta must be > 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::Config, "alpha must lie in [0, 1]");
  if (k < 1) throw Error(ErrorKind::Config, "k must be >= 1");
}

MembershipVector::MembershipVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0 && values_[i] <= 1.0))
      throw Error(ErrorKind::MembershipRange,
                  "membership " + std::to_string(i) + " outside (0, 1]: " + std::to_string(values_[i]));
  }
}

Vector class_center(const Dataset& ds, ClassIndex c) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(ds.dim()));
  std::size_t n = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.label(i) != c) continue;
    sum += ds.row(i).transpose();
    ++n;
  }
  if (n == 0) throw Error(ErrorKind::EmptyClass, "class " + ds.class_name(c) + " has no samples");
  return sum / static_cast<double>(n);
}

namespace {

void require_nonempty_classes(const Dataset& ds) {
  const auto counts = ds.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] == 0) throw Error(ErrorKind::EmptyClass, "class " + ds.class_name(c) + " has no samples");
}

// Smallest value emitted when a normalized weight underflows.
constexpr double kFloor = std::numeric_limits<double>::min();

}  // namespace

MembershipVector distance_membership(const Dataset& ds, const MembershipConfig& cfg) {
  cfg.validate();
  require_nonempty_classes(ds);
  std::vector<double> out(ds.size());
  for (ClassIndex c = 0; c < ds.num_classes(); ++c) {
    const auto members = ds.class_indices(c);
    const Vector center = class_center(ds, c);
    std::vector<double> dist(members.size());
    double d_max = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      dist[k] = (ds.row(members[k]).transpose() - center).norm();
      if (!std::isfinite(dist[k])) throw Error(ErrorKind::Numeric, "non-finite center distance");
      d_max = std::max(d_max, dist[k]);
    }
    for (std::size_t k = 0; k < members.size(); ++k)
      out[members[k]] = std::exp(-dist[k] / (d_max + cfg.theta));
  }
  return MembershipVector(std::move(out));
}

MembershipVector density_membership(const Dataset& ds, const MembershipConfig& cfg,
                                    const ClusterResult* clusters) {
  cfg.validate();
  require_nonempty_classes(ds);
  const bool adaptive = cfg.density_mode == DensityMode::ClusterAdaptive;
  if (adaptive) {
    if (clusters == nullptr)
      throw Error(ErrorKind::Config, "cluster-adaptive density needs a cluster result");
    if (clusters->assignment.size() != ds.size())
      throw Error(ErrorKind::Alignment, "cluster assignment does not cover the dataset");
  } else {
    const auto counts = ds.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] <= cfg.k)
        throw Error(ErrorKind::Config, "class " + ds.class_name(c) + " has " +
                                           std::to_string(counts[c]) + " samples, needs more than k=" +
                                           std::to_string(cfg.k));
  }

  std::vector<double> out(ds.size(), 1.0);
  for (ClassIndex c = 0; c < ds.num_classes(); ++c) {
    const auto members = ds.class_indices(c);
    const auto n = members.size();
    // Log of the raw neighbor sum; -inf marks an empty neighbor set.
    std::vector<double> log_raw(n, -std::numeric_limits<double>::infinity());
    std::vector<double> neg_dist;
    for (std::size_t a = 0; a < n; ++a) {
      neg_dist.clear();
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        if (adaptive && clusters->assignment[members[a]] != clusters->assignment[members[b]]) continue;
        neg_dist.push_back(-(ds.row(members[a]) - ds.row(members[b])).norm());
      }
      if (!adaptive) {
        std::partial_sort(neg_dist.begin(), neg_dist.begin() + static_cast<std::ptrdiff_t>(cfg.k),
                          neg_dist.end(), std::greater<>());
        neg_dist.resize(cfg.k);
      }
      if (neg_dist.empty()) continue;
      const double top = *std::max_element(neg_dist.begin(), neg_dist.end());
      double acc = 0.0;
      for (double v : neg_dist) acc += std::exp(v - top);
      log_raw[a] = top + std::log(acc);
      if (!std::isfinite(log_raw[a])) throw Error(ErrorKind::Numeric, "non-finite density");
    }
    const double class_max = *std::max_element(log_raw.begin(), log_raw.end());
    for (std::size_t a = 0; a < n; ++a) {
      if (std::isinf(log_raw[a])) continue;
      out[members[a]] = std::clamp(std::exp(log_raw[a] - class_max), kFloor, 1.0);
    }
  }
  return MembershipVector(std::move(out));
}

MembershipVector hybrid_membership(const MembershipVector& mu, const MembershipVector& omega,
                                   const MembershipConfig& cfg) {
  cfg.validate();
  if (mu.size() != omega.size())
    throw Error(ErrorKind::Alignment, "distance and density memberships differ in length");
  std::vector<double> out(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (cfg.alpha == 1.0) {
      out[i] = mu[i];
    } else if (cfg.alpha == 0.0) {
      out[i] = omega[i];
    } else {
      out[i] = std::clamp(cfg.alpha * mu[i] + (1.0 - cfg.alpha) * omega[i],
                          std::min(mu[i], omega[i]), std::max(mu[i], omega[i]));
    }
  }
  return MembershipVector(std::move(out));
}

}  // namespace hafelm
