#pragma once

#include <cstddef>
#include <vector>

#include "hafelm/dataset.hpp"
#include "hafelm/qho_cluster.hpp"

namespace hafelm {

enum class DensityMode { FixedK, ClusterAdaptive };

struct MembershipConfig {
  double theta = 0.001;
  double alpha = 0.7;
  std::size_t k = 5;
  DensityMode density_mode = DensityMode::ClusterAdaptive;

  void validate() const;
};

/// Per-sample fuzzy weights aligned with dataset indices, each in (0, 1].
class MembershipVector {
 public:
  MembershipVector() = default;
  explicit MembershipVector(std::vector<double> values);

  static MembershipVector ones(std::size_t n) { return MembershipVector(std::vector<double>(n, 1.0)); }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

Vector class_center(const Dataset& ds, ClassIndex c);

/// exp(-d_i / (d_max + theta)) with the center and d_max taken within the
/// sample's class: the exponential distance membership scaled by 1/e so
/// that it peaks at exactly 1 on the class center.
MembershipVector distance_membership(const Dataset& ds, const MembershipConfig& cfg);

/// Sum of exp(-d_ij) over the neighbor set of i, divided by the largest
/// such sum in i's class. FixedK uses the k nearest same-class samples;
/// ClusterAdaptive uses every other same-class member of i's cluster.
/// An empty neighbor set yields 1.
MembershipVector density_membership(const Dataset& ds, const MembershipConfig& cfg,
                                    const ClusterResult* clusters = nullptr);

/// alpha * mu + (1 - alpha) * omega, element-wise.
MembershipVector hybrid_membership(const MembershipVector& mu, const MembershipVector& omega,
                                   const MembershipConfig& cfg);

}  // namespace hafelm
