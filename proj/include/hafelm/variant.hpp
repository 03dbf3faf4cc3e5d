#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hafelm/elm.hpp"
#include "hafelm/membership.hpp"
#include "hafelm/qho_cluster.hpp"

namespace hafelm {

/// The compared methods. The three fuzzy variants share one training path
/// and differ only in how memberships are formed.
enum class Variant { ELM, RELM, DI_FELM, DE_FELM, HA_FELM };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& name);
const std::vector<Variant>& all_variants();
Solver solver_for(Variant v);
bool is_fuzzy(Variant v);

struct MembershipSettings {
  double theta = 0.001;
  double alpha = 0.7;
  std::size_t k = 5;
  /// Unset: fixed-k for DE-FELM, cluster-adaptive for HA-FELM.
  std::optional<DensityMode> density_mode;
  QhoParams qho;
};

/// DI-FELM forces alpha = 1 and DE-FELM alpha = 0.
MembershipConfig resolve_membership_config(Variant v, const MembershipSettings& settings);

struct MembershipOutcome {
  MembershipVector mu;
  MembershipVector omega;
  MembershipVector s;
  std::optional<ClusterResult> clusters;
};

/// Memberships a variant trains with. Terms a variant does not use are
/// reported as all ones.
MembershipOutcome compute_memberships(const Dataset& ds, Variant v, const MembershipSettings& settings);

FelmModel train_variant(const Dataset& ds, Variant v, TrainConfig cfg, const MembershipVector& s);

}  // namespace hafelm
