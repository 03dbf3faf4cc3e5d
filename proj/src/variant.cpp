#include "hafelm/variant.hpp"

#include <algorithm>
#include <cctype>

#include "hafelm/error.hpp"

namespace hafelm {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::ELM: return "ELM";
    case Variant::RELM: return "RELM";
    case Variant::DI_FELM: return "DI-FELM";
    case Variant::DE_FELM: return "DE-FELM";
    case Variant::HA_FELM: return "HA-FELM";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  std::string up;
  for (char c : name) up.push_back(c == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (auto v : all_variants())
    if (up == variant_name(v)) return v;
  throw Error(ErrorKind::Usage, "unknown variant '" + name + "' (ELM|RELM|DI-FELM|DE-FELM|HA-FELM)");
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v = {Variant::ELM, Variant::RELM, Variant::DI_FELM,
                                         Variant::DE_FELM, Variant::HA_FELM};
  return v;
}

Solver solver_for(Variant v) {
  switch (v) {
    case Variant::ELM: return Solver::ELM;
    case Variant::RELM: return Solver::RELM;
    default: return Solver::FELM;
  }
}

bool is_fuzzy(Variant v) { return solver_for(v) == Solver::FELM; }

MembershipConfig resolve_membership_config(Variant v, const MembershipSettings& settings) {
  MembershipConfig cfg;
  cfg.theta = settings.theta;
  cfg.k = settings.k;
  cfg.alpha = settings.alpha;
  cfg.density_mode = DensityMode::ClusterAdaptive;
  if (v == Variant::DI_FELM) cfg.alpha = 1.0;
  if (v == Variant::DE_FELM) {
    cfg.alpha = 0.0;
    cfg.density_mode = DensityMode::FixedK;
  }
  if (settings.density_mode) cfg.density_mode = *settings.density_mode;
  cfg.validate();
  return cfg;
}

MembershipOutcome compute_memberships(const Dataset& ds, Variant v, const MembershipSettings& settings) {
  const auto ones = MembershipVector::ones(ds.size());
  MembershipOutcome out{ones, ones, ones, std::nullopt};
  if (!is_fuzzy(v)) return out;

  const auto cfg = resolve_membership_config(v, settings);
  if (cfg.alpha > 0.0) out.mu = distance_membership(ds, cfg);
  if (cfg.alpha < 1.0) {
    if (cfg.density_mode == DensityMode::ClusterAdaptive) {
      out.clusters = qho_cluster_by_class(ds, settings.qho);
      out.omega = density_membership(ds, cfg, &*out.clusters);
    } else {
      out.omega = density_membership(ds, cfg);
    }
  }
  out.s = hybrid_membership(out.mu, out.omega, cfg);
  return out;
}

FelmModel train_variant(const Dataset& ds, Variant v, TrainConfig cfg, const MembershipVector& s) {
  cfg.solver = solver_for(v);
  return train(ds, cfg, s);
}

}  // namespace hafelm
