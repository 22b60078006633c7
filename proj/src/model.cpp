#include "spinpair/model.hpp"

#include <cmath>

#include "spinpair/errors.hpp"

namespace spinpair {

std::string to_string(ElectronicState s) {
  switch (s) {
    case ElectronicState::G00: return "G00";
    case ElectronicState::E10: return "E10";
    case ElectronicState::E01: return "E01";
    case ElectronicState::E11: return "E11";
  }
  return "?";
}

ElectronicState electronic_state_from_string(const std::string& name) {
  if (name == "G00") return ElectronicState::G00;
  if (name == "E10") return ElectronicState::E10;
  if (name == "E01") return ElectronicState::E01;
  if (name == "E11") return ElectronicState::E11;
  throw ValidationError("unknown electronic state: " + name);
}

const StateTensors& PairSiteModel::tensors(ElectronicState s) const {
  switch (s) {
    case ElectronicState::G00: return ground;
    case ElectronicState::E10: return excited1;
    case ElectronicState::E01: return excited2;
    case ElectronicState::E11:
      if (!doubly_excited)
        throw ValidationError("PairSiteModel: tensors for E11 were not supplied");
      return *doubly_excited;
  }
  throw ValidationError("PairSiteModel: bad electronic state");
}

StateTensors& PairSiteModel::tensors(ElectronicState s) {
  return const_cast<StateTensors&>(static_cast<const PairSiteModel&>(*this).tensors(s));
}

double PairSiteModel::manifold_origin(ElectronicState s) const {
  if (s == ElectronicState::E10) return nu10;
  if (s == ElectronicState::E01) return nu01();
  throw ValidationError("manifold_origin: only E10 and E01 carry optical origins");
}

PairSiteModel with_ising_coupling(const PairSiteModel& m) {
  PairSiteModel out = m;
  for (auto* st : {&out.ground, &out.excited1, &out.excited2}) {
    const double jzz = st->J(2, 2);
    st->J = Matrix3::Zero();
    st->J(2, 2) = jzz;
  }
  if (out.doubly_excited) {
    const double jzz = out.doubly_excited->J(2, 2);
    out.doubly_excited->J = Matrix3::Zero();
    out.doubly_excited->J(2, 2) = jzz;
  }
  return out;
}

void validate(const PairSiteModel& m) {
  for (const auto* st : {&m.ground, &m.excited1, &m.excited2}) {
    if (!all_finite(st->g1) || !all_finite(st->g2) || !all_finite(st->J))
      throw ValidationError("PairSiteModel: non-finite tensor");
  }
  if (!std::isfinite(m.nu10) || !std::isfinite(m.delta) || !std::isfinite(m.kappa))
    throw ValidationError("PairSiteModel: non-finite scalar parameter");
}

}  // namespace spinpair
