#pragma once

#include <optional>
#include <string>

#include "spinpair/tensor.hpp"

namespace spinpair {

/// Electronic configuration of the pair: both ions in the optical ground
/// state, one ion excited, or both excited. The doubly excited state only
/// enters the blockade analysis and its tensors are optional.
enum class ElectronicState { G00, E10, E01, E11 };

enum class OpticalParity { Even, Odd };

std::string to_string(ElectronicState s);
ElectronicState electronic_state_from_string(const std::string& name);

/// Spin-Hamiltonian parameters of one electronic state of the pair.
struct StateTensors {
  Matrix3 g1 = Matrix3::Zero();  // GHz/T, Zeeman tensor of ion 1
  Matrix3 g2 = Matrix3::Zero();  // GHz/T, Zeeman tensor of ion 2
  Matrix3 J = Matrix3::Zero();   // GHz, spin-spin coupling
};

/// Complete parameter set of a coupled pair site.
///
/// Axis convention: lab z is the crystal [001] direction and lab x is [110],
/// so g tensors quoted for those axes can be entered directly.
///
/// Frequencies are in GHz relative to the |00> -> |10> optical origin nu10
/// (nu10 = 0 unless an absolute placement is wanted); delta = nu01 - nu10.
struct PairSiteModel {
  StateTensors ground;                        // |00>
  StateTensors excited1;                      // |10>, ion 1 excited
  StateTensors excited2;                      // |01>, ion 2 excited
  std::optional<StateTensors> doubly_excited; // |11>, blockade analysis only

  double nu10 = 0.0;   // GHz
  double delta = 0.0;  // GHz, nu01 - nu10
  double kappa = 0.0;  // GHz, resonant optical coupling between |10> and |01>
  OpticalParity parity = OpticalParity::Even;

  bool ion1_active = true;
  bool ion2_active = true;

  std::optional<double> absolute_origin_THz;  // metadata only
  std::string name;

  double nu01() const { return nu10 + delta; }

  /// Tensors of the requested state; throws if E11 is requested but unset.
  const StateTensors& tensors(ElectronicState s) const;
  StateTensors& tensors(ElectronicState s);

  /// Optical origin of a singly excited manifold (nu10 or nu01).
  double manifold_origin(ElectronicState s) const;
};

/// Copy of `m` with every coupling reduced to its Ising part diag(0,0,J_zz).
PairSiteModel with_ising_coupling(const PairSiteModel& m);

/// Basic sanity checks (finite tensors, flags consistent). Throws on failure.
void validate(const PairSiteModel& m);

}  // namespace spinpair
