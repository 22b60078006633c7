#pragma once

#include <vector>

#include "spinpair/eigensolver.hpp"
#include "spinpair/model.hpp"
#include "spinpair/spin_ops.hpp"

namespace spinpair {

/// 4x4 pair spin Hamiltonian H = B.M1.S1 + B.M2.S2 + S1.J.S2 (GHz) for one
/// electronic state. A lone ion with g_z along z gets a doublet splitting of
/// g_z * |B|.
Matrix4c build_pair_hamiltonian(const PairSiteModel& model, ElectronicState state,
                                const Vector3& field_T);

/// Diagonalize one electronic state at the given field. Degenerate subspaces
/// are fixed by S1z+S2z (then S1z-S2z) so spin labels are reproducible.
EigenSystem diagonalize_state(const PairSiteModel& model, ElectronicState state,
                              const Vector3& field_T);

/// Analytic level energies for a model whose state has diagonal g tensors and
/// pure Ising coupling; order matches the product basis (uu, du, ud, dd).
/// Used as an independent check of the generic eigensolver.
Eigen::Vector4d ising_levels(const PairSiteModel& model, ElectronicState state,
                             const Vector3& field_T);

/// Branch-continuous reordering of eigensystems along a field sweep.
struct TrackedBranches {
  std::vector<double> fields;                 // sweep parameter, T
  std::vector<VectorXr> energies;             // [step](branch), tracked order
  std::vector<MatrixXc> vectors;              // [step] columns in tracked order
  std::vector<std::vector<int>> permutation;  // tracked branch -> ascending index
  std::vector<double> min_overlap;            // per step, diagnostic
  bool ambiguous = false;                     // a near-tie in the assignment
  std::vector<int> ambiguous_steps;

  int branch_count() const {
    return energies.empty() ? 0 : static_cast<int>(energies.front().size());
  }
};

struct TrackOptions {
  /// Matching below this overlap aborts with advice to refine the sweep.
  double min_overlap = 0.5;
  /// Two candidate assignments closer than this flag the step as ambiguous;
  /// the tie breaks toward the closer eigenvalue.
  double ambiguity_tol = 1e-6;
};

/// Connect eigensystems of an ordered sweep into continuous branches by
/// maximal eigenvector overlap.
TrackedBranches track_levels(const std::vector<EigenSystem>& systems,
                             const std::vector<double>& fields,
                             const TrackOptions& opts = {});

/// Zero-field level structure of one electronic state.
struct ZeroFieldStructure {
  double lower_energy = 0.0;     // mean of the two lowest levels, GHz
  double upper_energy = 0.0;     // mean of the two highest levels, GHz
  double separation = 0.0;       // upper - lower, equals J_zz/2 for pure Ising
  double lower_splitting = 0.0;  // fine splitting within the lower doublet
  double upper_splitting = 0.0;
  EigenSystem system;
  bool pure_ising = false;
};

ZeroFieldStructure zero_field_structure(const PairSiteModel& model,
                                        ElectronicState state);

}  // namespace spinpair
