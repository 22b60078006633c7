#include "spinpair/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "spinpair/errors.hpp"

namespace spinpair {

Matrix4c build_pair_hamiltonian(const PairSiteModel& model, ElectronicState state,
                                const Vector3& field_T) {
  if (!all_finite(field_T))
    throw ValidationError("build_pair_hamiltonian: non-finite field");
  const StateTensors& t = model.tensors(state);
  const auto& ops = SpinOperators::get();

  const Vector3 w1 = t.g1.transpose() * field_T;  // GHz, effective field on ion 1
  const Vector3 w2 = t.g2.transpose() * field_T;

  Matrix4c H = Matrix4c::Zero();
  for (int a = 0; a < 3; ++a) {
    H += w1[a] * ops.S1[a];
    H += w2[a] * ops.S2[a];
    for (int b = 0; b < 3; ++b) {
      const double j = t.J(a, b);
      if (j != 0.0) H += j * (ops.S1[a] * ops.S2[b]);
    }
  }
  return H;
}

EigenSystem diagonalize_state(const PairSiteModel& model, ElectronicState state,
                              const Vector3& field_T) {
  const auto& ops = SpinOperators::get();
  static const std::vector<MatrixXc> resolvers = {MatrixXc(ops.Sz_total),
                                                  MatrixXc(ops.Sz_diff)};
  return eigensolve(build_pair_hamiltonian(model, state, field_T), resolvers);
}

Eigen::Vector4d ising_levels(const PairSiteModel& model, ElectronicState state,
                             const Vector3& field_T) {
  const StateTensors& t = model.tensors(state);
  Matrix3 joff = t.J;
  joff(2, 2) = 0.0;
  if (joff.cwiseAbs().maxCoeff() > 0.0)
    throw ValidationError("ising_levels: coupling is not pure Ising");
  for (const Matrix3* g : {&t.g1, &t.g2}) {
    Matrix3 d = *g;
    d.diagonal().setZero();
    if (d.cwiseAbs().maxCoeff() > 0.0)
      throw ValidationError("ising_levels: g tensor is not diagonal");
  }
  const double e1 = (t.g1.transpose() * field_T).z();  // GHz on ion-1 spin
  const double e2 = (t.g2.transpose() * field_T).z();
  const double jzz = t.J(2, 2);
  const Vector3 b_perp(field_T.x(), field_T.y(), 0.0);
  if ((t.g1.transpose() * b_perp).norm() > 0.0 ||
      (t.g2.transpose() * b_perp).norm() > 0.0)
    throw ValidationError("ising_levels: transverse field on a transverse g");

  Eigen::Vector4d e;  // product-basis order uu, du, ud, dd
  e[0] = 0.5 * e1 + 0.5 * e2 + 0.25 * jzz;
  e[1] = -0.5 * e1 + 0.5 * e2 - 0.25 * jzz;
  e[2] = 0.5 * e1 - 0.5 * e2 - 0.25 * jzz;
  e[3] = -0.5 * e1 - 0.5 * e2 + 0.25 * jzz;
  return e;
}

TrackedBranches track_levels(const std::vector<EigenSystem>& systems,
                             const std::vector<double>& fields,
                             const TrackOptions& opts) {
  if (systems.size() < 2)
    throw ValidationError("track_levels: need at least two field steps");
  if (systems.size() != fields.size())
    throw ValidationError("track_levels: field/system count mismatch");
  const int n = systems.front().size();

  TrackedBranches tb;
  tb.fields = fields;
  tb.energies.reserve(systems.size());
  tb.vectors.reserve(systems.size());
  tb.permutation.reserve(systems.size());
  tb.min_overlap.reserve(systems.size());

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  tb.energies.push_back(systems[0].values);
  tb.vectors.push_back(systems[0].vectors);
  tb.permutation.push_back(perm);
  tb.min_overlap.push_back(1.0);

  for (size_t step = 1; step < systems.size(); ++step) {
    const MatrixXc& prev = tb.vectors.back();
    const EigenSystem& cur = systems[step];
    if (cur.size() != n)
      throw ValidationError("track_levels: inconsistent matrix sizes");

    Eigen::MatrixXd overlap(n, n);
    for (int b = 0; b < n; ++b)
      for (int j = 0; j < n; ++j)
        overlap(b, j) = std::abs(prev.col(b).dot(cur.vectors.col(j)));

    // Greedy maximum-overlap assignment: repeatedly take the globally best
    // unassigned (branch, level) pair.
    std::vector<int> assign(n, -1);
    std::vector<bool> branch_done(n, false), level_done(n, false);
    double step_min_overlap = 1.0;
    for (int it = 0; it < n; ++it) {
      int bb = -1, jb = -1;
      double best = -1.0;
      bool tie = false;
      for (int b = 0; b < n; ++b) {
        if (branch_done[b]) continue;
        for (int j = 0; j < n; ++j) {
          if (level_done[j]) continue;
          const double o = overlap(b, j);
          if (o > best + opts.ambiguity_tol) {
            best = o;
            bb = b;
            jb = j;
            tie = false;
          } else if (o > best - opts.ambiguity_tol) {
            // Near-tie: prefer the closer eigenvalue, deterministically.
            tie = true;
            if (bb >= 0) {
              const double d_new = std::abs(tb.energies.back()[b] - cur.values[j]);
              const double d_old = std::abs(tb.energies.back()[bb] - cur.values[jb]);
              if (d_new < d_old) {
                best = o;
                bb = b;
                jb = j;
              }
            }
          }
        }
      }
      if (tie) {
        tb.ambiguous = true;
        tb.ambiguous_steps.push_back(static_cast<int>(step));
      }
      assign[bb] = jb;
      branch_done[bb] = true;
      level_done[jb] = true;
      step_min_overlap = std::min(step_min_overlap, overlap(bb, jb));
    }

    if (step_min_overlap < opts.min_overlap)
      throw NumericalError(
          "track_levels: eigenvector overlap fell below " +
          std::to_string(opts.min_overlap) +
          " between steps; use a finer field sweep");

    VectorXr e(n);
    MatrixXc v(cur.vectors.rows(), n);
    for (int b = 0; b < n; ++b) {
      e[b] = cur.values[assign[b]];
      v.col(b) = cur.vectors.col(assign[b]);
    }
    tb.energies.push_back(std::move(e));
    tb.vectors.push_back(std::move(v));
    tb.permutation.push_back(assign);
    tb.min_overlap.push_back(step_min_overlap);
  }
  return tb;
}

ZeroFieldStructure zero_field_structure(const PairSiteModel& model,
                                        ElectronicState state) {
  ZeroFieldStructure z;
  const StateTensors& t = model.tensors(state);
  Matrix3 joff = t.J;
  joff(2, 2) = 0.0;
  z.pure_ising = joff.cwiseAbs().maxCoeff() == 0.0;
  z.system = diagonalize_state(model, state, Vector3::Zero());
  const VectorXr& e = z.system.values;
  z.lower_energy = 0.5 * (e[0] + e[1]);
  z.upper_energy = 0.5 * (e[2] + e[3]);
  z.separation = z.upper_energy - z.lower_energy;
  z.lower_splitting = e[1] - e[0];
  z.upper_splitting = e[3] - e[2];
  return z;
}

}  // namespace spinpair
