#pragma once

#include <vector>

#include <Eigen/Dense>

namespace spinpair {

using MatrixXc = Eigen::MatrixXcd;
using VectorXr = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian matrix with a fixed phase convention:
/// eigenvalues ascending, orthonormal eigenvectors as columns, and in each
/// column the largest-magnitude component made real and positive.
struct EigenSystem {
  VectorXr values;   // ascending, GHz
  MatrixXc vectors;  // column k belongs to values[k]

  int size() const { return static_cast<int>(values.size()); }
};

struct EigensolveOptions {
  /// Input is rejected when ||H - H^dag|| exceeds this times ||H||.
  double hermiticity_tol = 1e-9;
  /// Jacobi sweeps stop once every off-diagonal is below this times ||H||.
  double convergence_tol = 1e-13;
  /// Eigenvalues closer than this times max(1, ||H||) count as degenerate.
  double degeneracy_tol = 1e-9;
  int max_sweeps = 60;
};

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// Within every degenerate eigenvalue cluster the basis is fixed by
/// diagonalizing the `resolvers` operators in order (e.g. S1z + S2z to get
/// reproducible spin labels at zero field). Output is deterministic:
/// identical input gives bit-identical results.
EigenSystem eigensolve(const MatrixXc& H,
                       const std::vector<MatrixXc>& resolvers = {},
                       const EigensolveOptions& opts = {});

}  // namespace spinpair
