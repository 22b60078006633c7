#pragma once

#include <Eigen/Dense>

namespace spinpair {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Shape decomposition of a 3x3 spin-spin coupling tensor into an isotropic
/// scalar, a symmetric traceless matrix and an antisymmetric vector.
///
/// Sign convention: the antisymmetric part A = (J - J^T)/2 maps to D through
/// J_xy - J_yx = 2 D_z (and cyclic), i.e. S1.A.S2 = D.(S1 x S2).
struct CouplingDecomposition {
  double j0 = 0.0;                      // GHz
  Matrix3 V = Matrix3::Zero();          // GHz, symmetric traceless
  Vector3 D = Vector3::Zero();          // GHz
};

/// Split J into {j0, V, D}. Exact inverse of compose_coupling.
CouplingDecomposition decompose_coupling(const Matrix3& J);

/// Rebuild J = j0*I + V + A(D). Rejects a V that is not symmetric traceless
/// within `tol`.
Matrix3 compose_coupling(const CouplingDecomposition& d, double tol = 1e-12);

/// Antisymmetric matrix A with S1.A.S2 = D.(S1 x S2).
Matrix3 antisymmetric_from_vector(const Vector3& D);

/// Similarity transform R.M.R^T for a proper rotation R (orthogonal,
/// det = +1 within `tol`; anything else is rejected).
Matrix3 rotate_g_tensor(const Matrix3& M, const Matrix3& R, double tol = 1e-10);

/// Rotation matrix for an angle (radians) about a unit axis.
Matrix3 rotation_about_axis(const Vector3& axis, double angle_rad);

/// Frobenius inner product <A, B> = sum_ij A_ij B_ij.
double frobenius_inner(const Matrix3& A, const Matrix3& B);

bool all_finite(const Matrix3& M);
bool all_finite(const Vector3& v);

}  // namespace spinpair
