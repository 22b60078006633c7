#include "spinpair/tensor.hpp"

#include <cmath>

#include "spinpair/errors.hpp"

namespace spinpair {

bool all_finite(const Matrix3& M) { return M.allFinite(); }
bool all_finite(const Vector3& v) { return v.allFinite(); }

Matrix3 antisymmetric_from_vector(const Vector3& D) {
  Matrix3 A;
  A <<      0.0,  D.z(), -D.y(),
       -D.z(),      0.0,  D.x(),
        D.y(), -D.x(),      0.0;
  return A;
}

CouplingDecomposition decompose_coupling(const Matrix3& J) {
  if (!all_finite(J)) throw ValidationError("decompose_coupling: non-finite tensor");
  CouplingDecomposition d;
  d.j0 = J.trace() / 3.0;
  const Matrix3 sym = 0.5 * (J + J.transpose());
  d.V = sym - d.j0 * Matrix3::Identity();
  const Matrix3 A = 0.5 * (J - J.transpose());
  d.D = Vector3(A(1, 2), A(2, 0), A(0, 1));
  return d;
}

Matrix3 compose_coupling(const CouplingDecomposition& d, double tol) {
  if (!all_finite(d.V) || !all_finite(d.D) || !std::isfinite(d.j0))
    throw ValidationError("compose_coupling: non-finite decomposition");
  if ((d.V - d.V.transpose()).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("compose_coupling: V is not symmetric");
  if (std::abs(d.V.trace()) > tol)
    throw ValidationError("compose_coupling: V is not traceless");
  return d.j0 * Matrix3::Identity() + d.V + antisymmetric_from_vector(d.D);
}

Matrix3 rotate_g_tensor(const Matrix3& M, const Matrix3& R, double tol) {
  if (!all_finite(M) || !all_finite(R))
    throw ValidationError("rotate_g_tensor: non-finite input");
  const double ortho = (R * R.transpose() - Matrix3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > tol)
    throw ValidationError("rotate_g_tensor: R is not orthogonal");
  if (std::abs(R.determinant() - 1.0) > tol)
    throw ValidationError("rotate_g_tensor: R is not a proper rotation (det != +1)");
  return R * M * R.transpose();
}

Matrix3 rotation_about_axis(const Vector3& axis, double angle_rad) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw ValidationError("rotation_about_axis: zero axis");
  return Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix();
}

double frobenius_inner(const Matrix3& A, const Matrix3& B) {
  return (A.array() * B.array()).sum();
}

}  // namespace spinpair
