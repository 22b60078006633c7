#pragma once

#include <array>
#include <complex>
#include <string>

#include <Eigen/Dense>

namespace spinpair {

using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

/// Spin-1/2 vector operator components (eigenvalues +-1/2) for the two ions
/// of a pair, embedded in the 4-dimensional product space as
///   S1 = I (x) s,   S2 = s (x) I.
/// Product basis index k = 2*a + b where a is the ion-2 level and b the
/// ion-1 level, 0 = up, 1 = down:
///   k=0 |up,up>, k=1 |down,up>, k=2 |up,down>, k=3 |down,down>
/// written as |s1 s2> with ion 1 first.
struct SpinOperators {
  std::array<Matrix4c, 3> S1;  // x, y, z
  std::array<Matrix4c, 3> S2;
  Matrix4c Sz_total;           // S1z + S2z
  Matrix4c Sz_diff;            // S1z - S2z

  static const SpinOperators& get();
};

/// Single-spin operator component (0=x, 1=y, 2=z), eigenvalues +-1/2.
Eigen::Matrix2cd spin_half_component(int axis);

/// +1/2 if ion 1 is up in product state k, else -1/2.
double s1z_of_basis(int k);
double s2z_of_basis(int k);

/// Label "uu", "du", "ud" or "dd" with ion 1 first.
std::string basis_label(int k);

/// Index of the product state with the given ion spins (true = up).
int basis_index(bool ion1_up, bool ion2_up);

}  // namespace spinpair
