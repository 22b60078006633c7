#include "spinpair/spin_ops.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "spinpair/errors.hpp"

namespace spinpair {

Eigen::Matrix2cd spin_half_component(int axis) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  switch (axis) {
    case 0:
      s(0, 1) = 0.5;
      s(1, 0) = 0.5;
      break;
    case 1:
      s(0, 1) = -0.5i;
      s(1, 0) = 0.5i;
      break;
    case 2:
      s(0, 0) = 0.5;
      s(1, 1) = -0.5;
      break;
    default:
      throw ValidationError("spin_half_component: axis must be 0, 1 or 2");
  }
  return s;
}

const SpinOperators& SpinOperators::get() {
  static const SpinOperators ops = [] {
    SpinOperators o;
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (int axis = 0; axis < 3; ++axis) {
      const Eigen::Matrix2cd s = spin_half_component(axis);
      o.S1[axis] = Eigen::kroneckerProduct(id, s);
      o.S2[axis] = Eigen::kroneckerProduct(s, id);
    }
    o.Sz_total = o.S1[2] + o.S2[2];
    o.Sz_diff = o.S1[2] - o.S2[2];
    return o;
  }();
  return ops;
}

double s1z_of_basis(int k) { return (k % 2 == 0) ? 0.5 : -0.5; }
double s2z_of_basis(int k) { return (k / 2 == 0) ? 0.5 : -0.5; }

std::string basis_label(int k) {
  std::string label;
  label += (s1z_of_basis(k) > 0) ? 'u' : 'd';
  label += (s2z_of_basis(k) > 0) ? 'u' : 'd';
  return label;
}

int basis_index(bool ion1_up, bool ion2_up) {
  return 2 * (ion2_up ? 0 : 1) + (ion1_up ? 0 : 1);
}

}  // namespace spinpair
