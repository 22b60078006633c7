#include <doctest.h>

#include <random>

#include "spinpair/errors.hpp"
#include "spinpair/tensor.hpp"

using namespace spinpair;

namespace {

Matrix3 random_matrix(std::mt19937_64& rng, double scale = 100.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = u(rng);
  return m;
}

}  // namespace

TEST_CASE("decompose_coupling identity case") {
  const Matrix3 J = 5.0 * Matrix3::Identity();
  const auto d = decompose_coupling(J);
  CHECK(d.j0 == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(d.V.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(d.D.norm() <= 1e-12);
}

TEST_CASE("decompose_coupling pure antisymmetric case") {
  Matrix3 J = Matrix3::Zero();
  J(0, 1) = 1.0;
  J(1, 0) = -1.0;
  const auto d = decompose_coupling(J);
  CHECK(d.j0 == doctest::Approx(0.0));
  CHECK(d.V.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(d.D.x() == doctest::Approx(0.0));
  CHECK(d.D.y() == doctest::Approx(0.0));
  CHECK(d.D.z() == doctest::Approx(1.0));
}

TEST_CASE("decompose_coupling Ising case") {
  Matrix3 J = Matrix3::Zero();
  J(2, 2) = 209.0;
  const auto d = decompose_coupling(J);
  CHECK(d.j0 == doctest::Approx(209.0 / 3.0).epsilon(1e-12));
  CHECK(d.V(0, 0) == doctest::Approx(-209.0 / 3.0).epsilon(1e-12));
  CHECK(d.V(1, 1) == doctest::Approx(-209.0 / 3.0).epsilon(1e-12));
  CHECK(d.V(2, 2) == doctest::Approx(2.0 * 209.0 / 3.0).epsilon(1e-12));
  CHECK(d.D.norm() <= 1e-12);
}

TEST_CASE("compose_coupling inverse examples") {
  CouplingDecomposition d;
  d.D = Vector3(0, 0, 1);
  const Matrix3 J = compose_coupling(d);
  CHECK(J(0, 1) == doctest::Approx(1.0));
  CHECK(J(1, 0) == doctest::Approx(-1.0));

  CouplingDecomposition iso;
  iso.j0 = 5.0;
  CHECK((compose_coupling(iso) - 5.0 * Matrix3::Identity()).norm() <= 1e-12);
}

TEST_CASE("compose_coupling rejects bad V") {
  CouplingDecomposition d;
  d.V(0, 1) = 1.0;  // not symmetric
  CHECK_THROWS_AS(compose_coupling(d), ValidationError);
  d.V = Matrix3::Identity();  // symmetric but not traceless
  CHECK_THROWS_AS(compose_coupling(d), ValidationError);
}

TEST_CASE("decompose/compose round-trip on random matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix3 J = random_matrix(rng);
    const auto d = decompose_coupling(J);
    CHECK(std::abs(d.V.trace()) <= 1e-12 * std::max(1.0, J.norm()));
    CHECK((d.V - d.V.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, J.norm()));
    const Matrix3 back = compose_coupling(d, 1e-9);
    CHECK((back - J).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, J.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("decomposition parts are Frobenius-orthogonal") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = decompose_coupling(random_matrix(rng));
    const Matrix3 iso = d.j0 * Matrix3::Identity();
    const Matrix3 anti = antisymmetric_from_vector(d.D);
    const double scale = std::max({iso.norm(), d.V.norm(), anti.norm(), 1.0});
    CHECK(std::abs(frobenius_inner(iso, d.V)) <= 1e-10 * scale * scale);
    CHECK(std::abs(frobenius_inner(iso, anti)) <= 1e-10 * scale * scale);
    CHECK(std::abs(frobenius_inner(d.V, anti)) <= 1e-10 * scale * scale);
  }
}

TEST_CASE("rotate_g_tensor basics") {
  std::mt19937_64 rng(3);
  const Matrix3 M = random_matrix(rng);
  CHECK((rotate_g_tensor(M, Matrix3::Identity()) - M).norm() <= 1e-12);

  // diag(0,0,g) rotated by 90 degrees about y becomes diag(g,0,0).
  Matrix3 gz = Matrix3::Zero();
  gz(2, 2) = 136.0;
  const Matrix3 R = rotation_about_axis(Vector3(0, 1, 0), M_PI / 2.0);
  const Matrix3 rotated = rotate_g_tensor(gz, R);
  CHECK(rotated(0, 0) == doctest::Approx(136.0).epsilon(1e-12));
  CHECK(std::abs(rotated(2, 2)) <= 1e-9);
}

TEST_CASE("rotate_g_tensor rejects non-rotations") {
  const Matrix3 M = Matrix3::Identity();
  Matrix3 bad = 2.0 * Matrix3::Identity();
  CHECK_THROWS_AS(rotate_g_tensor(M, bad), ValidationError);
  Matrix3 reflection = Matrix3::Identity();
  reflection(2, 2) = -1.0;  // det = -1
  CHECK_THROWS_AS(rotate_g_tensor(M, reflection), ValidationError);
}

TEST_CASE("rotation preserves eigenvalues and singular values") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix3 M = random_matrix(rng);
    M = 0.5 * (M + M.transpose().eval());
    Vector3 axis = Vector3(angle(rng), angle(rng), angle(rng));
    if (axis.norm() < 1e-3) axis = Vector3(0, 0, 1);
    const Matrix3 R = rotation_about_axis(axis, angle(rng));
    const Matrix3 rotated = rotate_g_tensor(M, R);

    Eigen::SelfAdjointEigenSolver<Matrix3> e1(M), e2(rotated);
    CHECK((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff() <=
          1e-10 * std::max(1.0, M.norm()));

    Eigen::JacobiSVD<Matrix3> s1(M), s2(rotated);
    CHECK((s1.singularValues() - s2.singularValues()).cwiseAbs().maxCoeff() <=
          1e-10 * std::max(1.0, M.norm()));
  }
}
