#include <doctest.h>

#include <random>

#include "spinpair/eigensolver.hpp"
#include "spinpair/errors.hpp"
#include "spinpair/spin_ops.hpp"

using namespace spinpair;

namespace {

MatrixXc random_hermitian(std::mt19937_64& rng, int n, double scale = 50.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  MatrixXc A(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) A(r, c) = std::complex<double>(u(rng), u(rng));
  return 0.5 * (A + A.adjoint().eval());
}

}  // namespace

TEST_CASE("diagonal matrix is solved exactly") {
  MatrixXc H = MatrixXc::Zero(4, 4);
  H.diagonal() << 1.0, 2.0, 3.0, 4.0;
  const EigenSystem sys = eigensolve(H);
  for (int i = 0; i < 4; ++i) {
    CHECK(sys.values[i] == doctest::Approx(i + 1.0).epsilon(1e-14));
    CHECK(std::abs(sys.vectors(i, i) - 1.0) <= 1e-12);
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  MatrixXc H = MatrixXc::Zero(4, 4);
  H(0, 1) = 1.0;  // no conjugate partner
  CHECK_THROWS_AS(eigensolve(H), ValidationError);
}

TEST_CASE("random Hermitian reconstruction, orthonormality, trace") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = (trial % 2 == 0) ? 4 : 8;
    const MatrixXc H = random_hermitian(rng, n);
    const EigenSystem sys = eigensolve(H);

    // ascending
    for (int i = 1; i < n; ++i) CHECK(sys.values[i] >= sys.values[i - 1]);

    // H v = lambda v to 1e-9 relative
    const double scale = std::max(1.0, H.norm());
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXcd r =
          H * sys.vectors.col(i) - sys.values[i] * sys.vectors.col(i);
      CHECK(r.norm() <= 1e-9 * scale);
    }
    // orthonormal to 1e-10
    const MatrixXc gram = sys.vectors.adjoint() * sys.vectors;
    CHECK((gram - MatrixXc::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    // trace identity
    CHECK(std::abs(sys.values.sum() - H.trace().real()) <= 1e-9 * scale);
    // reconstruction
    const MatrixXc rebuilt =
        sys.vectors * sys.values.asDiagonal() * sys.vectors.adjoint();
    CHECK((rebuilt - H).norm() <= 1e-9 * scale);
  }
}

TEST_CASE("phase convention: largest component real positive, bit-stable") {
  std::mt19937_64 rng(5);
  const MatrixXc H = random_hermitian(rng, 4);
  const EigenSystem a = eigensolve(H);
  const EigenSystem b = eigensolve(H);
  CHECK((a.vectors - b.vectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 4; ++i) {
    int imax = 0;
    for (int r = 1; r < 4; ++r)
      if (std::abs(a.vectors(r, i)) > std::abs(a.vectors(imax, i)) + 1e-12) imax = r;
    CHECK(a.vectors(imax, i).imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(a.vectors(imax, i).real() > 0.0);
  }
}

TEST_CASE("degenerate subspace resolved by Sz operators") {
  // Zero Hamiltonian: fourfold degenerate; resolvers should give the product
  // basis ordered by total then differential spin projection.
  const auto& ops = SpinOperators::get();
  const MatrixXc H = MatrixXc::Zero(4, 4);
  const EigenSystem sys =
      eigensolve(H, {MatrixXc(ops.Sz_total), MatrixXc(ops.Sz_diff)});
  // Expected order of Sz_total eigenvalues: -1, 0, 0, +1.
  Eigen::Vector4d sz;
  for (int i = 0; i < 4; ++i) {
    const Eigen::VectorXcd v = sys.vectors.col(i);
    sz[i] = (v.adjoint() * ops.Sz_total * v)(0, 0).real();
  }
  CHECK(sz[0] == doctest::Approx(-1.0));
  CHECK(sz[1] == doctest::Approx(0.0));
  CHECK(sz[2] == doctest::Approx(0.0));
  CHECK(sz[3] == doctest::Approx(1.0));
  // Within the Sz_total = 0 pair, Sz_diff separates du from ud.
  Eigen::Vector2d sd;
  for (int i = 1; i <= 2; ++i) {
    const Eigen::VectorXcd v = sys.vectors.col(i);
    sd[i - 1] = (v.adjoint() * ops.Sz_diff * v)(0, 0).real();
  }
  CHECK(sd[0] == doctest::Approx(-1.0));
  CHECK(sd[1] == doctest::Approx(1.0));
}

TEST_CASE("spin operators basics") {
  const auto& ops = SpinOperators::get();
  // Operators on different ions commute.
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Matrix4c comm = ops.S1[a] * ops.S2[b] - ops.S2[b] * ops.S1[a];
      CHECK(comm.cwiseAbs().maxCoeff() <= 1e-15);
    }
  // Eigenvalues of S1z are {+1/2, +1/2, -1/2, -1/2}.
  const EigenSystem s1z = eigensolve(MatrixXc(ops.S1[2]));
  CHECK(s1z.values[0] == doctest::Approx(-0.5));
  CHECK(s1z.values[1] == doctest::Approx(-0.5));
  CHECK(s1z.values[2] == doctest::Approx(0.5));
  CHECK(s1z.values[3] == doctest::Approx(0.5));
  // S1z S2z has eigenvalues +-1/4 (Ising product spectrum).
  const EigenSystem prod = eigensolve(MatrixXc(ops.S1[2] * ops.S2[2]));
  CHECK(prod.values[0] == doctest::Approx(-0.25));
  CHECK(prod.values[1] == doctest::Approx(-0.25));
  CHECK(prod.values[2] == doctest::Approx(0.25));
  CHECK(prod.values[3] == doctest::Approx(0.25));
  // Spin algebra: [S1x, S1y] = i S1z.
  const Matrix4c comm = ops.S1[0] * ops.S1[1] - ops.S1[1] * ops.S1[0];
  CHECK((comm - std::complex<double>(0, 1) * ops.S1[2]).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("basis labels") {
  CHECK(basis_label(0) == "uu");
  CHECK(basis_label(1) == "du");
  CHECK(basis_label(2) == "ud");
  CHECK(basis_label(3) == "dd");
  CHECK(basis_index(true, true) == 0);
  CHECK(basis_index(false, true) == 1);
  CHECK(basis_index(true, false) == 2);
  CHECK(basis_index(false, false) == 3);
}
