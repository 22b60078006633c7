#include <doctest.h>

#include <random>

#include "spinpair/errors.hpp"
#include "spinpair/hamiltonian.hpp"
#include "spinpair/spectrum.hpp"

using namespace spinpair;

namespace {

PairSiteModel bare_model(double g1z, double g2z, const Matrix3& J) {
  PairSiteModel m;
  m.ground.g1 = Vector3(0, 0, g1z).asDiagonal();
  m.ground.g2 = Vector3(0, 0, g2z).asDiagonal();
  m.ground.J = J;
  m.excited1 = m.ground;
  m.excited2 = m.ground;
  return m;
}

Matrix3 ising(double jzz) {
  Matrix3 J = Matrix3::Zero();
  J(2, 2) = jzz;
  return J;
}

PairSiteModel random_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PairSiteModel m;
  for (auto* st : {&m.ground, &m.excited1, &m.excited2}) {
    st->g1 = Vector3(20 * u(rng), 20 * u(rng), 200 * u(rng)).asDiagonal();
    st->g2 = Vector3(20 * u(rng), 20 * u(rng), 200 * u(rng)).asDiagonal();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) st->J(r, c) = 10.0 * u(rng);
    st->J(2, 2) = 200.0 * u(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("Ising coupling at zero field gives +-Jzz/4 doublets") {
  const PairSiteModel m = bare_model(0, 0, ising(209.0));
  const EigenSystem sys = diagonalize_state(m, ElectronicState::G00, Vector3::Zero());
  CHECK(sys.values[0] == doctest::Approx(-52.25).epsilon(1e-12));
  CHECK(sys.values[1] == doctest::Approx(-52.25).epsilon(1e-12));
  CHECK(sys.values[2] == doctest::Approx(52.25).epsilon(1e-12));
  CHECK(sys.values[3] == doctest::Approx(52.25).epsilon(1e-12));
}

TEST_CASE("pure Zeeman spectrum of two identical ions") {
  const PairSiteModel m = bare_model(232.0, 232.0, Matrix3::Zero());
  const EigenSystem sys =
      diagonalize_state(m, ElectronicState::G00, Vector3(0, 0, 0.5));
  CHECK(sys.values[0] == doctest::Approx(-116.0).epsilon(1e-12));
  CHECK(sys.values[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sys.values[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sys.values[3] == doctest::Approx(116.0).epsilon(1e-12));
}

TEST_CASE("zero field, zero coupling gives H = 0") {
  const PairSiteModel m = bare_model(232.0, 232.0, Matrix3::Zero());
  const Matrix4c H = build_pair_hamiltonian(m, ElectronicState::G00, Vector3::Zero());
  CHECK(H.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("built Hamiltonians are Hermitian and satisfy the trace identity") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const PairSiteModel m = random_model(rng);
    const Vector3 B(u(rng), u(rng), u(rng));
    const Matrix4c H = build_pair_hamiltonian(m, ElectronicState::G00, B);
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    const EigenSystem sys = eigensolve(MatrixXc(H));
    CHECK(std::abs(sys.values.sum() - H.trace().real()) <=
          1e-9 * std::max(1.0, H.norm()));
  }
}

TEST_CASE("time reversal: eigenvalue multiset equal at +-B") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const PairSiteModel m = random_model(rng);
    const Vector3 B(u(rng), u(rng), u(rng));
    const EigenSystem plus = diagonalize_state(m, ElectronicState::G00, B);
    const EigenSystem minus = diagonalize_state(m, ElectronicState::G00, -B);
    CHECK((plus.values - minus.values).cwiseAbs().maxCoeff() <=
          1e-9 * std::max(1.0, plus.values.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("Ising fast path agrees with the generic eigensolver over a sweep") {
  PairSiteModel m = bare_model(232.0, 230.5, ising(209.0));
  for (int i = 0; i < 100; ++i) {
    const Vector3 B(0, 0, -0.2 + 0.9 * i / 99.0);
    Eigen::Vector4d analytic = ising_levels(m, ElectronicState::G00, B);
    std::sort(analytic.data(), analytic.data() + 4);
    const EigenSystem sys = diagonalize_state(m, ElectronicState::G00, B);
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(sys.values[k] - analytic[k]) <= 1e-9);
  }
}

TEST_CASE("ising_levels rejects non-Ising input") {
  PairSiteModel m = bare_model(232.0, 232.0, ising(209.0));
  m.ground.J(0, 1) = 1.0;
  CHECK_THROWS_AS(ising_levels(m, ElectronicState::G00, Vector3(0, 0, 0.1)),
                  ValidationError);
}

TEST_CASE("middle eigenvalues cross at B = Jzz / (2 gz)") {
  const double jzz = 209.0, gz = 232.0;
  const PairSiteModel m = bare_model(gz, gz, ising(jzz));
  const double bstar = jzz / (2.0 * gz);
  const EigenSystem sys =
      diagonalize_state(m, ElectronicState::G00, Vector3(0, 0, bstar));
  CHECK(std::abs(sys.values[1] - sys.values[0]) <= 1e-9);
}

TEST_CASE("E11 tensors must be supplied") {
  const PairSiteModel m = bare_model(232.0, 232.0, ising(209.0));
  CHECK_THROWS_AS(build_pair_hamiltonian(m, ElectronicState::E11, Vector3::Zero()),
                  ValidationError);
  PairSiteModel m2 = m;
  m2.doubly_excited = m.ground;
  CHECK_NOTHROW(build_pair_hamiltonian(m2, ElectronicState::E11, Vector3::Zero()));
}

TEST_CASE("track_levels: non-interacting levels cross, labels follow branches") {
  // Two independent spins with different g: levels cross where Zeeman terms
  // match the Ising offset.
  const PairSiteModel m = bare_model(232.0, 188.0, ising(100.0));
  std::vector<EigenSystem> systems;
  std::vector<double> fields;
  for (int i = 0; i <= 400; ++i) {
    const double b = 0.5 * i / 400.0;
    fields.push_back(b);
    systems.push_back(diagonalize_state(m, ElectronicState::G00, Vector3(0, 0, b)));
  }
  const TrackedBranches tb = track_levels(systems, fields);
  CHECK(tb.branch_count() == 4);
  // Branches keep their character: tracked energies stay smooth (no kinks of
  // the sorted spectrum), so at the end the permutation is no longer identity.
  bool permuted = false;
  for (int b = 0; b < 4; ++b)
    if (tb.permutation.back()[b] != b) permuted = true;
  CHECK(permuted);
  // Tracked branch energies are linear in field for this diagonal model.
  for (int b = 0; b < 4; ++b) {
    const double e0 = tb.energies[0][b];
    const double e1 = tb.energies[200][b];
    const double e2 = tb.energies[400][b];
    CHECK(std::abs((e2 - e1) - (e1 - e0)) <= 1e-6);
  }
}

TEST_CASE("track_levels: 2-level avoided crossing keeps a 2 kappa gap") {
  // Two levels coupled by an xy interaction anticross instead of crossing.
  PairSiteModel m = bare_model(232.0, 232.0, ising(100.0));
  m.ground.J += antisymmetric_from_vector(Vector3(0, 0, 0.8));
  std::vector<EigenSystem> systems;
  std::vector<double> fields;
  double min_gap = 1e300;
  for (int i = 0; i <= 500; ++i) {
    const double b = -0.01 + 0.02 * i / 500.0;
    fields.push_back(b);
    systems.push_back(diagonalize_state(m, ElectronicState::G00, Vector3(0, 0, b)));
    min_gap = std::min(min_gap, systems.back().values[1] - systems.back().values[0]);
  }
  const TrackedBranches tb = track_levels(systems, fields);
  CHECK(tb.branch_count() == 4);
  // Gap = D_z: the degenerate ud/du pair is split by the antisymmetric term.
  CHECK(min_gap == doctest::Approx(0.8).epsilon(1e-6));
  for (const auto& e : tb.energies) CHECK(e[1] - e[0] >= 0.8 - 1e-9);
}

TEST_CASE("track_levels rejects too-coarse sweeps") {
  const PairSiteModel m = bare_model(232.0, 231.0, ising(209.0));
  std::vector<EigenSystem> systems;
  std::vector<double> fields;
  // Two far-apart fields around the crossing: eigenvectors reshuffle...
  systems.push_back(diagonalize_state(m, ElectronicState::G00, Vector3(0, 0, 0.0)));
  fields.push_back(0.0);
  systems.push_back(diagonalize_state(m, ElectronicState::G00, Vector3(0, 0, 1.0)));
  fields.push_back(1.0);
  // ...but product states stay product states here, so this must not throw.
  CHECK_NOTHROW(track_levels(systems, fields));

  // Straddling an avoided crossing with two coarse steps hybridizes the
  // branches ~50/50 (overlap ~0.71), which a stricter threshold rejects.
  PairSiteModel ac = bare_model(232.0, 232.0, ising(209.0));
  ac.ground.J += antisymmetric_from_vector(Vector3(2.0, 0.0, 0.0));
  const double bstar = 209.0 / (2.0 * 232.0);
  std::vector<EigenSystem> s2;
  s2.push_back(diagonalize_state(ac, ElectronicState::G00, Vector3(0, 0, bstar - 0.05)));
  s2.push_back(diagonalize_state(ac, ElectronicState::G00, Vector3(0, 0, bstar)));
  TrackOptions strict;
  strict.min_overlap = 0.9;
  CHECK_THROWS_AS(track_levels(s2, {bstar - 0.05, bstar}, strict), NumericalError);
}

TEST_CASE("zero_field_structure examples") {
  // Jzz = 233: doublet separation 116.5 GHz.
  const PairSiteModel m233 = bare_model(188.0, 230.5, ising(233.0));
  const ZeroFieldStructure z = zero_field_structure(m233, ElectronicState::G00);
  CHECK(z.pure_ising);
  CHECK(z.separation == doctest::Approx(116.5).epsilon(1e-12));
  CHECK(z.lower_splitting <= 1e-10);
  CHECK(z.upper_splitting <= 1e-10);

  // Jzz = 0: fourfold degeneracy.
  const PairSiteModel m0 = bare_model(188.0, 230.5, Matrix3::Zero());
  CHECK(zero_field_structure(m0, ElectronicState::G00).separation <= 1e-12);

  // Antisymmetric xy term of 0.15 GHz splits the lower doublet by 0.15 GHz.
  PairSiteModel msplit = bare_model(232.0, 232.0, ising(209.0));
  msplit.ground.J += antisymmetric_from_vector(Vector3(0, 0, 0.15));
  const ZeroFieldStructure zs = zero_field_structure(msplit, ElectronicState::G00);
  CHECK_FALSE(zs.pure_ising);
  CHECK(zs.lower_splitting == doctest::Approx(0.15).epsilon(1e-9));
  CHECK(zs.upper_splitting <= 1e-9);
}

TEST_CASE("site B tracked ground branches: crossing vs anticrossing at 0.45 T") {
  // Pure Ising: exact crossing near B = J/(2g). With the antisymmetric
  // perturbation the same branches anticross.
  PairSiteModel ising_model = with_ising_coupling(preset_model("siteB"));
  std::vector<EigenSystem> systems;
  std::vector<double> fields;
  for (int i = 0; i <= 300; ++i) {
    const double b = 0.40 + 0.10 * i / 300.0;
    fields.push_back(b);
    systems.push_back(
        diagonalize_state(ising_model, ElectronicState::G00, Vector3(0, 0, b)));
  }
  double min_gap_ising = 1e300;
  for (const auto& s : systems)
    min_gap_ising = std::min(min_gap_ising, s.values[1] - s.values[0]);
  CHECK(min_gap_ising <= 0.35);  // grid-limited approach to an exact crossing

  const PairSiteModel pert = preset_model("siteB");
  double min_gap_pert = 1e300;
  for (int i = 0; i <= 300; ++i) {
    const double b = 0.40 + 0.10 * i / 300.0;
    const EigenSystem s = diagonalize_state(pert, ElectronicState::G00, Vector3(0, 0, b));
    min_gap_pert = std::min(min_gap_pert, s.values[1] - s.values[0]);
  }
  CHECK(min_gap_pert >= 0.5);  // gap opened by D00
}
