#pragma once

#include <array>
#include <vector>

#include "spinpair/tensor.hpp"

namespace spinpair {

/// Fixed physical constants used by the dipole-dipole formula.
namespace constants {
inline constexpr double mu0_over_4pi = 1e-7;        // T m / A, exact
inline constexpr double planck_h = 6.62607015e-34;  // J s, exact
inline constexpr double hz_per_GHz = 1e9;
inline constexpr double m_per_angstrom = 1e-10;
}  // namespace constants

/// Magnetic dipole-dipole coupling tensor (GHz) between two ions with Zeeman
/// tensors M1, M2 (GHz/T) separated by r (angstrom):
///   J_dd = mu0 h / (4 pi |r|^3) [ M1 M2 - 3 (M1 rhat)(M2 rhat)^T ]
/// evaluated with M in Hz/T and |r| in metres, returned in GHz.
Matrix3 dipole_coupling(const Matrix3& M1_GHz_per_T, const Matrix3& M2_GHz_per_T,
                        const Vector3& r_angstrom);

/// Observed Ising couplings and per-state g values entering the exchange scan.
struct StateCoupling {
  std::string label;     // e.g. "G00"
  double g1z = 0.0;      // GHz/T, ion 1 in this state
  double g2z = 0.0;      // GHz/T, ion 2 in this state
  double J_obs_zz = 0.0; // GHz, measured
};

/// Exchange budget at one separation: dipole-only prediction per state and
/// the exchange fraction |J_obs - J_dd| / |J_obs| needed on top of it.
/// Fractions are compared on magnitudes since only |J_zz| is measured; values
/// above 1 are reported raw and flagged.
struct ExchangeReport {
  double r_angstrom = 0.0;
  std::vector<double> J_dd_zz;      // GHz, per state
  std::vector<double> fraction;     // per state
  double min_fraction = 0.0;        // over states
  double max_fraction = 0.0;        // over states (worst state)
  double aggregate_fraction = 0.0;  // sum |residual| / sum |J_obs|
  bool exceeds_unity = false;       // some state needs exchange > |J_obs|
};

struct ExchangeScan {
  std::vector<ExchangeReport> reports;
  /// Separation minimizing the worst-state fraction, with its report.
  double best_r_angstrom = 0.0;
  ExchangeReport best;
};

/// Evaluate the exchange fractions over a separation grid along `axis`.
ExchangeScan min_exchange_scan(const std::vector<StateCoupling>& states,
                               const Vector3& axis, double r_min_angstrom,
                               double r_max_angstrom, int steps);

ExchangeReport exchange_report_at(const std::vector<StateCoupling>& states,
                                  const Vector3& axis, double r_angstrom);

/// Frequency shift of one ion's optical transition when its partner is
/// already excited, from the Ising couplings alone:
///   (J00 + J11 - J10 - J01) / 4.
/// J11 is a hypothesis; it was never measured.
double blockade_shift(double J00_zz, double J10_zz, double J01_zz, double J11_zz);

/// A dipole-only coupling satisfies J_dd,zz ~ g1z*g2z per state, so a larger
/// excited-state |J_zz| with smaller excited g is impossible dipole-only.
bool dipole_only_consistent(double J00_zz, double J_exc_zz, double g0z, double g1z);

}  // namespace spinpair
