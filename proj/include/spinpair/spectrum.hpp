#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinpair/hamiltonian.hpp"
#include "spinpair/model.hpp"

namespace spinpair {

enum class ManifoldLabel { E10, E01, Mixed };

std::string to_string(ManifoldLabel m);

/// One optical transition between a ground eigenstate and an eigenstate of
/// the (possibly coupled) excited manifolds.
///
/// Intensity model: spin-preserving selection rule only. The transition
/// amplitude is a1 * <s'|s> on the |10> component plus a2 * <s''|s> on the
/// |01> component, with a_i = 1 for an optically active ion and 0 otherwise.
/// With kappa = 0 this reduces to the plain spin wavefunction overlap
/// P = |<spin_f|spin_i>|^2 <= 1. With kappa != 0 the resonant bright
/// superposition of two active ions can reach a1^2 + a2^2 = 2.
struct TransitionLine {
  double field_T = 0.0;      // signed sweep coordinate
  double frequency = 0.0;    // GHz relative to nu10 = 0
  double intensity = 0.0;
  int initial_index = 0;     // ground eigenstate, ascending order
  int final_index = 0;       // excited eigenstate index
  ManifoldLabel final_manifold = ManifoldLabel::E10;
};

/// Simulated map on a (field, frequency) grid, row-major by field.
struct SpectrumMap {
  std::vector<double> field_T;
  std::vector<double> frequency_GHz;
  std::vector<double> intensity;  // field-major: [i_field * n_freq + i_freq]
  std::string provenance;         // model hash + sweep parameters

  size_t index(size_t i_field, size_t i_freq) const {
    return i_field * frequency_GHz.size() + i_freq;
  }
  bool empty() const { return field_T.empty() || frequency_GHz.empty(); }
};

enum class AnticrossingType { Spin, Optical };
enum class DarkBranch { None, Lower, Upper };

struct AnticrossingReport {
  double field_T = 0.0;         // refined gap minimum
  double center_GHz = 0.0;      // mean branch energy at the minimum
  double gap_GHz = 0.0;
  AnticrossingType type = AnticrossingType::Spin;
  DarkBranch dark = DarkBranch::None;
  ElectronicState state = ElectronicState::G00;  // manifold for spin type
  int branch_a = 0;             // tracked branch labels
  int branch_b = 0;
};

struct SweepOptions {
  double kernel_sigma_GHz = 0.1;   // Gaussian rasterization width
  double frequency_step_GHz = 0.05;
  double frequency_min_GHz = 0.0;  // used when auto_frequency_range is false
  double frequency_max_GHz = 0.0;
  bool auto_frequency_range = true;
  double frequency_margin_GHz = 2.0;
  double intensity_floor = 1e-9;   // lines below this do not rasterize
};

struct SweepResult {
  SpectrumMap map;
  TrackedBranches ground;   // 4 branches of |00>
  TrackedBranches excited;  // 8 branches of |10> (+) |01>
  std::vector<std::vector<TransitionLine>> lines;  // per field step
};

struct AnticrossOptions {
  double gap_ceiling_GHz = 10.0;   // ignore minima wider than this
  double crossing_tol_GHz = 1e-5;  // refined gap below this is a crossing
  double dark_intensity = 1e-6;    // branch darker than this is "dark"
  int refine_iterations = 80;
};

/// 8x8 Hamiltonian of the coupled excited manifolds in block form
///   [ nu10 I + H10 , K ; K^dag , nu01 I + H01 ]
/// where K = kappa * diag(sigma_s) couples equal spin projections. For odd
/// parity sigma_s is the sign of the ion-1 spin (odd under a global spin
/// flip, i.e. time reversal); for even parity sigma_s = +1.
Eigen::MatrixXcd excited_manifold_hamiltonian(const PairSiteModel& model,
                                              const Vector3& field_T);

/// Diagonalized excited manifold with reproducible degenerate bases.
EigenSystem diagonalize_excited(const PairSiteModel& model, const Vector3& field_T);

/// All ground -> excited transitions at one field.
std::vector<TransitionLine> transition_lines(const PairSiteModel& model,
                                             const Vector3& field_T);

/// Sweep the field along `axis` from b_min to b_max (inclusive, `steps`
/// points), rasterizing lines with a Gaussian kernel.
SweepResult sweep(const PairSiteModel& model, const Vector3& axis, double b_min_T,
                  double b_max_T, int steps, const SweepOptions& opts = {});

/// Locate every avoided crossing in the tracked ground and excited branches:
/// local gap minima are refined by golden-section search and classified as
/// spin (within one electronic state) or optical (between |10> and |01>).
std::vector<AnticrossingReport> detect_anticrossings(
    const PairSiteModel& model, const Vector3& axis, const SweepResult& sweep_result,
    const AnticrossOptions& opts = {});

/// Optical anticrossings with dark-branch identification: at resonance the
/// antisymmetric combination of two identical active ions has cancelling
/// amplitudes. With odd parity the dark side swaps under field reversal.
std::vector<AnticrossingReport> dark_state_analysis(const PairSiteModel& model,
                                                    const Vector3& axis,
                                                    double b_min_T, double b_max_T,
                                                    int steps,
                                                    const AnticrossOptions& opts = {});

/// log10(intensity + floor) pixels, linearly scaled to 16-bit over the fixed
/// range [log10(floor), log10(1 + floor)].
struct RenderedImage {
  size_t n_fields = 0;  // image width
  size_t n_freqs = 0;   // image height
  std::vector<double> log_values;    // field-major, same layout as the map
  std::vector<uint16_t> pixels;      // scaled, clamped
  double floor = 0.03;
  double v_min = 0.0;  // log10(floor)
  double v_max = 0.0;  // log10(1 + floor)
};

RenderedImage render_map(const SpectrumMap& map, double floor = 0.03);

/// Built-in parameterizations: "siteB" (two identical optically active ions,
/// near-Ising couplings with antisymmetric perturbations, 0.75 GHz odd-parity
/// optical coupling, -10.8 GHz manifold detuning) and "siteA" (one active ion
/// with g_z 136/48 GHz/T next to a dark anisotropic partner).
PairSiteModel preset_model(const std::string& name);

}  // namespace spinpair
