#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinpair/model.hpp"
#include "spinpair/spectrum.hpp"

namespace spinpair {

/// One measured line position.
struct Peak {
  double field_T = 0.0;
  double frequency_GHz = 0.0;
  double weight = 1.0;
  std::string label;
};

/// Named scalar knob on a PairSiteModel. Per-ion g values are stored per ion
/// electronic level and propagated into every pair state they enter (the
/// ground g of ion 2 appears in both |00> and |10>, etc).
struct FitParameter {
  std::string name;
  std::string unit;
  std::function<double(const PairSiteModel&)> get;
  std::function<void(PairSiteModel&, double)> set;
};

/// Registry of every fittable parameter. Includes tied aliases g0z/g1z that
/// move both ions together.
const std::vector<FitParameter>& fit_parameter_registry();
const FitParameter& fit_parameter(const std::string& name);

struct FitSpec {
  PairSiteModel initial;
  std::vector<std::string> free_names;
  /// Bounds per free parameter; missing entries get +-25% of the initial
  /// value (at least +-2 in GHz-type units). Bounds must contain the initial.
  std::map<std::string, std::pair<double, double>> bounds;
  Vector3 axis = Vector3(0, 0, 1);

  double association_threshold_GHz = 5.0;  // farther peaks count as unmatched
  double line_intensity_floor = 1e-6;      // lines dimmer than this never match
  int max_iterations = 4000;               // per restart
  int restarts = 5;                        // random restarts within bounds
  uint64_t seed = 0;
  double relative_tolerance = 1e-10;
};

struct PeakAssociation {
  std::vector<int> line_index;      // per peak; -1 when unmatched
  std::vector<double> residual_GHz; // signed model - peak; 0 for unmatched
  int unmatched = 0;
};

struct FitResult {
  PairSiteModel model;
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> std_errors;
  double objective = 0.0;  // weighted sum of squared residuals
  double rms_GHz = 0.0;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  PeakAssociation association;
};

/// Match every peak to the nearest simulated line at its field; ties go to
/// the brighter line; peaks farther than the threshold stay unmatched.
PeakAssociation associate_peaks(const PairSiteModel& model, const Vector3& axis,
                                const std::vector<Peak>& peaks,
                                double threshold_GHz = 5.0,
                                double intensity_floor = 1e-6);

/// Weighted least-squares fit of the free parameters with Nelder-Mead
/// simplex descent, re-associating peaks on every evaluation, plus seeded
/// random restarts within bounds. Unmatched peaks contribute a capped
/// residual equal to the association threshold.
FitResult fit_model(const FitSpec& spec, const std::vector<Peak>& peaks);

struct FitQualityReport {
  double rms_GHz = 0.0;
  double chi2 = 0.0;
  double reduced_chi2 = 0.0;
  int n_peaks = 0;
  int n_free = 0;
  int unmatched = 0;
  std::vector<double> per_peak_residual;
  std::vector<int> histogram;       // residual histogram counts
  std::vector<double> bin_edges;    // histogram bin edges, GHz
  std::string text;                 // human-readable summary
};

FitQualityReport fit_quality_report(const FitResult& result,
                                    const std::vector<Peak>& peaks);

}  // namespace spinpair
