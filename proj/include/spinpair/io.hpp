#pragma once

#include <string>
#include <vector>

#include "spinpair/fit.hpp"
#include "spinpair/model.hpp"
#include "spinpair/spectrum.hpp"

namespace spinpair {

/// Measured map on a rectangular (field, frequency) grid; the value axis is
/// detected current in arbitrary units.
struct RawMap {
  std::vector<double> field_T;        // strictly monotone
  std::vector<double> frequency_GHz;  // strictly monotone
  std::vector<double> value;          // field-major
  std::string device_id;
  std::string axis_orientation;

  size_t index(size_t i_field, size_t i_freq) const {
    return i_field * frequency_GHz.size() + i_freq;
  }
};

/// CSV with header `field_T,frequency_GHz,weight` (weight optional per row,
/// default 1). Result is sorted by field then frequency. A malformed row
/// raises IoError naming the line; a file with no data rows returns an empty
/// list and warns on stderr.
std::vector<Peak> read_peaks(const std::string& path);
void write_peaks(const std::vector<Peak>& peaks, const std::string& path);

/// CSV `field_T,frequency_GHz,intensity`, row-major by field, 9 significant
/// digits. Writing an empty map is an error.
void write_spectrum_csv(const SpectrumMap& map, const std::string& path);
SpectrumMap read_spectrum_csv(const std::string& path);

/// Same grid layout ingested as a measured map (third column name is free).
RawMap read_raw_map_csv(const std::string& path);

/// 16-bit binary PGM (big-endian), one row per frequency, one column per
/// field, with comment lines recording the log transform and axes.
void write_pgm(const RenderedImage& image, const SpectrumMap& map,
               const std::string& path);

struct ExtractOptions {
  double k_mad = 5.0;              // threshold in robust sigma units
  double min_separation_GHz = 0.3; // closer maxima keep only the larger
};

/// Per field column: subtract the column median, estimate the noise scale as
/// 1.4826 * MAD (the Gaussian-consistent robust sigma) and report local
/// maxima above k_mad * sigma. Peak weight is the signal-to-noise ratio.
/// All-constant columns are skipped with a warning.
std::vector<Peak> extract_peaks(const RawMap& map, const ExtractOptions& opts = {});

/// Whole-artifact configuration: model plus sweep and presentation defaults.
struct ModelConfig {
  int schema_version = 1;
  PairSiteModel model;
  Vector3 sweep_axis = Vector3(0, 0, 1);
  double b_min_T = -0.2;
  double b_max_T = 0.7;
  int steps = 901;
  SweepOptions sweep;
  double render_floor = 0.03;
};

std::string to_json_string(const ModelConfig& config);
ModelConfig config_from_json_string(const std::string& text);
void write_config(const ModelConfig& config, const std::string& path);
ModelConfig read_config(const std::string& path);

}  // namespace spinpair
