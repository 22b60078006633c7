#include "spinpair/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "spinpair/errors.hpp"

namespace spinpair {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    // trim
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_double(const std::string& s, int line_no, const char* what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line_no) + ": bad " + what + " value '" +
                  s + "'");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

json matrix_to_json(const Matrix3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Matrix3 matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw IoError("config: expected 3x3 matrix");
  Matrix3 m;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3)
      throw IoError("config: expected 3x3 matrix");
    for (int c = 0; c < 3; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json state_to_json(const StateTensors& t) {
  return json{{"g1_GHz_per_T", matrix_to_json(t.g1)},
              {"g2_GHz_per_T", matrix_to_json(t.g2)},
              {"J_GHz", matrix_to_json(t.J)}};
}

StateTensors state_from_json(const json& j) {
  StateTensors t;
  t.g1 = matrix_from_json(j.at("g1_GHz_per_T"));
  t.g2 = matrix_from_json(j.at("g2_GHz_per_T"));
  t.J = matrix_from_json(j.at("J_GHz"));
  return t;
}

}  // namespace

std::vector<Peak> read_peaks(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) {
    std::cerr << "warning: " << path << " is empty; no peaks loaded\n";
    return {};
  }
  ++line_no;
  const auto header = split_csv_row(line);
  if (header.size() < 2 || header[0] != "field_T" || header[1] != "frequency_GHz" ||
      (header.size() >= 3 && header[2] != "weight"))
    throw IoError(path + ": expected header field_T,frequency_GHz,weight");

  std::vector<Peak> peaks;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_row(line);
    if (cells.size() < 2 || cells.size() > 4)
      throw IoError("line " + std::to_string(line_no) + ": expected 2-4 columns");
    Peak p;
    p.field_T = parse_double(cells[0], line_no, "field");
    p.frequency_GHz = parse_double(cells[1], line_no, "frequency");
    if (cells.size() >= 3 && !cells[2].empty())
      p.weight = parse_double(cells[2], line_no, "weight");
    if (cells.size() >= 4) p.label = cells[3];
    if (!(p.weight > 0.0))
      throw IoError("line " + std::to_string(line_no) + ": weight must be > 0");
    if (!std::isfinite(p.field_T) || !std::isfinite(p.frequency_GHz))
      throw IoError("line " + std::to_string(line_no) + ": non-finite value");
    peaks.push_back(p);
  }
  if (peaks.empty())
    std::cerr << "warning: " << path << " contains no peak rows\n";
  std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    if (a.field_T != b.field_T) return a.field_T < b.field_T;
    return a.frequency_GHz < b.frequency_GHz;
  });
  return peaks;
}

void write_peaks(const std::vector<Peak>& peaks, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "field_T,frequency_GHz,weight\n";
  char buf[128];
  for (const auto& p : peaks) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", p.field_T, p.frequency_GHz,
                  p.weight);
    out << buf;
  }
  if (!out) throw IoError("failed writing " + path);
}

void write_spectrum_csv(const SpectrumMap& map, const std::string& path) {
  if (map.empty()) throw IoError("write_spectrum_csv: refusing to write empty map");
  std::ofstream out = open_output(path);
  out << "field_T,frequency_GHz,intensity\n";
  char buf[160];
  for (size_t i = 0; i < map.field_T.size(); ++i) {
    for (size_t j = 0; j < map.frequency_GHz.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", map.field_T[i],
                    map.frequency_GHz[j], map.intensity[map.index(i, j)]);
      out << buf;
    }
  }
  if (!out) throw IoError("failed writing " + path);
}

namespace {

struct GridRows {
  std::vector<double> field, freq, value;
};

GridRows read_grid_rows(const std::string& path, const char* expected_prefix) {
  std::ifstream in = open_input(path);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  ++line_no;
  const auto header = split_csv_row(line);
  if (header.size() != 3 || header[0] != "field_T" || header[1] != "frequency_GHz")
    throw IoError(path + ": expected header " + expected_prefix);
  GridRows rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_row(line);
    if (cells.size() != 3)
      throw IoError("line " + std::to_string(line_no) + ": expected 3 columns");
    rows.field.push_back(parse_double(cells[0], line_no, "field"));
    rows.freq.push_back(parse_double(cells[1], line_no, "frequency"));
    rows.value.push_back(parse_double(cells[2], line_no, "value"));
  }
  if (rows.field.empty()) throw IoError(path + ": no data rows");
  return rows;
}

template <typename MapT>
MapT grid_from_rows(const GridRows& rows, const std::string& path) {
  std::vector<double> fields = rows.field;
  std::sort(fields.begin(), fields.end());
  fields.erase(std::unique(fields.begin(), fields.end()), fields.end());
  std::vector<double> freqs = rows.freq;
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
  if (fields.size() * freqs.size() != rows.field.size())
    throw IoError(path + ": rows do not form a rectangular field x frequency grid");

  MapT map;
  map.field_T = fields;
  map.frequency_GHz = freqs;
  if constexpr (std::is_same_v<MapT, SpectrumMap>)
    map.intensity.assign(fields.size() * freqs.size(), 0.0);
  else
    map.value.assign(fields.size() * freqs.size(), 0.0);
  std::vector<bool> seen(fields.size() * freqs.size(), false);
  for (size_t r = 0; r < rows.field.size(); ++r) {
    const size_t fi = std::lower_bound(fields.begin(), fields.end(), rows.field[r]) -
                      fields.begin();
    const size_t qi =
        std::lower_bound(freqs.begin(), freqs.end(), rows.freq[r]) - freqs.begin();
    const size_t idx = fi * freqs.size() + qi;
    if (seen[idx]) throw IoError(path + ": duplicate grid point");
    seen[idx] = true;
    if constexpr (std::is_same_v<MapT, SpectrumMap>)
      map.intensity[idx] = rows.value[r];
    else
      map.value[idx] = rows.value[r];
  }
  return map;
}

}  // namespace

SpectrumMap read_spectrum_csv(const std::string& path) {
  return grid_from_rows<SpectrumMap>(
      read_grid_rows(path, "field_T,frequency_GHz,intensity"), path);
}

RawMap read_raw_map_csv(const std::string& path) {
  return grid_from_rows<RawMap>(
      read_grid_rows(path, "field_T,frequency_GHz,<current>"), path);
}

void write_pgm(const RenderedImage& image, const SpectrumMap& map,
               const std::string& path) {
  if (image.pixels.empty()) throw IoError("write_pgm: empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n";
  out << "# intensity transform: log10(P+" << image.floor << ")\n";
  out << "# scale: [" << image.v_min << ", " << image.v_max << "] -> [0, 65535]\n";
  out << "# columns: field_T " << map.field_T.front() << ".." << map.field_T.back()
      << " (" << image.n_fields << ")\n";
  out << "# rows: frequency_GHz " << map.frequency_GHz.front() << ".."
      << map.frequency_GHz.back() << " (" << image.n_freqs << ")\n";
  if (!map.provenance.empty()) out << "# " << map.provenance << "\n";
  out << image.n_fields << " " << image.n_freqs << "\n65535\n";
  // Row 0 is the highest frequency so the image reads like a plot.
  for (size_t r = 0; r < image.n_freqs; ++r) {
    const size_t j = image.n_freqs - 1 - r;
    for (size_t i = 0; i < image.n_fields; ++i) {
      const uint16_t v = image.pixels[i * image.n_freqs + j];
      const unsigned char hi = static_cast<unsigned char>(v >> 8);
      const unsigned char lo = static_cast<unsigned char>(v & 0xff);
      out.put(static_cast<char>(hi));
      out.put(static_cast<char>(lo));
    }
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<Peak> extract_peaks(const RawMap& map, const ExtractOptions& opts) {
  if (map.field_T.size() < 3 || map.frequency_GHz.size() < 3)
    throw ValidationError("extract_peaks: grid needs at least 3 points per axis");
  for (size_t i = 1; i < map.field_T.size(); ++i)
    if (!(map.field_T[i] > map.field_T[i - 1]))
      throw ValidationError("extract_peaks: field axis not strictly monotone");
  for (size_t j = 1; j < map.frequency_GHz.size(); ++j)
    if (!(map.frequency_GHz[j] > map.frequency_GHz[j - 1]))
      throw ValidationError("extract_peaks: frequency axis not strictly monotone");

  const size_t nf = map.frequency_GHz.size();
  std::vector<Peak> peaks;
  std::vector<double> column(nf), dev(nf);
  for (size_t i = 0; i < map.field_T.size(); ++i) {
    for (size_t j = 0; j < nf; ++j) column[j] = map.value[map.index(i, j)];

    std::vector<double> sorted = column;
    std::nth_element(sorted.begin(), sorted.begin() + nf / 2, sorted.end());
    double median = sorted[nf / 2];
    if (nf % 2 == 0) {
      std::nth_element(sorted.begin(), sorted.begin() + nf / 2 - 1, sorted.end());
      median = 0.5 * (median + sorted[nf / 2 - 1]);
    }
    for (size_t j = 0; j < nf; ++j) dev[j] = std::abs(column[j] - median);
    std::vector<double> sdev = dev;
    std::nth_element(sdev.begin(), sdev.begin() + nf / 2, sdev.end());
    double mad = sdev[nf / 2];
    if (nf % 2 == 0) {
      std::nth_element(sdev.begin(), sdev.begin() + nf / 2 - 1, sdev.end());
      mad = 0.5 * (mad + sdev[nf / 2 - 1]);
    }
    const double sigma = 1.4826 * mad;  // Gaussian-consistent robust scale
    if (sigma == 0.0) {
      std::cerr << "warning: constant column at field " << map.field_T[i]
                << " T skipped\n";
      continue;
    }

    struct Candidate {
      size_t j;
      double snr;
    };
    std::vector<Candidate> cands;
    for (size_t j = 1; j + 1 < nf; ++j) {
      if (column[j] >= column[j - 1] && column[j] > column[j + 1]) {
        const double snr = (column[j] - median) / sigma;
        if (snr > opts.k_mad) cands.push_back({j, snr});
      }
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.snr > b.snr; });
    std::vector<size_t> kept;
    for (const auto& c : cands) {
      bool suppressed = false;
      for (size_t k : kept)
        if (std::abs(map.frequency_GHz[c.j] - map.frequency_GHz[k]) <
            opts.min_separation_GHz) {
          suppressed = true;
          break;
        }
      if (!suppressed) kept.push_back(c.j);
    }
    std::sort(kept.begin(), kept.end());
    for (size_t j : kept) {
      Peak p;
      p.field_T = map.field_T[i];
      p.frequency_GHz = map.frequency_GHz[j];
      p.weight = (column[j] - median) / sigma;
      peaks.push_back(p);
    }
  }
  return peaks;
}

std::string to_json_string(const ModelConfig& config) {
  const PairSiteModel& m = config.model;
  json states{{"G00", state_to_json(m.ground)},
              {"E10", state_to_json(m.excited1)},
              {"E01", state_to_json(m.excited2)}};
  if (m.doubly_excited) states["E11"] = state_to_json(*m.doubly_excited);
  json model{{"states", states},
             {"nu10_GHz", m.nu10},
             {"delta_GHz", m.delta},
             {"kappa_GHz", m.kappa},
             {"parity", m.parity == OpticalParity::Odd ? "odd" : "even"},
             {"ion1_active", m.ion1_active},
             {"ion2_active", m.ion2_active}};
  if (m.absolute_origin_THz) model["absolute_origin_THz"] = *m.absolute_origin_THz;
  if (!m.name.empty()) model["name"] = m.name;

  json j{{"schema_version", config.schema_version},
         {"model", model},
         {"sweep",
          {{"axis", {config.sweep_axis.x(), config.sweep_axis.y(), config.sweep_axis.z()}},
           {"bmin_T", config.b_min_T},
           {"bmax_T", config.b_max_T},
           {"steps", config.steps},
           {"kernel_sigma_GHz", config.sweep.kernel_sigma_GHz},
           {"frequency_step_GHz", config.sweep.frequency_step_GHz},
           {"auto_frequency_range", config.sweep.auto_frequency_range},
           {"frequency_min_GHz", config.sweep.frequency_min_GHz},
           {"frequency_max_GHz", config.sweep.frequency_max_GHz}}},
         {"render", {{"floor", config.render_floor}}}};
  return j.dump(2);
}

ModelConfig config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("config: invalid JSON: ") + e.what());
  }
  ModelConfig config;
  try {
    config.schema_version = j.value("schema_version", 1);
    if (config.schema_version != 1)
      throw IoError("config: unsupported schema_version " +
                    std::to_string(config.schema_version));
    const json& jm = j.at("model");
    const json& states = jm.at("states");
    config.model.ground = state_from_json(states.at("G00"));
    config.model.excited1 = state_from_json(states.at("E10"));
    config.model.excited2 = state_from_json(states.at("E01"));
    if (states.contains("E11"))
      config.model.doubly_excited = state_from_json(states.at("E11"));
    config.model.nu10 = jm.value("nu10_GHz", 0.0);
    config.model.delta = jm.value("delta_GHz", 0.0);
    config.model.kappa = jm.value("kappa_GHz", 0.0);
    const std::string parity = jm.value("parity", "even");
    if (parity != "even" && parity != "odd")
      throw IoError("config: parity must be 'even' or 'odd'");
    config.model.parity = parity == "odd" ? OpticalParity::Odd : OpticalParity::Even;
    config.model.ion1_active = jm.value("ion1_active", true);
    config.model.ion2_active = jm.value("ion2_active", true);
    if (jm.contains("absolute_origin_THz"))
      config.model.absolute_origin_THz = jm["absolute_origin_THz"].get<double>();
    config.model.name = jm.value("name", "");

    if (j.contains("sweep")) {
      const json& js = j["sweep"];
      if (js.contains("axis")) {
        const auto& a = js["axis"];
        config.sweep_axis = Vector3(a.at(0).get<double>(), a.at(1).get<double>(),
                                    a.at(2).get<double>());
      }
      config.b_min_T = js.value("bmin_T", config.b_min_T);
      config.b_max_T = js.value("bmax_T", config.b_max_T);
      config.steps = js.value("steps", config.steps);
      config.sweep.kernel_sigma_GHz =
          js.value("kernel_sigma_GHz", config.sweep.kernel_sigma_GHz);
      config.sweep.frequency_step_GHz =
          js.value("frequency_step_GHz", config.sweep.frequency_step_GHz);
      config.sweep.auto_frequency_range =
          js.value("auto_frequency_range", config.sweep.auto_frequency_range);
      config.sweep.frequency_min_GHz =
          js.value("frequency_min_GHz", config.sweep.frequency_min_GHz);
      config.sweep.frequency_max_GHz =
          js.value("frequency_max_GHz", config.sweep.frequency_max_GHz);
    }
    if (j.contains("render"))
      config.render_floor = j["render"].value("floor", config.render_floor);
  } catch (const json::exception& e) {
    throw IoError(std::string("config: ") + e.what());
  }
  validate(config.model);
  return config;
}

void write_config(const ModelConfig& config, const std::string& path) {
  std::ofstream out = open_output(path);
  out << to_json_string(config) << "\n";
  if (!out) throw IoError("failed writing " + path);
}

ModelConfig read_config(const std::string& path) {
  std::ifstream in = open_input(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_string(ss.str());
}

}  // namespace spinpair
