#include "spinpair/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "spinpair/errors.hpp"
#include "spinpair/parallel.hpp"

namespace spinpair {

namespace {

constexpr int kGroundDim = 4;
constexpr int kExcitedDim = 8;

const std::vector<MatrixXc>& excited_resolvers() {
  static const std::vector<MatrixXc> res = [] {
    const auto& ops = SpinOperators::get();
    MatrixXc sz = MatrixXc::Zero(kExcitedDim, kExcitedDim);
    sz.topLeftCorner(4, 4) = ops.Sz_total;
    sz.bottomRightCorner(4, 4) = ops.Sz_total;
    MatrixXc sd = MatrixXc::Zero(kExcitedDim, kExcitedDim);
    sd.topLeftCorner(4, 4) = ops.Sz_diff;
    sd.bottomRightCorner(4, 4) = ops.Sz_diff;
    MatrixXc manifold = MatrixXc::Zero(kExcitedDim, kExcitedDim);
    manifold.topLeftCorner(4, 4) = Matrix4c::Identity();
    manifold.bottomRightCorner(4, 4) = -Matrix4c::Identity();
    return std::vector<MatrixXc>{sz, sd, manifold};
  }();
  return res;
}

double manifold_weight_e10(const Eigen::VectorXcd& v) {
  return v.head(4).squaredNorm();
}

ManifoldLabel classify_manifold(const Eigen::VectorXcd& v) {
  const double w = manifold_weight_e10(v);
  if (w >= 0.75) return ManifoldLabel::E10;
  if (w <= 0.25) return ManifoldLabel::E01;
  return ManifoldLabel::Mixed;
}

std::vector<TransitionLine> lines_from_systems(const PairSiteModel& model,
                                               double field_coord,
                                               const EigenSystem& ground,
                                               const EigenSystem& excited) {
  const double a1 = model.ion1_active ? 1.0 : 0.0;
  const double a2 = model.ion2_active ? 1.0 : 0.0;
  std::vector<TransitionLine> lines;
  lines.reserve(kGroundDim * kExcitedDim);
  for (int i = 0; i < kGroundDim; ++i) {
    const Eigen::VectorXcd gi = ground.vectors.col(i);
    for (int f = 0; f < kExcitedDim; ++f) {
      const Eigen::VectorXcd vf = excited.vectors.col(f);
      const std::complex<double> amp =
          a1 * vf.head(4).dot(gi) + a2 * vf.tail(4).dot(gi);
      TransitionLine line;
      line.field_T = field_coord;
      line.frequency = excited.values[f] - ground.values[i];
      line.intensity = std::norm(amp);
      line.initial_index = i;
      line.final_index = f;
      line.final_manifold = classify_manifold(vf);
      lines.push_back(line);
    }
  }
  return lines;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string model_fingerprint(const PairSiteModel& m) {
  std::ostringstream os;
  os.precision(17);
  for (const auto* st : {&m.ground, &m.excited1, &m.excited2}) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        os << st->g1(r, c) << ',' << st->g2(r, c) << ',' << st->J(r, c) << ';';
  }
  os << m.nu10 << ',' << m.delta << ',' << m.kappa << ','
     << (m.parity == OpticalParity::Odd ? "odd" : "even") << ','
     << m.ion1_active << ',' << m.ion2_active;
  return os.str();
}

}  // namespace

std::string to_string(ManifoldLabel m) {
  switch (m) {
    case ManifoldLabel::E10: return "E10";
    case ManifoldLabel::E01: return "E01";
    case ManifoldLabel::Mixed: return "mixed";
  }
  return "?";
}

Eigen::MatrixXcd excited_manifold_hamiltonian(const PairSiteModel& model,
                                              const Vector3& field_T) {
  const Matrix4c h10 = build_pair_hamiltonian(model, ElectronicState::E10, field_T);
  const Matrix4c h01 = build_pair_hamiltonian(model, ElectronicState::E01, field_T);

  MatrixXc H = MatrixXc::Zero(kExcitedDim, kExcitedDim);
  H.topLeftCorner(4, 4) = h10 + model.nu10 * Matrix4c::Identity();
  H.bottomRightCorner(4, 4) = h01 + model.nu01() * Matrix4c::Identity();

  // Optical coupling between equal spin projections of the two manifolds.
  for (int k = 0; k < 4; ++k) {
    double sigma = 1.0;
    if (model.parity == OpticalParity::Odd)
      sigma = s1z_of_basis(k) > 0 ? 1.0 : -1.0;
    H(k, 4 + k) = model.kappa * sigma;
    H(4 + k, k) = model.kappa * sigma;
  }
  return H;
}

EigenSystem diagonalize_excited(const PairSiteModel& model, const Vector3& field_T) {
  return eigensolve(excited_manifold_hamiltonian(model, field_T),
                    excited_resolvers());
}

std::vector<TransitionLine> transition_lines(const PairSiteModel& model,
                                             const Vector3& field_T) {
  const EigenSystem ground =
      diagonalize_state(model, ElectronicState::G00, field_T);
  const EigenSystem excited = diagonalize_excited(model, field_T);
  const double coord = field_T.norm() * (field_T.sum() < 0 ? -1.0 : 1.0);
  return lines_from_systems(model, coord, ground, excited);
}

SweepResult sweep(const PairSiteModel& model, const Vector3& axis, double b_min_T,
                  double b_max_T, int steps, const SweepOptions& opts) {
  validate(model);
  if (steps < 2) throw ValidationError("sweep: need at least 2 steps");
  if (!(b_max_T > b_min_T)) throw ValidationError("sweep: degenerate field range");
  if (axis.norm() == 0.0) throw ValidationError("sweep: zero axis");
  const Vector3 unit = axis / axis.norm();

  SweepResult out;
  std::vector<double> fields(steps);
  for (int i = 0; i < steps; ++i)
    fields[i] = b_min_T + (b_max_T - b_min_T) * static_cast<double>(i) / (steps - 1);

  std::vector<EigenSystem> ground_systems(steps);
  std::vector<EigenSystem> excited_systems(steps);
  out.lines.resize(steps);
  parallel_for(static_cast<size_t>(steps), [&](size_t i) {
    const Vector3 B = fields[i] * unit;
    ground_systems[i] = diagonalize_state(model, ElectronicState::G00, B);
    excited_systems[i] = diagonalize_excited(model, B);
    out.lines[i] =
        lines_from_systems(model, fields[i], ground_systems[i], excited_systems[i]);
  });

  out.ground = track_levels(ground_systems, fields);
  out.excited = track_levels(excited_systems, fields);

  // Frequency grid.
  double fmin = opts.frequency_min_GHz, fmax = opts.frequency_max_GHz;
  if (opts.auto_frequency_range) {
    fmin = 1e300;
    fmax = -1e300;
    for (const auto& step_lines : out.lines)
      for (const auto& l : step_lines)
        if (l.intensity >= opts.intensity_floor) {
          fmin = std::min(fmin, l.frequency);
          fmax = std::max(fmax, l.frequency);
        }
    if (fmin > fmax) throw ValidationError("sweep: no lines above intensity floor");
    fmin -= opts.frequency_margin_GHz;
    fmax += opts.frequency_margin_GHz;
  }
  if (!(fmax > fmin) || opts.frequency_step_GHz <= 0.0)
    throw ValidationError("sweep: bad frequency grid");
  const int nf = static_cast<int>(std::floor((fmax - fmin) / opts.frequency_step_GHz)) + 1;

  out.map.field_T = fields;
  out.map.frequency_GHz.resize(nf);
  for (int j = 0; j < nf; ++j)
    out.map.frequency_GHz[j] = fmin + j * opts.frequency_step_GHz;
  out.map.intensity.assign(static_cast<size_t>(steps) * nf, 0.0);

  const double sigma = opts.kernel_sigma_GHz;
  const double window = 5.0 * sigma;
  parallel_for(static_cast<size_t>(steps), [&](size_t i) {
    for (const auto& l : out.lines[i]) {
      if (l.intensity < opts.intensity_floor) continue;
      const int j0 = std::max(
          0, static_cast<int>(std::ceil((l.frequency - window - fmin) /
                                        opts.frequency_step_GHz)));
      const int j1 = std::min(
          nf - 1, static_cast<int>(std::floor((l.frequency + window - fmin) /
                                              opts.frequency_step_GHz)));
      for (int j = j0; j <= j1; ++j) {
        const double df = out.map.frequency_GHz[j] - l.frequency;
        out.map.intensity[out.map.index(i, j)] +=
            l.intensity * std::exp(-0.5 * df * df / (sigma * sigma));
      }
    }
  });

  std::ostringstream prov;
  prov << "model_hash=" << std::hex << fnv1a(model_fingerprint(model)) << std::dec
       << " axis=" << unit.x() << ',' << unit.y() << ',' << unit.z()
       << " bmin_T=" << b_min_T << " bmax_T=" << b_max_T << " steps=" << steps
       << " kernel_sigma_GHz=" << sigma;
  out.map.provenance = prov.str();
  return out;
}

namespace {

// Energies of all tracked branches at an arbitrary field, matched to the
// reference eigenvectors by greedy maximal overlap.
VectorXr branch_energies_at(const PairSiteModel& model, const Vector3& axis,
                            double field, bool excited, const MatrixXc& reference) {
  const Vector3 B = field * axis;
  const EigenSystem sys =
      excited ? diagonalize_excited(model, B)
              : diagonalize_state(model, ElectronicState::G00, B);
  const int n = sys.size();
  Eigen::MatrixXd overlap(n, n);
  for (int b = 0; b < n; ++b)
    for (int j = 0; j < n; ++j)
      overlap(b, j) = std::abs(reference.col(b).dot(sys.vectors.col(j)));
  VectorXr energies(n);
  std::vector<bool> used_b(n, false), used_j(n, false);
  for (int it = 0; it < n; ++it) {
    int bb = -1, jb = -1;
    double best = -1.0;
    for (int b = 0; b < n; ++b) {
      if (used_b[b]) continue;
      for (int j = 0; j < n; ++j) {
        if (used_j[j]) continue;
        if (overlap(b, j) > best) {
          best = overlap(b, j);
          bb = b;
          jb = j;
        }
      }
    }
    used_b[bb] = true;
    used_j[jb] = true;
    energies[bb] = sys.values[jb];
  }
  return energies;
}

struct RefinedMinimum {
  double field = 0.0;
  double gap = 0.0;
  double center = 0.0;
};

RefinedMinimum refine_gap_minimum(const PairSiteModel& model, const Vector3& axis,
                                  bool excited, const MatrixXc& reference, int j,
                                  int k, double lo, double hi, int iterations) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto gap_at = [&](double b) {
    const VectorXr e = branch_energies_at(model, axis, b, excited, reference);
    return std::abs(e[j] - e[k]);
  };
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = gap_at(x1), f2 = gap_at(x2);
  for (int it = 0; it < iterations && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = gap_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = gap_at(x2);
    }
  }
  RefinedMinimum m;
  m.field = 0.5 * (a + b);
  const VectorXr e = branch_energies_at(model, axis, m.field, excited, reference);
  m.gap = std::abs(e[j] - e[k]);
  m.center = 0.5 * (e[j] + e[k]);
  return m;
}

void scan_branch_pairs(const PairSiteModel& model, const Vector3& axis,
                       const TrackedBranches& tb, bool excited,
                       const AnticrossOptions& opts,
                       std::vector<AnticrossingReport>& out) {
  const int n = tb.branch_count();
  const int steps = static_cast<int>(tb.fields.size());
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      double last_reported_field = -1e300;
      for (int i = 1; i + 1 < steps; ++i) {
        const double g_prev = std::abs(tb.energies[i - 1][j] - tb.energies[i - 1][k]);
        const double g_here = std::abs(tb.energies[i][j] - tb.energies[i][k]);
        const double g_next = std::abs(tb.energies[i + 1][j] - tb.energies[i + 1][k]);
        if (!(g_here < g_prev && g_here <= g_next)) continue;
        if (g_here > opts.gap_ceiling_GHz) continue;

        const RefinedMinimum m =
            refine_gap_minimum(model, axis, excited, tb.vectors[i], j, k,
                               tb.fields[i - 1], tb.fields[i + 1],
                               opts.refine_iterations);
        if (m.gap < opts.crossing_tol_GHz) continue;  // true crossing
        if (m.gap > opts.gap_ceiling_GHz) continue;
        const double step = tb.fields[1] - tb.fields[0];
        if (std::abs(m.field - last_reported_field) < 0.5 * std::abs(step)) continue;
        last_reported_field = m.field;

        AnticrossingReport rep;
        rep.field_T = m.field;
        rep.center_GHz = m.center;
        rep.gap_GHz = m.gap;
        rep.branch_a = j;
        rep.branch_b = k;
        if (!excited) {
          rep.type = AnticrossingType::Spin;
          rep.state = ElectronicState::G00;
        } else {
          const double wj = manifold_weight_e10(tb.vectors[i].col(j));
          const double wk = manifold_weight_e10(tb.vectors[i].col(k));
          if (wj >= 0.75 && wk >= 0.75) {
            rep.type = AnticrossingType::Spin;
            rep.state = ElectronicState::E10;
          } else if (wj <= 0.25 && wk <= 0.25) {
            rep.type = AnticrossingType::Spin;
            rep.state = ElectronicState::E01;
          } else {
            rep.type = AnticrossingType::Optical;
            rep.state = wj >= wk ? ElectronicState::E10 : ElectronicState::E01;
          }
        }
        out.push_back(rep);
      }
    }
  }
}

}  // namespace

std::vector<AnticrossingReport> detect_anticrossings(const PairSiteModel& model,
                                                     const Vector3& axis,
                                                     const SweepResult& sweep_result,
                                                     const AnticrossOptions& opts) {
  if (sweep_result.ground.fields.size() < 3)
    throw ValidationError("detect_anticrossings: sweep too short");
  const Vector3 unit = axis / axis.norm();
  std::vector<AnticrossingReport> out;
  scan_branch_pairs(model, unit, sweep_result.ground, false, opts, out);
  scan_branch_pairs(model, unit, sweep_result.excited, true, opts, out);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.field_T < b.field_T;
  });
  return out;
}

std::vector<AnticrossingReport> dark_state_analysis(const PairSiteModel& model,
                                                    const Vector3& axis,
                                                    double b_min_T, double b_max_T,
                                                    int steps,
                                                    const AnticrossOptions& opts) {
  if (!(model.ion1_active && model.ion2_active))
    throw ValidationError("dark_state_analysis: both ions must be optically active");
  if (model.kappa == 0.0)
    throw ValidationError("dark_state_analysis: kappa must be nonzero");

  const Vector3 unit = axis / axis.norm();
  const SweepResult sw = sweep(model, unit, b_min_T, b_max_T, steps);
  std::vector<AnticrossingReport> reports;
  for (AnticrossingReport rep :
       detect_anticrossings(model, unit, sw, opts)) {
    if (rep.type != AnticrossingType::Optical) continue;

    // Branch intensities at the refined resonance field.
    const Vector3 B = rep.field_T * unit;
    const EigenSystem ground = diagonalize_state(model, ElectronicState::G00, B);
    const EigenSystem excited = diagonalize_excited(model, B);
    // Identify the two eigenstates closest to the branch energies.
    int fa = 0, fb = 0;
    double da = 1e300, db = 1e300;
    const double ea = rep.center_GHz - 0.5 * rep.gap_GHz;
    const double eb = rep.center_GHz + 0.5 * rep.gap_GHz;
    for (int f = 0; f < excited.size(); ++f) {
      if (std::abs(excited.values[f] - ea) < da) {
        da = std::abs(excited.values[f] - ea);
        fa = f;
      }
      if (std::abs(excited.values[f] - eb) < db) {
        db = std::abs(excited.values[f] - eb);
        fb = f;
      }
    }
    const auto lines = lines_from_systems(model, rep.field_T, ground, excited);
    double ia = 0.0, ib = 0.0;
    for (const auto& l : lines) {
      if (l.final_index == fa) ia = std::max(ia, l.intensity);
      if (l.final_index == fb) ib = std::max(ib, l.intensity);
    }
    if (ia < opts.dark_intensity && ib >= opts.dark_intensity)
      rep.dark = DarkBranch::Lower;
    else if (ib < opts.dark_intensity && ia >= opts.dark_intensity)
      rep.dark = DarkBranch::Upper;
    else
      rep.dark = DarkBranch::None;
    reports.push_back(rep);
  }
  return reports;
}

RenderedImage render_map(const SpectrumMap& map, double floor) {
  if (map.empty()) throw ValidationError("render_map: empty map");
  if (!(floor > 0.0)) throw ValidationError("render_map: floor must be positive");
  RenderedImage img;
  img.n_fields = map.field_T.size();
  img.n_freqs = map.frequency_GHz.size();
  img.floor = floor;
  img.v_min = std::log10(floor);
  img.v_max = std::log10(1.0 + floor);
  img.log_values.resize(map.intensity.size());
  img.pixels.resize(map.intensity.size());
  const double span = img.v_max - img.v_min;
  for (size_t i = 0; i < map.intensity.size(); ++i) {
    const double v = std::log10(std::max(0.0, map.intensity[i]) + floor);
    img.log_values[i] = v;
    const double clamped = std::clamp(v, img.v_min, img.v_max);
    img.pixels[i] =
        static_cast<uint16_t>(std::lround(65535.0 * (clamped - img.v_min) / span));
  }
  return img;
}

PairSiteModel preset_model(const std::string& name) {
  PairSiteModel m;
  if (name == "siteB") {
    // Two identical optically active ions, near-Ising couplings.
    m.name = "siteB";
    m.ground.g1 = Vector3(0, 0, 232.0).asDiagonal();
    m.ground.g2 = Vector3(0, 0, 230.5).asDiagonal();
    m.ground.J = Vector3(0, 0, 209.0).asDiagonal();
    m.ground.J += antisymmetric_from_vector(Vector3(2.0, 0.0, 0.2));

    m.excited1.g1 = Vector3(0, 0, 188.0).asDiagonal();
    m.excited1.g2 = Vector3(0, 0, 230.5).asDiagonal();
    m.excited1.J = Vector3(0, 0, 233.0).asDiagonal();
    m.excited1.J += antisymmetric_from_vector(Vector3(1.0, 0.0, 0.0));

    m.excited2.g1 = Vector3(0, 0, 232.0).asDiagonal();
    m.excited2.g2 = Vector3(0, 0, 187.0).asDiagonal();
    m.excited2.J = Vector3(0, 0, 220.0).asDiagonal();
    m.excited2.J += antisymmetric_from_vector(Vector3(1.0, 0.0, 0.0));

    m.nu10 = 0.0;
    // Detuning sign places the equal-spin optical resonance near +0.17 T.
    m.delta = -10.8;
    m.kappa = 0.75;
    m.parity = OpticalParity::Odd;
    m.ion1_active = true;
    m.ion2_active = true;
    m.absolute_origin_THz = 195.35035;  // 1534.64 nm
    return m;
  }
  if (name == "siteA") {
    // One optically active ion next to a dark anisotropic spin-1/2 partner.
    // The couplings are rank-1 (Ising along tilted axes), which keeps the
    // zero-field spectrum doubly degenerate; the partner quantization axis
    // rotates between the ground and excited manifolds, giving eight lines
    // in four flat pairs once the active ion is polarized.
    m.name = "siteA";
    const double alpha0 = 13.0 / 6.0;  // GHz
    const Vector3 u0(0.8, 0.0, 0.6);
    const Vector3 v0(1.0, 0.0, 0.0);
    m.ground.g1 = Vector3(0, 0, 136.0).asDiagonal();
    m.ground.g2 = Vector3(55.0, 0.0, 0.2).asDiagonal();
    m.ground.J = alpha0 * (u0 * v0.transpose());

    m.excited1.g1 = Vector3(0, 0, 48.0).asDiagonal();
    m.excited1.g2 = m.ground.g2;
    m.excited1.J = Vector3(0, 0, 10.0).asDiagonal();

    // Ion 2 is optically dark; its "excited" manifold mirrors the ground one
    // and never acquires intensity.
    m.excited2 = m.ground;

    m.nu10 = 0.0;
    m.delta = 0.0;
    m.kappa = 0.0;
    m.parity = OpticalParity::Even;
    m.ion1_active = true;
    m.ion2_active = false;
    m.absolute_origin_THz = 194.88480;  // 1538.306 nm
    return m;
  }
  throw ValidationError("preset_model: unknown preset '" + name +
                        "' (expected siteA or siteB)");
}

}  // namespace spinpair
