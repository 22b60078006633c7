#include "spinpair/fit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "spinpair/errors.hpp"

namespace spinpair {

namespace {

void set_g1_ground(PairSiteModel& m, double v) {
  m.ground.g1(2, 2) = v;
  m.excited2.g1(2, 2) = v;  // ion 1 stays in the ground level within |01>
}
void set_g2_ground(PairSiteModel& m, double v) {
  m.ground.g2(2, 2) = v;
  m.excited1.g2(2, 2) = v;
}

void set_D_component(Matrix3& J, int comp, double v) {
  auto d = decompose_coupling(J);
  d.D[comp] = v;
  J = compose_coupling(d);
}

std::vector<FitParameter> build_registry() {
  std::vector<FitParameter> reg;
  auto add = [&](const std::string& name, const std::string& unit,
                 std::function<double(const PairSiteModel&)> get,
                 std::function<void(PairSiteModel&, double)> set) {
    reg.push_back({name, unit, std::move(get), std::move(set)});
  };

  // Per-ion g_z for each ion electronic level.
  add("g1z0", "GHz/T", [](const PairSiteModel& m) { return m.ground.g1(2, 2); },
      [](PairSiteModel& m, double v) { set_g1_ground(m, v); });
  add("g1z1", "GHz/T", [](const PairSiteModel& m) { return m.excited1.g1(2, 2); },
      [](PairSiteModel& m, double v) { m.excited1.g1(2, 2) = v; });
  add("g2z0", "GHz/T", [](const PairSiteModel& m) { return m.ground.g2(2, 2); },
      [](PairSiteModel& m, double v) { set_g2_ground(m, v); });
  add("g2z1", "GHz/T", [](const PairSiteModel& m) { return m.excited2.g2(2, 2); },
      [](PairSiteModel& m, double v) { m.excited2.g2(2, 2) = v; });
  // Tied aliases moving both ions together.
  add("g0z", "GHz/T", [](const PairSiteModel& m) { return m.ground.g1(2, 2); },
      [](PairSiteModel& m, double v) {
        set_g1_ground(m, v);
        set_g2_ground(m, v);
      });
  add("g1z", "GHz/T", [](const PairSiteModel& m) { return m.excited1.g1(2, 2); },
      [](PairSiteModel& m, double v) {
        m.excited1.g1(2, 2) = v;
        m.excited2.g2(2, 2) = v;
      });

  const std::array<std::pair<std::string, ElectronicState>, 3> states = {
      std::make_pair(std::string("00"), ElectronicState::G00),
      std::make_pair(std::string("10"), ElectronicState::E10),
      std::make_pair(std::string("01"), ElectronicState::E01)};
  for (const auto& [tag, state] : states) {
    add("J" + tag + "zz", "GHz",
        [state](const PairSiteModel& m) { return m.tensors(state).J(2, 2); },
        [state](PairSiteModel& m, double v) { m.tensors(state).J(2, 2) = v; });
    const char* comps = "xyz";
    for (int c = 0; c < 3; ++c) {
      add(std::string("D") + tag + comps[c], "GHz",
          [state, c](const PairSiteModel& m) {
            return decompose_coupling(m.tensors(state).J).D[c];
          },
          [state, c](PairSiteModel& m, double v) {
            set_D_component(m.tensors(state).J, c, v);
          });
    }
    add("J" + tag + "scale", "",
        [](const PairSiteModel&) { return 1.0; },
        [state](PairSiteModel& m, double v) { m.tensors(state).J *= v; });
  }

  add("delta", "GHz", [](const PairSiteModel& m) { return m.delta; },
      [](PairSiteModel& m, double v) { m.delta = v; });
  add("nu10", "GHz", [](const PairSiteModel& m) { return m.nu10; },
      [](PairSiteModel& m, double v) { m.nu10 = v; });
  add("kappa", "GHz", [](const PairSiteModel& m) { return m.kappa; },
      [](PairSiteModel& m, double v) { m.kappa = v; });
  return reg;
}

std::vector<double> sorted_unique_fields(const std::vector<Peak>& peaks) {
  std::vector<double> fields;
  fields.reserve(peaks.size());
  for (const auto& p : peaks) fields.push_back(p.field_T);
  std::sort(fields.begin(), fields.end());
  fields.erase(std::unique(fields.begin(), fields.end()), fields.end());
  return fields;
}

struct LineTable {
  std::vector<double> fields;
  std::vector<std::vector<TransitionLine>> lines;  // per field

  const std::vector<TransitionLine>& at(double field) const {
    const auto it = std::lower_bound(fields.begin(), fields.end(), field);
    if (it == fields.end() || *it != field)
      throw NumericalError("fit: missing simulated field");
    return lines[static_cast<size_t>(it - fields.begin())];
  }
};

LineTable simulate_fields(const PairSiteModel& model, const Vector3& axis,
                          const std::vector<double>& fields) {
  LineTable table;
  table.fields = fields;
  table.lines.resize(fields.size());
  for (size_t i = 0; i < fields.size(); ++i)
    table.lines[i] = transition_lines(model, fields[i] * axis);
  return table;
}

PeakAssociation associate_from_table(const LineTable& table,
                                     const std::vector<Peak>& peaks,
                                     double threshold, double floor) {
  PeakAssociation assoc;
  assoc.line_index.resize(peaks.size(), -1);
  assoc.residual_GHz.resize(peaks.size(), 0.0);
  for (size_t p = 0; p < peaks.size(); ++p) {
    const auto& lines = table.at(peaks[p].field_T);
    int best = -1;
    double best_abs = threshold;
    double best_intensity = -1.0;
    for (size_t li = 0; li < lines.size(); ++li) {
      if (lines[li].intensity < floor) continue;
      const double d = std::abs(lines[li].frequency - peaks[p].frequency_GHz);
      if (d < best_abs - 1e-12 ||
          (d < best_abs + 1e-12 && lines[li].intensity > best_intensity)) {
        best = static_cast<int>(li);
        best_abs = d;
        best_intensity = lines[li].intensity;
      }
    }
    assoc.line_index[p] = best;
    if (best >= 0)
      assoc.residual_GHz[p] = lines[best].frequency - peaks[p].frequency_GHz;
    else
      ++assoc.unmatched;
  }
  return assoc;
}

}  // namespace

const std::vector<FitParameter>& fit_parameter_registry() {
  static const std::vector<FitParameter> reg = build_registry();
  return reg;
}

const FitParameter& fit_parameter(const std::string& name) {
  for (const auto& p : fit_parameter_registry())
    if (p.name == name) return p;
  throw ValidationError("unknown fit parameter: " + name);
}

PeakAssociation associate_peaks(const PairSiteModel& model, const Vector3& axis,
                                const std::vector<Peak>& peaks,
                                double threshold_GHz, double intensity_floor) {
  const LineTable table =
      simulate_fields(model, axis.normalized(), sorted_unique_fields(peaks));
  return associate_from_table(table, peaks, threshold_GHz, intensity_floor);
}

namespace {

class Objective {
 public:
  Objective(const FitSpec& spec, const std::vector<Peak>& peaks)
      : spec_(spec),
        peaks_(peaks),
        axis_(spec.axis.normalized()),
        fields_(sorted_unique_fields(peaks)) {
    for (const auto& name : spec.free_names) params_.push_back(&fit_parameter(name));
  }

  size_t dim() const { return params_.size(); }

  PairSiteModel model_for(const std::vector<double>& x) const {
    PairSiteModel m = spec_.initial;
    for (size_t i = 0; i < params_.size(); ++i) params_[i]->set(m, x[i]);
    return m;
  }

  double operator()(const std::vector<double>& x) const {
    ++evaluations_;
    const PairSiteModel m = model_for(x);
    const LineTable table = simulate_fields(m, axis_, fields_);
    // Nearest-line residuals without the rejection threshold: quadratic
    // within the threshold, linear (Huber tail) beyond it. The tail keeps a
    // pull toward the right basin for coarse starts while bounding the
    // influence of stray peaks.
    const PeakAssociation assoc =
        associate_from_table(table, peaks_, 1e300, spec_.line_intensity_floor);
    const double t = spec_.association_threshold_GHz;
    double f = 0.0;
    for (size_t p = 0; p < peaks_.size(); ++p) {
      const double r = std::abs(assoc.residual_GHz[p]);
      const double contrib = r <= t ? r * r : t * (2.0 * r - t);
      f += peaks_[p].weight * contrib;
    }
    return f;
  }

  int evaluations() const { return evaluations_; }

 private:
  const FitSpec& spec_;
  const std::vector<Peak>& peaks_;
  Vector3 axis_;
  std::vector<double> fields_;
  std::vector<const FitParameter*> params_;
  mutable int evaluations_ = 0;
};

struct SimplexOutcome {
  std::vector<double> x;
  double f = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Standard Nelder-Mead with box clipping; deterministic.
SimplexOutcome nelder_mead(const Objective& obj, std::vector<double> x0,
                           const std::vector<std::pair<double, double>>& box,
                           int max_iter, double rel_tol) {
  const size_t n = x0.size();
  auto clip = [&](std::vector<double>& x) {
    for (size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], box[i].first, box[i].second);
  };
  clip(x0);

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (size_t i = 0; i < n; ++i) {
    const double width = box[i].second - box[i].first;
    double step = std::max(0.05 * std::abs(x0[i]), 0.02 * width);
    if (step == 0.0) step = 1e-3;
    simplex[i + 1][i] += step;
    clip(simplex[i + 1]);
    if (simplex[i + 1][i] == x0[i]) simplex[i + 1][i] -= step;  // hit upper bound
    clip(simplex[i + 1]);
  }
  std::vector<double> fvals(n + 1);
  for (size_t i = 0; i <= n; ++i) fvals[i] = obj(simplex[i]);

  SimplexOutcome out;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    // Order the simplex.
    std::vector<size_t> order(n + 1);
    for (size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return fvals[a] < fvals[b]; });
    std::vector<std::vector<double>> sx(n + 1);
    std::vector<double> sf(n + 1);
    for (size_t i = 0; i <= n; ++i) {
      sx[i] = simplex[order[i]];
      sf[i] = fvals[order[i]];
    }
    simplex = std::move(sx);
    fvals = std::move(sf);

    const double spread = std::abs(fvals[n] - fvals[0]);
    if (spread <= rel_tol * std::max(1.0, std::abs(fvals[0]))) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

    auto affine = [&](double coeff) {
      std::vector<double> x(n);
      for (size_t j = 0; j < n; ++j)
        x[j] = centroid[j] + coeff * (centroid[j] - simplex[n][j]);
      clip(x);
      return x;
    };

    const std::vector<double> xr = affine(1.0);
    const double fr = obj(xr);
    if (fr < fvals[0]) {
      const std::vector<double> xe = affine(2.0);
      const double fe = obj(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fvals[n] = fe;
      } else {
        simplex[n] = xr;
        fvals[n] = fr;
      }
    } else if (fr < fvals[n - 1]) {
      simplex[n] = xr;
      fvals[n] = fr;
    } else {
      const bool outside = fr < fvals[n];
      const std::vector<double> xc = affine(outside ? 0.5 : -0.5);
      const double fc = obj(xc);
      if (fc < std::min(fr, fvals[n])) {
        simplex[n] = xc;
        fvals[n] = fc;
      } else {
        // Shrink toward the best vertex.
        for (size_t i = 1; i <= n; ++i) {
          for (size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          clip(simplex[i]);
          fvals[i] = obj(simplex[i]);
        }
      }
    }
  }
  out.iterations = iter;
  size_t best = 0;
  for (size_t i = 1; i <= n; ++i)
    if (fvals[i] < fvals[best]) best = i;
  out.x = simplex[best];
  out.f = fvals[best];
  return out;
}

}  // namespace

FitResult fit_model(const FitSpec& spec, const std::vector<Peak>& peaks) {
  if (spec.free_names.empty())
    throw ValidationError("fit_model: no free parameters");
  if (peaks.size() < spec.free_names.size())
    throw ValidationError("fit_model: fewer peaks than free parameters");
  for (const auto& p : peaks)
    if (!(p.weight > 0.0) || !std::isfinite(p.field_T) || !std::isfinite(p.frequency_GHz))
      throw ValidationError("fit_model: invalid peak");

  const Objective obj(spec, peaks);
  const size_t n = obj.dim();

  std::vector<double> x0(n);
  std::vector<std::pair<double, double>> box(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& par = fit_parameter(spec.free_names[i]);
    x0[i] = par.get(spec.initial);
    const auto it = spec.bounds.find(par.name);
    if (it != spec.bounds.end()) {
      box[i] = it->second;
    } else {
      const double half = std::max(0.25 * std::abs(x0[i]), 2.0);
      box[i] = {x0[i] - half, x0[i] + half};
    }
    if (x0[i] < box[i].first || x0[i] > box[i].second)
      throw ValidationError("fit_model: initial value of " + par.name +
                            " outside its bounds");
  }

  std::mt19937_64 rng(spec.seed);

  // Global stage: differential evolution within the bounds. Re-association
  // makes the objective piecewise with deep impostor basins (swapped line
  // identities), which plain multistart simplex does not escape from a
  // coarse start; the population search does, cheaply at this dimension.
  std::vector<std::vector<double>> population;
  std::vector<double> pop_f;
  const size_t pop_size = std::max<size_t>(8 * n, 32);
  population.push_back(x0);
  pop_f.push_back(obj(x0));
  for (size_t i = 1; i < pop_size; ++i) {
    std::vector<double> x(n);
    for (size_t d = 0; d < n; ++d) {
      std::uniform_real_distribution<double> u(box[d].first, box[d].second);
      x[d] = u(rng);
    }
    population.push_back(x);
    pop_f.push_back(obj(population.back()));
  }
  size_t best_member = 0;
  for (size_t i = 1; i < pop_size; ++i)
    if (pop_f[i] < pop_f[best_member]) best_member = i;

  const double de_weight = 0.7, de_cross = 0.9;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<size_t> pick(0, pop_size - 1);
  std::uniform_int_distribution<size_t> pick_dim(0, n - 1);
  int stale = 0;
  for (int gen = 0; gen < 400 && stale < 50; ++gen) {
    bool improved_best = false;
    for (size_t i = 0; i < pop_size; ++i) {
      size_t r1 = pick(rng), r2 = pick(rng);
      while (r1 == i) r1 = pick(rng);
      while (r2 == i || r2 == r1) r2 = pick(rng);
      const size_t jrand = pick_dim(rng);
      std::vector<double> trial = population[i];
      for (size_t d = 0; d < n; ++d) {
        if (d == jrand || unit(rng) < de_cross) {
          double v = population[best_member][d] +
                     de_weight * (population[r1][d] - population[r2][d]);
          trial[d] = std::clamp(v, box[d].first, box[d].second);
        }
      }
      const double ft = obj(trial);
      if (ft <= pop_f[i]) {
        population[i] = std::move(trial);
        pop_f[i] = ft;
        if (ft < pop_f[best_member]) {
          best_member = i;
          improved_best = true;
        }
      }
    }
    stale = improved_best ? 0 : stale + 1;
    if (pop_f[best_member] <= 1e-14) break;
  }

  // Local stage: simplex polish from the evolved best, the original guess
  // and seeded random restarts; keep the overall best.
  SimplexOutcome best;
  best.f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (int r = 0; r <= spec.restarts; ++r) {
    std::vector<double> start;
    if (r == 0)
      start = population[best_member];
    else if (r == 1)
      start = x0;
    else {
      start.resize(n);
      for (size_t d = 0; d < n; ++d) {
        std::uniform_real_distribution<double> u(box[d].first, box[d].second);
        start[d] = u(rng);
      }
    }
    const SimplexOutcome sol =
        nelder_mead(obj, start, box, spec.max_iterations, spec.relative_tolerance);
    iterations += sol.iterations;
    if (sol.f < best.f || (sol.f == best.f && !best.converged)) best = sol;
  }

  // The Ising line pattern is almost invariant under flipping the sign of a
  // coupling difference (J_m - J_0) or of a g-value difference; only fine
  // structure distinguishes those images, so the optimizer can settle in a
  // flipped basin. Enumerate the reflections of the current best through
  // each partner parameter and polish the promising ones.
  static const std::pair<const char*, const char*> kReflectionPairs[] = {
      {"J10zz", "J00zz"}, {"J01zz", "J00zz"}, {"g1z1", "g1z0"},
      {"g2z1", "g2z0"},   {"g1z", "g0z"}};
  std::vector<std::pair<size_t, size_t>> reflectables;
  for (const auto& [p, q] : kReflectionPairs) {
    const auto ip = std::find(spec.free_names.begin(), spec.free_names.end(), p);
    const auto iq = std::find(spec.free_names.begin(), spec.free_names.end(), q);
    if (ip != spec.free_names.end() && iq != spec.free_names.end())
      reflectables.emplace_back(ip - spec.free_names.begin(),
                                iq - spec.free_names.begin());
  }
  for (int round = 0; round < 3 && !reflectables.empty(); ++round) {
    std::vector<std::pair<double, std::vector<double>>> images;
    const size_t combos = size_t{1} << reflectables.size();
    for (size_t mask = 1; mask < combos; ++mask) {
      std::vector<double> img = best.x;
      for (size_t b = 0; b < reflectables.size(); ++b) {
        if (!(mask & (size_t{1} << b))) continue;
        const auto [ip, iq] = reflectables[b];
        img[ip] = std::clamp(2.0 * img[iq] - img[ip], box[ip].first, box[ip].second);
      }
      images.emplace_back(obj(img), std::move(img));
    }
    std::stable_sort(images.begin(), images.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    bool improved = false;
    const size_t polish = std::min<size_t>(3, images.size());
    for (size_t k = 0; k < polish; ++k) {
      const SimplexOutcome sol = nelder_mead(obj, images[k].second, box,
                                             spec.max_iterations,
                                             spec.relative_tolerance);
      iterations += sol.iterations;
      if (sol.f < best.f * (1.0 - 1e-12) - 1e-300) {
        best = sol;
        improved = true;
      }
    }
    if (!improved) break;
  }

  FitResult res;
  res.names = spec.free_names;
  res.values = best.x;
  res.objective = best.f;
  res.converged = best.converged;
  res.iterations = iterations;
  res.evaluations = obj.evaluations();
  res.model = obj.model_for(best.x);
  res.association = associate_peaks(res.model, spec.axis, peaks,
                                    spec.association_threshold_GHz,
                                    spec.line_intensity_floor);

  double wsum = 0.0, wr2 = 0.0;
  for (size_t p = 0; p < peaks.size(); ++p) {
    if (res.association.line_index[p] < 0) continue;
    wsum += peaks[p].weight;
    wr2 += peaks[p].weight * res.association.residual_GHz[p] *
           res.association.residual_GHz[p];
  }
  res.rms_GHz = wsum > 0.0 ? std::sqrt(wr2 / wsum) : 0.0;

  // Standard errors from central finite differences of the objective Hessian
  // at the optimum: Cov = 2 s^2 H^{-1} with s^2 the residual variance.
  const int n_matched = static_cast<int>(peaks.size()) - res.association.unmatched;
  const int dof = n_matched - static_cast<int>(n);
  res.std_errors.assign(n, 0.0);
  if (dof > 0) {
    const double s2 = best.f / dof;
    Eigen::MatrixXd Hess(n, n);
    std::vector<double> h(n);
    for (size_t i = 0; i < n; ++i)
      h[i] = 1e-4 * std::max({std::abs(best.x[i]), 1e-3});
    const double f0 = best.f;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i; j < n; ++j) {
        std::vector<double> xpp = best.x, xpm = best.x, xmp = best.x, xmm = best.x;
        xpp[i] += h[i]; xpp[j] += h[j];
        xpm[i] += h[i]; xpm[j] -= h[j];
        xmp[i] -= h[i]; xmp[j] += h[j];
        xmm[i] -= h[i]; xmm[j] -= h[j];
        double hij;
        if (i == j) {
          std::vector<double> xp = best.x, xm = best.x;
          xp[i] += h[i];
          xm[i] -= h[i];
          hij = (obj(xp) - 2.0 * f0 + obj(xm)) / (h[i] * h[i]);
        } else {
          hij = (obj(xpp) - obj(xpm) - obj(xmp) + obj(xmm)) / (4.0 * h[i] * h[j]);
        }
        Hess(i, j) = hij;
        Hess(j, i) = hij;
      }
    }
    const Eigen::MatrixXd cov =
        2.0 * s2 * Hess.completeOrthogonalDecomposition().pseudoInverse();
    for (size_t i = 0; i < n; ++i)
      res.std_errors[i] = cov(i, i) > 0.0 ? std::sqrt(cov(i, i)) : 0.0;
  }
  return res;
}

FitQualityReport fit_quality_report(const FitResult& result,
                                    const std::vector<Peak>& peaks) {
  FitQualityReport rep;
  rep.rms_GHz = result.rms_GHz;
  rep.n_peaks = static_cast<int>(peaks.size());
  rep.n_free = static_cast<int>(result.names.size());
  rep.unmatched = result.association.unmatched;
  rep.per_peak_residual = result.association.residual_GHz;

  double chi2 = 0.0;
  for (size_t p = 0; p < peaks.size(); ++p) {
    if (result.association.line_index[p] < 0) continue;
    chi2 += peaks[p].weight * result.association.residual_GHz[p] *
            result.association.residual_GHz[p];
  }
  rep.chi2 = chi2;
  const int dof = rep.n_peaks - rep.unmatched - rep.n_free;
  rep.reduced_chi2 = dof > 0 ? chi2 / dof : 0.0;

  // Histogram over matched residuals.
  double rmax = 0.0;
  for (size_t p = 0; p < peaks.size(); ++p)
    if (result.association.line_index[p] >= 0)
      rmax = std::max(rmax, std::abs(rep.per_peak_residual[p]));
  const int nbins = 11;
  if (rmax == 0.0) rmax = 1e-12;
  rep.histogram.assign(nbins, 0);
  for (int b = 0; b <= nbins; ++b)
    rep.bin_edges.push_back(-rmax + 2.0 * rmax * b / nbins);
  for (size_t p = 0; p < peaks.size(); ++p) {
    if (result.association.line_index[p] < 0) continue;
    int b = static_cast<int>((rep.per_peak_residual[p] + rmax) / (2.0 * rmax) * nbins);
    b = std::clamp(b, 0, nbins - 1);
    ++rep.histogram[b];
  }

  std::ostringstream os;
  os << "fit quality\n";
  os << "  peaks: " << rep.n_peaks << " (" << rep.unmatched << " unmatched)\n";
  os << "  rms residual: " << rep.rms_GHz << " GHz\n";
  os << "  chi2: " << rep.chi2 << "  reduced: " << rep.reduced_chi2 << "\n";
  os << "  parameters:\n";
  for (size_t i = 0; i < result.names.size(); ++i) {
    const auto& par = fit_parameter(result.names[i]);
    os << "    " << result.names[i] << " = " << result.values[i];
    if (result.std_errors[i] > 0.0) os << " +- " << result.std_errors[i];
    if (!par.unit.empty()) os << " " << par.unit;
    os << "  (free)\n";
  }
  for (const auto& par : fit_parameter_registry()) {
    if (std::find(result.names.begin(), result.names.end(), par.name) !=
        result.names.end())
      continue;
    // Echo the locked scalar knobs that exist on this model verbatim.
    if (par.name == "g0z" || par.name == "g1z") continue;  // aliases
    if (par.name.size() > 5 && par.name.substr(par.name.size() - 5) == "scale")
      continue;
    os << "    " << par.name << " = " << par.get(result.model);
    if (!par.unit.empty()) os << " " << par.unit;
    os << "  (locked)\n";
  }
  if (rep.unmatched > 0) {
    os << "  unmatched peaks:\n";
    for (size_t p = 0; p < peaks.size(); ++p)
      if (result.association.line_index[p] < 0)
        os << "    field " << peaks[p].field_T << " T, frequency "
           << peaks[p].frequency_GHz << " GHz\n";
  }
  rep.text = os.str();
  return rep;
}

}  // namespace spinpair
