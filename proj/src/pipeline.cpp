#include "wer/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wer/dynamics.hpp"
#include "wer/parallel.hpp"

namespace wer {

std::string to_string(SourceMode m) {
  switch (m) {
    case SourceMode::analytic: return "analytic";
    case SourceMode::synthetic_noiseless: return "synthetic-noiseless";
    case SourceMode::synthetic_shots: return "synthetic-shots";
  }
  return "unknown";
}

double median(std::vector<double> v) {
  require(!v.empty(), "median of an empty list");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

std::vector<TimedDensity> synthetic_record(const SystemParams& truth, const std::vector<double>& times,
                                           const PipelineOptions& opts, std::uint64_t seed, double* min_success) {
  const double f = opts.mapping.amplitude_damping();
  Mat2 k = Mat2::Zero();
  k(0, 0) = 1.0;
  k(1, 1) = f;

  std::vector<TimedDensity> out;
  double lowest = 1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Mat3 rho = master_solution(truth, SingleExcState::excited(), times[i]);
    // The photon amplitude keeps decaying while it is mapped out; the lost
    // weight ends in |gg>.
    const Mat2 block = rho.block<2, 2>(1, 1);
    const TwoQubitDensity two = embed_two_qubit(Mat2(k * block * k.adjoint()));

    TwoQubitDensity recon;
    if (opts.mode == SourceMode::synthetic_shots) {
      recon = reconstruct_density(measure_all(two, opts.shots, derive_seed(seed, i)));
    } else {
      recon = reconstruct_density(pauli_expectations(two));
    }
    const Postselected post = project_single_excitation(recon);
    lowest = std::min(lowest, post.success_probability);
    out.push_back({times[i], invert_mapping_correction(post.rho, opts.mapping)});
  }
  if (min_success != nullptr) *min_success = lowest;
  return out;
}

std::vector<PopulationSample> synthetic_populations(const SystemParams& truth, const std::vector<double>& times,
                                                    const PipelineOptions& opts, std::uint64_t seed) {
  std::vector<PopulationSample> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double pe = excited_population(truth, times[i]);
    if (opts.mode == SourceMode::synthetic_shots) {
      std::mt19937_64 rng(derive_seed(seed, 1000 + i));
      const double q = std::clamp(pe, 0.0, 1.0);
      pe = static_cast<double>(std::binomial_distribution<std::int64_t>(opts.shots, q)(rng)) /
           static_cast<double>(opts.shots);
    }
    out.push_back({times[i], pe});
  }
  return out;
}

PointResult extract_point(const SystemParams& truth, const PipelineOptions& opts, std::uint64_t seed) {
  require(opts.mode != SourceMode::analytic, "extract_point needs a synthetic mode");
  truth.validate();
  PointResult res;
  res.truth = truth;
  const auto times = default_time_grid(truth, opts.time_points);

  // The nominal setting seeds the calibration; its sign conventions (phase of
  // lambda, sign of delta) are known to the experimenter, the values are not.
  const SystemParams nominal{1.2 * truth.lambda, 1.2 * truth.delta, truth.kappa};
  res.calibration = calibrate_params(synthetic_populations(truth, times, opts, seed), nominal, truth.kappa);
  const double phase = std::abs(truth.lambda) > 0.0 ? std::arg(truth.lambda) : 0.0;
  SystemParams calibrated{std::polar(res.calibration.lambda_abs, phase), res.calibration.delta, truth.kappa};
  res.unreliable = small_coupling(res.calibration.lambda_abs, truth.kappa);

  const auto record = synthetic_record(truth, times, opts, derive_seed(seed, 7), &res.min_success_probability);

  FitOptions fo;
  fo.kappa = truth.kappa;
  EigenFitParams guess;
  try {
    const BiorthEigensystem ref = eigensystem(calibrated);
    fo.reference = ref;
    guess = analytic_fit_params(calibrated);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ep_proximity) throw;
    SystemParams nudged = calibrated;
    nudged.lambda *= 1.01;
    guess = analytic_fit_params(nudged);
  }
  res.fit = fit_eigensystem(record, guess, fo);
  res.fitted = to_eigensystem(res.fit.params, physical_offset(calibrated));

  try {
    const BiorthEigensystem exact = eigensystem(truth);
    const double keep = eigvec_fidelity(res.fitted.right[0], exact.right[0]) +
                        eigvec_fidelity(res.fitted.right[1], exact.right[1]);
    const double swap = eigvec_fidelity(res.fitted.right[0], exact.right[1]) +
                        eigvec_fidelity(res.fitted.right[1], exact.right[0]);
    for (int n = 0; n < 2; ++n) {
      const int m = swap > keep ? 1 - n : n;
      res.fidelity[n] = eigvec_fidelity(res.fitted.right[n], exact.right[m]);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ep_proximity) throw;
    res.fidelity = {std::nan(""), std::nan("")};
  }
  return res;
}

EigenSource FittedSet::source() const {
  return [points = points, results = results](const BVector& b) {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i] == b) return results[i].fitted;
    fail(ErrorKind::invalid_argument, "fitted source queried at a point that was not measured");
  };
}

WeightSource FittedSet::weights() const {
  return [points = points, results = results](const BVector& b) {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i] == b) {
        // Only the mode that carries most of |e,0> is trusted.
        const auto& w = results[i].fit.modal_weight;
        return w[0] >= w[1] ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
      }
    fail(ErrorKind::invalid_argument, "fitted weights queried at a point that was not measured");
  };
}

FittedSet fit_points(const std::vector<BVector>& points, const PipelineOptions& opts, std::uint64_t seed) {
  FittedSet set;
  set.points = points;
  set.results = parallel_map(points.size(), opts.workers, [&](std::size_t i) {
    return extract_point(params_from_b(points[i], opts.kappa), opts, derive_seed(seed, i));
  });
  return set;
}

namespace {

std::vector<BVector> one_cycle(const LoopSpec& spec) {
  LoopSpec one = spec;
  one.cycles = 1;
  auto pts = loop_points(one);
  pts.pop_back();
  return pts;
}

template <class Row>
void find_transition(const std::vector<Row>& rows, const std::vector<double>& values,
                     std::optional<Transition>& out, std::string& error) {
  std::vector<double> r, v;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k].error.empty()) continue;
    r.push_back(rows[k].radius);
    v.push_back(values[k]);
  }
  try {
    out = detect_transition(r, v);
  } catch (const Error& e) {
    error = e.what();
  }
}

}  // namespace

BerrySweep berry_sweep(const std::vector<double>& radii, int steps, int fitted_steps, const PipelineOptions& opts,
                       std::uint64_t seed) {
  BerrySweep sweep;
  const bool synthetic = opts.mode != SourceMode::analytic;
  std::vector<double> values;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    BerryRow row;
    row.radius = radii[k];
    try {
      const LoopSpec spec = centred_loop(opts.kappa, radii[k], synthetic ? fitted_steps : steps);
      row.points = one_cycle(spec);
      EigenSource source = analytic_source(opts.kappa);
      if (synthetic) {
        const FittedSet set = fit_points(row.points, opts, derive_seed(seed, k));
        std::vector<double> fids;
        for (const auto& r : set.results) fids.insert(fids.end(), r.fidelity.begin(), r.fidelity.end());
        row.min_fidelity = *std::min_element(fids.begin(), fids.end());
        row.median_fidelity = median(fids);
        source = set.source();
      }
      for (const auto& b : row.points) {
        try {
          row.systems.push_back(source(b));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::ep_proximity) throw;
          row.systems.push_back({});
        }
      }
      row.result = berry_phase(spec, source);
    } catch (const Error& e) {
      row.error = e.what();
    }
    values.push_back(row.result.beta[0] / pi);
    sweep.rows.push_back(std::move(row));
  }
  find_transition(sweep.rows, values, sweep.transition, sweep.transition_error);
  return sweep;
}

SphereSpec meridian_spec(double radius, const ChernGrid& grid, const PipelineOptions& opts) {
  SphereSpec s;
  s.radius = radius;
  s.n_theta = grid.meridian_points;
  s.n_phi = grid.n_phi;
  double lo = grid.theta_margin;
  if (opts.mode != SourceMode::analytic) {
    const double ratio = 0.06 * opts.kappa / radius;
    require(ratio < 1.0, "sphere radius too small for a synthetic meridian");
    lo = std::max({lo, 0.1, std::asin(ratio)});
  }
  s.theta_min = lo;
  s.theta_max = pi - lo;
  s.validate();
  return s;
}

ChernSweep chern_sweep(const std::vector<double>& radii, const ChernGrid& grid, const PipelineOptions& opts,
                       std::uint64_t seed) {
  ChernSweep sweep;
  std::vector<double> values;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    ChernRow row;
    row.radius = radii[k];
    try {
      const SphereSpec spec = meridian_spec(radii[k], grid, opts);
      EigenSource source = analytic_source(opts.kappa);
      WeightSource weights;
      if (opts.mode != SourceMode::analytic) {
        std::vector<BVector> pts;
        for (double theta : spec.theta_grid()) pts.push_back(sphere_point(radii[k], theta, 0.0));
        const FittedSet set = fit_points(pts, opts, derive_seed(seed, k));
        source = set.source();
        weights = set.weights();
        row.fits = set.results;
      }
      row.meridian = chern_meridian(spec, opts.kappa, source, weights);
      SphereSpec full = spec;
      full.n_theta = grid.n_theta;
      full.n_phi = grid.n_phi;
      row.integral = chern_integral(full, opts.kappa);
    } catch (const Error& e) {
      row.error = e.what();
    }
    values.push_back(row.meridian.chern[0]);
    sweep.rows.push_back(std::move(row));
  }
  find_transition(sweep.rows, values, sweep.transition, sweep.transition_error);
  return sweep;
}

}  // namespace wer
