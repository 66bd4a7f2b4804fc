#include "wer/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <limits>
#include <sstream>

#include "wer/dynamics.hpp"

namespace wer {

namespace {

double wrap_phase(double x) {
  double y = std::remainder(x, two_pi);
  if (y <= -pi) y += two_pi;
  return y;
}

// Internal coordinates: (a1, b1, x1, d1, x2, d2) with c_n = |sin x_n|.
std::vector<double> pack(const EigenFitParams& f) {
  return {f.a[0], f.b[0], std::asin(std::clamp(f.c[0], 0.0, 1.0)), f.d[0],
          std::asin(std::clamp(f.c[1], 0.0, 1.0)), f.d[1]};
}

EigenFitParams unpack(std::span<const double> x) {
  EigenFitParams f;
  f.a = {x[0], -x[0]};
  f.b = {x[1], -x[1]};
  f.c = {std::abs(std::sin(x[2])), std::abs(std::sin(x[4]))};
  f.d = {wrap_phase(x[3]), wrap_phase(x[5])};
  return f;
}

std::array<double, 2> mode_fit_params(const Vec2& u) {
  const Vec2 v = u.normalized();
  const double c = std::abs(v(0));
  // Phase of |e,0> relative to the real, non-negative |g,1> component.
  if (c == 0.0) return {0.0, 0.0};
  const double ref = std::abs(v(1)) > 0.0 ? std::arg(v(1)) : 0.0;
  return {c, wrap_phase(std::arg(v(0)) - ref)};
}

}  // namespace

Vec2 EigenFitParams::vector(int n) const {
  const double cn = std::clamp(c[n], 0.0, 1.0);
  return {cn * std::exp(I * d[n]), std::sqrt(1.0 - cn * cn)};
}

EigenFitParams EigenFitParams::swapped() const {
  EigenFitParams s;
  s.a = {a[1], a[0]};
  s.b = {b[1], b[0]};
  s.c = {c[1], c[0]};
  s.d = {d[1], d[0]};
  return s;
}

cplx physical_offset(const SystemParams& p) { return cplx(2.0 * p.delta, -p.kappa) / 4.0; }

EigenFitParams analytic_fit_params(const SystemParams& p) {
  const BiorthEigensystem es = eigensystem(p);
  const cplx off = physical_offset(p);
  EigenFitParams f;
  for (int n = 0; n < 2; ++n) {
    const cplx e = es.energy[n] - off;
    f.a[n] = e.real();
    f.b[n] = e.imag();
    const auto cd = mode_fit_params(es.right[n]);
    f.c[n] = cd[0];
    f.d[n] = cd[1];
  }
  return f;
}

BiorthEigensystem to_eigensystem(const EigenFitParams& f, cplx offset) {
  const Vec2 u1 = f.vector(0);
  const Vec2 u2 = f.vector(1);
  if (std::abs(u1.dot(u2)) > 1.0 - 1e-8) fail(ErrorKind::degenerate_basis, "fitted eigenvectors are parallel");
  return BiorthEigensystem::from_right({f.energy(0) + offset, f.energy(1) + offset}, {u1, u2});
}

double eigvec_fidelity(const Vec2& a, const Vec2& b) {
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  require(na > 0.0 && nb > 0.0, "eigvec_fidelity: zero vector");
  return std::min(1.0, std::norm(a.dot(b)) / (na * nb));
}

namespace {

// Expansion of |e,0> in the fitted basis, evaluated at many times.
struct Expansion {
  std::array<Vec2, 2> u;
  std::array<cplx, 2> coeff;
  std::array<cplx, 2> energy;

  explicit Expansion(const EigenFitParams& f) : u{f.vector(0), f.vector(1)}, energy{f.energy(0), f.energy(1)} {
    if (std::abs(u[0].dot(u[1])) > 1.0 - 1e-8) fail(ErrorKind::degenerate_basis, "fitted eigenvectors are parallel");
    Mat2 basis;
    basis << u[0], u[1];
    const Vec2 c = basis.partialPivLu().solve(Vec2(1.0, 0.0));
    coeff = {c(0), c(1)};
  }

  [[nodiscard]] Vec2 at(double t) const {
    const Vec2 psi = coeff[0] * std::exp(-I * energy[0] * t) * u[0] + coeff[1] * std::exp(-I * energy[1] * t) * u[1];
    const double n = psi.norm();
    if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::degenerate_basis, "predicted state vanished");
    return psi / n;
  }
};

}  // namespace

std::array<double, 2> modal_weights(const EigenFitParams& f) {
  const Expansion e(f);
  const double w0 = std::norm(e.coeff[0]);
  const double w1 = std::norm(e.coeff[1]);
  return {w0 / (w0 + w1), w1 / (w0 + w1)};
}

SingleExcState predict_trajectory(const EigenFitParams& f, double t) {
  return SingleExcState(Expansion(f).at(t), true);
}

double fit_objective(const EigenFitParams& f, const std::vector<TimedDensity>& data) {
  const Expansion model(f);
  double acc = 0.0;
  for (const auto& s : data) {
    const Vec2 psi = model.at(s.t);
    acc += (psi.adjoint() * s.rho * psi)(0).real();
  }
  return 1.0 - acc / static_cast<double>(data.size());
}

FitReport fit_eigensystem(const std::vector<TimedDensity>& data, const EigenFitParams& guess,
                          const FitOptions& opts) {
  require(data.size() >= 12, "fit_eigensystem: need at least 12 time points");
  require(opts.restarts >= 1, "fit_eigensystem: need at least one restart");
  for (const auto& s : data) {
    if (std::abs(s.rho.trace() - 1.0) > 1e-6) fail(ErrorKind::invalid_argument, "fit_eigensystem: densities must have unit trace");
  }

  auto objective = [&](std::span<const double> x) {
    try {
      return fit_objective(unpack(x), data);
    } catch (const Error&) {
      return 2.0;
    }
  };

  const std::vector<double> base = pack(guess);
  const double escale = std::max({std::abs(guess.a[0]), std::abs(guess.b[0]), 0.05 * opts.kappa});
  const std::vector<double> step{0.1 * escale, 0.1 * escale, 0.1, 0.2, 0.1, 0.2};

  FitReport best;
  bool have = false;
  int any_converged = 0;
  for (int k = 0; k < opts.restarts; ++k) {
    std::vector<double> x0;
    if (k == 0) {
      x0 = base;
    } else if (k == 1) {
      x0 = pack(guess.swapped());
    } else {
      std::mt19937_64 rng(derive_seed(0x5eed, static_cast<std::uint64_t>(k)));
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      x0 = base;
      x0[0] *= 1.0 + 0.3 * u(rng);
      x0[1] *= 1.0 + 0.3 * u(rng);
      x0[2] += 0.2 * u(rng);
      x0[3] += 0.5 * u(rng);
      x0[4] += 0.2 * u(rng);
      x0[5] += 0.5 * u(rng);
    }
    const SimplexResult r = nelder_mead(objective, x0, step, opts.simplex);
    any_converged += r.converged ? 1 : 0;
    if (!have || r.value < best.residual) {
      best.params = unpack(r.x);
      best.residual = r.value;
      best.iterations = r.iterations;
      best.converged = r.converged;
      best.restart = k;
      have = true;
    }
  }
  if (any_converged == 0) {
    std::ostringstream os;
    os << "eigensystem fit did not converge; best residual " << best.residual;
    fail(ErrorKind::convergence_failure, os.str());
  }

  EigenFitParams& f = best.params;
  if (opts.reference) {
    const auto& ref = *opts.reference;
    const double keep = eigvec_fidelity(f.vector(0), ref.right[0]) + eigvec_fidelity(f.vector(1), ref.right[1]);
    const double swap = eigvec_fidelity(f.vector(0), ref.right[1]) + eigvec_fidelity(f.vector(1), ref.right[0]);
    if (swap > keep) f = f.swapped();
  } else if (f.a[0] < 0.0 || (f.a[0] == 0.0 && f.b[0] < 0.0)) {
    f = f.swapped();
  }

  for (const auto& s : data) {
    const Vec2 psi = predict_trajectory(f, s.t).vec();
    best.fidelities.push_back((psi.adjoint() * s.rho * psi)(0).real());
  }
  best.low_confidence = std::abs(f.energy(0) - f.energy(1)) < 0.05 * opts.kappa;
  best.modal_weight = modal_weights(f);
  return best;
}

double excited_population(const SystemParams& p, double t) {
  return std::norm(nojump_amplitudes(p, SingleExcState::excited(), t)(0));
}

Calibration calibrate_params(const std::vector<PopulationSample>& observed, const SystemParams& guess,
                             double kappa) {
  require(observed.size() >= 8, "calibrate_params: need at least 8 samples");
  require(kappa >= 0.0, "calibrate_params: kappa must be non-negative");
  auto f = [&](std::span<const double> x) {
    const SystemParams p{std::abs(x[0]), x[1], kappa};
    double acc = 0.0;
    for (const auto& s : observed) {
      const double r = s.pe - excited_population(p, s.t);
      acc += r * r;
    }
    return acc / static_cast<double>(observed.size());
  };
  const double l0 = std::abs(guess.lambda);
  const double scale = std::max(0.05 * kappa, 0.1 * std::max(l0, std::abs(guess.delta)));
  SimplexOptions opts;
  opts.size_tolerance = 1e-10;
  opts.polish_restarts = 4;
  const SimplexResult r = nelder_mead(f, {l0, guess.delta}, {scale, scale}, opts);
  if (!r.converged) {
    std::ostringstream os;
    os << "calibration did not converge; best (|lambda|, delta) = (" << std::abs(r.x[0]) << ", " << r.x[1]
       << "), residual " << r.value;
    fail(ErrorKind::convergence_failure, os.str());
  }
  return {std::abs(r.x[0]), r.x[1], r.value, r.iterations, r.converged};
}

std::vector<double> default_time_grid(const SystemParams& p, int n) {
  require(n >= 1, "default_time_grid: need at least one point");
  p.validate();
  const double gap = 2.0 * std::abs(std::sqrt(discriminant(p)).real());
  double span = p.kappa > 0.0 ? 4.0 / p.kappa : std::numeric_limits<double>::infinity();
  if (gap > 0.0) span = std::min(span, two_pi / gap);
  if (!std::isfinite(span)) fail(ErrorKind::invalid_argument, "default_time_grid: no time scale (kappa = 0 and no gap)");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = span * (i + 1) / n;
  return t;
}

bool small_coupling(double lambda_abs, double kappa) { return lambda_abs < 0.05 * kappa; }

}  // namespace wer
