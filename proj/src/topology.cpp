#include "wer/topology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wer/optimize.hpp"

namespace wer {

namespace {

constexpr double min_overlap = 0.7071067811865476;

BiorthEigensystem permuted(const BiorthEigensystem& es, bool swap) {
  if (!swap) return es;
  BiorthEigensystem out;
  out.energy = {es.energy[1], es.energy[0]};
  out.right = {es.right[1], es.right[0]};
  out.left = {es.left[1], es.left[0]};
  return out;
}

double overlap(const Vec2& a, const Vec2& b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

// true when the labels of `next` must be swapped to follow `prev`.
bool follow(const BiorthEigensystem& prev, const BiorthEigensystem& next, std::size_t index) {
  const double o00 = overlap(prev.right[0], next.right[0]);
  const double o11 = overlap(prev.right[1], next.right[1]);
  const double o01 = overlap(prev.right[0], next.right[1]);
  const double o10 = overlap(prev.right[1], next.right[0]);
  const bool swap = o01 + o10 > o00 + o11;
  const double worst = swap ? std::min(o01, o10) : std::min(o00, o11);
  if (worst < min_overlap) {
    std::ostringstream os;
    os << "mode tracking lost continuity at point " << index << " (overlap " << worst << "); refine the path";
    fail(ErrorKind::tracking_ambiguity, os.str());
  }
  return swap;
}

double plaquette_phase(const Vec2& u1, const Vec2& u2, const Vec2& u3, const Vec2& u4) {
  return std::arg(u1.dot(u2) * u2.dot(u3) * u3.dot(u4) * u4.dot(u1));
}

}  // namespace

EigenSource analytic_source(double kappa) {
  return [kappa](const BVector& b) { return eigensystem(params_from_b(b, kappa)); };
}

void LoopSpec::validate() const {
  if (!std::isfinite(center_bx) || !std::isfinite(center_bz) || !std::isfinite(radius)) {
    fail(ErrorKind::invalid_argument, "loop parameters must be finite");
  }
  if (!(radius >= 0.0)) fail(ErrorKind::invalid_argument, "loop radius must be non-negative");
  if (steps < 16) fail(ErrorKind::invalid_argument, "loop needs at least 16 steps per cycle");
  if (cycles != 1 && cycles != 2) fail(ErrorKind::invalid_argument, "loop cycles must be 1 or 2");
}

LoopSpec centred_loop(double kappa, double radius, int steps, int cycles) {
  LoopSpec s{0.5 * kappa, 0.0, radius, steps, cycles};
  s.validate();
  return s;
}

std::vector<BVector> loop_points(const LoopSpec& spec) {
  spec.validate();
  std::vector<BVector> pts;
  pts.reserve(static_cast<std::size_t>(spec.steps * spec.cycles + 1));
  for (int p = 0; p < spec.steps; ++p) {
    const double phi = two_pi * p / spec.steps;
    pts.push_back({spec.center_bx + spec.radius * std::cos(phi), 0.0, spec.center_bz + spec.radius * std::sin(phi)});
  }
  const std::size_t one = pts.size();
  for (int c = 1; c < spec.cycles; ++c)
    for (std::size_t p = 0; p < one; ++p) pts.push_back(pts[p]);
  pts.push_back(pts.front());
  return pts;
}

bool encircles_ring(const LoopSpec& spec, double kappa) {
  const double r = wer_geometry(kappa).radius;
  const double to_plus = std::hypot(spec.center_bx - r, spec.center_bz);
  const double to_minus = std::hypot(spec.center_bx + r, spec.center_bz);
  return (to_plus < spec.radius) != (to_minus < spec.radius);
}

ModeTrack track_modes(const std::vector<BVector>& points, const EigenSource& source, int steps_per_cycle) {
  require(points.size() >= 2, "track_modes: need at least two points");
  require(steps_per_cycle >= 1, "track_modes: steps_per_cycle must be positive");
  ModeTrack track;
  track.steps_per_cycle = steps_per_cycle;

  BiorthEigensystem first;
  bool have_prev = false;
  for (std::size_t p = 0; p < points.size(); ++p) {
    BiorthEigensystem es;
    try {
      es = source(points[p]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ep_proximity) throw;
      if (p == 0 || p + 1 == points.size()) throw;
      track.skipped.push_back(static_cast<int>(p));
      continue;
    }
    if (!have_prev) {
      first = es;
      have_prev = true;
    } else {
      es = permuted(es, follow(track.systems.back(), es, p));
    }
    if (p == static_cast<std::size_t>(steps_per_cycle)) {
      // Same parameter point as p = 0: compare against its own labels.
      track.swapped_after_cycle = overlap(es.right[0], first.right[1]) > overlap(es.right[0], first.right[0]);
    }
    track.points.push_back(points[p]);
    track.systems.push_back(es);
  }
  return track;
}

ModeTrack track_modes(const std::vector<BVector>& points, double kappa, int steps_per_cycle) {
  return track_modes(points, analytic_source(kappa), steps_per_cycle);
}

ModeTrack gauge_fix(const ModeTrack& track) {
  ModeTrack out = track;
  for (std::size_t p = 0; p + 1 < out.systems.size(); ++p) {
    for (int n = 0; n < 2; ++n) {
      BiorthEigensystem& next = out.systems[p + 1];
      const cplx ov = (next.left[n] * out.systems[p].right[n])(0);
      if (!(std::abs(ov) > 1e-300)) fail(ErrorKind::tracking_ambiguity, "vanishing left-right overlap in gauge fixing");
      const cplx phase = std::exp(I * std::arg(ov));
      next.right[n] *= phase;
      next.left[n] /= phase;
    }
  }
  return out;
}

double wrap_berry(double beta) { return beta - two_pi * std::ceil((beta - 0.5 * pi) / two_pi); }

BerryResult berry_phase(const ModeTrack& fixed, BerrySum sum) {
  require(fixed.systems.size() >= 2, "berry_phase: track too short");
  BerryResult res;
  res.swapped = fixed.swapped_after_cycle;
  res.skipped = static_cast<int>(fixed.skipped.size());
  const auto& sys = fixed.systems;
  const std::size_t last = sys.size() - 1;
  res.cycles = static_cast<int>((last + fixed.skipped.size()) / static_cast<std::size_t>(fixed.steps_per_cycle));
  for (int n = 0; n < 2; ++n) {
    cplx total = 0.0;
    for (std::size_t p = 0; p < last; ++p) {
      if (sum == BerrySum::link_log) {
        total += I * std::log((sys[p].left[n] * sys[p + 1].right[n])(0));
      } else {
        total += I * (sys[p].left[n] * (sys[p + 1].right[n] - sys[p].right[n]))(0);
      }
    }
    total += std::arg((sys[0].left[n] * sys[last].right[n])(0));
    res.beta[n] = wrap_berry(total.real());
    res.beta_imag[n] = total.imag();
  }
  return res;
}

BerryResult berry_phase(const LoopSpec& spec, const EigenSource& source, BerrySum sum) {
  LoopSpec one = spec;
  one.cycles = 1;
  ModeTrack track = track_modes(loop_points(one), source, one.steps);
  if (track.swapped_after_cycle) {
    LoopSpec two = spec;
    two.cycles = 2;
    track = track_modes(loop_points(two), source, two.steps);
    track.swapped_after_cycle = true;
  }
  return berry_phase(gauge_fix(track), sum);
}

void SphereSpec::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::invalid_argument, "sphere radius must be positive");
  if (!(theta_min > 0.0 && theta_max < pi && theta_min < theta_max)) {
    fail(ErrorKind::invalid_argument, "theta range must satisfy 0 < theta_min < theta_max < pi");
  }
  if (n_theta < 2 || n_phi < 3) fail(ErrorKind::invalid_argument, "sphere grid too small");
}

std::vector<double> SphereSpec::theta_grid() const {
  validate();
  std::vector<double> t(static_cast<std::size_t>(n_theta));
  for (int i = 0; i < n_theta; ++i) t[static_cast<std::size_t>(i)] = theta_min + (theta_max - theta_min) * i / (n_theta - 1);
  return t;
}

std::vector<double> SphereSpec::phi_grid() const {
  validate();
  std::vector<double> f(static_cast<std::size_t>(n_phi));
  for (int j = 0; j < n_phi; ++j) f[static_cast<std::size_t>(j)] = two_pi * j / n_phi;
  return f;
}

BVector sphere_point(double radius, double theta, double phi) {
  const double s = std::sin(theta);
  return {radius * s * std::cos(phi), radius * s * std::sin(phi), radius * std::cos(theta)};
}

BiorthEigensystem sphere_eigensystem(double radius, double kappa, double theta, double phi) {
  const BiorthEigensystem es = eigensystem(params_from_b(sphere_point(radius, theta, phi), kappa));
  const bool below_ring = radius < 0.25 * kappa;
  return permuted(es, below_ring && std::cos(theta) < 0.0);
}

Vec2 sphere_gauge_vector(double radius, double kappa, double theta, double phi, int n) {
  Vec2 u = sphere_eigensystem(radius, kappa, theta, phi).right[n];
  if (std::abs(u(1)) > 0.0) u *= std::exp(-I * std::arg(u(1)));
  return u;
}

Connection berry_connection_sphere(double radius, double kappa, double theta, double phi, double step) {
  if (theta < 1e-3 || theta > pi - 1e-3) fail(ErrorKind::pole_proximity, "connection requested at a pole");
  require(step > 0.0 && step < 1e-2, "connection step must lie in (0, 1e-2)");
  Connection c;
  for (int n = 0; n < 2; ++n) {
    const Vec2 u = sphere_gauge_vector(radius, kappa, theta, phi, n);
    const Vec2 dt = (sphere_gauge_vector(radius, kappa, theta + step, phi, n) -
                     sphere_gauge_vector(radius, kappa, theta - step, phi, n)) / (2.0 * step);
    const Vec2 dp = (sphere_gauge_vector(radius, kappa, theta, phi + step, n) -
                     sphere_gauge_vector(radius, kappa, theta, phi - step, n)) / (2.0 * step);
    c.a_theta[n] = (I * u.dot(dt)).real();
    c.a_phi[n] = (I * u.dot(dp)).real();
  }
  return c;
}

std::array<double, 2> model_populations(double radius, double kappa, double theta) {
  try {
    const BiorthEigensystem es = sphere_eigensystem(radius, kappa, theta, 0.0);
    return {std::norm(es.right[0](0)), std::norm(es.right[1](0))};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ep_proximity) throw;
    const Vec2 u = coalesced_eigenvector(params_from_b(sphere_point(radius, theta, 0.0), kappa));
    return {std::norm(u(0)), std::norm(u(0))};
  }
}

MeridianCurve meridian_populations(const SphereSpec& spec, const EigenSource& source, const WeightSource& weights) {
  MeridianCurve curve;
  BiorthEigensystem prev;
  bool have = false;
  for (double theta : spec.theta_grid()) {
    const BVector b = sphere_point(spec.radius, theta, 0.0);
    BiorthEigensystem es = source(b);
    std::array<double, 2> w = weights ? weights(b) : std::array<double, 2>{1.0, 1.0};
    if (have) {
      const double keep = std::abs(es.energy[0] - prev.energy[0]) + std::abs(es.energy[1] - prev.energy[1]);
      const double swap = std::abs(es.energy[1] - prev.energy[0]) + std::abs(es.energy[0] - prev.energy[1]);
      es = permuted(es, swap < keep);
      if (swap < keep) std::swap(w[0], w[1]);
    }
    require(w[0] >= 0.0 && w[1] >= 0.0, "meridian weights must be non-negative");
    curve.weight.push_back(w);
    prev = es;
    have = true;
    curve.theta.push_back(theta);
    curve.population.push_back({es.right[0].squaredNorm() > 0.0 ? std::norm(es.right[0](0)) / es.right[0].squaredNorm() : 0.0,
                                es.right[1].squaredNorm() > 0.0 ? std::norm(es.right[1](0)) / es.right[1].squaredNorm() : 0.0});
  }
  return curve;
}

ChernResult chern_meridian(const SphereSpec& spec, double kappa, const EigenSource& source,
                           const WeightSource& weights) {
  spec.validate();
  ChernResult res;
  res.curve = meridian_populations(spec, source, weights);
  const auto& th = res.curve.theta;
  const auto& pop = res.curve.population;
  const auto& w = res.curve.weight;
  double total = 0.0;
  for (const auto& wi : w) total += wi[0] + wi[1];
  require(total > 0.0, "meridian weights are all zero");

  auto cost = [&](double r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) {
      const auto m = model_populations(r, kappa, th[i]);
      const double keep = w[i][0] * std::pow(pop[i][0] - m[0], 2) + w[i][1] * std::pow(pop[i][1] - m[1], 2);
      const double swap = w[i][0] * std::pow(pop[i][0] - m[1], 2) + w[i][1] * std::pow(pop[i][1] - m[0], 2);
      acc += std::min(keep, swap);
    }
    return acc / total;
  };
  res.fitted_radius = scan_minimize(cost, 0.25 * spec.radius, 4.0 * spec.radius, 96, 1e-10 * spec.radius);
  res.rms = std::sqrt(cost(res.fitted_radius));
  if (res.rms > 0.1) {
    std::ostringstream os;
    os << "meridian population fit residual " << res.rms << " exceeds 0.1";
    fail(ErrorKind::fit_quality, os.str());
  }
  const auto north = model_populations(res.fitted_radius, kappa, 0.0);
  const auto south = model_populations(res.fitted_radius, kappa, pi);
  for (int n = 0; n < 2; ++n) {
    res.chern[n] = south[n] - north[n];
    res.quantized[n] = static_cast<int>(std::lround(res.chern[n]));
  }
  return res;
}

ChernResult chern_integral(const SphereSpec& spec, double kappa) {
  spec.validate();
  const int nt = spec.n_theta;
  const int np = spec.n_phi;
  // u[i][j][n] on theta_i = pi i / nt (poles included), phi_j = 2 pi j / np.
  std::vector<std::vector<std::array<Vec2, 2>>> u(static_cast<std::size_t>(nt + 1),
                                                  std::vector<std::array<Vec2, 2>>(static_cast<std::size_t>(np)));
  for (int i = 0; i <= nt; ++i) {
    const double theta = pi * i / nt;
    for (int j = 0; j < np; ++j) {
      const BiorthEigensystem es = sphere_eigensystem(spec.radius, kappa, theta, two_pi * j / np);
      u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = {es.right[0], es.right[1]};
    }
  }
  ChernResult res;
  for (int n = 0; n < 2; ++n) {
    double total = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(nt); ++i) {
      for (std::size_t j = 0; j < static_cast<std::size_t>(np); ++j) {
        const std::size_t jn = (j + 1) % static_cast<std::size_t>(np);
        const double ph = plaquette_phase(u[i][j][n], u[i][jn][n], u[i + 1][jn][n], u[i + 1][j][n]);
        res.max_plaquette_phase = std::max(res.max_plaquette_phase, std::abs(ph));
        total += ph;
      }
    }
    res.chern[n] = total / two_pi;
    res.quantized[n] = static_cast<int>(std::lround(res.chern[n]));
  }
  if (res.max_plaquette_phase > 0.5 * pi) {
    std::ostringstream os;
    os << "plaquette phase " << res.max_plaquette_phase << " exceeds pi/2; refine the grid";
    fail(ErrorKind::refine_grid, os.str());
  }
  return res;
}

Transition detect_transition(const std::vector<double>& radii, const std::vector<double>& values) {
  require(radii.size() == values.size(), "detect_transition: size mismatch");
  for (std::size_t k = 1; k < radii.size(); ++k) {
    require(radii[k] > radii[k - 1], "detect_transition: radii must increase");
    if (std::abs(values[k] - values[k - 1]) >= 0.5) {
      return {0.5 * (radii[k] + radii[k - 1]), radii[k] - radii[k - 1], k - 1};
    }
  }
  fail(ErrorKind::no_transition, "invariant does not change across the sweep");
}

}  // namespace wer
