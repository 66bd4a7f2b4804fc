#include "wer/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

namespace wer {

namespace {

Vec2 expm_apply(const SystemParams& p, const Vec2& psi, double t) {
  const Mat2 gen = -I * t * hamiltonian_matrix(p);
  return gen.exp() * psi;
}

}  // namespace

Vec2 nojump_amplitudes(const SystemParams& p, const SingleExcState& psi0, double t) {
  require(t >= 0.0 && std::isfinite(t), "propagation time must be non-negative");
  if (t == 0.0) return psi0.vec();
  try {
    const BiorthEigensystem es = eigensystem(p);
    Vec2 out = Vec2::Zero();
    for (int n = 0; n < 2; ++n) {
      const cplx coeff = (es.left[n] * psi0.vec())(0);
      out += std::exp(-I * es.energy[n] * t) * coeff * es.right[n];
    }
    return out;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ep_proximity) throw;
    return expm_apply(p, psi0.vec(), t);
  }
}

NoJumpResult propagate_nojump(const SystemParams& p, const SingleExcState& psi0, double t) {
  const Vec2 amp = nojump_amplitudes(p, psi0, t);
  const double norm2 = amp.squaredNorm();
  const double survival = norm2 / psi0.norm2();
  return {SingleExcState(amp / std::sqrt(norm2), true), survival};
}

Mat3 nh_hamiltonian3(const SystemParams& p) {
  Mat3 h = Mat3::Zero();
  h.block<2, 2>(1, 1) = hamiltonian_matrix(p);
  return h;
}

Mat3 lindblad_rhs(const Mat3& rho, const SystemParams& p) {
  const Mat3 h = nh_hamiltonian3(p);
  Mat3 out = -I * (h * rho - rho * h.adjoint());
  // a: |g,1> -> |g,0>, so a rho a^dag only moves the (g1, g1) entry.
  out(0, 0) += p.kappa * rho(2, 2);
  return out;
}

void check_density(const Mat3& rho, double tol) {
  if (!rho.allFinite()) fail(ErrorKind::invalid_argument, "density matrix has non-finite entries");
  if ((rho - rho.adjoint()).norm() > tol) fail(ErrorKind::invalid_argument, "density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) fail(ErrorKind::invalid_argument, "density matrix trace differs from 1");
  const Mat3 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat3> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) fail(ErrorKind::invalid_argument, "density matrix is not PSD");
}

Mat3 lindblad_step(const Mat3& rho, const SystemParams& p, double dt) {
  const Mat3 k1 = lindblad_rhs(rho, p);
  const Mat3 k2 = lindblad_rhs(rho + 0.5 * dt * k1, p);
  const Mat3 k3 = lindblad_rhs(rho + 0.5 * dt * k2, p);
  const Mat3 k4 = lindblad_rhs(rho + dt * k3, p);
  return rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Mat3 evolve_master(const Mat3& rho0, const SystemParams& p, double t, double dt) {
  p.validate();
  check_density(rho0);
  require(t >= 0.0 && dt > 0.0, "evolve_master: need t >= 0 and dt > 0");
  Mat3 rho = rho0;
  double now = 0.0;
  while (now < t) {
    const double h = std::min(dt, t - now);
    rho = lindblad_step(rho, p, h);
    now = (t - now <= dt) ? t : now + h;
  }
  return rho;
}

MasterRun evolve_master_checked(const Mat3& rho0, const SystemParams& p, double t, double dt,
                                double tolerance) {
  const Mat3 coarse = evolve_master(rho0, p, t, dt);
  const Mat3 fine = evolve_master(rho0, p, t, 0.5 * dt);
  const double err = (coarse - fine).cwiseAbs().maxCoeff();
  if (err > tolerance) {
    fail(ErrorKind::convergence_failure,
         "RK4 step-halving check failed: error estimate " + std::to_string(err));
  }
  return {fine, err};
}

Mat3 density_from_state(const SingleExcState& psi) {
  Vec3 v(0.0, psi.c_e0(), psi.c_g1());
  v /= v.norm();
  return v * v.adjoint();
}

Mat3 master_solution(const SystemParams& p, const SingleExcState& psi0, double t) {
  const NoJumpResult nj = propagate_nojump(p, psi0, t);
  Mat3 rho = nj.survival * density_from_state(nj.state);
  rho(0, 0) += 1.0 - nj.survival;
  return rho;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrajectoryRecord jump_trajectory(std::uint64_t seed, const SingleExcState& psi0, const SystemParams& p,
                                 double t, double dt) {
  p.validate();
  require(t >= 0.0 && dt > 0.0, "jump_trajectory: need t >= 0 and dt > 0");
  require(p.kappa * dt < 0.1, "jump_trajectory: kappa * dt must be below 0.1");

  std::mt19937_64 rng(seed);
  const double threshold = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const SingleExcState start = SingleExcState::normalized(psi0.vec());

  TrajectoryRecord rec;
  const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-12));
  bool jumped = false;
  double prev_time = 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double now = std::min(t, static_cast<double>(k) * dt);
    if (k > 0 && now <= prev_time) break;
    const NoJumpResult nj = propagate_nojump(p, start, now);

    if (!jumped && nj.survival < threshold) {
      // Survival is monotone: bisect for the crossing inside (prev_time, now].
      double lo = prev_time;
      double hi = now;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (propagate_nojump(p, start, mid).survival < threshold ? hi : lo) = mid;
      }
      rec.jump_times.push_back(0.5 * (lo + hi));
      jumped = true;
    }

    rec.times.push_back(now);
    rec.norm_history.push_back(nj.survival);
    rec.states.push_back(jumped ? Vec3(1.0, 0.0, 0.0) : Vec3(0.0, nj.state.c_e0(), nj.state.c_g1()));
    prev_time = now;
  }
  return rec;
}

}  // namespace wer
