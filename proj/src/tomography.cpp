#include "wer/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wer/dynamics.hpp"

namespace wer {

namespace {

Mat2 damping_kraus(const MappingDelays& d, bool inverse) {
  const double f = d.amplitude_damping();
  Mat2 k = Mat2::Zero();
  k(0, 0) = 1.0;
  k(1, 1) = inverse ? 1.0 / f : f;
  return k;
}

Mat2 kraus_apply(const Mat2& rho, const Mat2& k) {
  Mat2 out = k * rho * k.adjoint();
  const double tr = out.trace().real();
  if (!(tr > 0.0)) fail(ErrorKind::invalid_argument, "mapping produced a zero state");
  return out / tr;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

// +1 and -1 eigenvectors of the Pauli operator for an axis.
std::array<Eigen::Vector2cd, 2> axis_eigenvectors(Axis a) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (a) {
    case Axis::x: return {Eigen::Vector2cd(r, r), Eigen::Vector2cd(r, -r)};
    case Axis::y: return {Eigen::Vector2cd(r, I * r), Eigen::Vector2cd(r, -I * r)};
    case Axis::z: break;
  }
  return {Eigen::Vector2cd(1.0, 0.0), Eigen::Vector2cd(0.0, 1.0)};
}

int pauli_slot(int i, int j) { return 4 * i + j - 1; }

}  // namespace

void MappingDelays::validate() const {
  if (!(t1 >= 0.0) || !(t2 >= 0.0) || !std::isfinite(t1) || !std::isfinite(t2)) {
    fail(ErrorKind::invalid_argument, "mapping delays must be non-negative");
  }
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) fail(ErrorKind::invalid_argument, "kappa must be non-negative");
}

double MappingDelays::amplitude_damping() const {
  validate();
  return std::exp(-kappa * (0.5 * t1 + 0.25 * t2));
}

SingleExcState apply_mapping_channel(const SingleExcState& s, const MappingDelays& d) {
  const double f = d.amplitude_damping();
  return SingleExcState::normalized(s.c_e0(), f * s.c_g1());
}

SingleExcState invert_mapping_correction(const SingleExcState& s, const MappingDelays& d) {
  const double f = d.amplitude_damping();
  return SingleExcState::normalized(s.c_e0(), s.c_g1() / f);
}

Mat2 apply_mapping_channel(const Mat2& rho, const MappingDelays& d) {
  return kraus_apply(rho, damping_kraus(d, false));
}

Mat2 invert_mapping_correction(const Mat2& rho, const MappingDelays& d) {
  return kraus_apply(rho, damping_kraus(d, true));
}

void TwoQubitDensity::validate(double tol) const {
  if (!matrix.allFinite()) fail(ErrorKind::invalid_argument, "density matrix has non-finite entries");
  if ((matrix - matrix.adjoint()).norm() > tol) fail(ErrorKind::invalid_argument, "density matrix is not Hermitian");
  if (std::abs(matrix.trace() - 1.0) > tol) fail(ErrorKind::invalid_argument, "density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (matrix + matrix.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) fail(ErrorKind::invalid_argument, "density matrix is not PSD");
}

TwoQubitDensity embed_two_qubit(const SingleExcState& s) {
  Vec4 v = Vec4::Zero();
  v(index_eg) = s.c_e0();
  v(index_ge) = s.c_g1();
  v /= v.norm();
  return {v * v.adjoint()};
}

TwoQubitDensity embed_two_qubit(const Mat2& block) {
  const double tr = block.trace().real();
  require(tr >= -1e-12 && tr <= 1.0 + 1e-12, "embed_two_qubit: block trace must lie in [0, 1]");
  const int idx[2] = {index_eg, index_ge};
  Mat4 m = Mat4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(idx[i], idx[j]) = block(i, j);
  m(index_gg, index_gg) = std::max(0.0, 1.0 - tr);
  return {m};
}

Mat2 pauli(int i) {
  Mat2 s;
  switch (i) {
    case 0: s << 1.0, 0.0, 0.0, 1.0; break;
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    case 2: s << 0.0, -I, I, 0.0; break;
    case 3: s << 1.0, 0.0, 0.0, -1.0; break;
    default: fail(ErrorKind::invalid_argument, "pauli index must be 0..3");
  }
  return s;
}

PauliVector pauli_expectations(const TwoQubitDensity& rho) {
  PauliVector e{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == 0 && j == 0) continue;
      e[pauli_slot(i, j)] = (rho.matrix * kron(pauli(i), pauli(j))).trace().real();
    }
  }
  return e;
}

std::array<BasisSetting, 9> all_settings() {
  std::array<BasisSetting, 9> out;
  const Axis axes[3] = {Axis::x, Axis::y, Axis::z};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = {axes[i], axes[j]};
  return out;
}

std::array<double, 4> born_probabilities(const TwoQubitDensity& rho, BasisSetting s) {
  const auto a = axis_eigenvectors(s.first);
  const auto b = axis_eigenvectors(s.second);
  std::array<double, 4> p{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Vec4 v;
      v << a[i](0) * b[j], a[i](1) * b[j];
      p[2 * i + j] = std::max(0.0, (v.adjoint() * rho.matrix * v)(0).real());
    }
  }
  return p;
}

Counts sample_counts(const TwoQubitDensity& rho, BasisSetting s, std::int64_t shots, std::uint64_t seed) {
  require(shots >= 1, "sample_counts: shots must be positive");
  const auto p = born_probabilities(rho, s);
  std::mt19937_64 rng(seed);
  Counts c{};
  std::int64_t remaining = shots;
  double mass = p[0] + p[1] + p[2] + p[3];
  for (int k = 0; k < 3 && remaining > 0; ++k) {
    const double q = mass > 0.0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 0.0;
    c[k] = std::binomial_distribution<std::int64_t>(remaining, q)(rng);
    remaining -= c[k];
    mass -= p[k];
  }
  c[3] = remaining;
  return c;
}

std::vector<SettingCounts> measure_all(const TwoQubitDensity& rho, std::int64_t shots, std::uint64_t seed) {
  std::vector<SettingCounts> out;
  const auto settings = all_settings();
  for (std::size_t k = 0; k < settings.size(); ++k) {
    out.push_back({settings[k], sample_counts(rho, settings[k], shots, derive_seed(seed, k))});
  }
  return out;
}

PauliVector expectations_from_counts(const std::vector<SettingCounts>& data) {
  const SettingCounts* table[3][3] = {};
  for (const auto& d : data) {
    const int i = static_cast<int>(d.setting.first) - 1;
    const int j = static_cast<int>(d.setting.second) - 1;
    table[i][j] = &d;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (table[i][j] == nullptr) fail(ErrorKind::invalid_argument, "incomplete tomography basis set");

  PauliVector e{};
  double first[3] = {0.0, 0.0, 0.0};
  double second[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Counts& c = table[i][j]->counts;
      const double n = static_cast<double>(c[0] + c[1] + c[2] + c[3]);
      if (!(n > 0.0)) fail(ErrorKind::invalid_argument, "tomography setting has no shots");
      e[pauli_slot(i + 1, j + 1)] = static_cast<double>(c[0] - c[1] - c[2] + c[3]) / n;
      first[i] += static_cast<double>(c[0] + c[1] - c[2] - c[3]) / n / 3.0;
      second[j] += static_cast<double>(c[0] - c[1] + c[2] - c[3]) / n / 3.0;
    }
  }
  for (int k = 0; k < 3; ++k) {
    e[pauli_slot(k + 1, 0)] = first[k];
    e[pauli_slot(0, k + 1)] = second[k];
  }
  return e;
}

Mat4 linear_inversion(const PauliVector& e) {
  Mat4 m = kron(pauli(0), pauli(0));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == 0 && j == 0) continue;
      m += e[pauli_slot(i, j)] * kron(pauli(i), pauli(j));
    }
  }
  return m / 4.0;
}

TwoQubitDensity project_physical(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (m + m.adjoint()));
  Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0);
  const double total = w.sum();
  if (!(total > 0.0)) fail(ErrorKind::invalid_argument, "reconstruction has no positive weight");
  w /= total;
  const Mat4 v = es.eigenvectors();
  return {v * w.cast<cplx>().asDiagonal() * v.adjoint()};
}

TwoQubitDensity reconstruct_density(const PauliVector& e) { return project_physical(linear_inversion(e)); }

TwoQubitDensity reconstruct_density(const std::vector<SettingCounts>& data) {
  return reconstruct_density(expectations_from_counts(data));
}

Postselected project_single_excitation(const TwoQubitDensity& rho) {
  const int idx[2] = {index_eg, index_ge};
  Mat2 block;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) block(i, j) = rho.matrix(idx[i], idx[j]);
  const double p = block.trace().real();
  if (!(p > 1e-6)) fail(ErrorKind::postselection_failure, "single-excitation block is empty");
  return {block / p, p};
}

double trace_distance(const Mat4& a, const Mat4& b) {
  const Mat4 d = a - b;
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double state_fidelity(const Mat4& rho, const Vec4& psi) { return (psi.adjoint() * rho * psi)(0).real(); }

}  // namespace wer
