#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wer/nh_core.hpp"

namespace wer {

/// Damping picked up by the resonator amplitude while the Q-R state is
/// mapped onto the two readout qubits.
struct MappingDelays {
  double t1 = 0.0;    ///< Q -> R_b -> Q_a mapping, us
  double t2 = 0.118;  ///< R -> Q transfer, us
  double kappa = 5.0;

  void validate() const;
  /// Amplitude factor on the photon component, e^{-kappa (t1/2 + t2/4)}.
  [[nodiscard]] double amplitude_damping() const;
};

[[nodiscard]] SingleExcState apply_mapping_channel(const SingleExcState& s, const MappingDelays& d);
[[nodiscard]] SingleExcState invert_mapping_correction(const SingleExcState& s, const MappingDelays& d);

// Same maps for a 2x2 density in (|e,0>, |g,1>); outputs have unit trace.
[[nodiscard]] Mat2 apply_mapping_channel(const Mat2& rho, const MappingDelays& d);
[[nodiscard]] Mat2 invert_mapping_correction(const Mat2& rho, const MappingDelays& d);

/// Two-qubit state of (Q_a, Q) in the basis (|gg>, |ge>, |eg>, |ee>).
struct TwoQubitDensity {
  Mat4 matrix = Mat4::Identity() / 4.0;

  /// Throws Error(invalid_argument) unless Hermitian, unit trace and PSD.
  void validate(double tol = 1e-8) const;
};

// Single-excitation amplitudes land as alpha |eg> + beta |ge>.
inline constexpr int index_gg = 0;
inline constexpr int index_ge = 1;
inline constexpr int index_eg = 2;
inline constexpr int index_ee = 3;

[[nodiscard]] TwoQubitDensity embed_two_qubit(const SingleExcState& s);

/// Embeds a (possibly sub-normalized) 2x2 block in (|e,0>, |g,1>) and puts the
/// missing weight in |gg>.
[[nodiscard]] TwoQubitDensity embed_two_qubit(const Mat2& block);

enum class Axis { x = 1, y = 2, z = 3 };

/// sigma_0..sigma_3 = I, X, Y, Z with Z|g> = +|g>.
[[nodiscard]] Mat2 pauli(int i);

/// <sigma_i (x) sigma_j> for (i, j) != (0, 0), row-major: index 4i + j - 1.
using PauliVector = std::array<double, 15>;
[[nodiscard]] PauliVector pauli_expectations(const TwoQubitDensity& rho);

struct BasisSetting {
  Axis first = Axis::z;   ///< measured on Q_a
  Axis second = Axis::z;  ///< measured on Q
};

/// The nine product settings XX, XY, ..., ZZ.
[[nodiscard]] std::array<BasisSetting, 9> all_settings();

/// Outcome order (++, +-, -+, --) where + is the +1 eigenvalue of the axis.
using Counts = std::array<std::int64_t, 4>;
[[nodiscard]] std::array<double, 4> born_probabilities(const TwoQubitDensity& rho, BasisSetting s);

/// Multinomial draw of `shots` outcomes (sequential binomials, mt19937_64).
[[nodiscard]] Counts sample_counts(const TwoQubitDensity& rho, BasisSetting s, std::int64_t shots,
                                   std::uint64_t seed);

struct SettingCounts {
  BasisSetting setting;
  Counts counts{};
};

/// Counts for all nine settings, seeds derived from `seed` per setting.
[[nodiscard]] std::vector<SettingCounts> measure_all(const TwoQubitDensity& rho, std::int64_t shots,
                                                     std::uint64_t seed);

/// Estimates from counts; single-qubit terms average over the three settings
/// that share the axis. Throws Error(invalid_argument) if a setting is missing.
[[nodiscard]] PauliVector expectations_from_counts(const std::vector<SettingCounts>& data);

/// rho = (1/4) sum_ij <sigma_i sigma_j> sigma_i (x) sigma_j (may be unphysical).
[[nodiscard]] Mat4 linear_inversion(const PauliVector& e);

/// Clips negative eigenvalues to zero and renormalizes the trace.
[[nodiscard]] TwoQubitDensity project_physical(const Mat4& m);

[[nodiscard]] TwoQubitDensity reconstruct_density(const PauliVector& e);
[[nodiscard]] TwoQubitDensity reconstruct_density(const std::vector<SettingCounts>& data);

struct Postselected {
  Mat2 rho;  ///< unit trace, in (|e,0>, |g,1>)
  double success_probability = 0.0;
};

/// Keeps the {|eg>, |ge>} block. Throws Error(postselection_failure) when its
/// trace is below 1e-6.
[[nodiscard]] Postselected project_single_excitation(const TwoQubitDensity& rho);

[[nodiscard]] double trace_distance(const Mat4& a, const Mat4& b);
/// <psi| rho |psi> for a pure reference state.
[[nodiscard]] double state_fidelity(const Mat4& rho, const Vec4& psi);

}  // namespace wer
