#pragma once

#include <array>

#include "wer/errors.hpp"
#include "wer/linalg.hpp"

namespace wer {

/// A point of the dissipative Jaynes-Cummings model restricted to one
/// excitation. All rates in rad/us.
struct SystemParams {
  cplx lambda{0.0, 0.0};  ///< qubit-resonator coupling
  double delta = 0.0;     ///< qubit-resonator detuning
  double kappa = 0.0;     ///< photon decay rate, >= 0

  /// Throws Error(invalid_argument) on non-finite fields or kappa < 0.
  void validate() const;
};

/// Spin-analogy magnetic field: (Re lambda, Im lambda, delta/2).
struct BVector {
  double bx = 0.0;
  double by = 0.0;
  double bz = 0.0;

  [[nodiscard]] double norm() const;
  friend bool operator==(const BVector&, const BVector&) = default;
};

[[nodiscard]] SystemParams params_from_b(const BVector& b, double kappa);
[[nodiscard]] BVector b_from_params(const SystemParams& p);

/// Pure state in span{|e,0>, |g,1>}.
class SingleExcState {
 public:
  /// |e,0>
  SingleExcState() = default;
  SingleExcState(const Vec2& amplitudes, bool normalized);

  static SingleExcState excited() { return {}; }
  static SingleExcState photon() { return SingleExcState(Vec2(0.0, 1.0), true); }
  /// Normalizes the amplitudes; throws on a zero vector.
  static SingleExcState normalized(cplx c_e0, cplx c_g1);
  static SingleExcState normalized(const Vec2& v) { return normalized(v(0), v(1)); }

  [[nodiscard]] cplx c_e0() const { return amp_(0); }
  [[nodiscard]] cplx c_g1() const { return amp_(1); }
  [[nodiscard]] const Vec2& vec() const { return amp_; }
  [[nodiscard]] bool is_normalized() const { return normalized_; }
  [[nodiscard]] double norm2() const { return amp_.squaredNorm(); }
  /// Population of |e,0> relative to the state norm.
  [[nodiscard]] double population_e0() const { return std::norm(amp_(0)) / norm2(); }

 private:
  Vec2 amp_{1.0, 0.0};
  bool normalized_ = true;
};

/// Energies with right eigenvectors (unit norm) and left co-vectors chosen so
/// that left[n] * right[m] = delta_nm.
struct BiorthEigensystem {
  std::array<cplx, 2> energy{};
  std::array<Vec2, 2> right{Vec2::Zero(), Vec2::Zero()};
  std::array<CoVec2, 2> left{CoVec2::Zero(), CoVec2::Zero()};

  [[nodiscard]] SingleExcState right_state(int n) const { return {right[n], true}; }
  /// Left/right vectors from an arbitrary pair of right vectors (normalizes them).
  static BiorthEigensystem from_right(const std::array<cplx, 2>& energy,
                                      const std::array<Vec2, 2>& right);
};

/// Ring of second-order exceptional points in the bz = 0 plane.
struct WerGeometry {
  double kappa = 0.0;
  double radius = 0.0;  ///< kappa / 4

  [[nodiscard]] BVector ring_point(double azimuth) const;
};

/// |discriminant| below this fraction of kappa^2 counts as sitting on an EP.
inline constexpr double ep_tolerance = 1e-12;

/// [[delta, conj(lambda)], [lambda, -i kappa/2]] in (|e,0>, |g,1>).
[[nodiscard]] Mat2 hamiltonian_matrix(const SystemParams& p);

/// |lambda|^2 + (2 delta + i kappa)^2 / 16, zero exactly on an EP.
[[nodiscard]] cplx discriminant(const SystemParams& p);

/// Closed-form biorthogonal eigensystem. Mode 1 carries the + sign in front of
/// the principal square root of the discriminant; this local labeling is not
/// continuous along paths that wind around the ring.
///
/// Throws Error(ep_proximity) when |discriminant| < ep_tolerance * kappa^2, or
/// at the Hermitian degeneracy lambda = delta = kappa = 0.
[[nodiscard]] BiorthEigensystem eigensystem(const SystemParams& p);

/// The single surviving right eigenvector at an EP (unit norm).
[[nodiscard]] Vec2 coalesced_eigenvector(const SystemParams& p);

[[nodiscard]] WerGeometry wer_geometry(double kappa);

/// Bisection for the EP radius |lambda| along the ray lambda = r e^{i azimuth},
/// delta = 0. Returns the root of Re(discriminant).
[[nodiscard]] double locate_ep_on_ray(double kappa, double azimuth, double tolerance = 1e-14);

}  // namespace wer
