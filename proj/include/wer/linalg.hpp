#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace wer {

using cplx = std::complex<double>;

// Single-excitation subspace, basis (|e,0>, |g,1>).
using Vec2 = Eigen::Vector2cd;
using CoVec2 = Eigen::RowVector2cd;
using Mat2 = Eigen::Matrix2cd;

// Qubit-resonator space truncated to one excitation, basis (|g,0>, |e,0>, |g,1>).
using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;

// Two-qubit (Qa, Q) space, basis (|gg>, |ge>, |eg>, |ee>).
using Vec4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

}  // namespace wer
