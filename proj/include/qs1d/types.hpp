#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

// Natural units used throughout: hbar = 1, m = 1/2.
// Hence E = k^2 for a free particle, v = 2k, and h = 2*pi.
namespace qs1d {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

inline constexpr double kPlanckH = 2.0 * std::numbers::pi;
inline constexpr Complex kImagUnit{0.0, 1.0};

/// Channel (contact) index, 0 = left contact "1", 1 = right contact "2".
using ChannelIndex = int;

/// Asymptotic wavevectors and velocities of both leads at energy e.
struct Channels {
  double k1 = 0.0;
  double k2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double e = 0.0;

  double k(ChannelIndex b) const { return b == 0 ? k1 : k2; }
  double v(ChannelIndex b) const { return b == 0 ? v1 : v2; }
};

}  // namespace qs1d
