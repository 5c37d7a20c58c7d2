#pragma once

#include <array>
#include <vector>

#include "qs1d/dos.hpp"
#include "qs1d/potential.hpp"
#include "qs1d/types.hpp"

namespace qs1d {

/// One Larmor-clock reading for a channel pair (alpha out, beta in).
/// Spin projections are normalized to hbar/2 (dimensionless, in [-1,1]);
/// times are defined operationally as lim <s_i>/omega_l.  Perturbative
/// readings carry omega_l = 0 and the FD-derived times.
struct LarmorClockReading {
  ChannelIndex alpha = 0;
  ChannelIndex beta = 0;
  Window window{0.0, 0.0};
  double omega_l = 0.0;

  double sx = 1.0;
  double sy = 0.0;
  double sz = 0.0;

  double tau_y = 0.0;
  double tau_z = 0.0;
  double tau_x = 0.0;

  bool blocked = false;  // |S_ab|^2 <= 1e-12, times undefined
};

using ClockReadings = std::array<std::array<LarmorClockReading, 2>, 2>;  // [alpha][beta]

/// Direct spinor clock: solves the Zeeman-split problem and evaluates the
/// transmitted/reflected spin polarization for x-polarized incidence.
ClockReadings spin_direct(const PotentialProfile& profile, const Window& window,
                          double omega_l, double e);

/// Perturbative, omega-independent time scales from the DOS hierarchy:
///   tau_y = (h/|S_ab|^2) nu(a,w,b) * width      (precession)
///   tau_z = (h/|S_ab|^2) eta(a,w,b) * width     (rotation)
///   tau_x = width |dS_ab/dV| / |S_ab|           (= sqrt(tau_y^2 + tau_z^2))
/// Channels with |S_ab|^2 <= 1e-12 come back marked blocked with NaN times.
ClockReadings times_perturbative(const PotentialProfile& profile,
                                 const Window& window, double e);

/// Single-channel variant; throws ChannelBlocked for a forbidden channel.
LarmorClockReading times_perturbative(const PotentialProfile& profile,
                                      const Window& window, double e,
                                      ChannelIndex alpha, ChannelIndex beta);

struct ClockChannelReport {
  ChannelIndex alpha = 0;
  ChannelIndex beta = 0;
  double tau_y = 0.0;
  double tau_z = 0.0;
  double sy_over_omega = 0.0;   // at the smallest omega of the sequence
  double sz_over_omega = 0.0;
  double order_y = 0.0;         // fitted convergence order of sy/omega -> tau_y
  double order_z = 0.0;
  bool exact_y = false;         // residuals at roundoff floor, order fit skipped
  bool exact_z = false;
  bool blocked = false;         // |S_ab|^2 below the blocked-channel threshold
};

struct ClockConsistencyReport {
  std::vector<double> omegas;
  std::array<std::array<ClockChannelReport, 2>, 2> channels;
  double min_order = 0.0;       // over all non-exact channels

  const ClockChannelReport& at(ChannelIndex a, ChannelIndex b) const {
    return channels[a][b];
  }
};

/// Verifies sy/omega -> tau_y and sz/omega -> tau_z over a decreasing
/// geometric omega sequence (>= 3 values) and fits the convergence order.
/// Throws NonConvergent if a fitted order falls below 1.8.
ClockConsistencyReport clock_consistency(const PotentialProfile& profile,
                                         const Window& window, double e,
                                         const std::vector<double>& omega_sequence);

/// Default omega sequence: hbar*omega/2 in {1e-3, 5e-4, 2.5e-4} * E.
std::vector<double> default_omega_sequence(double e);

/// Least-squares slope of log(residual) vs log(x); xs decreasing, rs >= 0.
/// Returns +inf when all residuals sit below `floor` (treated as exact).
double fit_order(const std::vector<double>& xs, const std::vector<double>& rs,
                 double floor = 1e-14);

}  // namespace qs1d
