#include "qs1d/clock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qs1d/scatter1d.hpp"

namespace qs1d {

namespace {

constexpr double kBlockedThreshold = 1e-12;
constexpr double kMinOrder = 1.8;

GridSpec no_grid() {
  GridSpec g;
  g.points_per_wavelength = 0.0;
  return g;
}

LarmorClockReading reading_from_spinors(Complex sp, Complex sm, ChannelIndex a,
                                        ChannelIndex b, const Window& w,
                                        double omega_l) {
  LarmorClockReading r;
  r.alpha = a;
  r.beta = b;
  r.window = w;
  r.omega_l = omega_l;
  const double norm = std::norm(sp) + std::norm(sm);
  if (norm == 0.0) {
    return r;  // no outgoing amplitude in this channel: polarization stays at x
  }
  const Complex z = std::conj(sp) * sm;
  // Precession measured from x toward the classical-traversal sense, so a
  // free flight yields sy/omega -> width/v > 0.
  r.sy = -2.0 * z.imag() / norm;
  r.sz = (std::norm(sp) - std::norm(sm)) / norm;
  r.sx = 2.0 * z.real() / norm;
  return r;
}

}  // namespace

ClockReadings spin_direct(const PotentialProfile& profile, const Window& window,
                          double omega_l, double e) {
  const SpinorSolution sol = solve_spinor(profile, window, omega_l, e, no_grid());
  ClockReadings out;
  for (ChannelIndex a = 0; a < 2; ++a) {
    for (ChannelIndex b = 0; b < 2; ++b) {
      out[a][b] = reading_from_spinors(sol.s_plus(a, b), sol.s_minus(a, b), a, b,
                                       window, omega_l);
    }
  }
  return out;
}

namespace {

LarmorClockReading channel_times(const SDerivative& sd, const Window& window,
                                 ChannelIndex a, ChannelIndex b) {
  LarmorClockReading r;
  r.alpha = a;
  r.beta = b;
  r.window = window;
  const double prob = std::norm(sd.smatrix(a, b));
  if (prob <= kBlockedThreshold) {
    r.blocked = true;
    r.tau_y = r.tau_z = r.tau_x = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double width = window.width();
  r.tau_y = (kPlanckH / prob) * pdos(sd, a, b) * width;
  r.tau_z = (kPlanckH / prob) * sensitivity(sd, a, b) * width;
  r.tau_x = width * std::abs(sd.d(a, b)) / std::sqrt(prob);
  return r;
}

}  // namespace

ClockReadings times_perturbative(const PotentialProfile& profile,
                                 const Window& window, double e) {
  const SDerivative sd = s_derivative(profile, e, window);
  ClockReadings out;
  for (ChannelIndex a = 0; a < 2; ++a) {
    for (ChannelIndex b = 0; b < 2; ++b) {
      out[a][b] = channel_times(sd, window, a, b);
    }
  }
  return out;
}

LarmorClockReading times_perturbative(const PotentialProfile& profile,
                                      const Window& window, double e,
                                      ChannelIndex alpha, ChannelIndex beta) {
  const SDerivative sd = s_derivative(profile, e, window);
  const LarmorClockReading r = channel_times(sd, window, alpha, beta);
  if (r.blocked) {
    throw ChannelBlocked("|S|^2 <= 1e-12 for channel (" +
                         std::to_string(alpha + 1) + "," +
                         std::to_string(beta + 1) + ")");
  }
  return r;
}

double fit_order(const std::vector<double>& xs, const std::vector<double>& rs,
                 double floor) {
  std::vector<double> lx, lr;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (rs[i] > floor) {
      lx.push_back(std::log(xs[i]));
      lr.push_back(std::log(rs[i]));
    }
  }
  if (lx.size() < 2) {
    return std::numeric_limits<double>::infinity();
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += lr[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * lr[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> default_omega_sequence(double e) {
  // hbar*omega/2 in {1e-3, 5e-4, 2.5e-4} * E
  return {2e-3 * e, 1e-3 * e, 5e-4 * e};
}

ClockConsistencyReport clock_consistency(const PotentialProfile& profile,
                                         const Window& window, double e,
                                         const std::vector<double>& omega_sequence) {
  if (omega_sequence.size() < 3) {
    throw Error("omega sequence needs at least 3 values");
  }
  for (std::size_t i = 1; i < omega_sequence.size(); ++i) {
    if (!(omega_sequence[i] > 0.0) || omega_sequence[i] >= omega_sequence[i - 1]) {
      throw Error("omega sequence must be positive and strictly decreasing");
    }
  }

  const SDerivative sd = s_derivative(profile, e, window);
  const double width = window.width();

  ClockConsistencyReport rep;
  rep.omegas = omega_sequence;

  std::vector<ClockReadings> direct;
  direct.reserve(omega_sequence.size());
  for (double w : omega_sequence) {
    direct.push_back(spin_direct(profile, window, w, e));
  }

  rep.min_order = std::numeric_limits<double>::infinity();
  for (ChannelIndex a = 0; a < 2; ++a) {
    for (ChannelIndex b = 0; b < 2; ++b) {
      ClockChannelReport cr;
      cr.alpha = a;
      cr.beta = b;
      const double prob = std::norm(sd.smatrix(a, b));
      if (prob <= kBlockedThreshold) {
        cr.blocked = true;
        rep.channels[a][b] = cr;
        continue;
      }
      cr.tau_y = (kPlanckH / prob) * pdos(sd, a, b) * width;
      cr.tau_z = (kPlanckH / prob) * sensitivity(sd, a, b) * width;

      std::vector<double> res_y, res_z;
      for (std::size_t i = 0; i < omega_sequence.size(); ++i) {
        const auto& r = direct[i][a][b];
        res_y.push_back(std::abs(r.sy / omega_sequence[i] - cr.tau_y));
        res_z.push_back(std::abs(r.sz / omega_sequence[i] - cr.tau_z));
      }
      const auto& last = direct.back()[a][b];
      cr.sy_over_omega = last.sy / omega_sequence.back();
      cr.sz_over_omega = last.sz / omega_sequence.back();

      const double floor_y = std::max(1e-12, 1e-8 * std::abs(cr.tau_y));
      const double floor_z = std::max(1e-12, 1e-8 * std::abs(cr.tau_z));
      cr.order_y = fit_order(omega_sequence, res_y, floor_y);
      cr.order_z = fit_order(omega_sequence, res_z, floor_z);
      cr.exact_y = std::isinf(cr.order_y);
      cr.exact_z = std::isinf(cr.order_z);

      if (!cr.exact_y) rep.min_order = std::min(rep.min_order, cr.order_y);
      if (!cr.exact_z) rep.min_order = std::min(rep.min_order, cr.order_z);
      rep.channels[a][b] = cr;
    }
  }

  if (rep.min_order < kMinOrder) {
    throw NonConvergent("fitted convergence order " + std::to_string(rep.min_order) +
                        " below 1.8");
  }
  return rep;
}

}  // namespace qs1d
