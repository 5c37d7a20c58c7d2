#include "qs1d/dos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qs1d {

namespace {

constexpr double kDefectTolerance = 1e-4;
constexpr double kImagResidueTolerance = 1e-10;

GridSpec no_grid() {
  GridSpec g;
  g.points_per_wavelength = 0.0;
  return g;
}

double relative_mismatch(double a, double b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  if (denom == 0.0) return 0.0;
  return std::abs(a - b) / denom;
}

Complex quadratic_form_minus(Complex s_ab, Complex d_ab, Complex s_ag, Complex d_ag) {
  // -(1/4*pi*i) (conj(s_ab) d_ag - conj(d_ab) s_ag)
  const Complex num = std::conj(s_ab) * d_ag - std::conj(d_ab) * s_ag;
  return -num / (4.0 * std::numbers::pi * kImagUnit);
}

double checked_real(Complex z, const char* what) {
  if (std::abs(z.imag()) > kImagResidueTolerance * std::max(1.0, std::abs(z.real()))) {
    throw NonRealResult(std::string(what) + " has imaginary residue " +
                        std::to_string(z.imag()));
  }
  return z.real();
}

}  // namespace

double min_wavelength(const PotentialProfile& profile, double e) {
  double k_max = std::sqrt(std::max(e - profile.v_left(), e - profile.v_right()));
  for (const auto& s : profile.segments()) {
    const double kin = e - s.value.real();
    if (kin > 0.0) k_max = std::max(k_max, std::sqrt(kin));
  }
  return 2.0 * std::numbers::pi / k_max;
}

SDerivative s_derivative(const PotentialProfile& profile, double e,
                         const Window& window,
                         std::optional<double> requested_step) {
  if (!profile.contains(window) || !(window.width() > 0.0)) {
    throw WindowOutOfDomain("derivative window outside the profile domain");
  }
  const double width = window.width();
  if (width > min_wavelength(profile, e) / 50.0) {
    throw WindowTooWide("window width " + std::to_string(width) +
                        " exceeds lambda_min/50");
  }

  const double step = requested_step.value_or(1e-5 * e);
  if (std::abs(step) < 1e3 * std::numeric_limits<double>::epsilon() * e) {
    throw StepUnderflow("finite-difference step below 1e3*eps*E");
  }

  const ScatteringSolution base = solve(profile, e, no_grid());

  const auto central = [&](double h) -> Matrix2c {
    const Matrix2c sp = solve(perturb(profile, window, Complex(+h)), e, no_grid()).s;
    const Matrix2c sm = solve(perturb(profile, window, Complex(-h)), e, no_grid()).s;
    return (sp - sm) / (2.0 * h * width);
  };

  SDerivative sd;
  sd.window = window;
  sd.fd_step = step;
  sd.smatrix = base.s;
  sd.channels = base.channels;
  const Matrix2c d_h = central(step);
  const Matrix2c d_h2 = central(0.5 * step);
  sd.d = (4.0 * d_h2 - d_h) / 3.0;

  for (ChannelIndex b = 0; b < 2; ++b) {
    double fd_sum = 0.0;
    for (ChannelIndex a = 0; a < 2; ++a) {
      fd_sum += quadratic_form_minus(sd.smatrix(a, b), sd.d(a, b), sd.smatrix(a, b),
                                     sd.d(a, b))
                    .real();
    }
    const double oracle = density_window_mean(base, b, window);
    sd.defect_by_channel[b] = relative_mismatch(fd_sum, oracle);
  }
  sd.defect = std::max(sd.defect_by_channel[0], sd.defect_by_channel[1]);
  if (sd.defect > kDefectTolerance) {
    throw OracleDefectExceeded("injectivity sum-rule defect " +
                               std::to_string(sd.defect) + " exceeds 1e-4");
  }
  return sd;
}

double pdos(const SDerivative& sd, ChannelIndex alpha, ChannelIndex beta) {
  const Complex nu = quadratic_form_minus(sd.smatrix(alpha, beta), sd.d(alpha, beta),
                                          sd.smatrix(alpha, beta), sd.d(alpha, beta));
  return checked_real(nu, "pdos");
}

double pdos(const PotentialProfile& profile, double e, const Window& window,
            ChannelIndex alpha, ChannelIndex beta) {
  return pdos(s_derivative(profile, e, window), alpha, beta);
}

double sensitivity(const SDerivative& sd, ChannelIndex alpha, ChannelIndex beta) {
  const Complex s = sd.smatrix(alpha, beta);
  const Complex d = sd.d(alpha, beta);
  const Complex eta =
      -(std::conj(s) * d + std::conj(d) * s) / (4.0 * std::numbers::pi);
  return checked_real(eta, "sensitivity");
}

double sensitivity(const PotentialProfile& profile, double e, const Window& window,
                   ChannelIndex alpha, ChannelIndex beta) {
  return sensitivity(s_derivative(profile, e, window), alpha, beta);
}

Complex pdos_offdiagonal(const SDerivative& sd, ChannelIndex alpha,
                         ChannelIndex beta, ChannelIndex gamma) {
  return quadratic_form_minus(sd.smatrix(alpha, beta), sd.d(alpha, beta),
                              sd.smatrix(alpha, gamma), sd.d(alpha, gamma));
}

Complex pdos_offdiagonal(const PotentialProfile& profile, double e,
                         const Window& window, ChannelIndex alpha,
                         ChannelIndex beta, ChannelIndex gamma) {
  return pdos_offdiagonal(s_derivative(profile, e, window), alpha, beta, gamma);
}

double DosHierarchy::max_defect() const {
  double d = 0.0;
  for (const auto& r : rows) d = std::max(d, r.defect);
  return d;
}

DosHierarchy hierarchy(const PotentialProfile& profile, double e,
                       const std::vector<Window>& windows) {
  DosHierarchy h;
  h.rows.reserve(windows.size());
  for (const Window& w : windows) {
    const SDerivative sd = s_derivative(profile, e, w);
    DosWindowRow row{};
    row.window = w;
    for (ChannelIndex a = 0; a < 2; ++a) {
      for (ChannelIndex b = 0; b < 2; ++b) {
        row.pdos[a][b] = pdos(sd, a, b);
      }
    }
    for (ChannelIndex b = 0; b < 2; ++b) {
      row.inj[b] = row.pdos[0][b] + row.pdos[1][b];
    }
    for (ChannelIndex a = 0; a < 2; ++a) {
      row.emis[a] = row.pdos[a][0] + row.pdos[a][1];
    }
    row.ldos = row.inj[0] + row.inj[1];
    row.defect = sd.defect;
    h.rows.push_back(row);
    h.smatrix = sd.smatrix;
    h.channels = sd.channels;
  }
  return h;
}

std::vector<Window> tile_windows(double lo, double hi, std::size_t count) {
  std::vector<Window> out;
  out.reserve(count);
  const double w = (hi - lo) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({lo + w * static_cast<double>(i),
                   (i + 1 == count) ? hi : lo + w * static_cast<double>(i + 1)});
  }
  return out;
}

WignerSmithMatrix wigner_smith(const PotentialProfile& profile, double e) {
  const double h = 1e-6 * e;
  if (e - 2.0 * h <= std::max(profile.v_left(), profile.v_right())) {
    throw BandEdgeTooClose("energy within finite-difference reach of a band edge");
  }

  const auto central = [&](double step) -> Matrix2c {
    const Matrix2c sp = solve(profile, e + step, no_grid()).s;
    const Matrix2c sm = solve(profile, e - step, no_grid()).s;
    return (sp - sm) / (2.0 * step);
  };
  const Matrix2c ds_h = central(h);
  const Matrix2c ds_h2 = central(0.5 * h);
  const Matrix2c ds = (4.0 * ds_h2 - ds_h) / 3.0;

  const Matrix2c s = solve(profile, e, no_grid()).s;
  WignerSmithMatrix out;
  out.fd_step = h;
  out.d = (s.adjoint() * ds) / (2.0 * std::numbers::pi * kImagUnit);
  out.hermiticity_defect = (out.d - out.d.adjoint().eval()).cwiseAbs().maxCoeff();
  if (out.hermiticity_defect > 1e-6) {
    throw SymmetryDefect("Wigner-Smith anti-Hermitian residue " +
                         std::to_string(out.hermiticity_defect));
  }
  out.d = 0.5 * (out.d + out.d.adjoint().eval());
  return out;
}

}  // namespace qs1d
