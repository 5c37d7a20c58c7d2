#include "qs1d/scatter1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qs1d {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxLogCondition = 32.2361913019694577;  // ln(1e14)

Matrix2c interface_matrix(Complex q_from, Complex q_to) {
  const Complex rho = q_from / q_to;
  Matrix2c d;
  d << 0.5 * (1.0 + rho), 0.5 * (1.0 - rho),
       0.5 * (1.0 - rho), 0.5 * (1.0 + rho);
  return d;
}

Matrix2c propagation_matrix(Complex q, double width) {
  const Complex phase = std::exp(kImagUnit * q * width);
  Matrix2c p;
  p << phase, 0.0, 0.0, 1.0 / phase;
  return p;
}

/// (e^{z*delta} - 1) / z, stable for small |z*delta|.
Complex expm1_over(Complex z, double delta) {
  const Complex zd = z * delta;
  if (std::abs(zd) < 1e-4) {
    return delta * (1.0 + zd * (0.5 + zd * (1.0 / 6.0 + zd / 24.0)));
  }
  return (std::exp(zd) - 1.0) / z;
}

/// Integral of e^{z*u} du over [u0, u1].
Complex exp_integral(Complex z, double u0, double u1) {
  return std::exp(z * u0) * expm1_over(z, u1 - u0);
}

struct ComposedTransfer {
  Matrix2c m;        // scaled matrix
  double log_scale;  // true transfer = m * exp(log_scale)
};

}  // namespace

Channels make_channels(const PotentialProfile& profile, double e) {
  if (!(e > profile.v_left()) || !(e > profile.v_right())) {
    throw EvanescentChannel("E = " + std::to_string(e) +
                            " does not propagate in both contacts");
  }
  Channels c;
  c.e = e;
  c.k1 = std::sqrt(e - profile.v_left());
  c.k2 = std::sqrt(e - profile.v_right());
  c.v1 = 2.0 * c.k1;
  c.v2 = 2.0 * c.k2;
  return c;
}

const ScatteringSolution::Medium& ScatteringSolution::medium_at(double y) const {
  if (y < media.front().y_hi) return media.front();
  if (y >= media.back().y_lo) return media.back();
  for (std::size_t i = 1; i + 1 < media.size(); ++i) {
    if (y < media[i].y_hi) return media[i];
  }
  return media.back();
}

Complex ScatteringSolution::psi(ChannelIndex beta, double y) const {
  const Medium& m = medium_at(y);
  const double u = y - m.y_ref;
  return m.a[beta] * std::exp(kImagUnit * m.q * u) +
         m.b[beta] * std::exp(-kImagUnit * m.q * u);
}

Complex ScatteringSolution::integral_psi_conj_psi(ChannelIndex beta,
                                                  ChannelIndex gamma,
                                                  const Window& w) const {
  Complex total = 0.0;
  for (const Medium& m : media) {
    const double lo = std::max(w.y_lo, m.y_lo);
    const double hi = std::min(w.y_hi, m.y_hi);
    if (lo >= hi) continue;
    const double u0 = lo - m.y_ref;
    const double u1 = hi - m.y_ref;
    const Complex qc = std::conj(m.q);
    const Complex ac = std::conj(m.a[beta]);
    const Complex bc = std::conj(m.b[beta]);
    const Complex a = m.a[gamma];
    const Complex b = m.b[gamma];
    total += ac * a * exp_integral(kImagUnit * (m.q - qc), u0, u1);
    total += ac * b * exp_integral(-kImagUnit * (m.q + qc), u0, u1);
    total += bc * a * exp_integral(kImagUnit * (m.q + qc), u0, u1);
    total += bc * b * exp_integral(-kImagUnit * (m.q - qc), u0, u1);
  }
  return total;
}

ScatteringSolution solve(const PotentialProfile& profile, double e,
                         const GridSpec& grid) {
  const Channels ch = make_channels(profile, e);
  const auto& segs = profile.segments();
  const std::size_t n = segs.size();

  // media: [0] left contact, [1..n] segments, [n+1] right contact
  std::vector<ScatteringSolution::Medium> media(n + 2);
  media[0] = {-kInf, profile.domain_lo(), profile.domain_lo(), Complex(ch.k1), {}, {}};
  for (std::size_t j = 0; j < n; ++j) {
    const Complex q = std::sqrt(Complex(e) - segs[j].value);
    if (q == Complex(0.0)) {
      throw NumericalInstability("energy coincides exactly with a segment level");
    }
    media[j + 1] = {segs[j].y_lo, segs[j].y_hi, segs[j].y_lo, q, {}, {}};
  }
  media[n + 1] = {profile.domain_hi(), kInf, profile.domain_hi(), Complex(ch.k2), {}, {}};

  // step j: medium j -> medium j+1 (interface after propagating medium j)
  const auto step_matrix = [&](std::size_t j) -> Matrix2c {
    const double width = (j == 0) ? 0.0 : media[j].y_hi - media[j].y_lo;
    return interface_matrix(media[j].q, media[j + 1].q) *
           propagation_matrix(media[j].q, width);
  };

  ComposedTransfer t{Matrix2c::Identity(), 0.0};
  for (std::size_t j = 0; j <= n; ++j) {
    t.m = step_matrix(j) * t.m;
    const double s = t.m.cwiseAbs().maxCoeff();
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw NumericalInstability("transfer-matrix composition degenerated");
    }
    t.m /= s;
    t.log_scale += std::log(s);
  }

  // condition estimate sigma_max^2 / |det|, in logs (det = k1/k2 analytically)
  const double log_sigma_max = t.log_scale + std::log(t.m.norm());
  const double log_cond = 2.0 * log_sigma_max - std::log(ch.k1 / ch.k2);
  if (log_cond > kMaxLogCondition) {
    throw NumericalInstability(
        "transfer-matrix condition estimate exceeds 1e14 (deep tunneling)");
  }

  const Complex m22 = t.m(1, 1);
  const Complex inv_t22 = std::exp(-t.log_scale) / m22;
  const double vel_ratio = std::sqrt(ch.k1 / ch.k2);

  ScatteringSolution sol;
  sol.channels = ch;
  sol.s(0, 0) = -t.m(1, 0) / m22;             // S11
  sol.s(1, 1) = t.m(0, 1) / m22;              // S22
  sol.s(1, 0) = vel_ratio * inv_t22;          // S21
  sol.s(0, 1) = sol.s(1, 0);                  // S12 = S21 (reciprocity)
  sol.unitarity_defect =
      (sol.s.adjoint() * sol.s - Matrix2c::Identity()).cwiseAbs().maxCoeff();

  // Amplitudes per medium.  Incidence from the left: forward sweep from
  // (1, S11); incidence from the right: backward sweep from (S22, 1).
  media[0].a[0] = 1.0;
  media[0].b[0] = sol.s(0, 0);
  {
    Eigen::Vector2cd v(media[0].a[0], media[0].b[0]);
    for (std::size_t j = 0; j + 1 < media.size(); ++j) {
      v = step_matrix(j) * v;
      media[j + 1].a[0] = v(0);
      media[j + 1].b[0] = v(1);
    }
  }
  // exact asymptotic form on the right: (tau, 0)
  media[n + 1].a[0] = (ch.k1 / ch.k2) * inv_t22;
  media[n + 1].b[0] = 0.0;

  media[n + 1].a[1] = sol.s(1, 1);
  media[n + 1].b[1] = 1.0;
  {
    Eigen::Vector2cd v(media[n + 1].a[1], media[n + 1].b[1]);
    for (std::size_t j = media.size() - 1; j-- > 0;) {
      const double width = (j == 0) ? 0.0 : media[j].y_hi - media[j].y_lo;
      v = propagation_matrix(media[j].q, -width) *
          interface_matrix(media[j + 1].q, media[j].q) * v;
      media[j].a[1] = v(0);
      media[j].b[1] = v(1);
    }
  }
  media[0].a[1] = 0.0;
  media[0].b[1] = inv_t22;  // sqrt(v2/v1) S12

  sol.media = std::move(media);

  if (grid.points_per_wavelength > 0.0) {
    if (grid.points_per_wavelength < 20.0) {
      throw ResolutionTooCoarse("grid must resolve >= 20 points per wavelength");
    }
    double k_res = std::max(ch.k1, ch.k2);
    for (std::size_t j = 1; j <= n; ++j) {
      k_res = std::max(k_res, std::abs(sol.media[j].q.real()));
    }
    const double spacing = (2.0 * std::numbers::pi / k_res) / grid.points_per_wavelength;
    std::vector<double> ys;
    for (std::size_t j = 1; j <= n; ++j) {
      const double lo = sol.media[j].y_lo;
      const double hi = sol.media[j].y_hi;
      const auto pts = static_cast<std::size_t>(std::ceil((hi - lo) / spacing));
      for (std::size_t i = 0; i < pts; ++i) {
        ys.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(pts));
      }
      if (ys.size() > grid.max_points) {
        throw ResolutionTooCoarse("requested grid exceeds the max_points budget");
      }
    }
    ys.push_back(profile.domain_hi());
    sol.grid = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<long>(ys.size()));
    sol.psi1.resize(sol.grid.size());
    sol.psi2.resize(sol.grid.size());
    for (long i = 0; i < sol.grid.size(); ++i) {
      sol.psi1(i) = sol.psi(0, sol.grid(i));
      sol.psi2(i) = sol.psi(1, sol.grid(i));
    }
  }
  return sol;
}

SpinorSolution solve_spinor(const PotentialProfile& profile, const Window& window,
                            double omega_l, double e, const GridSpec& grid) {
  const Channels ch = make_channels(profile, e);
  const double headroom = e - std::max(profile.v_left(), profile.v_right());
  if (std::abs(omega_l) / 2.0 > 0.5 * headroom) {
    throw SpinChannelEvanescent("Zeeman shift hbar*omega_L/2 too large for E");
  }
  SpinorSolution out;
  out.omega_l = omega_l;
  out.channels = ch;
  if (omega_l == 0.0) {
    const Matrix2c s = solve(profile, e, grid).s;
    out.s_plus = s;
    out.s_minus = s;
    return out;
  }
  out.s_plus = solve(perturb(profile, window, Complex(-omega_l / 2.0)), e, grid).s;
  out.s_minus = solve(perturb(profile, window, Complex(+omega_l / 2.0)), e, grid).s;
  return out;
}

double density(const ScatteringSolution& sol, ChannelIndex beta, double y) {
  const double v = sol.channels.v(beta);
  return std::norm(sol.psi(beta, y)) / (kPlanckH * v);
}

double density_window_mean(const ScatteringSolution& sol, ChannelIndex beta,
                           const Window& w) {
  const double v = sol.channels.v(beta);
  const double integral = sol.integral_psi_conj_psi(beta, beta, w).real();
  return integral / (w.width() * kPlanckH * v);
}

}  // namespace qs1d
