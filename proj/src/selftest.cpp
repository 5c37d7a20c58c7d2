#include "qs1d/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <ostream>

#include "qs1d/clock.hpp"
#include "qs1d/dos.hpp"
#include "qs1d/scatter1d.hpp"
#include "qs1d/transport.hpp"

namespace qs1d {

PotentialProfile random_profile(std::mt19937_64& rng, double e, int max_segments,
                                double value_hi_frac) {
  std::uniform_int_distribution<int> nseg(1, max_segments);
  std::uniform_real_distribution<double> width(0.1, 0.8);
  std::uniform_real_distribution<double> value(0.0, value_hi_frac * e);
  std::vector<Segment> segs;
  double y = 0.0;
  const int n = nseg(rng);
  for (int i = 0; i < n; ++i) {
    const double w = width(rng);
    segs.push_back({y, y + w, Complex(value(rng), 0.0)});
    y += w;
  }
  return make_profile(std::move(segs));
}

bool SelftestReport::all_passed() const {
  for (const auto& s : suites) {
    if (s.failed > 0) return false;
  }
  return true;
}

int SelftestReport::total_failed() const {
  int n = 0;
  for (const auto& s : suites) n += s.failed;
  return n;
}

namespace {

GridSpec no_grid() {
  GridSpec g;
  g.points_per_wavelength = 0.0;
  return g;
}

using Check = std::function<bool(std::mt19937_64&)>;

SelftestSuite run_suite(const std::string& name, int count, std::mt19937_64& rng,
                        const Check& check, std::ostream& log) {
  SelftestSuite s;
  s.name = name;
  for (int i = 0; i < count; ++i) {
    bool ok = false;
    try {
      ok = check(rng);
    } catch (const Error&) {
      ok = false;
    }
    (ok ? s.passed : s.failed) += 1;
  }
  log << name << ": " << s.passed << " passed, " << s.failed << " failed\n";
  return s;
}

Window random_window(std::mt19937_64& rng, const PotentialProfile& p, double e) {
  const double wmax =
      std::min(min_wavelength(p, e) / 50.0, 0.5 * p.domain_length());
  std::uniform_real_distribution<double> wdist(0.2 * wmax, 0.95 * wmax);
  const double w = wdist(rng);
  std::uniform_real_distribution<double> pos(p.domain_lo(), p.domain_hi() - w);
  const double lo = pos(rng);
  return {lo, lo + w};
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed, int count, std::ostream& log) {
  std::mt19937_64 rng(seed);
  SelftestReport rep;

  rep.suites.push_back(run_suite(
      "unitarity+symmetry+current", count, rng,
      [](std::mt19937_64& r) {
        std::uniform_real_distribution<double> ed(0.5, 2.5);
        const double e = ed(r);
        const auto sol = solve(random_profile(r, e), e, no_grid());
        const double sym = std::abs(sol.s(0, 1) - sol.s(1, 0));
        const double current =
            std::abs(std::norm(sol.s(0, 0)) + std::norm(sol.s(1, 0)) - 1.0);
        return sol.unitarity_defect < 1e-10 && sym < 1e-10 && current < 1e-10;
      },
      log));

  rep.suites.push_back(run_suite(
      "absorber sub-unitarity", count, rng,
      [](std::mt19937_64& r) {
        const double e = 1.3;
        auto p = random_profile(r, e);
        const Window w = random_window(r, p, e);
        p = perturb(p, w, Complex(0.0, -0.05 * e));
        const auto sol = solve(p, e, no_grid());
        for (int b = 0; b < 2; ++b) {
          const double colsum =
              std::norm(sol.s(0, b)) + std::norm(sol.s(1, b));
          if (1.0 - colsum < -1e-12) return false;
        }
        return true;
      },
      log));

  rep.suites.push_back(run_suite(
      "asymptotic wavefunction vs S", count, rng,
      [](std::mt19937_64& r) {
        const double e = 1.1;
        const auto p = random_profile(r, e);
        const auto sol = solve(p, e, no_grid());
        // fit reflected amplitude from psi_1 outside the domain
        const double y = p.domain_lo() - 0.37;
        const double k1 = sol.channels.k1;
        const Complex inc = std::exp(kImagUnit * k1 * (y - p.domain_lo()));
        const Complex refl = (sol.psi(0, y) - inc) * inc;  // e^{+ik(y-yL)} undone
        if (std::abs(refl - sol.s(0, 0)) > 1e-8) return false;
        const double yr = p.domain_hi() + 0.53;
        const double k2 = sol.channels.k2;
        const Complex tw = std::exp(kImagUnit * k2 * (yr - p.domain_hi()));
        const Complex trans = sol.psi(0, yr) / tw;
        const Complex expected =
            std::sqrt(sol.channels.v1 / sol.channels.v2) * sol.s(1, 0);
        return std::abs(trans - expected) < 1e-8;
      },
      log));

  rep.suites.push_back(run_suite(
      "injectivity sum rule", count, rng,
      [](std::mt19937_64& r) {
        const double e = 1.3;
        const auto p = random_profile(r, e);
        const auto sd = s_derivative(p, e, random_window(r, p, e));
        return sd.defect < 1e-4;
      },
      log));

  rep.suites.push_back(run_suite(
      "reciprocity + sensitivity antisymmetry", count, rng,
      [](std::mt19937_64& r) {
        const double e = 1.3;
        const auto p = random_profile(r, e);
        const auto h = hierarchy(p, e, {random_window(r, p, e)});
        const auto& row = h.rows.front();
        if (std::abs(row.inj[0] - row.emis[0]) > 1e-8) return false;
        if (std::abs(row.inj[1] - row.emis[1]) > 1e-8) return false;
        const auto sd = s_derivative(p, e, row.window);
        return std::abs(sensitivity(sd, 1, 0) + sensitivity(sd, 0, 0)) < 1e-8;
      },
      log));

  rep.suites.push_back(run_suite(
      "clock normalization + tau_x identity", count, rng,
      [](std::mt19937_64& r) {
        const double e = 1.3;
        const auto p = random_profile(r, e);
        const Window w = random_window(r, p, e);
        const auto direct = spin_direct(p, w, 1e-3 * e, e);
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            const auto& d = direct[a][b];
            const double norm = d.sx * d.sx + d.sy * d.sy + d.sz * d.sz;
            if (std::abs(norm - 1.0) > 1e-10) return false;
          }
        }
        const auto taus = times_perturbative(p, w, e);
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            const auto& t = taus[a][b];
            if (t.blocked) continue;  // reflectionless draw
            const double lhs = t.tau_x * t.tau_x;
            const double rhs = t.tau_y * t.tau_y + t.tau_z * t.tau_z;
            if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, lhs)) return false;
            if (t.tau_x < 0.0) return false;
          }
        }
        return true;
      },
      log));

  rep.suites.push_back(run_suite(
      "off-diagonal sum rule + hermiticity", count, rng,
      [](std::mt19937_64& r) {
        const double e = 1.3;
        const auto p = random_profile(r, e);
        const Window w = random_window(r, p, e);
        const auto sd = s_derivative(p, e, w);
        const auto sol = solve(p, e, no_grid());
        for (int b = 0; b < 2; ++b) {
          for (int g = 0; g < 2; ++g) {
            const Complex lhs =
                pdos_offdiagonal(sd, 0, b, g) + pdos_offdiagonal(sd, 1, b, g);
            const Complex rhs = sol.integral_psi_conj_psi(b, g, w) /
                                (w.width() * kPlanckH *
                                 std::sqrt(sol.channels.v(b) * sol.channels.v(g)));
            const double scale = std::max(std::abs(lhs), std::abs(rhs));
            if (scale > 0.0 && std::abs(lhs - rhs) / scale > 1e-4) return false;
            const Complex herm = pdos_offdiagonal(sd, 0, g, b) +
                                 pdos_offdiagonal(sd, 1, g, b);
            if (std::abs(lhs - std::conj(herm)) > 1e-12 * std::max(1.0, scale)) {
              return false;
            }
          }
        }
        return true;
      },
      log));

  rep.suites.push_back(run_suite(
      "emittance zero sums", count, rng,
      [](std::mt19937_64& r) {
        const double e = 1.3;
        const auto p = random_profile(r, e);
        const double wmax = min_wavelength(p, e) / 50.0;
        const double lo = p.domain_lo();
        const double hi = std::min(lo + 8.0 * (0.9 * wmax), p.domain_hi());
        const auto rep_e = emittance_local_screening(p, e, tile_windows(lo, hi, 8));
        return rep_e.max_sum_defect < 1e-10;
      },
      log));

  rep.suites.push_back(run_suite(
      "perturb round trip", count, rng,
      [](std::mt19937_64& r) {
        // dyadic values keep the +delta/-delta round trip exact in binary
        std::uniform_int_distribution<int> grains(1, 1 << 20);
        const double scale = 1.0 / static_cast<double>(1 << 20);
        const double e = 1.0;
        auto p = random_profile(r, e);
        std::vector<Segment> segs = p.segments();
        for (auto& s : segs) s.value = Complex(grains(r) * scale, 0.0);
        p = make_profile(std::move(segs));
        const Window w = random_window(r, p, e);
        const Complex delta(grains(r) * scale, 0.0);
        const auto back = perturb(perturb(p, w, delta), w, -delta);
        std::uniform_real_distribution<double> pos(p.domain_lo(), p.domain_hi());
        for (int i = 0; i < 32; ++i) {
          const double y = pos(r);
          if (back.value_at(y) != p.value_at(y)) return false;
        }
        return true;
      },
      log));

  return rep;
}

}  // namespace qs1d
