#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qs1d/potential.hpp"
#include "qs1d/types.hpp"

namespace qs1d {

/// Controls the sampling grid attached to a ScatteringSolution.  The grid
/// is for dumps only; wavefunction values are always evaluated from the
/// exact per-segment plane-wave solution.
struct GridSpec {
  double points_per_wavelength = 40.0;  // must resolve lambda_min/20
  std::size_t max_points = 200000;
};

/// Scattering state of the two-lead problem at one energy.
///
/// The 2x2 scattering matrix is indexed s(out, in) with 0 = contact 1
/// (y -> -inf) and 1 = contact 2 (y -> +inf).  Phases are referenced at
/// the domain edges: for incidence from the left
///   psi_1(y) = e^{ik1(y-yL)} + S11 e^{-ik1(y-yL)},   y <= yL,
///   psi_1(y) = sqrt(v1/v2) S21 e^{ik2(y-yR)},        y >= yR,
/// and mirrored for incidence from the right (incident e^{-ik2(y-yR)},
/// reflected S22 e^{+ik2(y-yR)}, transmitted sqrt(v2/v1) S12 e^{-ik1(y-yL)}).
class ScatteringSolution {
 public:
  struct Medium {
    double y_lo;
    double y_hi;
    double y_ref;    // phase reference of the local plane waves
    Complex q;       // local wavevector sqrt(E - V)
    Complex a[2];    // e^{+iq(y-y_ref)} amplitude, per incidence channel
    Complex b[2];    // e^{-iq(y-y_ref)} amplitude, per incidence channel
  };

  Matrix2c s;                 // scattering matrix, s(out, in)
  Channels channels;
  double unitarity_defect = 0.0;   // max-norm of S^dag S - I
  std::vector<Medium> media;       // left contact, segments..., right contact

  Eigen::VectorXd grid;            // sample positions (edges + fill)
  Eigen::VectorXcd psi1, psi2;     // wavefunctions on the grid

  /// Exact wavefunction of incidence channel `beta` at any position.
  Complex psi(ChannelIndex beta, double y) const;

  /// Exact integral over [w.y_lo, w.y_hi] of conj(psi_beta) * psi_gamma.
  Complex integral_psi_conj_psi(ChannelIndex beta, ChannelIndex gamma,
                                const Window& w) const;

 private:
  const Medium& medium_at(double y) const;
};

/// Scattering matrices of the Zeeman-split problem: spin up travels in
/// V - hbar*omega_l/2 on the field window, spin down in V + hbar*omega_l/2.
struct SpinorSolution {
  Matrix2c s_plus;
  Matrix2c s_minus;
  double omega_l = 0.0;
  Channels channels;
};

/// Asymptotic lead data at energy e; throws EvanescentChannel unless both
/// channels propagate (E strictly above both asymptotic levels).
Channels make_channels(const PotentialProfile& profile, double e);

/// Solves the stationary scattering problem by composing per-segment
/// analytic transfer matrices in scaled (overflow-free) form.  Throws
/// NumericalInstability when the composed matrix condition estimate
/// exceeds 1e14 (hopelessly opaque tunneling).
ScatteringSolution solve(const PotentialProfile& profile, double e,
                         const GridSpec& grid = {});

/// Two scalar solves with the window value shifted by -/+ hbar*omega_l/2.
SpinorSolution solve_spinor(const PotentialProfile& profile, const Window& window,
                            double omega_l, double e, const GridSpec& grid = {});

/// |psi_beta(y)|^2 / (h v_beta): the wavefunction form of the injectivity.
double density(const ScatteringSolution& sol, ChannelIndex beta, double y);

/// Window mean of |psi_beta|^2 / (h v_beta), from the exact segment integrals.
double density_window_mean(const ScatteringSolution& sol, ChannelIndex beta,
                           const Window& w);

}  // namespace qs1d
