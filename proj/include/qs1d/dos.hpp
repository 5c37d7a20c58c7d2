#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qs1d/potential.hpp"
#include "qs1d/scatter1d.hpp"
#include "qs1d/types.hpp"

namespace qs1d {

/// Window-averaged functional derivative of the scattering matrix with
/// respect to the local potential, d(out, in), per unit energy * length.
/// Computed by a symmetric finite difference on the windowed perturbation
/// with one Richardson pass; `defect` is the relative mismatch of the
/// injectivity sum rule (PDOS sums vs |psi|^2/(hv)) on this window.
struct SDerivative {
  Matrix2c d;
  Window window;
  double fd_step = 0.0;
  double defect = 0.0;
  std::array<double, 2> defect_by_channel{0.0, 0.0};

  Matrix2c smatrix;    // unperturbed S, kept for the quadratic forms
  Channels channels;
};

struct DosWindowRow {
  Window window;
  double pdos[2][2];   // nu(alpha, w, beta)
  double inj[2];       // nu(w, beta)  = sum_alpha pdos
  double emis[2];      // nu(alpha, w) = sum_beta  pdos
  double ldos;         // nu(w)
  double defect;       // injectivity sum-rule defect, max over beta
};

/// The density-of-states hierarchy on a set of windows.
struct DosHierarchy {
  std::vector<DosWindowRow> rows;
  Matrix2c smatrix;
  Channels channels;

  double max_defect() const;
};

struct WignerSmithMatrix {
  Matrix2c d;               // D(in beta, in gamma), units 1/energy
  double hermiticity_defect = 0.0;
  double fd_step = 0.0;
};

/// Shortest propagating wavelength of the problem at energy e; local
/// quantities use windows no wider than this over 50.
double min_wavelength(const PotentialProfile& profile, double e);

/// `requested_step` overrides the adaptive default of 1e-5*E; a requested
/// step below 1e3*eps*E (including 0) raises StepUnderflow.
SDerivative s_derivative(const PotentialProfile& profile, double e,
                         const Window& window,
                         std::optional<double> requested_step = std::nullopt);

/// Partial density of states nu(alpha, w, beta), Eq. form
/// -(1/4*pi*i) (S* dS - dS* S); the imaginary residue is checked against
/// 1e-10 and discarded.
double pdos(const SDerivative& sd, ChannelIndex alpha, ChannelIndex beta);
double pdos(const PotentialProfile& profile, double e, const Window& window,
            ChannelIndex alpha, ChannelIndex beta);

/// Sensitivity eta(alpha, w, beta) = -(1/4*pi) (S* dS + dS* S), i.e.
/// -(1/4*pi) d|S_ab|^2/dV per unit length.  (Raising a barrier under
/// tunneling lowers T, so eta(2,w,1) > 0 there; the sign is fixed by the
/// Larmor spin-rotation channel it feeds.)
double sensitivity(const SDerivative& sd, ChannelIndex alpha, ChannelIndex beta);
double sensitivity(const PotentialProfile& profile, double e, const Window& window,
                   ChannelIndex alpha, ChannelIndex beta);

/// Off-diagonal PDOS-matrix element nu(alpha, w, beta, gamma).
Complex pdos_offdiagonal(const SDerivative& sd, ChannelIndex alpha,
                         ChannelIndex beta, ChannelIndex gamma);
Complex pdos_offdiagonal(const PotentialProfile& profile, double e,
                         const Window& window, ChannelIndex alpha,
                         ChannelIndex beta, ChannelIndex gamma);

/// Full hierarchy (PDOS, injectivities, emissivities, LDOS) on windows,
/// with the per-window injectivity sum-rule defect attached.
DosHierarchy hierarchy(const PotentialProfile& profile, double e,
                       const std::vector<Window>& windows);

/// Convenience: `count` equal windows tiling [lo, hi].
std::vector<Window> tile_windows(double lo, double hi, std::size_t count);

/// Wigner-Smith matrix D(beta,gamma) = (1/2*pi*i) sum_a S*_{a beta} dS_{a gamma}/dE
/// by central finite difference in E with one Richardson pass.  The
/// anti-Hermitian residue is checked (SymmetryDefect above 1e-6), then the
/// Hermitian part is returned.
WignerSmithMatrix wigner_smith(const PotentialProfile& profile, double e);

}  // namespace qs1d
