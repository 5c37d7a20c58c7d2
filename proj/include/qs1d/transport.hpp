#pragma once

#include <array>
#include <vector>

#include "qs1d/dos.hpp"
#include "qs1d/potential.hpp"
#include "qs1d/types.hpp"

namespace qs1d {

/// Weakly coupled tunnel tip (or voltage probe) attached at position x.
struct TipCoupling {
  double x = 0.0;       // attachment point
  double t2 = 0.0;      // coupling energy squared |t|^2
  double nu_tip = 1.0;  // tip density of states

  /// First-order validity measure 4*pi^2 * |t|^2 * nu_tip * ldos(x).
  static constexpr double kValidityLimit = 0.1;
};

struct AbsorptionResult {
  Matrix2c s_gamma;                    // S with -i*hbar*Gamma on the window
  std::array<double, 2> prob[2];       // |S^G_{alpha beta}|^2, [alpha][beta]
  std::array<double, 2> deficit;       // 1 - sum_alpha |S^G_{alpha beta}|^2, per beta
  std::array<double, 2> first_order;   // Gamma * nu(w,beta) * width
  double defect = 0.0;                 // hierarchy oracle defect at the window
};

struct SourceResult {
  Matrix2c s_gamma;                    // S with +i*hbar*Gamma on the window
  std::array<double, 2> j_out;         // emitted current into contact alpha (positive)
  std::array<double, 2> first_order;   // Gamma * nu(alpha,w) * width
  double total = 0.0;                  // sum_alpha j_out
  double total_first_order = 0.0;      // Gamma * nu(w) * width
};

struct BardeenResult {
  std::array<double, 2> t_tip_from;    // T_{tip,alpha} = 4pi^2 nu_tip |t|^2 nu(x,alpha)
  std::array<double, 2> t_to_tip;      // T_{alpha,tip} = 4pi^2 nu(alpha,x) |t|^2 nu_tip
  double prob_corrected[2][2];         // |S^tip_{alpha beta}|^2 to first order
  double validity = 0.0;               // 4pi^2 |t|^2 nu_tip ldos(x)
  double defect = 0.0;                 // injectivity sum-rule defect at x
};

struct VoltageProbeResult {
  double g_closed_form = 0.0;   // first-order closed form from the hierarchy
  double g_assembled = 0.0;     // three-terminal assembly, probe realized as
                                // an exact optical sink/source pair
  double t_coherent = 0.0;      // transmission with the sink attached
  double gamma_equivalent = 0.0;  // Gamma * width = 4pi^2 |t|^2 nu_tip / 2h
  double defect = 0.0;            // injectivity sum-rule defect at x
};

struct OpticalDephasingResult {
  double g = 0.0;               // exact coherent part + re-injected fraction
  double g_first_order = 0.0;   // (e^2/h)(T - Gamma w [nu(2,w,1) - nu(2,w)nu(w,1)/nu(w)])
  double absorbed = 0.0;        // exact absorbed flux for incidence from 1
  double reinjected = 0.0;      // equals absorbed by construction
};

/// Emittance matrix and capacitance data; entries in units of e^2/energy
/// with e^2 = 1 (report in units of e^2 * DOS).
struct EmittanceReport {
  Eigen::Matrix2d e_matrix = Eigen::Matrix2d::Zero();
  double c_mu = 0.0;
  double c_geom = 0.0;
  double d_total = 0.0;
  std::vector<double> per_channel;
  double max_sum_defect = 0.0;  // largest |row or column sum|
};

/// Region-integrated semiclassical PDOS of the saddle constriction,
/// D_{alpha k beta} = D_k (T/2 + delta_ab (R delta_ak - T/2)).
struct SemiclassicalPdos {
  double d[2][2][2];          // [alpha][region k][beta]
  double t = 0.0;
  double r = 0.0;
  double d_region[2];         // D_k = D/2
  double inj[2][2];           // D^i_{k beta} = sum_alpha
  double emis[2][2];          // D^e_{alpha k} = sum_beta
};

/// Narrow probe window (lambda_min/64 wide) centered on the tip position;
/// point values of the hierarchy are window means over it.
Window tip_window(const PotentialProfile& profile, double e, double x);

AbsorptionResult absorption_probabilities(const PotentialProfile& profile,
                                          const Window& window, double gamma,
                                          double e);

SourceResult source_currents(const PotentialProfile& profile, const Window& window,
                             double gamma, double e);

BardeenResult bardeen_transmissions(const PotentialProfile& profile, double e,
                                    const TipCoupling& tip);

VoltageProbeResult voltage_probe_conductance(const PotentialProfile& profile,
                                             double e, const TipCoupling& tip);

OpticalDephasingResult optical_dephasing_conductance(const PotentialProfile& profile,
                                                     double e, const Window& window,
                                                     double gamma);

/// Local-screening emittance: E_ab = e^2 sum_w width [nu(a,w,b) - nu(a,w)nu(w,b)/nu(w)].
EmittanceReport emittance_local_screening(const PotentialProfile& profile, double e,
                                          const std::vector<Window>& windows);

SemiclassicalPdos saddle_pdos(double t, double d_total);

/// Single- or multi-channel saddle emittance, per channel
///   E_n = R_n C_mu,n - D_n T_n^2 / 4,   C_mu,n = R_n / (1/C + 4/D_n),
/// summed over channels; c_geom may be +infinity (non-interacting limit).
EmittanceReport saddle_emittance(const std::vector<double>& t_channels,
                                 const std::vector<double>& d_per_channel,
                                 double c_geom);

/// Smooth-step transmission model for the saddle sweep.
struct SaddleModel {
  std::vector<double> offsets{0.0};  // channel thresholds epsilon_n
  double smoothness = 0.35;
  double e_fermi = 0.0;
  double d_base = 0.5;               // per-channel background DOS
  double d_amp = 10.0;               // threshold DOS enhancement
  double c_geom = 1.0;

  double transmission(std::size_t n, double u0) const;
  double dos(std::size_t n, double u0) const;  // d_base + 4 d_amp T (1-T)
  EmittanceReport emittance(double u0) const;
};

}  // namespace qs1d
