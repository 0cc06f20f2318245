#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "navslip/dynamics.hpp"
#include "navslip/lame.hpp"

namespace navslip {

/// Differences w = u_a - u_b and phi = rho_a - rho_b at one time.
struct StateComparison {
  double t = 0.0;
  double w_l2 = 0.0;
  double w_h1 = 0.0;
  double w_h3 = 0.0;
  double phi_l2 = 0.0;
  double sq_err = 0.0;  ///< w_l2^2 + phi_l2^2
};

/// Throws InvalidArgument if the grids differ or the times differ by more
/// than 1e-12 relative.
StateComparison compare_states(const FluidState& a, const FluidState& b);

struct ComparisonMetrics {
  double k = 0.0;
  double sup_sq_err = 0.0;
  double sup_w_l2 = 0.0;
  double sup_phi_l2 = 0.0;
  double sup_w_h1 = 0.0;
  double trace_integral = 0.0;
  double energy_gap = 0.0;
  // a priori quantities of the run itself
  double sup_w_h3 = 0.0;
  double sup_rho_h2 = 0.0;
  double sup_rho_inv_linf = 0.0;
  double sup_u_h3 = 0.0;
  double mass_drift = 0.0;  ///< max relative |mass(t) - mass(0)|
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Least squares line through (log k, log value). Needs at least 3 points,
/// all coordinates positive and finite.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

struct InterpolationSample {
  double k = 0.0;
  double w_l2 = 0.0;
  double w_h1 = 0.0;
  double w_h3 = 0.0;
};

InterpolationSample interpolation_sample(double k, const VectorField& w);

struct InterpolationReport {
  double sigma = 2.0 / 3.0;
  std::optional<RateFit> l2_fit;
  std::optional<RateFit> h1_fit;
  double slope_ratio = 0.0;  ///< h1 slope / l2 slope
  double max_constant = 0.0; ///< max of ||w||_H1 / (||w||_L2^sigma ||w||_H3^(1 - sigma))
  bool trivial = false;      ///< every sample was zero
  bool passed = false;
};

/// Checks the H1 decay against sigma times the L2 decay, sigma = 2/3;
/// passes when the slope ratio is at least sigma - 0.1.
InterpolationReport interpolation_report(std::span<const InterpolationSample> samples);

struct SweepSetup {
  FluidState initial;
  PhysParams phys;           ///< the slip condition is replaced per run
  StepControl ctrl;          ///< fixed_dt = 0 means cfl_dt of the initial state
  double t_final = 0.5;
  std::vector<double> output_times;
  int threads = 1;
};

struct SweepReport {
  std::vector<ComparisonMetrics> metrics;  ///< descending k, k = 0 last
  std::vector<EnergyLedger> ledgers;       ///< aligned with metrics
  std::optional<RateFit> sq_err_fit;
  std::optional<RateFit> trace_fit;
  bool monotone = true;
  KUniformityReport k_uniformity;
  InterpolationReport interpolation;
  double m0 = 0.0;
  double dt = 0.0;
  double t_star = 0.0;
  bool blowup = false;
  std::string blowup_reason;
  double c_fit = 0.0;
  double energy_ref = 0.0;  ///< E of the k = 0 run at T*
  std::vector<std::pair<std::string, bool>> acceptance;

  bool accepted() const;
};

/// kinetic energy plus half the squared L2 norm of rho at t = 0.
double initial_m0(const FluidState& s);

/// Runs the k = 0 reference and every k in k_list with a shared dt and
/// compares each against the reference over [0, T*].
///
/// Throws InvalidArgument unless k_list contains 0 and, when it has positive
/// entries, at least 5 of them spanning 2 decades. Throws ExperimentFailure
/// if a run fails before the first output time.
SweepReport friction_sweep(const SweepSetup& setup, std::span<const double> k_list);

struct MmsSetup {
  double lx = 1.0;
  LameParams lame{0.1, 0.0};
  double pressure_amp = 1.0;
  double gamma = 1.4;
  double k = 0.0;
  double t_final = 0.5;
  double dt_per_h = 0.25;  ///< dt = dt_per_h * h
  TransportScheme scheme = TransportScheme::muscl_minmod;
  double linear_tol = 1e-11;
};

/// Manufactured solution u_x = (-z^2 + z + k mu) cos(a x) e^-t, u_z = 0,
/// rho = 1 + 0.1 sin(a x) e^-t, a = 2 pi / lx.
FluidState mms_exact(const Grid& g, const MmsSetup& s, double t);
Forcing mms_forcing(const MmsSetup& s);

struct MmsResidual {
  double momentum_l2 = 0.0;  ///< interior nodes
  double mass_l2 = 0.0;
};

/// Residual of the forced semi-discrete equations at the exact solution.
MmsResidual mms_semidiscrete_residual(const Grid& g, const MmsSetup& s, double t);

struct MmsLevel {
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  double u_error = 0.0;
  double rho_error = 0.0;
};

struct MmsReport {
  std::vector<MmsLevel> levels;
  RateFit u_order;
  RateFit rho_order;
};

/// nx = nz = n for every resolution; errors in L2 at t_final. Throws
/// ExperimentFailure if any run fails.
MmsReport mms_verify(const MmsSetup& setup, std::span<const int> resolutions);

}  // namespace navslip
