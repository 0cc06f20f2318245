#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "navslip/lame.hpp"
#include "navslip/mesh.hpp"
#include "navslip/transport.hpp"

namespace navslip {

/// Viscosities, gamma-law pressure P = A rho^gamma, and the wall slip.
class PhysParams {
 public:
  PhysParams(LameParams lame, double pressure_amp, double gamma, SlipBC bc);

  const LameParams& lame() const noexcept { return lame_; }
  double pressure_amp() const noexcept { return amp_; }
  double gamma() const noexcept { return gamma_; }
  const SlipBC& bc() const noexcept { return bc_; }
  PhysParams with_slip(SlipBC bc) const { return PhysParams(lame_, amp_, gamma_, bc); }

  double pressure(double rho) const { return amp_ * std::pow(rho, gamma_); }
  double sound_speed(double rho) const {
    return std::sqrt(amp_ * gamma_ * std::pow(rho, gamma_ - 1.0));
  }

  friend bool operator==(const PhysParams&, const PhysParams&) = default;

 private:
  LameParams lame_;
  double amp_;
  double gamma_;
  SlipBC bc_;
};

struct FluidState {
  ScalarField rho;
  VectorField u;
  double t = 0.0;

  /// Throws InvalidArgument unless rho > rho_floor, u . n = 0 on the walls
  /// to 1e-12 and every value is finite.
  void validate(double rho_floor = kDefaultRhoFloor) const;
  friend bool operator==(const FluidState&, const FluidState&) = default;
};

struct StepControl {
  double cfl_factor = 0.4;
  int picard_max = 1;
  double picard_tol = 1e-10;
  double linear_tol = 1e-10;
  double rho_floor = kDefaultRhoFloor;
  TransportScheme scheme = TransportScheme::upwind1;
  Closure closure = Closure::robin;
  /// When positive, every step uses this dt (still shortened to land on
  /// output times) instead of the CFL estimate of the current state.
  double fixed_dt = 0.0;

  void validate() const;
};

/// Source terms added to the mass and momentum equations, evaluated at a
/// time. Used only for manufactured solutions.
struct Forcing {
  std::function<ScalarField(const Grid&, double)> mass;
  std::function<VectorField(const Grid&, double)> momentum;
};

struct EnergyRecord {
  double t = 0.0;
  double mass = 0.0;
  double e_kin = 0.0;
  double dissipation = 0.0;
  double boundary_dissipation = 0.0;
  double pressure_work = 0.0;
  double energy_residual = 0.0;  ///< residual of the last step; 0 at t = 0
  double trace_accum = 0.0;      ///< time integral of the wall trace of |u|^2
  double u_h1 = 0.0, u_h2 = 0.0, u_h3 = 0.0;
  double rho_h1 = 0.0, rho_h2 = 0.0;
  double rho_inv_linf = 0.0;
  double ut_l2 = 0.0;
  // not part of the CSV ledger
  double ut_h1 = 0.0;
  double rho_t_l2 = 0.0;
  double u_l2 = 0.0, rho_l2 = 0.0;
  double grad_sq_accum = 0.0;  ///< time integral of ||grad u||_L2^2
};

struct EnergyLedger {
  std::vector<EnergyRecord> records;
  double residual_integral = 0.0;  ///< sum over steps of |r| dt
  int steps = 0;
};

double kinetic_energy(const FluidState& s);
/// Viscous work -<L_h u, u> over interior nodes, less the wall friction.
double viscous_dissipation(const VectorField& u, const PhysParams& p);
/// (1/k) times the wall trace of |u|^2; zero for k = 0.
double boundary_dissipation(const VectorField& u, const PhysParams& p);
/// <u, grad_h P(rho)> over interior nodes.
double pressure_work(const FluidState& s, const PhysParams& p);

/// cfl * min(h) / (max|u| + c_s(max rho)).
double cfl_dt(const FluidState& s, const PhysParams& p, const StepControl& ctrl);

/// Implicit viscous update at fixed new density:
/// (rho_new I - dt L_h) u' = rho_new u - dt [rho_new (u . grad) u + grad P(rho_new)].
VectorField momentum_step(const ScalarField& rho_new, const FluidState& state,
                          double dt, const PhysParams& p, const StepControl& ctrl,
                          const VectorField* extra_rhs = nullptr);

struct StepDiagnostics {
  double dt = 0.0;
  double energy_residual = 0.0;
  int picard_iterations = 0;
};

/// Transport with u^n, then momentum with rho^{n+1}; with picard_max > 1
/// the transport is redone with (u^n + u^{n+1}) / 2 until the velocity
/// update changes by less than picard_tol in L2.
FluidState step(const FluidState& state, const PhysParams& p,
                const StepControl& ctrl, double dt,
                const Forcing* forcing = nullptr,
                StepDiagnostics* diag = nullptr);
FluidState step(const FluidState& state, const PhysParams& p,
                const StepControl& ctrl);

struct RunResult {
  std::vector<FluidState> trajectory;
  EnergyLedger ledger;
  bool blowup = false;
  double failure_time = 0.0;
  std::string failure;
  double dt_first = 0.0;
};

/// Integrates to t_final. The initial state is always the first snapshot;
/// steps are shortened to land exactly on output_times. A failing step ends
/// the run early with blowup set and the partial trajectory kept.
RunResult run(const FluidState& initial, const PhysParams& p,
              const StepControl& ctrl, double t_final,
              const std::vector<double>& output_times,
              const Forcing* forcing = nullptr);

/// output_count evenly spaced times in (0, t_final].
std::vector<double> uniform_output_times(double t_final, int output_count);

/// rho0 = 1 + 0.1 cos(2 pi x / lx),
/// u0 = (0.5 sin(pi z) (1 + 0.1 cos(2 pi x / lx)), 0).
FluidState default_initial_state(const Grid& g);
/// rho0 = 1, u0 = (amplitude sin(pi z), 0).
FluidState shear_initial_state(const Grid& g, double amplitude);
FluidState equilibrium_state(const Grid& g);
/// Same density as the default data, u0 = (0.5 sin^2(pi z) (1 + 0.1 cos(2 pi x / lx)), 0);
/// u0 and its normal derivative vanish on the walls, so the Robin relation
/// holds at t = 0 for every k.
FluidState compatible_initial_state(const Grid& g);

/// Builds the ledger row of a state. prev, when given, supplies the
/// backward difference quotients.
EnergyRecord measure_state(const FluidState& s, const PhysParams& p,
                           const FluidState* prev);

}  // namespace navslip
