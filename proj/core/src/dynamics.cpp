#include "navslip/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "navslip/error.hpp"

namespace navslip {

PhysParams::PhysParams(LameParams lame, double pressure_amp, double gamma, SlipBC bc)
    : lame_(lame), amp_(pressure_amp), gamma_(gamma), bc_(bc) {
  if (!(pressure_amp > 0.0) || !std::isfinite(pressure_amp))
    throw InvalidArgument("PhysParams: pressure amplitude A must be positive");
  if (!(gamma >= 1.0) || !std::isfinite(gamma))
    throw InvalidArgument("PhysParams: gamma must be >= 1");
}

void FluidState::validate(double rho_floor) const {
  if (!(rho.grid() == u.grid())) throw InvalidArgument("FluidState: grid mismatch");
  if (!rho.all_finite() || !u.all_finite() || !std::isfinite(t))
    throw InvalidArgument("FluidState: non-finite value");
  if (!(rho.min() > rho_floor))
    throw InvalidArgument("FluidState: density at or below the floor (" +
                          std::to_string(rho.min()) + ")");
  const Grid& g = rho.grid();
  for (Wall w : {Wall::bottom, Wall::top})
    for (std::size_t n : g.wall_nodes(w))
      if (std::abs(u(g.dim() - 1, n)) > 1e-12)
        throw InvalidArgument("FluidState: nonzero normal velocity on a wall");
}

void StepControl::validate() const {
  if (!(cfl_factor > 0.0 && cfl_factor <= 1.0))
    throw InvalidArgument("StepControl: cfl_factor must lie in (0, 1]");
  if (picard_max < 1) throw InvalidArgument("StepControl: picard_max must be >= 1");
  if (!(picard_tol > 0.0) || !(linear_tol > 0.0) || !(rho_floor > 0.0))
    throw InvalidArgument("StepControl: tolerances and rho_floor must be positive");
  if (!(fixed_dt >= 0.0)) throw InvalidArgument("StepControl: fixed_dt must be >= 0");
}

// ---------------------------------------------------------------------------
// ledger quantities

double kinetic_energy(const FluidState& s) {
  const Grid& g = s.rho.grid();
  const std::size_t N = g.node_count();
  double e = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    double u2 = 0.0;
    for (int c = 0; c < g.dim(); ++c) u2 += s.u(c, n) * s.u(c, n);
    e += g.weight(n) * s.rho[n] * u2;
  }
  return 0.5 * e;
}

double boundary_dissipation(const VectorField& u, const PhysParams& p) {
  if (p.bc().no_slip()) return 0.0;
  return p.bc().alpha() * boundary_trace_l2(u);
}

double viscous_dissipation(const VectorField& u, const PhysParams& p) {
  return lame_energy_form(u, p.lame()) - boundary_dissipation(u, p);
}

namespace {

ScalarField pressure_field(const ScalarField& rho, const PhysParams& p) {
  ScalarField P(rho.grid());
  for (std::size_t n = 0; n < rho.size(); ++n) P[n] = p.pressure(rho[n]);
  return P;
}

// (u . grad_h) u, componentwise
VectorField convection(const VectorField& u) {
  const Grid& g = u.grid();
  VectorField out(g);
  for (int c = 0; c < g.dim(); ++c) {
    const ScalarField uc = u.component(c);
    auto dst = out.component_values(c);
    for (Axis a : g.axes()) {
      const ScalarField d = apply_derivative(uc, a, 1);
      const auto ua = u.component_values(g.component(a));
      for (std::size_t n = 0; n < d.size(); ++n) dst[n] += ua[n] * d[n];
    }
  }
  return out;
}

}  // namespace

double pressure_work(const FluidState& s, const PhysParams& p) {
  return interior_inner(s.u, gradient(pressure_field(s.rho, p)));
}

double cfl_dt(const FluidState& s, const PhysParams& p, const StepControl& ctrl) {
  const Grid& g = s.rho.grid();
  double h = std::min(g.hx(), g.hz());
  if (g.dim() == 3) h = std::min(h, g.hy());
  const double cs = p.sound_speed(s.rho.max());
  return ctrl.cfl_factor * h / (s.u.max_magnitude() + cs);
}

// ---------------------------------------------------------------------------
// stepping

VectorField momentum_step(const ScalarField& rho_new, const FluidState& state,
                          double dt, const PhysParams& p, const StepControl& ctrl,
                          const VectorField* extra_rhs) {
  if (!(rho_new.min() > ctrl.rho_floor))
    throw InvalidArgument("momentum_step: density at or below the floor");
  const Grid& g = rho_new.grid();
  const std::size_t N = g.node_count();
  const VectorField conv = convection(state.u);
  const VectorField gradP = gradient(pressure_field(rho_new, p));
  VectorField rhs(g);
  for (int c = 0; c < g.dim(); ++c)
    for (std::size_t n = 0; n < N; ++n)
      rhs(c, n) = rho_new[n] * state.u(c, n) -
                  dt * (rho_new[n] * conv(c, n) + gradP(c, n));
  if (extra_rhs) rhs += *extra_rhs;
  return solve_implicit_momentum(rho_new, dt, rhs, p.bc(), p.lame(), ctrl.linear_tol,
                                 ctrl.closure, &state.u);
}

FluidState step(const FluidState& state, const PhysParams& p,
                const StepControl& ctrl, double dt, const Forcing* forcing,
                StepDiagnostics* diag) {
  if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
  const Grid& g = state.rho.grid();
  const double t_new = state.t + dt;

  auto advance_density = [&](const VectorField& u_transport) {
    ScalarField rho_new =
        continuity_step(state.rho, u_transport, dt, ctrl.scheme, ctrl.rho_floor);
    if (forcing && forcing->mass) {
      rho_new += dt * forcing->mass(g, state.t);
      if (!(rho_new.min() > ctrl.rho_floor))
        throw PositivityViolation("step: forced density fell below the floor",
                                  rho_new.min());
    }
    return rho_new;
  };

  auto source = [&]() -> std::optional<VectorField> {
    if (!forcing || !forcing->momentum) return std::nullopt;
    VectorField f = forcing->momentum(g, t_new);
    if (forcing->mass) {
      const ScalarField fm = forcing->mass(g, t_new);
      for (int c = 0; c < g.dim(); ++c)
        for (std::size_t n = 0; n < g.node_count(); ++n) f(c, n) -= state.u(c, n) * fm[n];
    }
    f *= dt;
    return f;
  };

  ScalarField rho_new = advance_density(state.u);
  auto extra = source();
  VectorField u_new = momentum_step(rho_new, state, dt, p, ctrl, extra ? &*extra : nullptr);
  int iterations = 1;
  while (iterations < ctrl.picard_max) {
    VectorField mid = 0.5 * (state.u + u_new);
    rho_new = advance_density(mid);
    VectorField u_next =
        momentum_step(rho_new, state, dt, p, ctrl, extra ? &*extra : nullptr);
    ++iterations;
    const double change = sobolev_norm(u_next - u_new, 0);
    u_new = std::move(u_next);
    if (change < ctrl.picard_tol) break;
  }

  FluidState out{std::move(rho_new), std::move(u_new), t_new};
  if (!out.rho.all_finite() || !out.u.all_finite())
    throw SolverDivergence("step: non-finite state", 0.0, 0);
  if (diag) {
    diag->dt = dt;
    diag->picard_iterations = iterations;
    diag->energy_residual = (kinetic_energy(out) - kinetic_energy(state)) / dt +
                            lame_energy_form(out.u, p.lame()) + pressure_work(out, p);
  }
  return out;
}

FluidState step(const FluidState& state, const PhysParams& p, const StepControl& ctrl) {
  return step(state, p, ctrl, cfl_dt(state, p, ctrl));
}

EnergyRecord measure_state(const FluidState& s, const PhysParams& p,
                           const FluidState* prev) {
  EnergyRecord r;
  r.t = s.t;
  r.mass = total_mass(s.rho);
  r.e_kin = kinetic_energy(s);
  r.boundary_dissipation = boundary_dissipation(s.u, p);
  r.dissipation = viscous_dissipation(s.u, p);
  r.pressure_work = pressure_work(s, p);
  r.u_l2 = sobolev_norm(s.u, 0);
  r.u_h1 = sobolev_norm(s.u, 1);
  r.u_h2 = sobolev_norm(s.u, 2);
  r.u_h3 = sobolev_norm(s.u, 3);
  r.rho_l2 = sobolev_norm(s.rho, 0);
  r.rho_h1 = sobolev_norm(s.rho, 1);
  r.rho_h2 = sobolev_norm(s.rho, 2);
  r.rho_inv_linf = 1.0 / s.rho.min();
  if (prev && s.t > prev->t) {
    const double dt = s.t - prev->t;
    const VectorField ut = (1.0 / dt) * (s.u - prev->u);
    r.ut_l2 = sobolev_norm(ut, 0);
    r.ut_h1 = sobolev_norm(ut, 1);
    r.rho_t_l2 = sobolev_norm((1.0 / dt) * (s.rho - prev->rho), 0);
  }
  return r;
}

std::vector<double> uniform_output_times(double t_final, int output_count) {
  if (output_count < 1) throw InvalidArgument("uniform_output_times: count must be >= 1");
  std::vector<double> out;
  for (int i = 1; i <= output_count; ++i)
    out.push_back(i == output_count ? t_final : t_final * i / output_count);
  return out;
}

namespace {

double grad_sq(const VectorField& u) {
  const double h1 = sobolev_norm(u, 1), l2 = sobolev_norm(u, 0);
  return std::max(0.0, h1 * h1 - l2 * l2);
}

}  // namespace

RunResult run(const FluidState& initial, const PhysParams& p, const StepControl& ctrl,
              double t_final, const std::vector<double>& output_times,
              const Forcing* forcing) {
  ctrl.validate();
  initial.validate(ctrl.rho_floor);
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
    throw InvalidArgument("run: t_final must be >= 0");
  if (!std::is_sorted(output_times.begin(), output_times.end()))
    throw InvalidArgument("run: output times must be sorted");
  for (double t : output_times)
    if (t < initial.t || t > initial.t + t_final)
      throw InvalidArgument("run: output time outside [0, t_final]");

  RunResult res;
  res.trajectory.push_back(initial);
  res.ledger.records.push_back(measure_state(initial, p, nullptr));
  const double t_end = initial.t + t_final;
  std::vector<double> targets;
  for (double t : output_times)
    if (t > initial.t && (targets.empty() || t > targets.back())) targets.push_back(t);
  if (t_final > 0.0 && (targets.empty() || targets.back() < t_end)) targets.push_back(t_end);

  FluidState state = initial;
  double trace = 0.0, gsq = 0.0;
  std::size_t next = 0;
  while (next < targets.size()) {
    const double target = targets[next];
    double dt = ctrl.fixed_dt > 0.0 ? ctrl.fixed_dt : cfl_dt(state, p, ctrl);
    const bool landing = target - state.t <= dt * (1.0 + 1e-9);
    if (landing) dt = target - state.t;
    StepDiagnostics diag;
    FluidState next_state;
    try {
      next_state = step(state, p, ctrl, dt, forcing, &diag);
    } catch (const std::exception& e) {
      res.blowup = true;
      res.failure_time = state.t;
      res.failure = e.what();
      return res;
    }
    if (res.ledger.steps == 0) res.dt_first = dt;
    if (landing) next_state.t = target;
    ++res.ledger.steps;
    trace += dt * boundary_trace_l2(next_state.u);
    gsq += dt * grad_sq(next_state.u);
    res.ledger.residual_integral += std::abs(diag.energy_residual) * dt;
    if (landing) {
      EnergyRecord rec = measure_state(next_state, p, &state);
      rec.energy_residual = diag.energy_residual;
      rec.trace_accum = trace;
      rec.grad_sq_accum = gsq;
      res.ledger.records.push_back(rec);
      res.trajectory.push_back(next_state);
      ++next;
    }
    state = std::move(next_state);
  }
  return res;
}

// ---------------------------------------------------------------------------
// initial data

FluidState default_initial_state(const Grid& g) {
  const double k = 2.0 * std::numbers::pi / g.lx();
  FluidState s;
  s.rho = ScalarField::from_function(
      g, [&](double x, double, double) { return 1.0 + 0.1 * std::cos(k * x); });
  s.u = VectorField(g);
  const std::size_t N = g.node_count();
  for (std::size_t n = 0; n < N; ++n) {
    const auto c = g.coords(n);
    s.u(0, n) = g.on_wall(n) ? 0.0
                             : 0.5 * std::sin(std::numbers::pi * c[2]) *
                                   (1.0 + 0.1 * std::cos(k * c[0]));
  }
  return s;
}

FluidState shear_initial_state(const Grid& g, double amplitude) {
  FluidState s;
  s.rho = ScalarField(g, 1.0);
  s.u = VectorField(g);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    s.u(0, n) = g.on_wall(n) ? 0.0
                             : amplitude * std::sin(std::numbers::pi * g.coords(n)[2]);
  return s;
}

FluidState compatible_initial_state(const Grid& g) {
  FluidState s = default_initial_state(g);
  const double k = 2.0 * std::numbers::pi / g.lx();
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const auto c = g.coords(n);
    const double sz = std::sin(std::numbers::pi * c[2]);
    s.u(0, n) = g.on_wall(n) ? 0.0 : 0.5 * sz * sz * (1.0 + 0.1 * std::cos(k * c[0]));
  }
  return s;
}

FluidState equilibrium_state(const Grid& g) {
  return FluidState{ScalarField(g, 1.0), VectorField(g), 0.0};
}

}  // namespace navslip
