#include <doctest.h>

#include <cmath>
#include <numbers>

#include "navslip/dynamics.hpp"
#include "navslip/error.hpp"
#include "oracles.hpp"

using namespace navslip;
using std::numbers::pi;

namespace {

PhysParams phys(double k = 0.0) { return PhysParams(LameParams(0.1, 0.0), 1.0, 1.4, SlipBC(k)); }

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(PhysParams(LameParams(0.1, 0.0), 0.0, 1.4, SlipBC(0.0)), InvalidArgument);
  CHECK_THROWS_AS(PhysParams(LameParams(0.1, 0.0), 1.0, 0.9, SlipBC(0.0)), InvalidArgument);
  StepControl c;
  CHECK_NOTHROW(c.validate());
  c.cfl_factor = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = StepControl{};
  c.picard_max = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("cfl time step") {
  const Grid g = build_grid(1.0, 64, 64);
  FluidState s = equilibrium_state(g);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    if (!g.on_wall(n)) s.u(0, n) = n == g.index(3, 5) ? 1.0 : 0.5;
  StepControl c;
  const double expected = 0.4 * (1.0 / 64.0) / (1.0 + std::sqrt(1.4));
  CHECK(cfl_dt(s, phys(), c) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(cfl_dt(s, phys(), c) == doctest::Approx(2.863e-3).epsilon(1e-3));

  const PhysParams iso(LameParams(0.1, 0.0), 1.0, 1.0, SlipBC(0.0));
  CHECK(cfl_dt(equilibrium_state(g), iso, c) == doctest::Approx(0.4 / 64.0));
  CHECK(cfl_dt(equilibrium_state(build_grid(1.0, 128, 128)), iso, c) ==
        doctest::Approx(0.5 * cfl_dt(equilibrium_state(g), iso, c)));
}

TEST_CASE("equilibrium is a fixed point") {
  const Grid g = build_grid(1.0, 16, 16);
  const FluidState eq = equilibrium_state(g);
  StepDiagnostics d;
  StepControl c;
  const FluidState a = step(eq, phys(0.1), c, 0.01, nullptr, &d);
  CHECK(a.rho == eq.rho);
  CHECK(a.u == eq.u);
  CHECK(d.energy_residual == 0.0);
  c.picard_max = 3;
  const FluidState b = step(eq, phys(0.1), c, 0.01);
  CHECK(b == a);

  const RunResult r = run(eq, phys(), StepControl{}, 1.0, uniform_output_times(1.0, 5));
  CHECK_FALSE(r.blowup);
  REQUIRE(r.trajectory.size() == 6);
  for (const auto& s : r.trajectory) {
    CHECK(s.rho == eq.rho);
    CHECK(s.u == eq.u);
  }
  for (const auto& rec : r.ledger.records) CHECK(rec.e_kin == 0.0);
}

TEST_CASE("zero horizon run") {
  const Grid g = build_grid(1.0, 8, 8);
  const RunResult r = run(default_initial_state(g), phys(), StepControl{}, 0.0, {});
  CHECK(r.trajectory.size() == 1);
  CHECK(r.ledger.records.size() == 1);
  CHECK(r.ledger.steps == 0);
}

TEST_CASE("snapshots land on output times and runs are deterministic") {
  const Grid g = build_grid(1.0, 16, 16);
  const std::vector<double> times{0.013, 0.05, 0.1};
  const RunResult a = run(default_initial_state(g), phys(0.1), StepControl{}, 0.1, times);
  const RunResult b = run(default_initial_state(g), phys(0.1), StepControl{}, 0.1, times);
  REQUIRE(a.trajectory.size() == 4);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(a.trajectory[i + 1].t == times[i]);
  CHECK(a.trajectory == b.trajectory);
  CHECK_THROWS_AS(run(default_initial_state(g), phys(), StepControl{}, 0.1, {0.2}),
                  InvalidArgument);
}

TEST_CASE("initial data") {
  const Grid g = build_grid(1.0, 16, 16);
  for (const FluidState& s : {default_initial_state(g), compatible_initial_state(g),
                              shear_initial_state(g, 0.3), equilibrium_state(g)}) {
    CHECK_NOTHROW(s.validate());
    for (Wall w : {Wall::bottom, Wall::top})
      for (std::size_t n : g.wall_nodes(w)) CHECK(s.u.values()[n] == 0.0);
  }
  FluidState bad = default_initial_state(g);
  bad.u(1, g.wall_nodes(Wall::bottom)[0]) = 1e-6;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = default_initial_state(g);
  bad.rho[4] = 1e-9;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("shear decays like the heat equation") {
  const Grid g = build_grid(1.0, 8, 64);
  const RunResult r = run(shear_initial_state(g, 0.01), phys(), StepControl{}, 0.1, {0.1});
  double peak = 0;
  for (std::size_t n = 0; n < g.node_count(); ++n)
    peak = std::max(peak, std::abs(r.trajectory.back().u(0, n)));
  const double expected = 0.01 * std::exp(-0.1 * pi * pi * 0.1);
  CHECK(expected == doctest::Approx(0.01 * 0.9061).epsilon(1e-4));
  CHECK(std::abs(peak / expected - 1.0) < 0.05);

  const RunResult s = run(shear_initial_state(g, 0.5), phys(), StepControl{}, 0.3,
                          uniform_output_times(0.3, 10));
  for (std::size_t i = 1; i < s.ledger.records.size(); ++i)
    CHECK(s.ledger.records[i].e_kin < s.ledger.records[i - 1].e_kin);
}

TEST_CASE("dirichlet closure reproduces k = 0 bit for bit") {
  const Grid g = build_grid(1.0, 16, 16);
  StepControl robin, dirichlet;
  dirichlet.closure = Closure::dirichlet;
  const auto times = uniform_output_times(0.05, 5);
  const RunResult a = run(default_initial_state(g), phys(0.0), robin, 0.05, times);
  const RunResult b = run(default_initial_state(g), phys(0.0), dirichlet, 0.05, times);
  CHECK(a.trajectory == b.trajectory);
}

TEST_CASE("ledger invariants") {
  const Grid g = build_grid(1.0, 16, 16);
  for (double k : {0.0, 0.01, 1.0}) {
    const RunResult r = run(default_initial_state(g), phys(k), StepControl{}, 0.2,
                            uniform_output_times(0.2, 10));
    const double m0 = r.ledger.records.front().mass;
    const FluidState& s0 = r.trajectory.front();
    const double M0 = kinetic_energy(s0) + 0.5 * std::pow(sobolev_norm(s0.rho, 0), 2);
    for (const auto& rec : r.ledger.records) {
      CHECK(rec.e_kin >= 0.0);
      CHECK(rec.boundary_dissipation >= 0.0);
      CHECK(rec.trace_accum >= 0.0);
      CHECK(std::abs(rec.mass - m0) <= 1e-12 * m0);
      CHECK(rec.trace_accum <= 1.2 * k * M0);
    }
    if (k == 0.0)
      for (const auto& rec : r.ledger.records) CHECK(rec.trace_accum == 0.0);
  }
}

TEST_CASE("discrete energy inequality") {
  const Grid g = build_grid(1.0, 16, 16);
  for (double k : {0.0, 0.1}) {
    const PhysParams p = phys(k);
    FluidState s = default_initial_state(g);
    StepControl c;
    for (int i = 0; i < 20; ++i) {
      const double dt = cfl_dt(s, p, c);
      StepDiagnostics d;
      const FluidState next = step(s, p, c, dt, nullptr, &d);
      const double lhs = kinetic_energy(next) + dt * (viscous_dissipation(next.u, p) +
                                                     boundary_dissipation(next.u, p));
      const double rhs = kinetic_energy(s) + dt * std::abs(pressure_work(next, p)) +
                         std::abs(d.energy_residual) * dt;
      CHECK(lhs <= rhs * (1 + 1e-12));
      s = next;
    }
  }
}

TEST_CASE("energy residual is first order in dt on the shear run") {
  const Grid g = build_grid(1.0, 8, 32);
  const FluidState s0 = shear_initial_state(g, 0.5);
  std::vector<double> dts, res;
  for (double cfl : {0.4, 0.2, 0.1}) {
    StepControl c;
    c.cfl_factor = cfl;
    c.fixed_dt = cfl_dt(s0, phys(), c);
    const RunResult r = run(s0, phys(), c, 0.2, {0.2});
    dts.push_back(c.fixed_dt);
    res.push_back(r.ledger.residual_integral);
  }
  CHECK(oracle::log_slope(dts, res) >= 0.9);
}

TEST_CASE("positivity failure ends the run with a partial trajectory") {
  const Grid g = build_grid(1.0, 8, 8);
  FluidState s = default_initial_state(g);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    if (!g.on_wall(n)) s.u(0, n) *= 400.0;
  StepControl c;
  c.fixed_dt = 0.05;
  const RunResult r = run(s, phys(), c, 1.0, uniform_output_times(1.0, 20));
  CHECK(r.blowup);
  CHECK_FALSE(r.failure.empty());
  CHECK(r.trajectory.size() >= 1);
  CHECK(r.failure_time < 1.0);
}
