#include <doctest.h>

#include <cmath>
#include <numbers>

#include "navslip/error.hpp"
#include "navslip/experiments.hpp"
#include "oracles.hpp"

using namespace navslip;
using std::numbers::pi;

namespace {

PhysParams phys() { return PhysParams(LameParams(0.1, 0.0), 1.0, 1.4, SlipBC(0.0)); }

SweepSetup small_setup(const FluidState& initial, double t_final = 0.1) {
  return SweepSetup{initial, phys(), StepControl{}, t_final, uniform_output_times(t_final, 5), 1};
}

}  // namespace

TEST_CASE("compare_states") {
  const Grid g = build_grid(2.0, 16, 16);
  const FluidState a = default_initial_state(g);
  const StateComparison same = compare_states(a, a);
  CHECK(same.sq_err == 0.0);
  CHECK(same.w_h1 == 0.0);

  FluidState b = a;
  for (std::size_t n = 0; n < g.node_count(); ++n) b.u(0, n) += 0.3;
  CHECK(compare_states(a, b).w_l2 == doctest::Approx(0.3 * std::sqrt(2.0)));

  FluidState late = a;
  late.t = 0.5;
  CHECK_THROWS_AS(compare_states(a, late), InvalidArgument);
  CHECK_THROWS_AS(compare_states(a, default_initial_state(build_grid(2.0, 16, 8))),
                  InvalidArgument);
}

TEST_CASE("fit_rate") {
  using P = std::pair<double, double>;
  const std::vector<P> half{{1e-1, 3.162e-1}, {1e-2, 1e-1}, {1e-3, 3.162e-2}};
  const RateFit a = fit_rate(half);
  CHECK(a.slope == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(a.r_squared == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(a.points == 3);
  const std::vector<P> flat{{1, 2}, {1e-1, 2}, {1e-2, 2}};
  CHECK(fit_rate(flat).slope == doctest::Approx(0.0));
  CHECK(fit_rate(flat).r_squared == 1.0);
  const std::vector<P> lin{{1, 1}, {1e-1, 1e-1}, {1e-2, 1e-2}};
  CHECK(fit_rate(lin).slope == doctest::Approx(1.0));
  const std::vector<P> noisy{{1, 1}, {1e-1, 0.2}, {1e-2, 5e-3}, {1e-3, 2e-3}};
  const RateFit n = fit_rate(noisy);
  CHECK(n.r_squared >= 0.0);
  CHECK(n.r_squared <= 1.0);

  CHECK_THROWS_AS(fit_rate(std::vector<P>{{1, 1}, {2, 2}}), InvalidArgument);
  CHECK_THROWS_AS(fit_rate(std::vector<P>{{1, 1}, {0, 2}, {3, 3}}), InvalidArgument);
  CHECK_THROWS_AS(fit_rate(std::vector<P>{{1, 1}, {2, -2}, {3, 3}}), InvalidArgument);
}

TEST_CASE("interpolation report") {
  const std::vector<InterpolationSample> zeros{{1e-1, 0, 0, 0}, {1e-2, 0, 0, 0}, {1e-3, 0, 0, 0}};
  const InterpolationReport z = interpolation_report(zeros);
  CHECK(z.trivial);
  CHECK(z.passed);

  // w_k = A sin(omega z) with ||w||_L2 = k^(1/2) and ||w||_H3 = 1 up to lower
  // order terms: omega^3 A ~ 1 and A ~ k^(1/2) give omega ~ k^(-1/6), and
  // ||w||_H1 ~ omega A ~ k^(1/3).
  const Grid g = build_grid(1.0, 4, 512);
  std::vector<InterpolationSample> samples;
  for (double k : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double omega = 4.0 * std::pow(k, -1.0 / 6.0);
    const double amp = std::sqrt(2.0 * k);
    const VectorField w = VectorField::from_function(g, [&](double, double, double z) {
      return std::array<double, 2>{amp * std::sin(omega * z), 0.0};
    });
    samples.push_back(interpolation_sample(k, w));
  }
  const InterpolationReport r = interpolation_report(samples);
  REQUIRE(r.h1_fit);
  REQUIRE(r.l2_fit);
  CHECK(r.l2_fit->slope == doctest::Approx(0.5).epsilon(0.05));
  CHECK(r.h1_fit->slope == doctest::Approx(1.0 / 3.0).epsilon(0.1));
  CHECK(r.slope_ratio == doctest::Approx(2.0 / 3.0).epsilon(0.1));
  CHECK(r.passed);
  CHECK(r.max_constant > 0.0);
}

TEST_CASE("sweep over k = 0 alone is degenerate") {
  const Grid g = build_grid(1.0, 8, 8);
  const std::vector<double> ks{0.0};
  const SweepReport r = friction_sweep(small_setup(default_initial_state(g)), ks);
  REQUIRE(r.metrics.size() == 1);
  const auto& m = r.metrics[0];
  CHECK(m.k == 0.0);
  CHECK(m.sup_sq_err == 0.0);
  CHECK(m.trace_integral == 0.0);
  CHECK(m.energy_gap == 0.0);
  CHECK_FALSE(r.sq_err_fit);
  CHECK_FALSE(r.trace_fit);
}

TEST_CASE("sweep preconditions") {
  const Grid g = build_grid(1.0, 8, 8);
  const SweepSetup s = small_setup(default_initial_state(g));
  CHECK_THROWS_AS(friction_sweep(s, std::vector<double>{1e-3, 1e-2, 1e-1, 1, 10}),
                  InvalidArgument);
  CHECK_THROWS_AS(friction_sweep(s, std::vector<double>{0, 1e-2, 1e-1, 1}), InvalidArgument);
  CHECK_THROWS_AS(friction_sweep(s, std::vector<double>{0, 1e-2, 2e-2, 3e-2, 4e-2, 5e-2}),
                  InvalidArgument);
  CHECK_THROWS_AS(friction_sweep(s, std::vector<double>{0, -1, 1e-2, 1e-1, 1, 10}),
                  InvalidArgument);
}

TEST_CASE("small sweep") {
  const Grid g = build_grid(1.0, 16, 16);
  const std::vector<double> ks{0, 1e-3, 1e-2, 3e-2, 1e-1, 1};
  SweepSetup setup = small_setup(default_initial_state(g), 0.2);
  const SweepReport a = friction_sweep(setup, ks);
  setup.threads = 3;
  const SweepReport b = friction_sweep(setup, ks);

  REQUIRE(a.metrics.size() == 6);
  for (std::size_t i = 0; i + 1 < a.metrics.size(); ++i) CHECK(a.metrics[i].k > a.metrics[i + 1].k);
  const auto& ref = a.metrics.back();
  CHECK(ref.k == 0.0);
  CHECK(ref.sup_sq_err == 0.0);
  CHECK(ref.sup_w_h1 == 0.0);
  CHECK(ref.trace_integral == 0.0);
  CHECK(ref.energy_gap == 0.0);
  for (const auto& m : a.metrics) {
    CHECK(m.sup_sq_err >= 0.0);
    CHECK(m.trace_integral >= 0.0);
    CHECK(m.mass_drift <= 1e-12);
  }
  CHECK(a.monotone);
  REQUIRE(a.trace_fit);
  CHECK(a.trace_fit->slope >= 0.9);
  REQUIRE(a.sq_err_fit);
  CHECK(a.sq_err_fit->slope >= 0.45);
  CHECK(a.m0 == doctest::Approx(initial_m0(setup.initial)));

  // worker count does not change a single bit
  REQUIRE(b.metrics.size() == a.metrics.size());
  for (std::size_t i = 0; i < a.metrics.size(); ++i) {
    CHECK(a.metrics[i].sup_sq_err == b.metrics[i].sup_sq_err);
    CHECK(a.metrics[i].trace_integral == b.metrics[i].trace_integral);
    CHECK(a.metrics[i].energy_gap == b.metrics[i].energy_gap);
  }
  CHECK(a.acceptance == b.acceptance);
}

TEST_CASE("equilibrium runs compare to zero") {
  const Grid g = build_grid(1.0, 8, 8);
  const std::vector<double> ks{0, 1e-3, 1e-2, 3e-2, 1e-1, 1};
  const SweepReport r = friction_sweep(small_setup(equilibrium_state(g)), ks);
  for (const auto& m : r.metrics) {
    CHECK(m.sup_sq_err == 0.0);
    CHECK(m.trace_integral == 0.0);
  }
  CHECK_FALSE(r.sq_err_fit);
}

TEST_CASE("early failure aborts the sweep") {
  const Grid g = build_grid(1.0, 8, 8);
  FluidState s = default_initial_state(g);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    if (!g.on_wall(n)) s.u(0, n) *= 400.0;
  SweepSetup setup = small_setup(s, 1.0);
  setup.ctrl.fixed_dt = 0.05;
  CHECK_THROWS_AS(friction_sweep(setup, std::vector<double>{0, 1e-3, 1e-2, 3e-2, 1e-1, 1}),
                  ExperimentFailure);
}

TEST_CASE("manufactured solution") {
  MmsSetup s;
  s.k = 1.0;
  const Grid g = build_grid(1.0, 16, 16);
  const FluidState ex = mms_exact(g, s, 0.0);
  CHECK_NOTHROW(ex.validate());
  // k mu U'(0) = U(0) on the bottom wall
  const double kmu = s.k * s.lame.mu();
  for (std::size_t n : g.wall_nodes(Wall::bottom))
    CHECK(ex.u(0, n) == doctest::Approx(kmu * std::cos(2 * pi * g.coords(n)[0])));

  MmsSetup s0;
  const FluidState e0 = mms_exact(g, s0, 0.0);
  for (Wall w : {Wall::bottom, Wall::top})
    for (std::size_t n : g.wall_nodes(w)) CHECK(std::abs(e0.u(0, n)) < 1e-15);

  std::vector<double> hs, mom;
  for (int n : {16, 32, 64}) {
    const MmsResidual r = mms_semidiscrete_residual(build_grid(1.0, n, n), s, 0.3);
    hs.push_back(1.0 / n);
    mom.push_back(r.momentum_l2);
  }
  CHECK(oracle::log_slope(hs, mom) == doctest::Approx(2.0).epsilon(0.1));

  CHECK_THROWS_AS(mms_verify(s, std::vector<int>{16, 32}), InvalidArgument);
}

TEST_CASE("mms refinement on coarse grids") {
  MmsSetup s;
  s.t_final = 0.1;
  const MmsReport r = mms_verify(s, std::vector<int>{8, 16, 32});
  REQUIRE(r.levels.size() == 3);
  CHECK(r.levels[2].u_error < r.levels[0].u_error);
  CHECK(r.u_order.slope > 1.5);
}
