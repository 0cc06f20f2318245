// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "navslip/dynamics.hpp"
#include "navslip/experiments.hpp"
#include "navslip/lame.hpp"

using namespace navslip;
using std::numbers::pi;

namespace {

constexpr int kN = 64;
constexpr double kTFinal = 0.5;

PhysParams default_phys(double k = 0.0) {
  return PhysParams(LameParams(0.1, 0.0), 1.0, 1.4, SlipBC(k));
}

int worker_count() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i) pts.emplace_back(x[i], y[i]);
  return fit_rate(pts).slope;
}

bool check(const std::vector<std::pair<std::string, bool>>& acc, const std::string& name) {
  for (const auto& [n, ok] : acc)
    if (n == name) return ok;
  return false;
}

struct Outcome {
  int id;
  std::string name;
  bool ok;
  std::string detail;
  double secs;
};

struct Suite {
  int failures = 0;
  std::vector<Outcome> outcomes;
  double worst_mass_drift = 0.0;
  int runs = 0;

  void note_mass(const EnergyLedger& l) {
    ++runs;
    if (l.records.empty()) return;
    const double m0 = l.records.front().mass;
    for (const auto& r : l.records)
      worst_mass_drift = std::max(worst_mass_drift, std::abs(r.mass - m0) / m0);
  }

  void criterion(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!ok) ++failures;
    outcomes.push_back({id, name, ok, detail, secs});
    std::printf("info criterion %d evaluated in %.1fs\n", id, secs);
    std::fflush(stdout);
  }

  void report() {
    std::sort(outcomes.begin(), outcomes.end(),
              [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
    for (const auto& o : outcomes)
      std::printf("%s %2d %-22s %s\n", o.ok ? "PASS" : "FAIL", o.id, o.name.c_str(),
                  o.detail.c_str());
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SweepReport sweep(const FluidState& initial, Suite& suite) {
  const std::vector<double> ks{0, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1};
  SweepSetup setup{initial, default_phys(), StepControl{}, kTFinal,
                   uniform_output_times(kTFinal, 50), worker_count()};
  SweepReport rep = friction_sweep(setup, ks);
  for (const auto& l : rep.ledgers) suite.note_mass(l);
  return rep;
}

}  // namespace

int main() {
  Suite suite;
  const Grid grid = build_grid(1.0, kN, kN);

  suite.criterion(1, "lame_analytic", [&](std::string& d) {
    const LameParams p(1.0, 0.0);
    const VectorField g = VectorField::from_function(grid, [](double, double, double) {
      return std::array<double, 2>{2.0, 0.0};
    });
    double worst = 0.0;
    for (double k : {0.0, 0.1, 1.0, 10.0}) {
      const VectorField u = solve_lame(g, SlipBC(k), p, 1e-11);
      for (std::size_t n = 0; n < grid.node_count(); ++n) {
        const double z = grid.coords(n)[2];
        worst = std::max(worst, std::abs(u(0, n) - (-z * z + z + k)));
        worst = std::max(worst, std::abs(u(1, n)));
      }
    }
    d = fmt("max_err=%.3e", worst);
    return worst <= 1e-9;
  });

  suite.criterion(2, "k_uniform_elliptic", [&](std::string& d) {
    const std::vector<double> ks{0, 1e-3, 1e-2, 1e-1, 1, 1e1, 1e2, 1e3};
    const std::vector<VectorField> gs{
        VectorField::from_function(grid, [](double, double, double) {
          return std::array<double, 2>{2.0, 0.0};
        }),
        VectorField::from_function(grid, [](double x, double, double z) {
          return std::array<double, 2>{std::sin(2 * pi * x) * std::sin(pi * z),
                                       std::cos(2 * pi * x) * z * (1 - z)};
        }),
        VectorField::from_function(grid, [](double x, double, double z) {
          return std::array<double, 2>{std::exp(z) * std::cos(2 * pi * x), 0.5 * z};
        })};
    double worst = 0.0;
    std::string viscous;
    for (const auto& g : gs) {
      const KUniformityReport r = k_uniformity_report(g, LameParams(1.0, 0.0), ks);
      worst = std::max(worst, r.max_min_ratio);
      d += fmt(" %.3f", r.max_min_ratio);
      viscous +=
          fmt(" %.3f", k_uniformity_report(g, default_phys().lame(), ks).max_min_ratio);
    }
    std::printf("info k-uniformity ratios at mu=0.1:%s\n", viscous.c_str());
    d = "mu=1 ratios:" + d;
    return worst <= 3.0;
  });

  std::printf("info running default sweep %dx%d, t_final=%g, %d worker(s)\n", kN, kN, kTFinal,
              worker_count());
  std::fflush(stdout);
  SweepReport main_sweep;
  std::string sweep_error;
  try {
    main_sweep = sweep(default_initial_state(grid), suite);
    std::printf("info sweep dt=%.4e m0=%.6f t_star=%.3f blowup=%d\n", main_sweep.dt,
                main_sweep.m0, main_sweep.t_star, main_sweep.blowup ? 1 : 0);
    for (const auto& [name, ok] : main_sweep.acceptance)
      std::printf("info sweep check %-22s %s\n", name.c_str(), ok ? "ok" : "failed");
  } catch (const std::exception& e) {
    sweep_error = e.what();
    std::printf("info sweep failed: %s\n", e.what());
  }
  std::fflush(stdout);
  auto need_sweep = [&](std::string& d) {
    if (!sweep_error.empty()) throw std::runtime_error(sweep_error);
    (void)d;
  };

  suite.criterion(3, "trace_bound", [&](std::string& d) {
    need_sweep(d);
    double worst = 0.0;
    for (const auto& m : main_sweep.metrics)
      if (m.k > 0) worst = std::max(worst, m.trace_integral / (m.k * main_sweep.m0));
    const RateFit& f = *main_sweep.trace_fit;
    d = fmt("max trace/(k M0)=%.3f slope=%.3f r2=%.4f", worst, f.slope, f.r_squared);
    return check(main_sweep.acceptance, "trace_bound") &&
           check(main_sweep.acceptance, "trace_rate");
  });

  suite.criterion(4, "gronwall_rate", [&](std::string& d) {
    need_sweep(d);
    const RateFit& f = *main_sweep.sq_err_fit;
    d = fmt("slope=%.3f r2=%.4f C_fit=%.3e", f.slope, f.r_squared, main_sweep.c_fit);
    return check(main_sweep.acceptance, "sq_err_rate") &&
           check(main_sweep.acceptance, "gronwall_domination");
  });

  suite.criterion(5, "monotone_convergence", [&](std::string& d) {
    need_sweep(d);
    const auto& ref = main_sweep.metrics.back();
    const bool zero = ref.k == 0.0 && ref.sup_sq_err == 0.0 && ref.sup_w_l2 == 0.0 &&
                      ref.sup_phi_l2 == 0.0 && ref.sup_w_h1 == 0.0 &&
                      ref.trace_integral == 0.0 && ref.energy_gap == 0.0;
    d = fmt("strict=%d zero_reference=%d", main_sweep.monotone ? 1 : 0, zero ? 1 : 0);
    return main_sweep.monotone && zero;
  });

  suite.criterion(6, "energy_identity_order", [&](std::string& d) {
    const FluidState s0 = shear_initial_state(grid, 0.5);
    std::vector<double> dts, res;
    for (double cfl : {0.4, 0.2, 0.1}) {
      StepControl c;
      c.cfl_factor = cfl;
      c.fixed_dt = cfl_dt(s0, default_phys(), c);
      const RunResult r = run(s0, default_phys(), c, kTFinal, {kTFinal});
      suite.note_mass(r.ledger);
      if (r.blowup) throw std::runtime_error("shear run failed: " + r.failure);
      dts.push_back(c.fixed_dt);
      res.push_back(r.ledger.residual_integral);
    }
    const double order = slope_of(dts, res);
    d = fmt("order=%.3f residuals=%.3e,%.3e,%.3e", order, res[0], res[1], res[2]);
    return order >= 0.9;
  });

  {
    const FluidState s0 = default_initial_state(grid);
    std::vector<double> dts, res;
    for (double cfl : {0.4, 0.2, 0.1}) {
      StepControl c;
      c.cfl_factor = cfl;
      c.fixed_dt = cfl_dt(s0, default_phys(), c);
      const RunResult r = run(s0, default_phys(), c, kTFinal, {kTFinal});
      suite.note_mass(r.ledger);
      dts.push_back(c.fixed_dt);
      res.push_back(r.ledger.residual_integral);
    }
    std::printf("info energy residual order on the default data: %.3f\n", slope_of(dts, res));
  }

  MmsSetup mms_k0, mms_k1;
  mms_k1.k = 1.0;
  suite.criterion(8, "mms_spatial_order", [&](std::string& d) {
    const std::vector<int> res{32, 64, 128};
    const MmsReport a = mms_verify(mms_k0, res);
    const MmsReport b = mms_verify(mms_k1, res);
    d = fmt("u_order k=0: %.3f k=1: %.3f (rho %.3f, %.3f)", a.u_order.slope, b.u_order.slope,
            a.rho_order.slope, b.rho_order.slope);
    return a.u_order.slope >= 1.7 && b.u_order.slope >= 1.7;
  });

  suite.criterion(9, "dirichlet_coincidence", [&](std::string& d) {
    StepControl robin, dirichlet;
    dirichlet.closure = Closure::dirichlet;
    const auto times = uniform_output_times(kTFinal, 50);
    const RunResult a = run(default_initial_state(grid), default_phys(), robin, kTFinal, times);
    const RunResult b =
        run(default_initial_state(grid), default_phys(), dirichlet, kTFinal, times);
    suite.note_mass(a.ledger);
    suite.note_mass(b.ledger);
    const bool same = !a.blowup && a.trajectory == b.trajectory;
    d = fmt("snapshots=%zu identical=%d", a.trajectory.size(), same ? 1 : 0);
    return same;
  });

  auto apriori = [](const SweepReport& r) {
    double lo[3] = {INFINITY, INFINITY, INFINITY}, hi[3] = {0, 0, 0};
    for (const auto& m : r.metrics) {
      const double v[3] = {m.sup_rho_h2, m.sup_rho_inv_linf, m.sup_u_h3};
      for (int i = 0; i < 3; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    }
    return std::array<double, 3>{hi[0] / lo[0], hi[1] / lo[1], hi[2] / lo[2]};
  };

  suite.criterion(10, "k_independent_bounds", [&](std::string& d) {
    need_sweep(d);
    const auto q = apriori(main_sweep);
    d = fmt("max/min rho_H2=%.3f rho_inv=%.3f u_H3=%.3f", q[0], q[1], q[2]);
    return q[0] <= 2.0 && q[1] <= 2.0 && q[2] <= 2.0;
  });

  try {
    const SweepReport comp = sweep(compatible_initial_state(grid), suite);
    const auto q = apriori(comp);
    std::printf("info compatible initial data: max/min rho_H2=%.3f rho_inv=%.3f u_H3=%.3f\n", q[0],
                q[1], q[2]);
  } catch (const std::exception& e) {
    std::printf("info compatible sweep failed: %s\n", e.what());
  }

  suite.criterion(11, "shear_decay", [&](std::string& d) {
    const double amp = 0.01, t = 0.1;
    const RunResult r = run(shear_initial_state(grid, amp), default_phys(), StepControl{}, t, {t});
    suite.note_mass(r.ledger);
    double peak = 0.0;
    for (std::size_t n = 0; n < grid.node_count(); ++n)
      peak = std::max(peak, std::abs(r.trajectory.back().u(0, n)));
    const double expected = amp * std::exp(-0.1 * pi * pi * t);
    const double rel = std::abs(peak / expected - 1.0);
    d = fmt("measured=%.6e expected=%.6e rel=%.2e", peak, expected, rel);
    return rel <= 0.05;
  });

  suite.criterion(7, "mass_conservation", [&](std::string& d) {
    d = fmt("max relative drift=%.3e over %d runs", suite.worst_mass_drift, suite.runs);
    return suite.worst_mass_drift <= 1e-12;
  });

  suite.report();
  std::printf("%s %d of 11 criteria failed\n", suite.failures ? "FAILED" : "ALL PASSED",
              suite.failures);
  return suite.failures ? 1 : 0;
}
