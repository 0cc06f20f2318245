#include "navslip/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "navslip/error.hpp"

namespace navslip {

StateComparison compare_states(const FluidState& a, const FluidState& b) {
  if (!(a.rho.grid() == b.rho.grid()) || !(a.u.grid() == b.u.grid()) ||
      !(a.rho.grid() == a.u.grid()))
    throw InvalidArgument("compare_states: grid mismatch");
  if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, std::abs(a.t)))
    throw InvalidArgument("compare_states: time mismatch");
  const VectorField w = a.u - b.u;
  const ScalarField phi = a.rho - b.rho;
  StateComparison c;
  c.t = a.t;
  c.w_l2 = sobolev_norm(w, 0);
  c.w_h1 = sobolev_norm(w, 1);
  c.w_h3 = sobolev_norm(w, 3);
  c.phi_l2 = sobolev_norm(phi, 0);
  c.sq_err = c.w_l2 * c.w_l2 + c.phi_l2 * c.phi_l2;
  return c;
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw InvalidArgument("fit_rate: need at least 3 points");
  double sx = 0.0, sy = 0.0;
  const double n = static_cast<double>(points.size());
  for (const auto& [k, v] : points) {
    if (!(k > 0.0) || !(v > 0.0) || !std::isfinite(k) || !std::isfinite(v))
      throw InvalidArgument("fit_rate: points must be positive and finite");
    sx += std::log(k);
    sy += std::log(v);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [k, v] : points) {
    const double dx = std::log(k) - mx, dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_rate: all k are equal");
  RateFit f;
  f.points = static_cast<int>(points.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (const auto& [k, v] : points) {
    const double r = std::log(v) - (f.intercept + f.slope * std::log(k));
    ss_res += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return f;
}

InterpolationSample interpolation_sample(double k, const VectorField& w) {
  return {k, sobolev_norm(w, 0), sobolev_norm(w, 1), sobolev_norm(w, 3)};
}

InterpolationReport interpolation_report(std::span<const InterpolationSample> samples) {
  InterpolationReport rep;
  std::vector<std::pair<double, double>> l2, h1;
  for (const auto& s : samples) {
    if (s.k > 0.0 && s.w_l2 > 0.0 && s.w_h1 > 0.0) {
      l2.emplace_back(s.k, s.w_l2);
      h1.emplace_back(s.k, s.w_h1);
    }
    if (s.w_l2 > 0.0 && s.w_h3 > 0.0)
      rep.max_constant =
          std::max(rep.max_constant,
                   s.w_h1 / (std::pow(s.w_l2, rep.sigma) * std::pow(s.w_h3, 1.0 - rep.sigma)));
  }
  const bool all_zero = std::all_of(samples.begin(), samples.end(), [](const auto& s) {
    return s.w_l2 == 0.0 && s.w_h1 == 0.0 && s.w_h3 == 0.0;
  });
  if (all_zero) {
    rep.trivial = true;
    rep.passed = true;
    return rep;
  }
  if (l2.size() < 3) return rep;
  rep.l2_fit = fit_rate(l2);
  rep.h1_fit = fit_rate(h1);
  if (rep.l2_fit->slope > 0.0) {
    rep.slope_ratio = rep.h1_fit->slope / rep.l2_fit->slope;
    rep.passed = rep.slope_ratio >= rep.sigma - 0.1;
  }
  return rep;
}

double initial_m0(const FluidState& s) {
  const double r = sobolev_norm(s.rho, 0);
  return kinetic_energy(s) + 0.5 * r * r;
}

bool SweepReport::accepted() const {
  return std::all_of(acceptance.begin(), acceptance.end(),
                     [](const auto& a) { return a.second; });
}

namespace {

std::vector<double> energy_functional(const EnergyLedger& l, std::size_t count) {
  std::vector<double> e;
  double sup = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& r = l.records[i];
    sup = std::max(sup, r.u_l2 * r.u_l2 + r.rho_l2 * r.rho_l2);
    e.push_back(sup + r.grad_sq_accum);
  }
  return e;
}

void validate_k_list(std::span<const double> k_list) {
  bool zero = false;
  std::vector<double> pos;
  for (double k : k_list) {
    if (!(k >= 0.0) || !std::isfinite(k))
      throw InvalidArgument("friction_sweep: k must be finite and >= 0");
    if (k == 0.0) zero = true;
    else pos.push_back(k);
  }
  if (!zero) throw InvalidArgument("friction_sweep: k_list must contain 0");
  std::sort(pos.begin(), pos.end());
  if (std::adjacent_find(pos.begin(), pos.end()) != pos.end())
    throw InvalidArgument("friction_sweep: repeated k");
  if (!pos.empty() && (pos.size() < 5 || pos.back() < 100.0 * pos.front()))
    throw InvalidArgument(
        "friction_sweep: need at least 5 positive k spanning 2 decades");
}

}  // namespace

SweepReport friction_sweep(const SweepSetup& setup, std::span<const double> k_list) {
  validate_k_list(k_list);
  setup.ctrl.validate();
  setup.initial.validate(setup.ctrl.rho_floor);

  std::vector<double> ks;
  for (double k : k_list)
    if (k > 0.0) ks.push_back(k);
  std::sort(ks.begin(), ks.end(), std::greater<>());
  ks.push_back(0.0);

  SweepReport rep;
  rep.m0 = initial_m0(setup.initial);
  StepControl ctrl = setup.ctrl;
  if (!(ctrl.fixed_dt > 0.0)) ctrl.fixed_dt = cfl_dt(setup.initial, setup.phys, ctrl);
  rep.dt = ctrl.fixed_dt;

  std::vector<RunResult> runs(ks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < ks.size(); i = next++) {
      const SlipBC bc = SlipBC(ks[i]);
      runs[i] = run(setup.initial, setup.phys.with_slip(bc), ctrl, setup.t_final,
                    setup.output_times);
    }
  };
  const int threads =
      std::clamp<int>(setup.threads, 1, static_cast<int>(ks.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // T*: the configured horizon unless some run failed
  rep.t_star = setup.initial.t + setup.t_final;
  std::size_t common = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    common = std::min(common, runs[i].trajectory.size());
    if (runs[i].blowup) {
      if (!rep.blowup || runs[i].failure_time < rep.t_star) {
        rep.t_star = runs[i].failure_time;
        rep.blowup_reason = "k = " + std::to_string(ks[i]) + ": " + runs[i].failure;
      }
      rep.blowup = true;
    }
  }
  if (common < 2 && setup.t_final > 0.0)
    throw ExperimentFailure("friction_sweep: a run failed before the first output time (" +
                            rep.blowup_reason + ")");
  if (rep.blowup) rep.t_star = runs[0].trajectory[common - 1].t;

  const RunResult& ref = runs.back();
  const std::vector<double> e_ref = energy_functional(ref.ledger, common);
  rep.energy_ref = e_ref.back();

  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunResult& r = runs[i];
    ComparisonMetrics m;
    m.k = ks[i];
    const std::vector<double> e = energy_functional(r.ledger, common);
    const double mass0 = r.ledger.records.front().mass;
    for (std::size_t j = 0; j < common; ++j) {
      const auto& rec = r.ledger.records[j];
      m.sup_rho_h2 = std::max(m.sup_rho_h2, rec.rho_h2);
      m.sup_rho_inv_linf = std::max(m.sup_rho_inv_linf, rec.rho_inv_linf);
      m.sup_u_h3 = std::max(m.sup_u_h3, rec.u_h3);
      m.mass_drift = std::max(m.mass_drift, std::abs(rec.mass - mass0) / std::abs(mass0));
      if (ks[i] == 0.0) continue;
      const StateComparison c = compare_states(r.trajectory[j], ref.trajectory[j]);
      m.sup_sq_err = std::max(m.sup_sq_err, c.sq_err);
      m.sup_w_l2 = std::max(m.sup_w_l2, c.w_l2);
      m.sup_phi_l2 = std::max(m.sup_phi_l2, c.phi_l2);
      m.sup_w_h1 = std::max(m.sup_w_h1, c.w_h1);
      m.sup_w_h3 = std::max(m.sup_w_h3, c.w_h3);
      m.energy_gap = std::max(m.energy_gap, std::abs(e[j] - e_ref[j]));
    }
    if (ks[i] > 0.0) m.trace_integral = r.ledger.records[common - 1].trace_accum;
    rep.metrics.push_back(m);
    rep.ledgers.push_back(r.ledger);
    rep.ledgers.back().records.resize(common);
  }

  // monotone decrease toward the k = 0 entry
  for (std::size_t i = 0; i + 1 < rep.metrics.size(); ++i) {
    const auto& a = rep.metrics[i];
    const auto& b = rep.metrics[i + 1];
    rep.monotone = rep.monotone && b.sup_sq_err < a.sup_sq_err && b.sup_w_l2 < a.sup_w_l2 &&
                   b.sup_phi_l2 < a.sup_phi_l2 && b.sup_w_h1 < a.sup_w_h1 &&
                   b.trace_integral < a.trace_integral && b.energy_gap < a.energy_gap;
  }

  const Grid& g = setup.initial.rho.grid();
  VectorField g_unif(g);
  for (std::size_t n = 0; n < g.node_count(); ++n) g_unif(0, n) = 2.0;
  rep.k_uniformity =
      k_uniformity_report(g_unif, setup.phys.lame(), k_list, setup.ctrl.linear_tol);

  std::vector<InterpolationSample> samples;
  for (const auto& m : rep.metrics)
    if (m.k > 0.0) samples.push_back({m.k, m.sup_w_l2, m.sup_w_h1, m.sup_w_h3});
  rep.interpolation = interpolation_report(samples);

  const bool has_fits = rep.metrics.size() > 1;
  bool mass_ok = true, trace_bound = true;
  double a_max[3] = {0, 0, 0}, a_min[3] = {std::numeric_limits<double>::infinity(),
                                           std::numeric_limits<double>::infinity(),
                                           std::numeric_limits<double>::infinity()};
  for (const auto& m : rep.metrics) {
    mass_ok = mass_ok && m.mass_drift <= 1e-12;
    trace_bound = trace_bound && m.trace_integral <= 1.2 * m.k * rep.m0;
    const double v[3] = {m.sup_rho_h2, m.sup_rho_inv_linf, m.sup_u_h3};
    for (int q = 0; q < 3; ++q) {
      a_max[q] = std::max(a_max[q], v[q]);
      a_min[q] = std::min(a_min[q], v[q]);
    }
  }
  bool bounds_ok = true;
  for (int q = 0; q < 3; ++q) bounds_ok = bounds_ok && a_max[q] <= 2.0 * a_min[q];

  rep.acceptance.emplace_back("no_blowup", !rep.blowup);
  rep.acceptance.emplace_back("mass_conservation", mass_ok);
  rep.acceptance.emplace_back("a_priori_bounds", bounds_ok);
  rep.acceptance.emplace_back("k_uniformity", rep.k_uniformity.max_min_ratio <= 3.0);

  if (has_fits) {
    std::vector<std::pair<double, double>> sq, tr;
    bool positive = true;
    for (const auto& m : rep.metrics) {
      if (m.k == 0.0) continue;
      positive = positive && m.sup_sq_err > 0.0 && m.trace_integral > 0.0;
      sq.emplace_back(m.k, m.sup_sq_err);
      tr.emplace_back(m.k, m.trace_integral);
    }
    if (positive) {
      rep.sq_err_fit = fit_rate(sq);
      rep.trace_fit = fit_rate(tr);
    }

    const auto& largest = rep.metrics.front();
    auto shape = [&](double k) { return rep.m0 * k + std::sqrt(rep.m0 * k); };
    rep.c_fit = largest.sup_sq_err / shape(largest.k);
    bool dominated = true;
    for (const auto& m : rep.metrics)
      if (m.k > 0.0) dominated = dominated && m.sup_sq_err <= rep.c_fit * shape(m.k) * (1 + 1e-12);

    const auto& smallest = rep.metrics[rep.metrics.size() - 2];
    bool gap_decreasing = true;
    for (std::size_t i = 0; i + 1 < rep.metrics.size(); ++i)
      gap_decreasing = gap_decreasing && rep.metrics[i + 1].energy_gap < rep.metrics[i].energy_gap;

    rep.acceptance.emplace_back("trace_bound", trace_bound);
    rep.acceptance.emplace_back("trace_rate", rep.trace_fit && rep.trace_fit->slope >= 0.9 &&
                                                  rep.trace_fit->r_squared >= 0.95);
    rep.acceptance.emplace_back("sq_err_rate", rep.sq_err_fit &&
                                                   rep.sq_err_fit->slope >= 0.45 &&
                                                   rep.sq_err_fit->r_squared >= 0.95);
    rep.acceptance.emplace_back("gronwall_domination", dominated);
    rep.acceptance.emplace_back("monotone_convergence", rep.monotone);
    rep.acceptance.emplace_back("energy_functional",
                                gap_decreasing &&
                                    smallest.energy_gap < 1e-3 * rep.energy_ref);
    rep.acceptance.emplace_back("interpolation", rep.interpolation.passed);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// manufactured solution

namespace {

struct MmsTerms {
  double a, U, Uz, Uzz, c, s, e;
};

MmsTerms mms_terms(const MmsSetup& m, double x, double z, double t) {
  const double a = 2.0 * std::numbers::pi / m.lx;
  return {a,
          -z * z + z + m.k * m.lame.mu(),
          1.0 - 2.0 * z,
          -2.0,
          std::cos(a * x),
          std::sin(a * x),
          std::exp(-t)};
}

double mms_mass_source(const MmsSetup& m, const MmsTerms& q) {
  const double rho = 1.0 + 0.1 * q.s * q.e;
  const double u = q.U * q.c * q.e;
  const double rho_t = -0.1 * q.s * q.e;
  const double rho_x = 0.1 * q.a * q.c * q.e;
  const double u_x = -q.a * q.U * q.s * q.e;
  (void)m;
  return rho_t + rho_x * u + rho * u_x;
}

std::array<double, 2> mms_momentum_source(const MmsSetup& m, const MmsTerms& q) {
  const double mu = m.lame.mu(), lam = m.lame.lam();
  const double rho = 1.0 + 0.1 * q.s * q.e;
  const double rho_x = 0.1 * q.a * q.c * q.e;
  const double u = q.U * q.c * q.e;
  const double u_t = -u;
  const double u_x = -q.a * q.U * q.s * q.e;
  const double u_xx = -q.a * q.a * u;
  const double u_zz = q.Uzz * q.c * q.e;
  const double p_x = m.pressure_amp * m.gamma * std::pow(rho, m.gamma - 1.0) * rho_x;
  const double gx = rho * (u_t + u * u_x) + p_x - mu * (u_xx + u_zz) - lam * u_xx;
  const double gz = lam * q.a * q.Uz * q.s * q.e;
  const double f = mms_mass_source(m, q);
  return {gx + u * f, gz};
}

void require_2d(const Grid& g) {
  if (g.dim() != 2) throw InvalidArgument("manufactured solution: 2D grids only");
}

}  // namespace

FluidState mms_exact(const Grid& g, const MmsSetup& s, double t) {
  require_2d(g);
  FluidState st;
  st.t = t;
  st.rho = ScalarField::from_function(g, [&](double x, double, double z) {
    const MmsTerms q = mms_terms(s, x, z, t);
    return 1.0 + 0.1 * q.s * q.e;
  });
  st.u = VectorField::from_function(g, [&](double x, double, double z) {
    const MmsTerms q = mms_terms(s, x, z, t);
    return std::array<double, 2>{q.U * q.c * q.e, 0.0};
  });
  return st;
}

Forcing mms_forcing(const MmsSetup& s) {
  Forcing f;
  f.mass = [s](const Grid& g, double t) {
    require_2d(g);
    return ScalarField::from_function(g, [&](double x, double, double z) {
      return mms_mass_source(s, mms_terms(s, x, z, t));
    });
  };
  f.momentum = [s](const Grid& g, double t) {
    require_2d(g);
    return VectorField::from_function(g, [&](double x, double, double z) {
      return mms_momentum_source(s, mms_terms(s, x, z, t));
    });
  };
  return f;
}

MmsResidual mms_semidiscrete_residual(const Grid& g, const MmsSetup& s, double t) {
  require_2d(g);
  const FluidState ex = mms_exact(g, s, t);
  const Forcing f = mms_forcing(s);
  const ScalarField fm = f.mass(g, t);
  const VectorField fu = f.momentum(g, t);
  const ScalarField div = mass_flux_divergence(ex.rho, ex.u, s.scheme);
  ScalarField pressure(g);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    pressure[n] = s.pressure_amp * std::pow(ex.rho[n], s.gamma);
  const VectorField gradP = gradient(pressure);
  const VectorField lu = apply_lame(ex.u, s.lame);
  const ScalarField ux_x = apply_derivative(ex.u.component(0), Axis::x, 1);
  const ScalarField ux_z = apply_derivative(ex.u.component(0), Axis::z, 1);
  const ScalarField uz_x = apply_derivative(ex.u.component(1), Axis::x, 1);
  const ScalarField uz_z = apply_derivative(ex.u.component(1), Axis::z, 1);

  double mom = 0.0, mass = 0.0;
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const double rho_t = -(ex.rho[n] - 1.0);
    const double rm = rho_t + div[n] - fm[n];
    mass += g.weight(n) * rm * rm;
    if (g.on_wall(n)) continue;
    const double ux = ex.u(0, n), uz = ex.u(1, n);
    const double conv[2] = {ux * ux_x[n] + uz * ux_z[n], ux * uz_x[n] + uz * uz_z[n]};
    for (int c = 0; c < 2; ++c) {
      const double u_t = -ex.u(c, n);
      const double r = ex.rho[n] * (u_t + conv[c]) + gradP(c, n) - lu(c, n) -
                       (fu(c, n) - ex.u(c, n) * fm[n]);
      mom += g.cell_volume() * r * r;
    }
  }
  return {std::sqrt(mom), std::sqrt(mass)};
}

MmsReport mms_verify(const MmsSetup& setup, std::span<const int> resolutions) {
  if (resolutions.size() < 3) throw InvalidArgument("mms_verify: need at least 3 resolutions");
  if (!(setup.dt_per_h > 0.0) || !(setup.t_final > 0.0))
    throw InvalidArgument("mms_verify: dt_per_h and t_final must be positive");
  const PhysParams phys(setup.lame, setup.pressure_amp, setup.gamma,
                        SlipBC(setup.k));
  const Forcing forcing = mms_forcing(setup);
  MmsReport rep;
  std::vector<std::pair<double, double>> ue, re;
  for (int n : resolutions) {
    const Grid g = build_grid(setup.lx, n, n);
    MmsLevel lv;
    lv.n = n;
    lv.h = std::max(g.hx(), g.hz());
    lv.dt = setup.dt_per_h * std::min(g.hx(), g.hz());
    StepControl ctrl;
    ctrl.scheme = setup.scheme;
    ctrl.linear_tol = setup.linear_tol;
    ctrl.fixed_dt = lv.dt;
    const RunResult r =
        run(mms_exact(g, setup, 0.0), phys, ctrl, setup.t_final, {setup.t_final}, &forcing);
    if (r.blowup)
      throw ExperimentFailure("mms_verify: run failed at n = " + std::to_string(n) + ": " +
                              r.failure);
    const FluidState& last = r.trajectory.back();
    const FluidState ex = mms_exact(g, setup, last.t);
    lv.u_error = sobolev_norm(last.u - ex.u, 0);
    lv.rho_error = sobolev_norm(last.rho - ex.rho, 0);
    rep.levels.push_back(lv);
    ue.emplace_back(lv.h, lv.u_error);
    re.emplace_back(lv.h, lv.rho_error);
  }
  rep.u_order = fit_rate(ue);
  rep.rho_order = fit_rate(re);
  return rep;
}

}  // namespace navslip
