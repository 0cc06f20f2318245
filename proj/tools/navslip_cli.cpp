#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "navslip/config.hpp"
#include "navslip/dynamics.hpp"
#include "navslip/error.hpp"
#include "navslip/experiments.hpp"
#include "navslip/lame.hpp"
#include "navslip/report_io.hpp"

namespace fs = std::filesystem;
using namespace navslip;

namespace {

constexpr int kAcceptanceFailure = 2;

struct Common {
  std::string config;
  std::string out;
  int threads = 0;
  unsigned seed = 0;  // accepted for interface stability; runs are deterministic
};

fs::path out_dir(const Common& c, const RunConfig& cfg) {
  fs::path p = c.out.empty() ? fs::path(cfg.directory) : fs::path(c.out);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

bool wants(const RunConfig& cfg, const char* fmt) {
  for (const auto& f : cfg.formats)
    if (f == fmt) return true;
  return false;
}

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteOutput(std::string("non-finite value in ") + what);
  return v;
}

std::string k_tag(double k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", k);
  return buf;
}

int cmd_run(const Common& c) {
  const RunConfig cfg = load_config(c.config);
  const Grid g = make_grid(cfg);
  const RunResult r = run(make_initial(cfg, g), make_phys(cfg), make_control(cfg),
                          cfg.t_final, make_output_times(cfg));
  const fs::path dir = out_dir(c, cfg);
  const std::string csv = ledger_csv(r.ledger);
  if (wants(cfg, "csv")) write_file(dir / "ledger.csv", csv);
  std::cout << "steps " << r.ledger.steps << ", t = " << format_double(r.trajectory.back().t)
            << ", energy residual integral " << format_double(r.ledger.residual_integral)
            << "\n";
  if (r.blowup) {
    std::cerr << "run stopped at t = " << r.failure_time << ": " << r.failure << "\n";
    return 1;
  }
  return 0;
}

int cmd_sweep(const Common& c) {
  const RunConfig cfg = load_config(c.config);
  const Grid g = make_grid(cfg);
  SweepSetup setup{make_initial(cfg, g), make_phys(cfg), make_control(cfg), cfg.t_final,
                   make_output_times(cfg),
                   c.threads > 0 ? c.threads
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))};
  const SweepReport rep = friction_sweep(setup, cfg.k_list);
  const fs::path dir = out_dir(c, cfg);
  const std::string json = sweep_report_json(rep, cfg);
  std::vector<std::pair<fs::path, std::string>> files;
  if (wants(cfg, "json")) files.emplace_back(dir / "sweep_report.json", json);
  if (wants(cfg, "csv"))
    for (std::size_t i = 0; i < rep.metrics.size(); ++i)
      files.emplace_back(dir / ("ledger_k_" + k_tag(rep.metrics[i].k) + ".csv"),
                         ledger_csv(rep.ledgers[i]));
  for (const auto& [p, text] : files) write_file(p, text);

  for (const auto& m : rep.metrics)
    std::cout << "k " << k_tag(m.k) << "  sup_sq_err " << format_double(m.sup_sq_err)
              << "  trace " << format_double(m.trace_integral) << "\n";
  if (rep.blowup) std::cout << "T* = " << rep.t_star << " (" << rep.blowup_reason << ")\n";
  for (const auto& [name, ok] : rep.acceptance)
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
  return rep.accepted() ? 0 : kAcceptanceFailure;
}

int cmd_lame_test(const Common& c) {
  const RunConfig cfg = load_config(c.config);
  const Grid g = make_grid(cfg);
  VectorField rhs(g);
  for (std::size_t n = 0; n < g.node_count(); ++n) rhs(0, n) = 2.0;
  const KUniformityReport rep =
      k_uniformity_report(rhs, LameParams(cfg.mu, cfg.lam), cfg.k_list, cfg.linear_tol);
  nlohmann::ordered_json j;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : rep.entries) {
    std::cout << "k " << k_tag(e.k) << "  ratio " << format_double(e.ratio) << "\n";
    j["entries"].push_back({{"k", finite(e.k, "k_uniformity")},
                            {"u_h2", finite(e.u_h2, "k_uniformity")},
                            {"u_l2", finite(e.u_l2, "k_uniformity")},
                            {"g_l2", finite(e.g_l2, "k_uniformity")},
                            {"ratio", finite(e.ratio, "k_uniformity")}});
  }
  j["max_min_ratio"] = finite(rep.max_min_ratio, "k_uniformity");
  const fs::path dir = out_dir(c, cfg);
  write_file(dir / "k_uniformity.json", j.dump(2) + "\n");
  std::cout << "max/min " << format_double(rep.max_min_ratio) << "\n";
  return rep.max_min_ratio <= 3.0 ? 0 : kAcceptanceFailure;
}

int cmd_eig(const Common& c, int count) {
  const RunConfig cfg = load_config(c.config);
  const Grid g = make_grid(cfg);
  const auto pairs = lame_eigenpairs(g, LameParams(cfg.mu, cfg.lam), SlipBC(cfg.k), count);
  std::string csv = "index,eigenvalue\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    csv += std::to_string(i) + "," + format_double(finite(pairs[i].value, "eigenvalue")) + "\n";
    std::cout << i << "  " << format_double(pairs[i].value) << "\n";
  }
  write_file(out_dir(c, cfg) / "eigenpairs.csv", csv);
  return 0;
}

int cmd_mms(const Common& c, const std::vector<int>& resolutions, const std::string& scheme) {
  const RunConfig cfg = load_config(c.config);
  if (cfg.dim != 2) throw InvalidArgument("mms: 2D configurations only");
  MmsSetup s;
  s.lx = cfg.lx;
  s.lame = LameParams(cfg.mu, cfg.lam);
  s.pressure_amp = cfg.pressure_A;
  s.gamma = cfg.pressure_gamma;
  s.k = cfg.k;
  s.t_final = cfg.t_final;
  s.scheme = scheme == "upwind1" ? TransportScheme::upwind1 : TransportScheme::muscl_minmod;
  s.linear_tol = std::min(cfg.linear_tol, 1e-11);
  const MmsReport rep = mms_verify(s, resolutions);
  nlohmann::ordered_json j;
  j["levels"] = nlohmann::ordered_json::array();
  for (const auto& l : rep.levels) {
    std::cout << "n " << l.n << "  u_error " << format_double(l.u_error) << "  rho_error "
              << format_double(l.rho_error) << "\n";
    j["levels"].push_back({{"n", l.n},
                           {"h", finite(l.h, "mms")},
                           {"dt", finite(l.dt, "mms")},
                           {"u_error", finite(l.u_error, "mms")},
                           {"rho_error", finite(l.rho_error, "mms")}});
  }
  j["u_order"] = finite(rep.u_order.slope, "mms");
  j["rho_order"] = finite(rep.rho_order.slope, "mms");
  write_file(out_dir(c, cfg) / "mms_report.json", j.dump(2) + "\n");
  std::cout << "velocity order " << format_double(rep.u_order.slope) << "\n"
            << "density order " << format_double(rep.rho_order.slope) << "\n";
  return rep.u_order.slope >= 1.7 ? 0 : kAcceptanceFailure;
}

int cmd_fit(const std::string& input) {
  std::ifstream f(input);
  if (!f) throw InvalidArgument("fit: cannot open '" + input + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const auto pts = parse_fit_csv(ss.str());
  const RateFit fit = fit_rate(pts);
  std::cout << "slope " << format_double(finite(fit.slope, "fit")) << "\n"
            << "intercept " << format_double(finite(fit.intercept, "fit")) << "\n"
            << "r2 " << format_double(finite(fit.r_squared, "fit")) << "\n"
            << "points " << fit.points << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressible channel flow with Navier-slip walls"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "configuration file")->required()->check(
        CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory (default ./out)");
    sub->add_option("--threads", common.threads, "sweep worker threads (default: all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", common.seed, "reserved; runs are deterministic");
  };

  auto* run_cmd = app.add_subcommand("run", "single trajectory and ledger CSV");
  add_common(run_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "friction sweep against the no-slip reference");
  add_common(sweep_cmd);
  auto* lame_cmd = app.add_subcommand("lame-test", "k-uniformity of the elliptic estimate");
  add_common(lame_cmd);
  auto* eig_cmd = app.add_subcommand("eig", "smallest eigenpairs of the Lame operator");
  add_common(eig_cmd);
  int eig_count = 6;
  eig_cmd->add_option("--count", eig_count, "number of eigenpairs")->check(CLI::PositiveNumber);
  auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution refinement study");
  add_common(mms_cmd);
  std::vector<int> resolutions{32, 64, 128};
  std::string scheme = "muscl_minmod";
  mms_cmd->add_option("--resolutions", resolutions, "grid sizes")->delimiter(',');
  mms_cmd->add_option("--scheme", scheme, "transport scheme")
      ->check(CLI::IsMember({"upwind1", "muscl_minmod"}));
  auto* fit_cmd = app.add_subcommand("fit", "log-log rate fit of a k,value CSV");
  std::string fit_input;
  fit_cmd->add_option("--input", fit_input, "CSV with columns k,value")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run_cmd) return cmd_run(common);
    if (*sweep_cmd) return cmd_sweep(common);
    if (*lame_cmd) return cmd_lame_test(common);
    if (*eig_cmd) return cmd_eig(common, eig_count);
    if (*mms_cmd) return cmd_mms(common, resolutions, scheme);
    if (*fit_cmd) return cmd_fit(fit_input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
