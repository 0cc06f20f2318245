#include "navslip/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "navslip/error.hpp"

namespace navslip {

namespace {

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteOutput(std::string("non-finite value in ") + what);
  return v;
}

nlohmann::ordered_json fit_json(const std::optional<RateFit>& f) {
  if (!f) return nullptr;
  return {{"slope", finite(f->slope, "fit")},
          {"intercept", finite(f->intercept, "fit")},
          {"r2", finite(f->r_squared, "fit")}};
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // no "-0" in output
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string ledger_csv(const EnergyLedger& ledger) {
  std::string out =
      "t,mass,e_kin,dissipation,boundary_dissipation,pressure_work,energy_residual,"
      "trace_accum,u_h1,u_h2,u_h3,rho_h1,rho_h2,rho_inv_linf,ut_l2\n";
  for (const auto& r : ledger.records) {
    const double row[] = {r.t,           r.mass,          r.e_kin,
                          r.dissipation, r.boundary_dissipation,
                          r.pressure_work, r.energy_residual, r.trace_accum,
                          r.u_h1,        r.u_h2,          r.u_h3,
                          r.rho_h1,      r.rho_h2,        r.rho_inv_linf,
                          r.ut_l2};
    bool first = true;
    for (double v : row) {
      if (!first) out += ',';
      out += format_double(finite(v, "ledger"));
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::string sweep_report_json(const SweepReport& rep, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["config_echo"] = serialize_config(cfg);
  j["metrics"] = nlohmann::ordered_json::array();
  for (const auto& m : rep.metrics)
    j["metrics"].push_back({{"k", finite(m.k, "metrics")},
                            {"sup_sq_err", finite(m.sup_sq_err, "metrics")},
                            {"sup_w_l2", finite(m.sup_w_l2, "metrics")},
                            {"sup_phi_l2", finite(m.sup_phi_l2, "metrics")},
                            {"sup_w_h1", finite(m.sup_w_h1, "metrics")},
                            {"trace_integral", finite(m.trace_integral, "metrics")},
                            {"energy_gap", finite(m.energy_gap, "metrics")}});
  j["fits"] = {{"sq_err", fit_json(rep.sq_err_fit)}, {"trace", fit_json(rep.trace_fit)}};
  j["k_uniformity"] = {
      {"max_min_ratio", finite(rep.k_uniformity.max_min_ratio, "k_uniformity")}};
  j["acceptance"] = nlohmann::ordered_json::object();
  for (const auto& [name, ok] : rep.acceptance) j["acceptance"][name] = ok;
  return j.dump(2) + "\n";
}

std::vector<std::pair<double, double>> parse_fit_csv(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    auto parse = [](const std::string& s, double& v) {
      char* end = nullptr;
      v = std::strtod(s.c_str(), &end);
      while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
      return end != s.c_str() && *end == '\0';
    };
    double k = 0.0, v = 0.0;
    const bool ok = comma != std::string::npos && parse(line.substr(0, comma), k) &&
                    parse(line.substr(comma + 1), v);
    if (!ok) {
      if (out.empty() && lineno == 1) continue;
      throw InvalidArgument("fit csv: line " + std::to_string(lineno) + ": expected k,value");
    }
    out.emplace_back(k, v);
  }
  return out;
}

}  // namespace navslip
