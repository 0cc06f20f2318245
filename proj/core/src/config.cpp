#include "navslip/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "navslip/error.hpp"

namespace navslip {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
    throw InvalidArgument("config: " + key + ": not a finite number: '" + t + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const long d = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE || d < -1000000000 || d > 1000000000)
    throw InvalidArgument("config: " + key + ": not an integer: '" + t + "'");
  return static_cast<int>(d);
}

std::vector<std::string> split_list(std::string v) {
  v = trim(v);
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
  return out;
}

std::string num(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::string nums(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s;
}

const char* scheme_name(TransportScheme s) {
  return s == TransportScheme::upwind1 ? "upwind1" : "muscl_minmod";
}
const char* closure_name(Closure c) { return c == Closure::robin ? "robin" : "dirichlet"; }
const char* initial_name(InitialData i) {
  switch (i) {
    case InitialData::shear: return "shear";
    case InitialData::equilibrium: return "equilibrium";
    case InitialData::compatible: return "compatible";
    default: return "default";
  }
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"domain.dim", [](RunConfig& c, auto& k, auto& v) { c.dim = to_int(k, v); }},
      {"domain.lx", [](RunConfig& c, auto& k, auto& v) { c.lx = to_double(k, v); }},
      {"domain.ly", [](RunConfig& c, auto& k, auto& v) { c.ly = to_double(k, v); }},
      {"domain.nx", [](RunConfig& c, auto& k, auto& v) { c.nx = to_int(k, v); }},
      {"domain.ny", [](RunConfig& c, auto& k, auto& v) { c.ny = to_int(k, v); }},
      {"domain.nz", [](RunConfig& c, auto& k, auto& v) { c.nz = to_int(k, v); }},
      {"physics.mu", [](RunConfig& c, auto& k, auto& v) { c.mu = to_double(k, v); }},
      {"physics.lam", [](RunConfig& c, auto& k, auto& v) { c.lam = to_double(k, v); }},
      {"physics.pressure_A",
       [](RunConfig& c, auto& k, auto& v) { c.pressure_A = to_double(k, v); }},
      {"physics.pressure_gamma",
       [](RunConfig& c, auto& k, auto& v) { c.pressure_gamma = to_double(k, v); }},
      {"physics.k", [](RunConfig& c, auto& k, auto& v) { c.k = to_double(k, v); }},
      {"numerics.cfl_factor",
       [](RunConfig& c, auto& k, auto& v) { c.cfl_factor = to_double(k, v); }},
      {"numerics.picard_max",
       [](RunConfig& c, auto& k, auto& v) { c.picard_max = to_int(k, v); }},
      {"numerics.picard_tol",
       [](RunConfig& c, auto& k, auto& v) { c.picard_tol = to_double(k, v); }},
      {"numerics.linear_tol",
       [](RunConfig& c, auto& k, auto& v) { c.linear_tol = to_double(k, v); }},
      {"numerics.rho_floor",
       [](RunConfig& c, auto& k, auto& v) { c.rho_floor = to_double(k, v); }},
      {"numerics.fixed_dt",
       [](RunConfig& c, auto& k, auto& v) { c.fixed_dt = to_double(k, v); }},
      {"numerics.transport_scheme",
       [](RunConfig& c, auto& k, auto& v) {
         const std::string t = trim(v);
         if (t == "upwind1") c.transport_scheme = TransportScheme::upwind1;
         else if (t == "muscl_minmod") c.transport_scheme = TransportScheme::muscl_minmod;
         else throw InvalidArgument("config: " + k + ": expected upwind1 or muscl_minmod");
       }},
      {"numerics.closure",
       [](RunConfig& c, auto& k, auto& v) {
         const std::string t = trim(v);
         if (t == "robin") c.closure = Closure::robin;
         else if (t == "dirichlet") c.closure = Closure::dirichlet;
         else throw InvalidArgument("config: " + k + ": expected robin or dirichlet");
       }},
      {"experiment.t_final",
       [](RunConfig& c, auto& k, auto& v) { c.t_final = to_double(k, v); }},
      {"experiment.output_count",
       [](RunConfig& c, auto& k, auto& v) { c.output_count = to_int(k, v); }},
      {"experiment.output_times",
       [](RunConfig& c, auto& k, auto& v) { c.output_times = to_doubles(k, v); }},
      {"experiment.k_list",
       [](RunConfig& c, auto& k, auto& v) { c.k_list = to_doubles(k, v); }},
      {"experiment.initial",
       [](RunConfig& c, auto& k, auto& v) {
         const std::string t = trim(v);
         if (t == "default") c.initial = InitialData::default_data;
         else if (t == "shear") c.initial = InitialData::shear;
         else if (t == "equilibrium") c.initial = InitialData::equilibrium;
         else if (t == "compatible") c.initial = InitialData::compatible;
         else throw InvalidArgument("config: " + k +
                                    ": expected default, shear, equilibrium or compatible");
       }},
      {"experiment.amplitude",
       [](RunConfig& c, auto& k, auto& v) { c.amplitude = to_double(k, v); }},
      {"output.directory", [](RunConfig& c, auto&, auto& v) { c.directory = trim(v); }},
      {"output.formats",
       [](RunConfig& c, auto& k, auto& v) {
         c.formats = split_list(v);
         for (const auto& f : c.formats)
           if (f != "csv" && f != "json")
             throw InvalidArgument("config: " + k + ": unknown format '" + f + "'");
       }},
  };
  return table;
}

}  // namespace

void validate_config(const RunConfig& c) {
  if (c.dim != 2 && c.dim != 3) throw InvalidArgument("config: domain.dim must be 2 or 3");
  (void)make_grid(c);
  (void)make_phys(c);
  make_control(c).validate();
  if (!(c.t_final > 0.0)) throw InvalidArgument("config: experiment.t_final must be > 0");
  if (c.output_count < 1) throw InvalidArgument("config: experiment.output_count must be >= 1");
  for (std::size_t i = 0; i < c.output_times.size(); ++i) {
    const double t = c.output_times[i];
    if (!(t > 0.0) || t > c.t_final || (i && !(t > c.output_times[i - 1])))
      throw InvalidArgument(
          "config: experiment.output_times must increase strictly within (0, t_final]");
  }
  bool zero = false;
  for (double k : c.k_list) {
    if (!(k >= 0.0)) throw InvalidArgument("config: experiment.k_list entries must be >= 0");
    zero = zero || k == 0.0;
  }
  if (!zero) throw InvalidArgument("config: experiment.k_list must contain 0");
  if (!(c.amplitude >= 0.0)) throw InvalidArgument("config: experiment.amplitude must be >= 0");
  if (c.directory.empty()) throw InvalidArgument("config: output.directory must not be empty");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InvalidArgument("config: line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "domain" && section != "physics" && section != "numerics" &&
          section != "experiment" && section != "output")
        throw InvalidArgument("config: unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config: line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw InvalidArgument("config: line " + std::to_string(lineno) + ": key outside a section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const auto it = setters().find(key);
    if (it == setters().end()) throw InvalidArgument("config: unknown key '" + key + "'");
    if (!seen.insert(key).second) throw InvalidArgument("config: duplicate key '" + key + "'");
    it->second(cfg, key, line.substr(eq + 1));
  }
  for (const char* req : {"domain.nx", "domain.nz", "domain.lx", "experiment.t_final"})
    if (!seen.count(req)) throw InvalidArgument(std::string("config: missing required key '") +
                                                req + "'");
  if (cfg.dim == 3 && !seen.count("domain.ly")) cfg.ly = cfg.lx;
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[domain]\n"
    << "dim = " << c.dim << "\n"
    << "lx = " << num(c.lx) << "\n"
    << "ly = " << num(c.ly) << "\n"
    << "nx = " << c.nx << "\n"
    << "ny = " << c.ny << "\n"
    << "nz = " << c.nz << "\n\n"
    << "[physics]\n"
    << "mu = " << num(c.mu) << "\n"
    << "lam = " << num(c.lam) << "\n"
    << "pressure_A = " << num(c.pressure_A) << "\n"
    << "pressure_gamma = " << num(c.pressure_gamma) << "\n"
    << "k = " << num(c.k) << "\n\n"
    << "[numerics]\n"
    << "cfl_factor = " << num(c.cfl_factor) << "\n"
    << "picard_max = " << c.picard_max << "\n"
    << "picard_tol = " << num(c.picard_tol) << "\n"
    << "linear_tol = " << num(c.linear_tol) << "\n"
    << "rho_floor = " << num(c.rho_floor) << "\n"
    << "transport_scheme = " << scheme_name(c.transport_scheme) << "\n"
    << "closure = " << closure_name(c.closure) << "\n"
    << "fixed_dt = " << num(c.fixed_dt) << "\n\n"
    << "[experiment]\n"
    << "t_final = " << num(c.t_final) << "\n"
    << "output_count = " << c.output_count << "\n"
    << "output_times = " << nums(c.output_times) << "\n"
    << "k_list = " << nums(c.k_list) << "\n"
    << "initial = " << initial_name(c.initial) << "\n"
    << "amplitude = " << num(c.amplitude) << "\n\n"
    << "[output]\n"
    << "directory = " << c.directory << "\n"
    << "formats = ";
  for (std::size_t i = 0; i < c.formats.size(); ++i) o << (i ? ", " : "") << c.formats[i];
  o << "\n";
  return o.str();
}

Grid make_grid(const RunConfig& c) {
  return c.dim == 3 ? build_grid_3d(c.lx, c.ly, c.nx, c.ny, c.nz) : build_grid(c.lx, c.nx, c.nz);
}

PhysParams make_phys(const RunConfig& c) {
  return PhysParams(LameParams(c.mu, c.lam), c.pressure_A, c.pressure_gamma, SlipBC(c.k));
}

StepControl make_control(const RunConfig& c) {
  StepControl s;
  s.cfl_factor = c.cfl_factor;
  s.picard_max = c.picard_max;
  s.picard_tol = c.picard_tol;
  s.linear_tol = c.linear_tol;
  s.rho_floor = c.rho_floor;
  s.scheme = c.transport_scheme;
  s.closure = c.closure;
  s.fixed_dt = c.fixed_dt;
  return s;
}

FluidState make_initial(const RunConfig& c, const Grid& g) {
  switch (c.initial) {
    case InitialData::shear: return shear_initial_state(g, c.amplitude);
    case InitialData::equilibrium: return equilibrium_state(g);
    case InitialData::compatible: return compatible_initial_state(g);
    default: return default_initial_state(g);
  }
}

std::vector<double> make_output_times(const RunConfig& c) {
  return c.output_times.empty() ? uniform_output_times(c.t_final, c.output_count)
                                : c.output_times;
}

}  // namespace navslip
