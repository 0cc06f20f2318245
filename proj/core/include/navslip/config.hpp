#pragma once

#include <string>
#include <vector>

#include "navslip/dynamics.hpp"
#include "navslip/mesh.hpp"

namespace navslip {

enum class InitialData { default_data, shear, equilibrium, compatible };

struct RunConfig {
  // [domain]
  int dim = 2;
  double lx = 1.0;
  double ly = 1.0;
  int nx = 0;
  int ny = 4;
  int nz = 0;
  // [physics]
  double mu = 0.1;
  double lam = 0.0;
  double pressure_A = 1.0;
  double pressure_gamma = 1.4;
  double k = 0.0;
  // [numerics]
  double cfl_factor = 0.4;
  int picard_max = 1;
  double picard_tol = 1e-10;
  double linear_tol = 1e-10;
  double rho_floor = kDefaultRhoFloor;
  TransportScheme transport_scheme = TransportScheme::upwind1;
  Closure closure = Closure::robin;
  double fixed_dt = 0.0;
  // [experiment]
  double t_final = 0.0;
  int output_count = 50;
  std::vector<double> output_times;  ///< overrides output_count when not empty
  std::vector<double> k_list{0.0, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0};
  InitialData initial = InitialData::default_data;
  double amplitude = 0.5;
  // [output]
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json"};

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Sectioned "key = value" text; '#' starts a comment, lists are comma
/// separated. Required: [domain] nx, nz, lx and [experiment] t_final.
/// Throws InvalidArgument naming the offending key on unknown keys, missing
/// keys and invalid values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Re-checks every invariant; parse_config calls it.
void validate_config(const RunConfig& cfg);

Grid make_grid(const RunConfig& cfg);
PhysParams make_phys(const RunConfig& cfg);
StepControl make_control(const RunConfig& cfg);
FluidState make_initial(const RunConfig& cfg, const Grid& g);
std::vector<double> make_output_times(const RunConfig& cfg);

}  // namespace navslip
