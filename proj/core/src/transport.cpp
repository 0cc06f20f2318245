#include "navslip/transport.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "navslip/error.hpp"

namespace navslip {

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

double upwind_flux(double u_face, double left, double right) {
  return u_face >= 0.0 ? u_face * left : u_face * right;
}

}  // namespace

ScalarField mass_flux_divergence(const ScalarField& rho, const VectorField& u,
                                 TransportScheme scheme) {
  const Grid& g = rho.grid();
  if (!(u.grid() == g)) throw InvalidArgument("mass_flux_divergence: grid mismatch");
  const int zc = g.dim() - 1;
  const bool muscl = scheme == TransportScheme::muscl_minmod;
  const std::size_t N = g.node_count();
  std::vector<double> div(N, 0.0);

  // periodic directions
  for (Axis a : g.axes()) {
    if (a == Axis::z) continue;
    const int c = g.component(a);
    const double h = g.spacing(a);
    const int nx = g.nx(), ny = g.ny();
    for (int j = 0; j <= g.nz(); ++j)
      for (int k = 0; k < ny; ++k)
        for (int i = 0; i < nx; ++i) {
          auto node = [&](int s) {
            return a == Axis::x ? g.index((i + s + 2 * nx) % nx, k, j)
                                : g.index(i, (k + s + 2 * ny) % ny, j);
          };
          const std::size_t n0 = node(0), n1 = node(1);
          double left = rho[n0], right = rho[n1];
          if (muscl) {
            const std::size_t nm = node(-1), n2 = node(2);
            left += 0.5 * minmod(rho[n0] - rho[nm], rho[n1] - rho[n0]);
            right -= 0.5 * minmod(rho[n1] - rho[n0], rho[n2] - rho[n1]);
          }
          const double f = upwind_flux(0.5 * (u(c, n0) + u(c, n1)), left, right) / h;
          div[n0] += f;
          div[n1] -= f;
        }
  }

  // wall-normal direction; faces j+1/2 for j = 0..nz-1, none on the walls
  {
    const double h = g.hz();
    const int nz = g.nz();
    const std::size_t L = g.layer_size();
    for (std::size_t t = 0; t < L; ++t) {
      auto at = [&](int j) { return t + L * j; };
      for (int j = 0; j < nz; ++j) {
        const std::size_t n0 = at(j), n1 = at(j + 1);
        double left = rho[n0], right = rho[n1];
        if (muscl) {
          if (j > 0) left += 0.5 * minmod(rho[n0] - rho[at(j - 1)], rho[n1] - rho[n0]);
          if (j + 1 < nz) right -= 0.5 * minmod(rho[n1] - rho[n0], rho[at(j + 2)] - rho[n1]);
        }
        const double f = upwind_flux(0.5 * (u(zc, n0) + u(zc, n1)), left, right);
        div[n0] += f / (j == 0 ? 0.5 * h : h);
        div[n1] -= f / (j + 1 == nz ? 0.5 * h : h);
      }
    }
  }

  return ScalarField(g, std::move(div));
}

ScalarField continuity_step(const ScalarField& rho, const VectorField& u,
                            double dt, TransportScheme scheme, double rho_floor) {
  const Grid& g = rho.grid();
  if (!(dt >= 0.0)) throw InvalidArgument("continuity_step: dt must be >= 0");
  if (!(u.grid() == g)) throw InvalidArgument("continuity_step: grid mismatch");
  if (!(rho.min() > 0.0))
    throw InvalidArgument("continuity_step: input density must be positive");
  const int zc = g.dim() - 1;
  for (Wall w : {Wall::bottom, Wall::top})
    for (std::size_t n : g.wall_nodes(w))
      if (std::abs(u(zc, n)) > 1e-12)
        throw InvalidArgument("continuity_step: velocity has a normal component on the wall (" +
                              std::to_string(u(zc, n)) + ")");

  const ScalarField div = mass_flux_divergence(rho, u, scheme);
  const std::size_t N = g.node_count();
  ScalarField out(g);
  double worst = rho_floor;
  bool bad = false;
  for (std::size_t n = 0; n < N; ++n) {
    out[n] = rho[n] - dt * div[n];
    if (!(out[n] > rho_floor)) {
      bad = true;
      if (!(out[n] >= worst)) worst = out[n];
    }
  }
  if (bad)
    throw PositivityViolation("continuity_step: density fell to " + std::to_string(worst) +
                                  " (floor " + std::to_string(rho_floor) + ")",
                              worst);
  return out;
}

double total_mass(const ScalarField& rho) {
  const Grid& g = rho.grid();
  double s = 0.0;
  for (std::size_t n = 0; n < rho.size(); ++n) s += g.weight(n) * rho[n];
  return s;
}

}  // namespace navslip
