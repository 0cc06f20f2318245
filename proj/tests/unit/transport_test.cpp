#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "navslip/error.hpp"
#include "navslip/transport.hpp"
#include "oracles.hpp"

using namespace navslip;
using std::numbers::pi;

namespace {

VectorField swirl(const Grid& g, double amp) {
  // u . n = 0 on the walls, not divergence free
  return VectorField::from_function(g, [&](double x, double, double z) {
    return std::array<double, 2>{amp * (1 + std::sin(2 * pi * x) * z),
                                 amp * std::sin(pi * z) * std::cos(2 * pi * x)};
  });
}

}  // namespace

TEST_CASE("zero velocity leaves density unchanged") {
  const Grid g = build_grid(1.0, 8, 8);
  const ScalarField rho = ScalarField::from_function(
      g, [](double x, double, double z) { return 1.0 + 0.3 * std::sin(2 * pi * x) * z; });
  for (auto s : {TransportScheme::upwind1, TransportScheme::muscl_minmod})
    CHECK(continuity_step(rho, VectorField(g), 0.1, s) == rho);
}

TEST_CASE("total mass") {
  CHECK(total_mass(ScalarField(build_grid(1.0, 8, 8), 1.0)) == doctest::Approx(1.0));
  CHECK(total_mass(ScalarField(build_grid(2.0, 8, 8), 2.0)) == doctest::Approx(4.0));
  const Grid g = build_grid(1.0, 32, 8);
  const ScalarField r = ScalarField::from_function(
      g, [](double x, double, double) { return 1.0 + 0.5 * std::sin(2 * pi * x); });
  CHECK(total_mass(r) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mass is conserved to rounding") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (auto s : {TransportScheme::upwind1, TransportScheme::muscl_minmod})
    for (int n : {8, 16, 33}) {
      const Grid g = build_grid(1.3, n, n + 3);
      ScalarField rho(g);
      for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = u(rng);
      const VectorField v = swirl(g, 0.7);
      const double dt = 0.2 * std::min(g.hx(), g.hz()) / 1.5;
      ScalarField r = rho;
      for (int step = 0; step < 10; ++step) {
        const ScalarField next = continuity_step(r, v, dt, s);
        CHECK(std::abs(total_mass(next) - total_mass(r)) <= 1e-13 * total_mass(r));
        r = next;
      }
    }
}

TEST_CASE("maximum principle for uniform advection") {
  const Grid g = build_grid(1.0, 32, 8);
  ScalarField rho = ScalarField::from_function(
      g, [](double x, double, double z) { return 1.0 + 0.25 * std::sin(2 * pi * x) * (1 + z); });
  const double lo = rho.min(), hi = rho.max();
  VectorField v(g);
  for (std::size_t n = 0; n < g.node_count(); ++n) v(0, n) = -0.8;
  for (auto s : {TransportScheme::upwind1, TransportScheme::muscl_minmod}) {
    ScalarField r = rho;
    for (int step = 0; step < 40; ++step) r = continuity_step(r, v, 0.4 * g.hx() / 0.8, s);
    CHECK(r.min() >= lo - 1e-12);
    CHECK(r.max() <= hi + 1e-12);
  }
}

TEST_CASE("upwind shift converges at first order") {
  std::vector<double> hs, errs;
  for (int n : {32, 64, 128, 256}) {
    const Grid g = build_grid(1.0, n, 4);
    auto exact = [](double x) { return 1.0 + 0.5 * std::sin(2 * pi * x); };
    ScalarField r = ScalarField::from_function(g, [&](double x, double, double) { return exact(x); });
    VectorField v(g);
    for (std::size_t i = 0; i < g.node_count(); ++i) v(0, i) = 1.0;
    const int steps = n * 2;
    for (int s = 0; s < steps; ++s) r = continuity_step(r, v, 1.0 / steps, TransportScheme::upwind1);
    double l1 = 0;
    for (std::size_t i = 0; i < r.size(); ++i) l1 += g.weight(i) * std::abs(r[i] - exact(g.coords(i)[0] - 1.0));
    hs.push_back(g.hx());
    errs.push_back(l1);
  }
  CHECK(oracle::log_slope(hs, errs) >= 0.8);
}

TEST_CASE("positivity and preconditions") {
  const Grid g = build_grid(1.0, 8, 8);
  const ScalarField rho(g, 1.0);
  CHECK_THROWS_AS(continuity_step(rho, swirl(g, 1.0), -0.1), InvalidArgument);
  VectorField wall(g);
  wall(1, g.wall_nodes(Wall::top)[2]) = 1e-6;
  CHECK_THROWS_AS(continuity_step(rho, wall, 0.01), InvalidArgument);
  ScalarField neg = rho;
  neg[3] = -1.0;
  CHECK_THROWS_AS(continuity_step(neg, VectorField(g), 0.01), InvalidArgument);
  // a huge step empties upwind cells
  CHECK_THROWS_AS(continuity_step(rho, swirl(g, 1.0), 10.0), PositivityViolation);
  CHECK_THROWS_AS(continuity_step(rho, VectorField(build_grid(1.0, 8, 9)), 0.01),
                  InvalidArgument);
}
