#include "navslip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "navslip/error.hpp"

namespace navslip {

double Grid::spacing(Axis a) const noexcept {
  switch (a) {
    case Axis::x: return hx();
    case Axis::y: return hy();
    case Axis::z: return hz();
  }
  return 0.0;
}

int Grid::extent(Axis a) const noexcept {
  switch (a) {
    case Axis::x: return nx_;
    case Axis::y: return ny_;
    case Axis::z: return nz_ + 1;
  }
  return 0;
}

std::vector<double> Grid::outward_normal(Wall w) const {
  std::vector<double> n(dim_, 0.0);
  n[dim_ - 1] = (w == Wall::bottom) ? -1.0 : 1.0;
  return n;
}

std::vector<std::size_t> Grid::wall_nodes(Wall w) const {
  const int j = (w == Wall::bottom) ? 0 : nz_;
  std::vector<std::size_t> out;
  out.reserve(layer_size());
  for (int k = 0; k < ny_; ++k)
    for (int i = 0; i < nx_; ++i) out.push_back(index(i, k, j));
  return out;
}

std::vector<Axis> Grid::axes() const {
  if (dim_ == 3) return {Axis::x, Axis::y, Axis::z};
  return {Axis::x, Axis::z};
}

Grid build_grid(double lx, int nx, int nz) {
  if (!(lx > 0.0) || !std::isfinite(lx))
    throw InvalidArgument("build_grid: lx must be positive and finite");
  if (nx < 4 || nz < 4)
    throw InvalidArgument("build_grid: need nx >= 4 and nz >= 4 (got nx=" +
                          std::to_string(nx) + ", nz=" + std::to_string(nz) +
                          ")");
  Grid g;
  g.dim_ = 2;
  g.lx_ = lx;
  g.nx_ = nx;
  g.nz_ = nz;
  return g;
}

Grid build_grid_3d(double lx, double ly, int nx, int ny, int nz) {
  Grid g = build_grid(lx, nx, nz);
  if (!(ly > 0.0) || !std::isfinite(ly))
    throw InvalidArgument("build_grid_3d: ly must be positive and finite");
  if (ny < 4) throw InvalidArgument("build_grid_3d: need ny >= 4");
  g.dim_ = 3;
  g.ly_ = ly;
  g.ny_ = ny;
  return g;
}

// ---------------------------------------------------------------------------
// fields

ScalarField::ScalarField(const Grid& g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
  if (values_.size() != g.node_count())
    throw InvalidArgument("ScalarField: value count does not match grid");
}

double ScalarField::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

VectorField::VectorField(const Grid& g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
  if (values_.size() != g.node_count() * g.dim())
    throw InvalidArgument("VectorField: value count does not match grid");
}

ScalarField VectorField::component(int c) const {
  auto s = component_values(c);
  return ScalarField(grid_, std::vector<double>(s.begin(), s.end()));
}

void VectorField::set_component(int c, const ScalarField& f) {
  std::copy(f.values().begin(), f.values().end(),
            component_values(c).begin());
}

double VectorField::max_magnitude() const {
  const std::size_t N = grid_.node_count();
  double best = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    double s = 0.0;
    for (int c = 0; c < dim(); ++c) s += (*this)(c, n) * (*this)(c, n);
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

bool VectorField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
  return *this;
}

VectorField& VectorField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double c, VectorField a) { return a *= c; }

// ---------------------------------------------------------------------------
// stencils

namespace {

void derivative_periodic(const Grid& g, std::span<const double> f,
                         std::span<double> out, Axis axis, int order) {
  const double h = g.spacing(axis);
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j <= g.nz(); ++j)
    for (int k = 0; k < ny; ++k)
      for (int i = 0; i < nx; ++i) {
        std::size_t m, p;
        if (axis == Axis::x) {
          m = g.index((i + nx - 1) % nx, k, j);
          p = g.index((i + 1) % nx, k, j);
        } else {
          m = g.index(i, (k + ny - 1) % ny, j);
          p = g.index(i, (k + 1) % ny, j);
        }
        const std::size_t c = g.index(i, k, j);
        out[c] = order == 1 ? (f[p] - f[m]) / (2.0 * h)
                            : (f[p] - 2.0 * f[c] + f[m]) / (h * h);
      }
}

void derivative_wall_normal(const Grid& g, std::span<const double> f,
                            std::span<double> out, int order) {
  const double h = g.hz();
  const int nz = g.nz();
  const std::size_t L = g.layer_size();
  for (std::size_t t = 0; t < L; ++t) {
    auto at = [&](int j) { return f[t + L * j]; };
    for (int j = 1; j < nz; ++j)
      out[t + L * j] = order == 1 ? (at(j + 1) - at(j - 1)) / (2.0 * h)
                                  : (at(j + 1) - 2.0 * at(j) + at(j - 1)) / (h * h);
    if (order == 1) {
      out[t] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
      out[t + L * nz] =
          (3.0 * at(nz) - 4.0 * at(nz - 1) + at(nz - 2)) / (2.0 * h);
    } else {
      out[t] = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
      out[t + L * nz] = (2.0 * at(nz) - 5.0 * at(nz - 1) + 4.0 * at(nz - 2) -
                         at(nz - 3)) /
                        (h * h);
    }
  }
}

// Derivative of the given total order along one axis built from the
// order-1/order-2 stencils: 3 is order 1 applied to order 2.
ScalarField derivative_power(const ScalarField& f, Axis axis, int power) {
  switch (power) {
    case 0: return f;
    case 1: return apply_derivative(f, axis, 1);
    case 2: return apply_derivative(f, axis, 2);
    case 3: return apply_derivative(apply_derivative(f, axis, 2), axis, 1);
  }
  throw InvalidArgument("derivative_power: power must be <= 3");
}

double weighted_square_sum(const ScalarField& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) s += g.weight(n) * f[n] * f[n];
  return s;
}

double sobolev_square(const ScalarField& f, int s) {
  const Grid& g = f.grid();
  double total = 0.0;
  if (g.dim() == 2) {
    for (int a = 0; a <= s; ++a) {
      const ScalarField fx = derivative_power(f, Axis::x, a);
      for (int b = 0; a + b <= s; ++b)
        total += weighted_square_sum(derivative_power(fx, Axis::z, b));
    }
  } else {
    for (int a = 0; a <= s; ++a) {
      const ScalarField fx = derivative_power(f, Axis::x, a);
      for (int c = 0; a + c <= s; ++c) {
        const ScalarField fxy = derivative_power(fx, Axis::y, c);
        for (int b = 0; a + b + c <= s; ++b)
          total += weighted_square_sum(derivative_power(fxy, Axis::z, b));
      }
    }
  }
  return total;
}

}  // namespace

ScalarField apply_derivative(const ScalarField& f, Axis axis, int order) {
  if (order != 1 && order != 2)
    throw InvalidArgument("apply_derivative: order must be 1 or 2");
  const Grid& g = f.grid();
  if (axis == Axis::y && g.dim() != 3)
    throw InvalidArgument("apply_derivative: y axis requires a 3D grid");
  ScalarField out(g);
  if (axis == Axis::z)
    derivative_wall_normal(g, f.values(), out.values(), order);
  else
    derivative_periodic(g, f.values(), out.values(), axis, order);
  return out;
}

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out(g);
  for (Axis a : g.axes())
    out.set_component(g.component(a), apply_derivative(f, a, 1));
  return out;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = v.grid();
  ScalarField out(g);
  for (Axis a : g.axes()) out += apply_derivative(v.component(g.component(a)), a, 1);
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g);
  for (Axis a : g.axes()) out += apply_derivative(f, a, 2);
  return out;
}

double sobolev_norm(const ScalarField& f, int s) {
  if (s < 0 || s > 3) throw InvalidArgument("sobolev_norm: s must be in 0..3");
  return std::sqrt(sobolev_square(f, s));
}

double sobolev_norm(const VectorField& v, int s) {
  if (s < 0 || s > 3) throw InvalidArgument("sobolev_norm: s must be in 0..3");
  double total = 0.0;
  for (int c = 0; c < v.dim(); ++c) total += sobolev_square(v.component(c), s);
  return std::sqrt(total);
}

double boundary_trace_l2(const VectorField& v) {
  const Grid& g = v.grid();
  double s = 0.0;
  for (Wall w : {Wall::bottom, Wall::top})
    for (std::size_t n : g.wall_nodes(w))
      for (int c = 0; c < v.dim(); ++c) s += v(c, n) * v(c, n);
  return s * g.face_area();
}

double inner(const ScalarField& a, const ScalarField& b) {
  const Grid& g = a.grid();
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += g.weight(n) * a[n] * b[n];
  return s;
}

double inner(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid();
  const std::size_t N = g.node_count();
  double s = 0.0;
  for (int c = 0; c < a.dim(); ++c)
    for (std::size_t n = 0; n < N; ++n) s += g.weight(n) * a(c, n) * b(c, n);
  return s;
}

double interior_inner(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid();
  const std::size_t N = g.node_count();
  const std::size_t L = g.layer_size();
  double s = 0.0;
  for (int c = 0; c < a.dim(); ++c)
    for (std::size_t n = L; n < N - L; ++n) s += a(c, n) * b(c, n);
  return s * g.cell_volume();
}

}  // namespace navslip
