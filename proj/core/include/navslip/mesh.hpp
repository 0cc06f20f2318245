#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace navslip {

enum class Axis { x, y, z };

enum class Wall { bottom, top };

/// Uniform collocated grid on the periodic channel T_lx (x T_ly) x [0, 1].
///
/// Tangential directions are periodic with nx (ny) nodes; the wall-normal
/// direction z has nz cells and nz + 1 nodes, the first and last lying on
/// the walls. Node index is i + nx * (k + ny * j) with i along x, k along y
/// (ny == 1 in 2D) and j along z.
class Grid {
 public:
  Grid() = default;

  int dim() const noexcept { return dim_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int nz() const noexcept { return nz_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double hx() const noexcept { return lx_ / nx_; }
  double hy() const noexcept { return ly_ / ny_; }
  double hz() const noexcept { return 1.0 / nz_; }
  double spacing(Axis a) const noexcept;
  int extent(Axis a) const noexcept;
  bool periodic(Axis a) const noexcept { return a != Axis::z; }

  std::size_t node_count() const noexcept {
    return static_cast<std::size_t>(nx_) * ny_ * (nz_ + 1);
  }
  /// Nodes in one z-layer (one wall).
  std::size_t layer_size() const noexcept {
    return static_cast<std::size_t>(nx_) * ny_;
  }
  std::size_t index(int i, int k, int j) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx_) *
               (static_cast<std::size_t>(k) + static_cast<std::size_t>(ny_) * j);
  }
  std::size_t index(int i, int j) const noexcept { return index(i, 0, j); }
  int i_of(std::size_t n) const noexcept { return static_cast<int>(n % nx_); }
  int k_of(std::size_t n) const noexcept {
    return static_cast<int>((n / nx_) % ny_);
  }
  int j_of(std::size_t n) const noexcept {
    return static_cast<int>(n / layer_size());
  }
  bool on_wall(std::size_t n) const noexcept {
    const int j = j_of(n);
    return j == 0 || j == nz_;
  }

  double x(int i) const noexcept { return i * hx(); }
  double y(int k) const noexcept { return k * hy(); }
  double z(int j) const noexcept { return j * hz(); }
  /// Coordinates of node n as (x, y, z); y is 0 in 2D.
  std::array<double, 3> coords(std::size_t n) const noexcept {
    return {x(i_of(n)), y(k_of(n)), z(j_of(n))};
  }

  /// Volume of an interior control cell.
  double cell_volume() const noexcept {
    return dim_ == 3 ? hx() * hy() * hz() : hx() * hz();
  }
  /// Trapezoidal quadrature weight of node n (half a cell on the walls).
  double weight(std::size_t n) const noexcept {
    return on_wall(n) ? 0.5 * cell_volume() : cell_volume();
  }
  /// Wall surface element per wall node.
  double face_area() const noexcept { return dim_ == 3 ? hx() * hy() : hx(); }

  /// Outward unit normal of a wall, in component order (tangential..., z).
  std::vector<double> outward_normal(Wall w) const;
  std::vector<std::size_t> wall_nodes(Wall w) const;

  /// Vector component index carrying the given axis.
  int component(Axis a) const noexcept {
    switch (a) {
      case Axis::x: return 0;
      case Axis::y: return 1;
      case Axis::z: return dim_ - 1;
    }
    return 0;
  }
  /// Axes present on this grid, x first and z last.
  std::vector<Axis> axes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  friend Grid build_grid(double, int, int);
  friend Grid build_grid_3d(double, double, int, int, int);

  int dim_ = 2;
  int nx_ = 0;
  int ny_ = 1;
  int nz_ = 0;
  double lx_ = 0.0;
  double ly_ = 1.0;
};

/// Two-dimensional channel T_lx x [0, 1]. Throws InvalidArgument unless
/// lx > 0, nx >= 4 and nz >= 4.
Grid build_grid(double lx, int nx, int nz);
Grid build_grid_3d(double lx, double ly, int nx, int ny, int nz);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g, double value = 0.0)
      : grid_(g), values_(g.node_count(), value) {}
  ScalarField(const Grid& g, std::vector<double> values);

  template <class F>
  static ScalarField from_function(const Grid& g, F&& f) {
    ScalarField out(g);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
      const auto c = g.coords(n);
      out.values_[n] = f(c[0], c[1], c[2]);
    }
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t n) const noexcept { return values_[n]; }
  double& operator[](std::size_t n) noexcept { return values_[n]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double min() const;
  double max() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double c);

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);

/// dim reals per node stored component-major: value(c, n) = data[c * N + n].
/// Components are ordered x, (y,) z, so the wall-normal component is last.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& g, double value = 0.0)
      : grid_(g), values_(g.node_count() * g.dim(), value) {}
  VectorField(const Grid& g, std::vector<double> values);

  template <class F>
  static VectorField from_function(const Grid& g, F&& f) {
    VectorField out(g);
    const std::size_t N = g.node_count();
    for (std::size_t n = 0; n < N; ++n) {
      const auto c = g.coords(n);
      const auto v = f(c[0], c[1], c[2]);
      for (int d = 0; d < g.dim(); ++d) out.values_[d * N + n] = v[d];
    }
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  double operator()(int c, std::size_t n) const noexcept {
    return values_[c * grid_.node_count() + n];
  }
  double& operator()(int c, std::size_t n) noexcept {
    return values_[c * grid_.node_count() + n];
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> component_values(int c) const noexcept {
    return std::span<const double>(values_).subspan(c * grid_.node_count(),
                                                    grid_.node_count());
  }
  std::span<double> component_values(int c) noexcept {
    return std::span<double>(values_).subspan(c * grid_.node_count(),
                                              grid_.node_count());
  }
  ScalarField component(int c) const;
  void set_component(int c, const ScalarField& f);

  /// Largest Euclidean magnitude over nodes.
  double max_magnitude() const;
  bool all_finite() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double c);

  friend bool operator==(const VectorField&, const VectorField&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double c, VectorField a);

/// First or second derivative along one axis. Second-order centered in the
/// interior and periodic in x/y; on the walls, one-sided second-order
/// stencils (3 points for order 1, 4 points for order 2).
ScalarField apply_derivative(const ScalarField& f, Axis axis, int order);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
/// Sum of order-2 stencils; not the composition divergence(gradient(f)).
ScalarField laplacian(const ScalarField& f);

/// Discrete H^s norm, s in {0, 1, 2, 3}: square root of the trapezoidal
/// quadrature of |D^b f|^2 summed over multi-indices |b| <= s. Mixed
/// partials apply x, then y, then z.
double sobolev_norm(const ScalarField& f, int s);
double sobolev_norm(const VectorField& v, int s);

/// Sum over both wall node sets of |v|^2 times the wall surface element.
double boundary_trace_l2(const VectorField& v);

/// Trapezoidal-weighted inner products.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
/// Same, restricted to nodes strictly between the walls.
double interior_inner(const VectorField& a, const VectorField& b);

}  // namespace navslip
