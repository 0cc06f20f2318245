#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "navslip/krylov.hpp"
#include "navslip/mesh.hpp"
#include "navslip/sparse.hpp"

namespace navslip {

/// Shear and second viscosity. Construction enforces mu > 0 and
/// mu + 3 lam > 0.
class LameParams {
 public:
  LameParams(double mu, double lam);
  double mu() const noexcept { return mu_; }
  double lam() const noexcept { return lam_; }
  friend bool operator==(const LameParams&, const LameParams&) = default;

 private:
  double mu_;
  double lam_;
};

/// Slip length parameter K of the Navier condition; K = 0 is no-slip.
class SlipBC {
 public:
  explicit SlipBC(double k = 0.0);
  double k() const noexcept { return k_; }
  bool no_slip() const noexcept { return k_ == 0.0; }
  /// Friction coefficient 1/K; throws for K = 0.
  double alpha() const;
  friend bool operator==(const SlipBC&, const SlipBC&) = default;

 private:
  double k_;
};

enum class RowKind : std::uint8_t { unassigned, interior, normal_bc, tangential_bc };

/// Which wall closure assembled the boundary rows.
enum class Closure { robin, dirichlet };

/// Linear system over vector-field unknowns, numbered like VectorField
/// storage (component-major). Rows are kept editable until compile().
class OperatorSystem {
 public:
  explicit OperatorSystem(const Grid& g);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t unknowns() const noexcept { return rows_.size(); }
  std::size_t unknown(int component, std::size_t node) const noexcept {
    return static_cast<std::size_t>(component) * grid_.node_count() + node;
  }

  SparseRow& row(std::size_t r) { return rows_[r]; }
  const SparseRow& row(std::size_t r) const { return rows_[r]; }
  std::span<const RowKind> kinds() const noexcept { return kinds_; }
  RowKind kind(std::size_t r) const noexcept { return kinds_[r]; }
  void set_kind(std::size_t r, RowKind k) noexcept { kinds_[r] = k; }
  std::vector<double>& rhs() noexcept { return rhs_; }
  const std::vector<double>& rhs() const noexcept { return rhs_; }

  /// Throws InvalidArgument if any row is unassigned or a wall node does not
  /// own exactly one normal row and dim - 1 tangential rows.
  void check_complete() const;
  CsrMatrix compile() const;

 private:
  Grid grid_;
  std::vector<SparseRow> rows_;
  std::vector<RowKind> kinds_;
  std::vector<double> rhs_;
};

/// (L u)^c = mu Lap u^c + lam d_c(div u), evaluated at interior nodes with
/// the mesh stencils; wall nodes are left at zero.
VectorField apply_lame(const VectorField& u, const LameParams& p);

/// Interior rows a_n u - b L_h u for each component; wall rows left
/// unassigned. mass has one entry per node (ignored on the walls).
OperatorSystem assemble_interior(const Grid& g, std::span<const double> mass,
                                 double viscous_scale, const LameParams& p);

/// Wall rows: u . n = 0, and for every tangential component
/// k mu D_n(u . t) + u . t = 0 with D_n the one-sided second-order outward
/// normal derivative. Coefficients stay bounded as k -> 0 and the row
/// collapses to u . t = 0 at k = 0.
void assemble_robin_rows(OperatorSystem& sys, const SlipBC& bc,
                         const LameParams& p);

/// Independent no-slip closure: every velocity component is zero on walls.
void assemble_dirichlet_rows(OperatorSystem& sys);

struct LinearSolveInfo {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves -L_h u = g in the interior with the chosen wall closure.
VectorField solve_lame(const VectorField& g, const SlipBC& bc,
                       const LameParams& p, double tol = 1e-10,
                       Closure closure = Closure::robin,
                       LinearSolveInfo* info = nullptr);

/// Solves (rho I - dt L_h) u = rhs in the interior with the wall closure.
/// guess, when given, seeds the iteration.
VectorField solve_implicit_momentum(const ScalarField& rho, double dt,
                                    const VectorField& rhs, const SlipBC& bc,
                                    const LameParams& p, double tol = 1e-10,
                                    Closure closure = Closure::robin,
                                    const VectorField* guess = nullptr,
                                    LinearSolveInfo* info = nullptr);

/// -<L_h u, u> over interior nodes.
double lame_energy_form(const VectorField& u, const LameParams& p);

struct EigenPair {
  double value;
  VectorField field;  ///< unit discrete L2 norm
};

struct EigenOptions {
  double tol = 1e-9;       ///< relative Ritz residual
  int max_iterations = 500;
  int guard = 4;           ///< extra subspace vectors
  double shift = 1.0;
  double linear_tol = 1e-12;
};

/// Smallest eigenvalues of -L_h constrained by the wall rows, ascending,
/// by shift-invert subspace iteration with Rayleigh-Ritz.
std::vector<EigenPair> lame_eigenpairs(const Grid& g, const LameParams& p,
                                       const SlipBC& bc, int count,
                                       const EigenOptions& opt = {});

struct KUniformityEntry {
  double k;
  double u_h2;
  double u_l2;
  double g_l2;
  double ratio;  ///< ||u||_H2 / (||u||_L2 + ||g||_L2)
};

struct KUniformityReport {
  std::vector<KUniformityEntry> entries;
  double max_min_ratio = 1.0;
};

/// Solves -L_h u = g for every k and reports the spread of the elliptic
/// regularity ratio.
KUniformityReport k_uniformity_report(const VectorField& g, const LameParams& p,
                                      std::span<const double> k_list,
                                      double tol = 1e-10);

}  // namespace navslip
