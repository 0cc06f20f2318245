#include "navslip/lame.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "navslip/error.hpp"

namespace navslip {

LameParams::LameParams(double mu, double lam) : mu_(mu), lam_(lam) {
  if (!std::isfinite(mu) || !std::isfinite(lam))
    throw InvalidArgument("LameParams: viscosities must be finite");
  if (!(mu > 0.0) || !(mu + 3.0 * lam > 0.0))
    throw InvalidArgument(
        "LameParams: viscosities must satisfy mu > 0 and mu + 3*lam > 0 (got mu=" +
        std::to_string(mu) + ", lam=" + std::to_string(lam) + ")");
}

SlipBC::SlipBC(double k) : k_(k) {
  if (!std::isfinite(k) || k < 0.0)
    throw InvalidArgument("SlipBC: slip parameter k must be finite and >= 0");
}

double SlipBC::alpha() const {
  if (k_ == 0.0) throw InvalidArgument("SlipBC: friction 1/k undefined at k = 0");
  return 1.0 / k_;
}

OperatorSystem::OperatorSystem(const Grid& g)
    : grid_(g),
      rows_(g.node_count() * g.dim()),
      kinds_(g.node_count() * g.dim(), RowKind::unassigned),
      rhs_(g.node_count() * g.dim(), 0.0) {}

void OperatorSystem::check_complete() const {
  const std::size_t N = grid_.node_count();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::size_t n = r % N;
    const int c = static_cast<int>(r / N);
    const RowKind k = kinds_[r];
    if (k == RowKind::unassigned)
      throw InvalidArgument("OperatorSystem: row " + std::to_string(r) +
                            " was never assigned");
    if (!grid_.on_wall(n)) {
      if (k != RowKind::interior)
        throw InvalidArgument("OperatorSystem: interior node carries a boundary row");
      continue;
    }
    const bool normal = c == grid_.dim() - 1;
    if (normal && k != RowKind::normal_bc)
      throw InvalidArgument("OperatorSystem: wall node without a normal row");
    if (!normal && k != RowKind::tangential_bc)
      throw InvalidArgument("OperatorSystem: wall node without a tangential row");
  }
}

CsrMatrix OperatorSystem::compile() const {
  check_complete();
  return SparseRowBuilder::build(rows_);
}

namespace {

// Node one step along an axis; periodic wrap on x and y. Callers only step
// in z from interior nodes.
std::size_t step_node(const Grid& g, std::size_t n, Axis a, int offset) {
  int i = g.i_of(n), k = g.k_of(n), j = g.j_of(n);
  switch (a) {
    case Axis::x: i = (i + offset + g.nx()) % g.nx(); break;
    case Axis::y: k = (k + offset + g.ny()) % g.ny(); break;
    case Axis::z: j += offset; break;
  }
  return g.index(i, k, j);
}

Axis axis_of_component(const Grid& g, int c) {
  if (c == g.dim() - 1) return Axis::z;
  return c == 0 ? Axis::x : Axis::y;
}

}  // namespace

VectorField apply_lame(const VectorField& u, const LameParams& p) {
  const Grid& g = u.grid();
  const int dim = g.dim();
  std::vector<ScalarField> comps;
  for (int c = 0; c < dim; ++c) comps.push_back(u.component(c));

  VectorField out(g);
  for (int c = 0; c < dim; ++c) {
    const Axis ac = axis_of_component(g, c);
    ScalarField lc = p.mu() * laplacian(comps[c]);
    ScalarField graddiv(g);
    for (int d = 0; d < dim; ++d) {
      const Axis ad = axis_of_component(g, d);
      if (d == c) {
        graddiv += apply_derivative(comps[d], ac, 2);
      } else {
        const Axis first = std::min(ac, ad);
        const Axis second = std::max(ac, ad);
        graddiv += apply_derivative(apply_derivative(comps[d], first, 1), second, 1);
      }
    }
    lc += p.lam() * graddiv;
    out.set_component(c, lc);
  }
  const std::size_t L = g.layer_size(), N = g.node_count();
  for (int c = 0; c < dim; ++c)
    for (std::size_t t = 0; t < L; ++t) {
      out(c, t) = 0.0;
      out(c, N - L + t) = 0.0;
    }
  return out;
}

OperatorSystem assemble_interior(const Grid& g, std::span<const double> mass,
                                 double viscous_scale, const LameParams& p) {
  if (mass.size() != g.node_count())
    throw InvalidArgument("assemble_interior: mass size does not match grid");
  OperatorSystem sys(g);
  const int dim = g.dim();
  const std::size_t N = g.node_count(), L = g.layer_size();
  const double bm = viscous_scale * p.mu();
  const double bl = viscous_scale * p.lam();
  const auto axes = g.axes();

  for (std::size_t n = L; n < N - L; ++n) {
    for (int c = 0; c < dim; ++c) {
      const std::size_t r = sys.unknown(c, n);
      SparseRow& row = sys.row(r);
      row.add(r, mass[n]);
      // -b mu Lap u^c
      for (Axis a : axes) {
        const double h2 = g.spacing(a) * g.spacing(a);
        row.add(sys.unknown(c, step_node(g, n, a, -1)), -bm / h2);
        row.add(r, 2.0 * bm / h2);
        row.add(sys.unknown(c, step_node(g, n, a, +1)), -bm / h2);
      }
      // -b lam d_c(div u)
      const Axis ac = axis_of_component(g, c);
      for (int d = 0; d < dim; ++d) {
        const Axis ad = axis_of_component(g, d);
        if (d == c) {
          const double h2 = g.spacing(ac) * g.spacing(ac);
          row.add(sys.unknown(d, step_node(g, n, ac, -1)), -bl / h2);
          row.add(sys.unknown(d, n), 2.0 * bl / h2);
          row.add(sys.unknown(d, step_node(g, n, ac, +1)), -bl / h2);
        } else {
          const double w = bl / (4.0 * g.spacing(ac) * g.spacing(ad));
          for (int sc : {-1, 1})
            for (int sd : {-1, 1}) {
              const std::size_t m = step_node(g, step_node(g, n, ac, sc), ad, sd);
              row.add(sys.unknown(d, m), -w * sc * sd);
            }
        }
      }
      sys.set_kind(r, RowKind::interior);
    }
  }
  return sys;
}

void assemble_robin_rows(OperatorSystem& sys, const SlipBC& bc,
                         const LameParams& p) {
  const Grid& g = sys.grid();
  const int dim = g.dim();
  const double s = bc.k() * p.mu() / (2.0 * g.hz());
  const std::size_t L = g.layer_size();
  for (Wall w : {Wall::bottom, Wall::top}) {
    const long inward = (w == Wall::bottom) ? static_cast<long>(L) : -static_cast<long>(L);
    for (std::size_t n : g.wall_nodes(w)) {
      const std::size_t in1 = static_cast<std::size_t>(static_cast<long>(n) + inward);
      const std::size_t in2 = static_cast<std::size_t>(static_cast<long>(n) + 2 * inward);
      const std::size_t rn = sys.unknown(dim - 1, n);
      sys.row(rn).clear();
      sys.row(rn).add(rn, 1.0);
      sys.set_kind(rn, RowKind::normal_bc);
      sys.rhs()[rn] = 0.0;
      for (int c = 0; c < dim - 1; ++c) {
        const std::size_t r = sys.unknown(c, n);
        SparseRow& row = sys.row(r);
        row.clear();
        // k mu (3 u_w - 4 u_1 + u_2) / (2 h) + u_w, same form on both walls
        row.add(r, 1.0 + 3.0 * s);
        row.add(sys.unknown(c, in1), -4.0 * s);
        row.add(sys.unknown(c, in2), s);
        sys.set_kind(r, RowKind::tangential_bc);
        sys.rhs()[r] = 0.0;
      }
    }
  }
}

void assemble_dirichlet_rows(OperatorSystem& sys) {
  const Grid& g = sys.grid();
  const std::size_t N = g.node_count(), L = g.layer_size();
  for (int c = 0; c < g.dim(); ++c) {
    for (std::size_t t = 0; t < L; ++t) {
      for (std::size_t n : {t, N - L + t}) {
        const std::size_t r = sys.unknown(c, n);
        sys.row(r).clear();
        sys.row(r).add(r, 1.0);
        sys.set_kind(r, c == g.dim() - 1 ? RowKind::normal_bc : RowKind::tangential_bc);
        sys.rhs()[r] = 0.0;
      }
    }
  }
}

namespace {

void close_walls(OperatorSystem& sys, Closure closure, const SlipBC& bc,
                 const LameParams& p) {
  if (closure == Closure::dirichlet)
    assemble_dirichlet_rows(sys);
  else
    assemble_robin_rows(sys, bc, p);
}

// Rows holding a lone diagonal entry are solved exactly after the Krylov
// pass, so homogeneous wall rows come out as exact zeros.
void solve_compiled(const CsrMatrix& A, std::span<const double> rhs,
                    std::span<double> x, double tol, const char* who,
                    LinearSolveInfo* info) {
  KrylovOptions opt;
  opt.tol = tol;
  const KrylovResult res = solve_krylov(A, rhs, x, opt);
  if (!res.converged)
    throw SolverDivergence(std::string(who) + ": linear solve did not converge (" +
                               res.method + ", relative residual " +
                               std::to_string(res.relative_residual) + ")",
                           res.relative_residual, res.iterations);
  const auto rp = A.row_ptr();
  const auto cols = A.columns();
  const auto vals = A.values();
  for (std::size_t r = 0; r < A.size(); ++r)
    if (rp[r + 1] - rp[r] == 1 && cols[rp[r]] == r) x[r] = rhs[r] / vals[rp[r]];
  if (info) {
    info->iterations = res.iterations;
    info->relative_residual = res.relative_residual;
  }
}

void solve_system(const OperatorSystem& sys, std::span<double> x, double tol,
                  const char* who, LinearSolveInfo* info) {
  solve_compiled(sys.compile(), sys.rhs(), x, tol, who, info);
}

}  // namespace

VectorField solve_lame(const VectorField& g, const SlipBC& bc,
                       const LameParams& p, double tol, Closure closure,
                       LinearSolveInfo* info) {
  if (!(tol > 0.0)) throw InvalidArgument("solve_lame: tol must be positive");
  if (!g.all_finite()) throw InvalidArgument("solve_lame: g must be finite");
  const Grid& grid = g.grid();
  std::vector<double> zero_mass(grid.node_count(), 0.0);
  OperatorSystem sys = assemble_interior(grid, zero_mass, 1.0, p);
  close_walls(sys, closure, bc, p);
  for (std::size_t r = 0; r < sys.unknowns(); ++r)
    if (sys.kind(r) == RowKind::interior) sys.rhs()[r] = g.values()[r];
  VectorField u(grid);
  solve_system(sys, u.values(), tol, "solve_lame", info);
  return u;
}

VectorField solve_implicit_momentum(const ScalarField& rho, double dt,
                                    const VectorField& rhs, const SlipBC& bc,
                                    const LameParams& p, double tol,
                                    Closure closure, const VectorField* guess,
                                    LinearSolveInfo* info) {
  if (!(tol > 0.0)) throw InvalidArgument("solve_implicit_momentum: tol must be positive");
  if (!(dt >= 0.0)) throw InvalidArgument("solve_implicit_momentum: dt must be >= 0");
  if (!(rho.min() > 0.0))
    throw InvalidArgument("solve_implicit_momentum: density must be positive");
  const Grid& grid = rho.grid();
  OperatorSystem sys = assemble_interior(grid, rho.values(), dt, p);
  close_walls(sys, closure, bc, p);
  const std::size_t N = grid.node_count();
  VectorField u(grid);
  for (std::size_t r = 0; r < sys.unknowns(); ++r) {
    if (sys.kind(r) != RowKind::interior) continue;
    sys.rhs()[r] = rhs.values()[r];
    u.values()[r] = guess ? guess->values()[r] : rhs.values()[r] / rho[r % N];
  }
  solve_system(sys, u.values(), tol, "solve_implicit_momentum", info);
  return u;
}

double lame_energy_form(const VectorField& u, const LameParams& p) {
  return -interior_inner(apply_lame(u, p), u);
}

// ---------------------------------------------------------------------------
// eigenpairs

namespace {

double weighted_dot(const Grid& g, std::span<const double> a,
                    std::span<const double> b) {
  const std::size_t N = g.node_count();
  double s = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) s += g.weight(r % N) * a[r] * b[r];
  return s;
}

// Deterministic start vectors; values in (-0.5, 0.5).
double start_value(std::size_t r, int v) {
  const double s = std::sin(12.9898 * static_cast<double>(r + 1) +
                            78.233 * static_cast<double>(v + 1)) *
                   43758.5453;
  return s - std::floor(s) - 0.5;
}

}  // namespace

std::vector<EigenPair> lame_eigenpairs(const Grid& g, const LameParams& p,
                                       const SlipBC& bc, int count,
                                       const EigenOptions& opt) {
  if (count < 1) throw InvalidArgument("lame_eigenpairs: count must be >= 1");
  const std::size_t N = g.node_count();
  std::vector<double> shifted_mass(N, opt.shift);
  OperatorSystem sys = assemble_interior(g, shifted_mass, 1.0, p);
  assemble_robin_rows(sys, bc, p);
  const std::size_t n = sys.unknowns();
  const int m = std::min<int>(count + opt.guard, static_cast<int>(n));
  std::vector<char> interior(n);
  for (std::size_t r = 0; r < n; ++r) interior[r] = sys.kind(r) == RowKind::interior;

  std::vector<std::vector<double>> X(m, std::vector<double>(n));
  for (int v = 0; v < m; ++v)
    for (std::size_t r = 0; r < n; ++r) X[v][r] = interior[r] ? start_value(r, v) : 0.0;

  // z = (A + shift M)^{-1} M q
  const CsrMatrix A = sys.compile();
  auto apply_inverse = [&](const std::vector<double>& q) {
    std::vector<double> b(n);
    for (std::size_t r = 0; r < n; ++r) b[r] = interior[r] ? q[r] : 0.0;
    std::vector<double> z(n, 0.0);
    solve_compiled(A, b, z, opt.linear_tol, "lame_eigenpairs", nullptr);
    return z;
  };

  std::vector<std::vector<double>> Q(m, std::vector<double>(n)), Z(m);
  double worst = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iterations; ++it) {
    // weighted modified Gram-Schmidt
    int kept = 0;
    for (int v = 0; v < m; ++v) {
      std::vector<double> q = X[v];
      for (int l = 0; l < kept; ++l) {
        const double c = weighted_dot(g, q, Q[l]);
        for (std::size_t r = 0; r < n; ++r) q[r] -= c * Q[l][r];
      }
      const double nrm = std::sqrt(weighted_dot(g, q, q));
      if (nrm < 1e-300) continue;
      for (double& e : q) e /= nrm;
      Q[kept++] = std::move(q);
    }
    if (kept < count)
      throw SolverDivergence("lame_eigenpairs: subspace collapsed", 1.0, it);
    for (int v = 0; v < kept; ++v) Z[v] = apply_inverse(Q[v]);

    Eigen::MatrixXd H(kept, kept);
    for (int a = 0; a < kept; ++a)
      for (int b = 0; b < kept; ++b) H(a, b) = weighted_dot(g, Q[a], Z[b]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
      throw SolverDivergence("lame_eigenpairs: Ritz problem failed", 1.0, it);
    std::vector<int> order(kept);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXcd theta = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(theta[a]) > std::abs(theta[b]);
    });

    std::vector<std::vector<double>> ritz(kept, std::vector<double>(n, 0.0));
    worst = 0.0;
    for (int i = 0; i < kept; ++i) {
      const Eigen::VectorXd s = es.eigenvectors().col(order[i]).real();
      std::vector<double>& y = ritz[i];
      std::vector<double> zy(n, 0.0);
      for (int a = 0; a < kept; ++a)
        for (std::size_t r = 0; r < n; ++r) {
          y[r] += s(a) * Q[a][r];
          zy[r] += s(a) * Z[a][r];
        }
      if (i < count) {
        const double th = theta[order[i]].real();
        std::vector<double> res(n);
        for (std::size_t r = 0; r < n; ++r) res[r] = zy[r] - th * y[r];
        const double rel = std::sqrt(weighted_dot(g, res, res)) /
                           (std::abs(th) * std::sqrt(weighted_dot(g, y, y)));
        worst = std::max(worst, rel);
      }
    }
    if (worst <= opt.tol) {
      std::vector<EigenPair> out;
      for (int i = 0; i < count; ++i) {
        const double th = theta[order[i]].real();
        std::vector<double> y = ritz[i];
        const double nrm = std::sqrt(weighted_dot(g, y, y));
        std::size_t big = 0;
        for (std::size_t r = 0; r < n; ++r)
          if (std::abs(y[r]) > std::abs(y[big])) big = r;
        const double sign = y[big] < 0.0 ? -1.0 : 1.0;
        for (double& e : y) e *= sign / nrm;
        out.push_back({1.0 / th - opt.shift, VectorField(g, std::move(y))});
      }
      std::stable_sort(out.begin(), out.end(),
                       [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
      return out;
    }
    X = std::move(Z);
    Z.assign(m, {});
    X.resize(kept);
  }
  throw SolverDivergence("lame_eigenpairs: subspace iteration did not converge (Ritz residual " +
                             std::to_string(worst) + ")",
                         worst, opt.max_iterations);
}

KUniformityReport k_uniformity_report(const VectorField& g, const LameParams& p,
                                      std::span<const double> k_list, double tol) {
  if (k_list.empty()) throw InvalidArgument("k_uniformity_report: empty k list");
  KUniformityReport rep;
  const double g_l2 = sobolev_norm(g, 0);
  for (double k : k_list) {
    const SlipBC bc(k);
    const VectorField u = solve_lame(g, bc, p, tol);
    KUniformityEntry e{k, sobolev_norm(u, 2), sobolev_norm(u, 0), g_l2, 0.0};
    const double denom = e.u_l2 + e.g_l2;
    e.ratio = denom > 0.0 ? e.u_h2 / denom : 0.0;
    rep.entries.push_back(e);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& e : rep.entries) {
    lo = std::min(lo, e.ratio);
    hi = std::max(hi, e.ratio);
  }
  if (hi == 0.0)
    rep.max_min_ratio = 1.0;
  else
    rep.max_min_ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace navslip
