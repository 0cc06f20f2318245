#pragma once

#include <span>
#include <string>

#include "navslip/sparse.hpp"

namespace navslip {

struct KrylovOptions {
  /// Stop once ||b - A x|| <= tol ||b|| or the residual reaches the rounding
  /// level eps || |A| |x| + |b| ||, whichever is larger.
  double tol = 1e-10;
  int max_iterations = 0;    ///< 0 selects 10 x unknown count
  int restart = 60;          ///< GMRES Krylov dimension
};

struct KrylovResult {
  bool converged = false;
  int iterations = 0;
  double relative_residual = 0.0;
  std::string method;
};

/// BiCGSTAB with Jacobi right preconditioning; on breakdown or stagnation
/// the remaining iteration budget goes to restarted GMRES from the best
/// iterate. x holds the initial guess on entry.
KrylovResult solve_krylov(const CsrMatrix& A, std::span<const double> b,
                          std::span<double> x, const KrylovOptions& opt = {});

KrylovResult bicgstab(const CsrMatrix& A, std::span<const double> b,
                      std::span<double> x, double tol, int max_iterations);
KrylovResult gmres(const CsrMatrix& A, std::span<const double> b,
                   std::span<double> x, double tol, int max_iterations,
                   int restart);

}  // namespace navslip
