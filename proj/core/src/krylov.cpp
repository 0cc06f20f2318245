#include "navslip/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace navslip {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<double> inverse_diagonal(const CsrMatrix& A) {
  std::vector<double> d(A.size());
  for (std::size_t r = 0; r < A.size(); ++r) {
    const double a = A.diagonal(r);
    d[r] = a != 0.0 ? 1.0 / a : 1.0;
  }
  return d;
}

double residual(const CsrMatrix& A, std::span<const double> b,
                std::span<const double> x, std::vector<double>& r) {
  A.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return norm2(r);
}

// eps * || |A| |x| + |b| ||, the residual attainable in floating point.
double rounding_floor(const CsrMatrix& A, std::span<const double> b,
                      std::span<const double> x) {
  const auto rp = A.row_ptr();
  const auto cols = A.columns();
  const auto vals = A.values();
  double s = 0.0;
  for (std::size_t r = 0; r < A.size(); ++r) {
    double a = std::abs(b[r]);
    for (std::size_t q = rp[r]; q < rp[r + 1]; ++q) a += std::abs(vals[q] * x[cols[q]]);
    s += a * a;
  }
  return std::numeric_limits<double>::epsilon() * std::sqrt(s);
}

bool reached(const CsrMatrix& A, std::span<const double> b, std::span<const double> x,
             double rnorm, double bnorm, double tol) {
  return rnorm <= tol * bnorm || rnorm <= rounding_floor(A, b, x);
}

}  // namespace

KrylovResult bicgstab(const CsrMatrix& A, std::span<const double> b,
                      std::span<double> x, double tol, int max_iterations) {
  const std::size_t n = A.size();
  KrylovResult res;
  res.method = "bicgstab";
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  const auto dinv = inverse_diagonal(A);
  std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), s(n), t(n), ph(n),
      sh(n);
  double rnorm = residual(A, b, x, r);
  res.relative_residual = rnorm / bnorm;
  if (reached(A, b, x, rnorm, bnorm, tol)) {
    res.converged = true;
    return res;
  }
  rhat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  const double tiny = 1e-300;
  // restarts forced by recurrence drift; past a few the true residual has stalled
  int restarts = 0;
  const int max_restarts = 8;
  while (res.iterations < max_iterations) {
    ++res.iterations;
    const double rho_new = dot(rhat, r);
    if (std::abs(rho_new) < tiny * bnorm * bnorm) break;
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    for (std::size_t i = 0; i < n; ++i) ph[i] = dinv[i] * p[i];
    A.multiply(ph, v);
    const double rv = dot(rhat, v);
    if (rv == 0.0) break;
    alpha = rho / rv;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm2(s) / bnorm <= tol) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * ph[i];
      rnorm = residual(A, b, x, r);
      res.relative_residual = rnorm / bnorm;
      if (reached(A, b, x, rnorm, bnorm, tol)) {
        res.converged = true;
        return res;
      }
      if (++restarts > max_restarts) break;
      rhat = r;
      rho = alpha = omega = 1.0;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) sh[i] = dinv[i] * s[i];
    A.multiply(sh, t);
    const double tt = dot(t, t);
    if (tt == 0.0) break;
    omega = dot(t, s) / tt;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * ph[i] + omega * sh[i];
    for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    res.relative_residual = norm2(r) / bnorm;
    if (res.relative_residual <= tol) {
      // confirm against the true residual; recurrences drift
      rnorm = residual(A, b, x, r);
      res.relative_residual = rnorm / bnorm;
      if (reached(A, b, x, rnorm, bnorm, tol)) {
        res.converged = true;
        return res;
      }
      if (++restarts > max_restarts) break;
      rhat = r;
      rho = alpha = omega = 1.0;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
    }
    if (omega == 0.0) break;
  }
  rnorm = residual(A, b, x, r);
  res.relative_residual = rnorm / bnorm;
  res.converged = reached(A, b, x, rnorm, bnorm, tol);
  return res;
}

KrylovResult gmres(const CsrMatrix& A, std::span<const double> b,
                   std::span<double> x, double tol, int max_iterations,
                   int restart) {
  const std::size_t n = A.size();
  KrylovResult res;
  res.method = "gmres";
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  const auto dinv = inverse_diagonal(A);
  const int m = std::max(1, restart);
  std::vector<std::vector<double>> V(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1), r(n), w(n), z(n);

  double beta = residual(A, b, x, r);
  res.relative_residual = beta / bnorm;
  res.converged = reached(A, b, x, beta, bnorm, tol);
  int stalled = 0;
  while (!res.converged && res.iterations < max_iterations) {
    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int j = 0;
    for (; j < m && res.iterations < max_iterations; ++j) {
      ++res.iterations;
      for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * V[j][i];
      A.multiply(z, w);
      for (int l = 0; l <= j; ++l) {
        H[l][j] = dot(w, V[l]);
        for (std::size_t i = 0; i < n; ++i) w[i] -= H[l][j] * V[l][i];
      }
      H[j + 1][j] = norm2(w);
      if (H[j + 1][j] != 0.0)
        for (std::size_t i = 0; i < n; ++i) V[j + 1][i] = w[i] / H[j + 1][j];
      for (int l = 0; l < j; ++l) {
        const double a = cs[l] * H[l][j] + sn[l] * H[l + 1][j];
        H[l + 1][j] = -sn[l] * H[l][j] + cs[l] * H[l + 1][j];
        H[l][j] = a;
      }
      const double denom = std::hypot(H[j][j], H[j + 1][j]);
      cs[j] = denom == 0.0 ? 1.0 : H[j][j] / denom;
      sn[j] = denom == 0.0 ? 0.0 : H[j + 1][j] / denom;
      H[j][j] = denom;
      H[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) / bnorm <= tol || denom == 0.0) {
        ++j;
        break;
      }
    }
    // back substitution on the j x j triangle
    std::vector<double> yv(j, 0.0);
    for (int l = j - 1; l >= 0; --l) {
      double s = g[l];
      for (int q = l + 1; q < j; ++q) s -= H[l][q] * yv[q];
      yv[l] = H[l][l] != 0.0 ? s / H[l][l] : 0.0;
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (int l = 0; l < j; ++l)
      for (std::size_t i = 0; i < n; ++i) z[i] += yv[l] * V[l][i];
    for (std::size_t i = 0; i < n; ++i) x[i] += dinv[i] * z[i];
    const double prev = beta;
    beta = residual(A, b, x, r);
    res.relative_residual = beta / bnorm;
    res.converged = reached(A, b, x, beta, bnorm, tol);
    stalled = beta > 0.99 * prev ? stalled + 1 : 0;
    if (stalled >= 5) break;
  }
  return res;
}

KrylovResult solve_krylov(const CsrMatrix& A, std::span<const double> b,
                          std::span<double> x, const KrylovOptions& opt) {
  const int cap = opt.max_iterations > 0
                      ? opt.max_iterations
                      : static_cast<int>(std::min<std::size_t>(10 * A.size(), 1u << 30));
  std::vector<double> x0(x.begin(), x.end());
  KrylovResult first = bicgstab(A, b, x, opt.tol, cap);
  if (first.converged) return first;
  if (!std::isfinite(first.relative_residual))
    std::copy(x0.begin(), x0.end(), x.begin());
  const int remaining = std::max(cap - first.iterations, opt.restart);
  KrylovResult second = gmres(A, b, x, opt.tol, remaining, opt.restart);
  second.iterations += first.iterations;
  second.method = "bicgstab+gmres";
  return second;
}

}  // namespace navslip
