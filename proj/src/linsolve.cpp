#include "divcurl/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divcurl/errors.hpp"

namespace divcurl {

void SolverConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InputError("solver tolerances must be positive");
  if (max_iter < 0) throw InputError("max_iter must be >= 1");
}

int SolverConfig::iteration_cap(std::size_t n) const {
  if (max_iter > 0) return max_iter;
  return static_cast<int>(std::max<std::size_t>(10 * n, 10));
}

Vector safe_inverse_diagonal(std::span<const double> d) {
  double mean = 0.0;
  int count = 0;
  for (double v : d)
    if (v > 0.0) {
      mean += v;
      ++count;
    }
  mean = count > 0 ? mean / count : 1.0;
  Vector inv(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) inv[i] = d[i] > 1e-14 * mean ? 1.0 / d[i] : 1.0 / mean;
  return inv;
}

namespace {

void project_out(const std::vector<Vector>& basis, std::span<double> x) {
  for (const auto& q : basis) vec::axpy(-vec::dot(q, x), q, x);
}

}  // namespace

SolveResult cg_solve(const LinearOperator& a, std::size_t n, std::span<const double> b,
                     std::span<const double> inv_diag, const SolverConfig& cfg,
                     const std::vector<Vector>& nullspace) {
  cfg.validate();
  if (b.size() != n || (!inv_diag.empty() && inv_diag.size() != n))
    throw DimensionError("cg_solve: dimension mismatch");
  for (const auto& q : nullspace)
    if (q.size() != n) throw DimensionError("cg_solve: nullspace vector length mismatch");

  Vector rhs(b.begin(), b.end());
  project_out(nullspace, rhs);
  SolveResult out;
  out.x.assign(n, 0.0);
  const double bnorm = vec::norm(rhs);
  if (bnorm <= cfg.abs_tol) {
    out.stats = {0, 0.0, true};
    return out;
  }
  const int cap = cfg.iteration_cap(n);
  const bool precond = cfg.preconditioner == Preconditioner::jacobi && !inv_diag.empty();

  Vector r = rhs, z(n), p(n), ap(n);
  auto apply_precond = [&](const Vector& src, Vector& dst) {
    if (precond)
      for (std::size_t i = 0; i < n; ++i) dst[i] = inv_diag[i] * src[i];
    else
      dst = src;
    project_out(nullspace, dst);
  };

  int it = 0;
  double rel = 1.0;
  // Restart from the true residual if the recursive one drifted.
  for (int restart = 0; restart < 4 && it < cap; ++restart) {
    apply_precond(r, z);
    p = z;
    double rz = vec::dot(r, z);
    double rnorm = vec::norm(r);
    while (it < cap && rnorm > cfg.rel_tol * bnorm && rnorm > cfg.abs_tol) {
      a(p, ap);
      const double pap = vec::dot(p, ap);
      if (!(pap > 0.0)) break;
      const double alpha = rz / pap;
      vec::axpy(alpha, p, out.x);
      vec::axpy(-alpha, ap, r);
      ++it;
      rnorm = vec::norm(r);
      apply_precond(r, z);
      const double rz_new = vec::dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    project_out(nullspace, out.x);
    a(out.x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
    project_out(nullspace, r);
    const double true_norm = vec::norm(r);
    rel = true_norm / bnorm;
    if (true_norm <= cfg.rel_tol * bnorm || true_norm <= cfg.abs_tol) break;
    if (it == 0) break;
  }
  out.stats.iterations = it;
  out.stats.relative_residual = rel;
  out.stats.converged = rel <= cfg.rel_tol || rel * bnorm <= cfg.abs_tol;
  if (!out.stats.converged && cfg.throw_on_failure)
    throw SolverError("cg", "no convergence (relative residual " + std::to_string(rel) + ")", it, rel);
  return out;
}

SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, const SolverConfig& cfg,
                     const std::vector<Vector>& nullspace) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != b.size())
    throw DimensionError("cg_solve: dimension mismatch");
  Vector inv;
  if (cfg.preconditioner == Preconditioner::jacobi) inv = safe_inverse_diagonal(a.diagonal_entries());
  LinearOperator op = [&a](std::span<const double> x, std::span<double> y) { a.multiply(x, y); };
  return cg_solve(op, b.size(), b, inv, cfg, nullspace);
}

MinresOutcome minres(const LinearOperator& k, std::size_t n, std::span<const double> rhs,
                     std::span<const double> inv_diag, const SolverConfig& cfg) {
  cfg.validate();
  if (rhs.size() != n || (!inv_diag.empty() && inv_diag.size() != n))
    throw DimensionError("minres: dimension mismatch");
  MinresOutcome out;
  out.x.assign(n, 0.0);
  const double bnorm = vec::norm(rhs);
  if (bnorm <= cfg.abs_tol) {
    out.stats = {0, 0.0, true};
    return out;
  }
  const int cap = cfg.iteration_cap(n);
  const bool precond = cfg.preconditioner == Preconditioner::jacobi && !inv_diag.empty();
  auto apply_m = [&](const Vector& src, Vector& dst) {
    if (precond)
      for (std::size_t i = 0; i < n; ++i) dst[i] = inv_diag[i] * src[i];
    else
      dst = src;
  };
  auto true_residual = [&]() {
    Vector kx(n);
    k(out.x, kx);
    for (std::size_t i = 0; i < n; ++i) kx[i] = rhs[i] - kx[i];
    return vec::norm(kx) / bnorm;
  };

  int total = 0;
  double rel = 1.0;
  double target = cfg.rel_tol;
  for (int restart = 0; restart < 6 && total < cap; ++restart) {
    // Residual of the current iterate starts the Lanczos process.
    Vector r1(n);
    k(out.x, r1);
    for (std::size_t i = 0; i < n; ++i) r1[i] = rhs[i] - r1[i];
    Vector y(n);
    apply_m(r1, y);
    const double beta1 = std::sqrt(std::max(vec::dot(r1, y), 0.0));
    if (beta1 == 0.0) break;
    Vector r2 = r1, v(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0), dx(n, 0.0);
    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
    double cs = -1.0, sn = 0.0;
    std::vector<double> history;
    const double prec_target = target * bnorm / std::max(vec::norm(r1), 1e-300);
    int itn = 0;
    while (total < cap) {
      ++itn;
      ++total;
      const double s = 1.0 / beta;
      for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
      k(v, y);
      if (itn >= 2) vec::axpy(-beta / oldb, r1, y);
      const double alfa = vec::dot(v, y);
      vec::axpy(-alfa / beta, r2, y);
      r1 = r2;
      r2 = y;
      apply_m(r2, y);
      oldb = beta;
      beta = std::sqrt(std::max(vec::dot(r2, y), 0.0));
      const double oldeps = epsln;
      const double delta = cs * dbar + sn * alfa;
      const double gbar = sn * dbar - cs * alfa;
      epsln = sn * beta;
      dbar = -cs * beta;
      double gamma = std::hypot(gbar, beta);
      gamma = std::max(gamma, std::numeric_limits<double>::min());
      cs = gbar / gamma;
      sn = beta / gamma;
      const double phi = cs * phibar;
      phibar = sn * phibar;
      w1.swap(w2);
      w2.swap(w);
      for (std::size_t i = 0; i < n; ++i) w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
      vec::axpy(phi, w, dx);
      history.push_back(phibar);
      if (phibar / beta1 <= prec_target || beta == 0.0) break;
      constexpr std::size_t window = 200;
      if (history.size() > 2 * window &&
          phibar > (1.0 - 1e-6) * history[history.size() - 1 - window]) {
        out.stagnated = true;
        break;
      }
    }
    vec::axpy(1.0, dx, out.x);
    rel = true_residual();
    if (rel <= cfg.rel_tol || out.stagnated) break;
    target *= 0.1;
  }
  out.stats.iterations = total;
  out.stats.relative_residual = rel;
  out.stats.converged = rel <= cfg.rel_tol || rel * bnorm <= cfg.abs_tol;
  return out;
}

SaddleResult minres_saddle(const SparseMatrix& a, const SparseMatrix& b, std::span<const double> f,
                           std::span<const double> g, const SolverConfig& cfg) {
  const int n = a.rows();
  const int m = b.rows();
  if (a.cols() != n || b.cols() != n || static_cast<int>(f.size()) != n || static_cast<int>(g.size()) != m)
    throw DimensionError("minres_saddle: dimension mismatch");

  // A constraint row that is identically zero cannot match a nonzero right-hand side.
  const auto brp = b.row_ptr();
  const auto bv = b.values();
  const double gscale = std::max(vec::norm_inf(g), 1e-300);
  for (int i = 0; i < m; ++i) {
    double rn = 0.0;
    for (int k = brp[i]; k < brp[i + 1]; ++k) rn = std::max(rn, std::abs(bv[k]));
    if (rn == 0.0 && std::abs(g[i]) > 1e-14 * gscale && std::abs(g[i]) > cfg.abs_tol)
      throw IncompatibleConstraint("minres_saddle", "constraint right-hand side outside range(B)");
  }

  const SparseMatrix bt = b.transpose();
  LinearOperator op = [&](std::span<const double> x, std::span<double> y) {
    auto xu = x.subspan(0, n);
    auto xp = x.subspan(n, m);
    auto yu = y.subspan(0, n);
    auto yp = y.subspan(n, m);
    a.multiply(xu, yu);
    Vector t(static_cast<std::size_t>(n));
    bt.multiply(xp, t);
    for (int i = 0; i < n; ++i) yu[i] += t[i];
    b.multiply(xu, yp);
  };

  Vector da = a.diagonal_entries();
  for (double& d : da) d = std::abs(d);
  Vector inv_a = safe_inverse_diagonal(da);
  Vector schur(static_cast<std::size_t>(m), 0.0);
  const auto bci = b.col_idx();
  for (int i = 0; i < m; ++i)
    for (int k = brp[i]; k < brp[i + 1]; ++k) schur[i] += bv[k] * bv[k] * inv_a[bci[k]];
  Vector inv_s = safe_inverse_diagonal(schur);
  Vector inv_diag(inv_a);
  inv_diag.insert(inv_diag.end(), inv_s.begin(), inv_s.end());

  Vector rhs(f.begin(), f.end());
  rhs.insert(rhs.end(), g.begin(), g.end());
  MinresOutcome res = minres(op, rhs.size(), rhs, inv_diag, cfg);

  SaddleResult out;
  out.x.assign(res.x.begin(), res.x.begin() + n);
  out.mult.assign(res.x.begin() + n, res.x.end());
  out.stats = res.stats;
  if (!out.stats.converged) {
    Vector bx = b * out.x;
    const double gres = vec::norm(vec::add(bx, g, -1.0));
    const double scale = vec::norm(rhs);
    if (res.stagnated && gres > 1e3 * cfg.rel_tol * scale)
      throw IncompatibleConstraint("minres_saddle", "residual floor: constraint not in range(B)",
                                   out.stats.iterations, out.stats.relative_residual);
    if (cfg.throw_on_failure)
      throw SolverError("minres_saddle", "no convergence (relative residual " +
                                             std::to_string(out.stats.relative_residual) + ")",
                        out.stats.iterations, out.stats.relative_residual);
  }
  return out;
}

}  // namespace divcurl
