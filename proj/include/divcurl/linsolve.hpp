#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "divcurl/sparse.hpp"

namespace divcurl {

enum class Preconditioner { none, jacobi };

struct SolverConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_iter = 0;  // 0 means 10 * n
  Preconditioner preconditioner = Preconditioner::jacobi;
  bool throw_on_failure = true;

  void validate() const;
  int iteration_cap(std::size_t n) const;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

struct SolveResult {
  Vector x;
  SolveStats stats;
};

struct SaddleResult {
  Vector x;
  Vector mult;
  SolveStats stats;
};

// y = Op(x); sizes are fixed by the caller.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

// Conjugate gradients. If a nullspace (orthonormal columns) is supplied, b is projected
// against it and the solution is returned orthogonal to it.
SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, const SolverConfig& cfg = {},
                     const std::vector<Vector>& nullspace = {});

// Matrix-free variant; `inv_diag` is the Jacobi preconditioner (empty for none).
SolveResult cg_solve(const LinearOperator& a, std::size_t n, std::span<const double> b,
                     std::span<const double> inv_diag, const SolverConfig& cfg = {},
                     const std::vector<Vector>& nullspace = {});

// Preconditioned MINRES for a symmetric (possibly indefinite) operator with a positive
// diagonal preconditioner. Stops early when the residual stagnates.
struct MinresOutcome {
  Vector x;
  SolveStats stats;
  bool stagnated = false;
};
MinresOutcome minres(const LinearOperator& k, std::size_t n, std::span<const double> rhs,
                     std::span<const double> inv_diag, const SolverConfig& cfg);

// Solves [[A, B^T], [B, 0]] [x; mult] = [f; g] with a block-Jacobi preconditioner.
SaddleResult minres_saddle(const SparseMatrix& a, const SparseMatrix& b, std::span<const double> f,
                           std::span<const double> g, const SolverConfig& cfg = {});

// Inverse diagonal with zero or negative entries replaced by one.
Vector safe_inverse_diagonal(std::span<const double> d);

}  // namespace divcurl
