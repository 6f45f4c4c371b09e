#pragma once

#include <map>
#include <string>
#include <vector>

#include "divcurl/linsolve.hpp"
#include "divcurl/whitney.hpp"

namespace divcurl {

struct PotentialResult {
  DofVector field;                              // NED potential
  std::map<std::string, double> certificates;   // relative residuals and flux values
  std::vector<SolveStats> stats;
};

// Least-squares curl potential: minimizes ||C x - target||_{RT mass} over `free_edges`
// with the other entries of x taken from `fixed`, then removes the part of x lying in
// span(gauge) in the NED mass inner product. `gauge` (edges x k) must be supported on the
// free edges and span the curl-free fields there.
struct CurlPotential {
  Vector x;
  std::vector<SolveStats> stats;
};
CurlPotential curl_potential(const Mesh& mesh, std::span<const double> target, const std::vector<int>& free_edges,
                             std::span<const double> fixed, const SparseMatrix& gauge, const SolverConfig& cfg);

// Gauge columns for the two boundary conditions: the broken gradients of the cut-open P1
// space (first vertex dropped), and the gradients of Theta0.
SparseMatrix normal_gauge(const Mesh& mesh);
SparseMatrix tangential_gauge(const Mesh& mesh);

// psi in NED with curl psi = J, weakly divergence-free against all P1 functions (natural
// psi.n = 0) and zero weak flux through every cut.
PotentialResult vector_potential_normal(const DofVector& j, const Mesh& mesh, const SolverConfig& cfg = {});

// v in NED with curl v = J, tangential trace Lambda, weakly divergence-free against Theta0
// (so zero flux through every boundary component).
PotentialResult vector_potential_tangential(const DofVector& j, const BoundaryEdgeField& lam, const Mesh& mesh,
                                            const SolverConfig& cfg = {});

// v = vector_potential_tangential(J, Lambda) + grad q with q in P1, zero on the boundary,
// solving the Poisson problem so that div v = rho weakly.
PotentialResult solve_divcurl(const DofVector& j, const DofVector& rho, const BoundaryEdgeField& lam, const Mesh& mesh,
                              const SolverConfig& cfg = {});

namespace detail {
// ||B x|| / (|| |B| |x| || + floor): scale-free residual of a linear identity B x = 0.
double relative_apply(const SparseMatrix& b, std::span<const double> x, std::span<const double> rhs = {});
SparseMatrix abs_entries(const SparseMatrix& b);
void require_converged(const SolveStats& s, const std::string& stage);
}  // namespace detail

}  // namespace divcurl
