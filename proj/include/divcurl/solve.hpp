#pragma once

#include <string>
#include <utility>
#include <vector>

#include "divcurl/compat.hpp"
#include "divcurl/harmonic.hpp"
#include "divcurl/potentials.hpp"

namespace divcurl {

// Residuals of the three equations of a system for a candidate u. `*_abs` are the plain
// norms of the residual vectors; the others are normalized by the data and the u-term.
struct Diagnostics {
  double curl = 0.0;
  double div = 0.0;
  double trace = 0.0;
  double curl_abs = 0.0;
  double div_abs = 0.0;
  double trace_abs = 0.0;
  double curl_tol = 1e-8;
  double div_tol = 1e-8;
  double trace_tol = 1e-8;

  bool within() const { return curl <= curl_tol && div <= div_tol && trace <= trace_tol; }
};

struct SolutionBundle {
  HarmonicKind system = HarmonicKind::magnetic;
  DofVector u0;              // RT (magnetostatic) or NED (electric)
  HarmonicBasis basis;       // solution family u0 + span(basis.fields)
  DofVector scalar_potential;
  PotentialResult potential;
  CompatReport compat;
  Diagnostics diagnostics;
  std::vector<std::pair<std::string, SolveStats>> stats;
  bool converged = false;
};

struct SolveOptions {
  SolverConfig solver;
  double compat_tol = 1e-8;
  bool check_data = true;     // run the compatibility gate first; throws CompatibilityError
  bool with_basis = true;
};

// curl(sigma u) = J, div u = rho, u.n = lambda. u0 in RT.
SolutionBundle solve_magnetostatic(const DofVector& j, const DofVector& rho, const BoundaryFaceField& lam,
                                   const CoefficientField& sigma, const Mesh& mesh, const SolveOptions& opts = {});
// curl u = J, div(eps u) = rho, u x n = Lambda. u0 in NED.
SolutionBundle solve_electric(const DofVector& j, const DofVector& rho, const BoundaryEdgeField& lam,
                              const CoefficientField& epsilon, const Mesh& mesh, const SolveOptions& opts = {});

Diagnostics magnetostatic_diagnostics(const DofVector& u, const DofVector& j, const DofVector& rho,
                                      const BoundaryFaceField& lam, const CoefficientField& sigma);
Diagnostics electric_diagnostics(const DofVector& u, const DofVector& j, const DofVector& rho,
                                 const BoundaryEdgeField& lam, const CoefficientField& epsilon);

// Mesh size relative to the bounding-box diagonal; scales the discretization tolerances.
double relative_mesh_size(const Mesh& mesh);

}  // namespace divcurl
