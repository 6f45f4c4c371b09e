#pragma once

#include <string>
#include <vector>

#include "divcurl/linsolve.hpp"
#include "divcurl/mesh.hpp"
#include "divcurl/whitney.hpp"

namespace divcurl {

// P1 functions on the mesh cut open along every cut surface whose jump across cut j is a
// single scalar. Coordinates are (vertex values r, jumps c) with c_j = (trace behind n_j)
// minus (trace in front of n_j), so that the weak jump functional equals the flux along n_j.
// Copies of cut vertices on the side n_j points into carry r_v - c_j; the broken gradient
// is the edge cochain G r - sum_j c_j z_j.
class JumpSpace {
 public:
  explicit JumpSpace(const Mesh& mesh);

  int dimension() const { return mesh_->num_vertices() + mesh_->num_cuts(); }
  int jump_index(int j) const { return mesh_->num_vertices() + j; }
  // Edges x dimension: [G | -z_1 ... -z_N2].
  const SparseMatrix& gradient() const { return gradient_; }
  SparseMatrix stiffness(const CoefficientField& coeff, Weighting weighting) const;
  DofVector gradient_field(std::span<const double> coords) const;
  // Value at sorted local vertex k of tet t.
  double local_value(std::span<const double> coords, int t, int k) const;
  // Cochain z_j of the plus-side indicator of cut j (0-based).
  DofVector jump_cochain(int j) const;

 private:
  const Mesh* mesh_;
  SparseMatrix gradient_;
};

enum class HarmonicKind { magnetic, electric };

struct HarmonicBasis {
  HarmonicKind kind = HarmonicKind::magnetic;
  std::vector<DofVector> fields;        // RT (magnetic) or NED (electric)
  std::vector<DofVector> gradients;     // NED broken gradients of the scalar potentials
  std::vector<DofVector> potentials;    // P1 potentials (electric only)
  std::vector<std::vector<double>> normalization;  // flux Gram, expected identity
  std::vector<std::vector<double>> jump_gram;      // magnetic: weak jump functionals of the P1 solve
  std::vector<double> outer_flux;       // electric: flux of each member through the outer component
  double gradient_relation = 0.0;       // magnetic: max relative sigma-norm gap between u_j and sigma^-1 grad q_j
  std::string coefficient_kind;
  EllipticityBounds bounds;
  std::vector<SolveStats> stats;

  int dimension() const { return static_cast<int>(fields.size()); }
};

HarmonicBasis magnetic_basis(const Mesh& mesh, const CoefficientField& sigma, const SolverConfig& cfg = {});
HarmonicBasis electric_basis(const Mesh& mesh, const CoefficientField& epsilon, const SolverConfig& cfg = {});

// Flux of an RT field through cut j (1-based) along n_j.
double cut_flux(const DofVector& v, int j);
// Outward flux of an RT field through boundary component i.
double boundary_flux(const DofVector& v, int i);
// Circulation of a boundary tangential field along the boundary curve of cut j.
double cut_circulation(const BoundaryEdgeField& lam, int j);

// Theta0: P1 functions vanishing on component 0 and constant on every other component.
// Columns: interior vertices, then one per component 1..N1. Rows: all vertices.
SparseMatrix theta0_embedding(const Mesh& mesh);

}  // namespace divcurl
