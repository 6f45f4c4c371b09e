#pragma once

#include <functional>
#include <string>
#include <vector>

#include "divcurl/geometry.hpp"
#include "divcurl/mesh.hpp"
#include "divcurl/sparse.hpp"

namespace divcurl {

enum class FormDegree { P1, NED, RT, P0 };
std::string to_string(FormDegree d);
int entity_count(const Mesh& mesh, FormDegree d);

// Coefficients of one Whitney space on a mesh. The mesh must outlive the vector.
struct DofVector {
  FormDegree degree = FormDegree::P1;
  Vector values;
  const Mesh* mesh = nullptr;

  DofVector() = default;
  DofVector(const Mesh& m, FormDegree d);
  DofVector(const Mesh& m, FormDegree d, Vector v);
  std::size_t size() const { return values.size(); }
};

enum class Weighting { identity, coefficient, inverse };

struct EllipticityBounds {
  double m = 1.0;
  double M = 1.0;
};

// Symmetric positive-definite 3x3 tensor field (sigma or epsilon).
class CoefficientField {
 public:
  using Callback = std::function<Mat3(const Point&)>;

  static CoefficientField identity();
  static CoefficientField constant(const Mat3& a, std::string kind = "constant");
  static CoefficientField per_cell(std::vector<Mat3> values, std::string kind = "per-cell");
  // With per_cell_constant the callback is sampled once at each cell centroid.
  static CoefficientField analytic(Callback f, std::string kind = "analytic", bool per_cell_constant = false);

  bool is_identity() const { return identity_; }
  const std::string& kind() const { return kind_; }
  Mat3 at(const Mesh& mesh, int cell, const Point& x) const;
  Mat3 weighted(const Mesh& mesh, int cell, const Point& x, Weighting w) const;
  // Minimum and maximum eigenvalue over the degree-2 quadrature points. Throws
  // CoefficientError if the tensor is not symmetric or not positive definite.
  EllipticityBounds bounds(const Mesh& mesh) const;

 private:
  bool identity_ = false;
  std::string kind_ = "identity";
  Callback callback_;
  std::vector<Mat3> cells_;
  bool per_cell_constant_ = false;
};

enum class Incidence { grad, curl, div };

SparseMatrix incidence(const Mesh& mesh, Incidence which);

// Galerkin mass matrix. The coefficient applies to NED and RT; P1 and P0 are scalar.
SparseMatrix mass_matrix(const Mesh& mesh, FormDegree degree, const CoefficientField& coeff = CoefficientField::identity(),
                         Weighting weighting = Weighting::coefficient);
// Weighted P1 stiffness: integral of grad(phi_i) . A grad(phi_j).
SparseMatrix stiffness_matrix(const Mesh& mesh, const CoefficientField& coeff = CoefficientField::identity(),
                              Weighting weighting = Weighting::coefficient);
// Faces x edges: integral of w_f . A phi_e.
SparseMatrix mixed_mass(const Mesh& mesh, const CoefficientField& coeff = CoefficientField::identity(),
                        Weighting weighting = Weighting::coefficient);
// Vertices x cells: integral of phi_v over the cell (vol/4).
SparseMatrix p1_p0_mass(const Mesh& mesh);

// Local basis values at a barycentric point, sorted local numbering.
std::array<Vec3, 6> ned_basis(const Mesh& mesh, int t, const std::array<double, 4>& bary);
std::array<Vec3, 6> ned_curls(const Mesh& mesh, int t);
std::array<Vec3, 4> rt_basis(const Mesh& mesh, int t, const std::array<double, 4>& bary);
// Sign of face k of tet t in the div incidence (outward orientation).
int rt_div_sign(const Mesh& mesh, int t, int k);

double evaluate_scalar(const DofVector& v, int t, const std::array<double, 4>& bary);
Vec3 evaluate_vector(const DofVector& v, int t, const std::array<double, 4>& bary);

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Vec3(const Point&)>;

// Canonical degrees of freedom: vertex values, cell averages (scalar); edge line integrals,
// face fluxes (vector).
DofVector interpolate(const Mesh& mesh, FormDegree degree, const ScalarField& field);
DofVector interpolate(const Mesh& mesh, FormDegree degree, const VectorField& field);

// L2 norm of a Whitney field, optionally weighted by a coefficient (sqrt of int v.A v).
double l2_norm(const DofVector& v, const CoefficientField* weight = nullptr, Weighting w = Weighting::coefficient);
double l2_error(const DofVector& v, const VectorField& exact);
double l2_error(const DofVector& v, const ScalarField& exact);
double l2_norm(const Mesh& mesh, const VectorField& f);
double l2_norm(const Mesh& mesh, const ScalarField& f);

// Boundary fields.
struct BoundaryFaceField {  // one scalar per boundary face (normal-trace density)
  const Mesh* mesh = nullptr;
  Vector values;
};
struct BoundaryEdgeField {  // circulation of the tangential part u_T per boundary edge; Lambda = u_T x n
  const Mesh* mesh = nullptr;
  Vector values;
};

BoundaryFaceField zero_boundary_face_field(const Mesh& mesh);
BoundaryEdgeField zero_boundary_edge_field(const Mesh& mesh);
BoundaryFaceField boundary_face_field(const Mesh& mesh, const ScalarField& g);  // face averages
// Circulations of n x (f x n) = tangential part of a vector field.
BoundaryEdgeField boundary_tangential_field(const Mesh& mesh, const VectorField& u);

BoundaryFaceField trace_normal(const DofVector& v);
BoundaryEdgeField trace_tangential(const DofVector& v);

// Unit outward normal of boundary face bf.
Vec3 outward_normal(const Mesh& mesh, int bf);
// Tangential field u_T reconstructed on boundary face bf at a barycentric point of the face
// (ordered like the face's ascending vertices).
Vec3 tangential_value(const BoundaryEdgeField& lam, int bf, const std::array<double, 3>& bary);

// <div_T Lambda, psi_v> = -integral Lambda . grad_T psi_v for each boundary vertex.
Vector surface_divergence(const BoundaryEdgeField& lam);
// integral g psi_v over the boundary for each boundary vertex.
Vector boundary_p1_functional(const BoundaryFaceField& g);
// Boundary integral of g (sum of value times area).
double boundary_integral(const BoundaryFaceField& g);
// Edge vector b_e = integral over the boundary of Lambda . phi_e.
Vector tangential_load(const BoundaryEdgeField& lam);
// Boundary-edge mass matrix of the surface Whitney edge functions.
SparseMatrix boundary_edge_mass(const Mesh& mesh);
double boundary_l2_norm(const BoundaryFaceField& g);
double boundary_l2_norm(const BoundaryEdgeField& lam);

}  // namespace divcurl
