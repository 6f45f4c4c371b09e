#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divcurl/whitney.hpp"

namespace divcurl {

using TensorField = std::function<Mat3(const Point&)>;

// Named coefficient fields: "identity", "diagonal(a,b,c)", "rotated" (I + d d^T / 2 with
// d = (1,1,1)/sqrt 3), "tilted" (diag(1,1,2) rotated about the x axis by pi/6),
// "smooth" (spatially varying), "random:<seed>" (smooth random SPD field).
CoefficientField coefficient_preset(const std::string& spec);
// The same field as a point callback (identity for "identity").
TensorField coefficient_callback(const std::string& spec);
// Per-cell tensors from a text file: one line per cell with 9 (row-major) or 6
// (xx yy zz xy xz yz) numbers.
CoefficientField coefficient_from_file(const std::string& path, const Mesh& mesh);

struct MagnetostaticData {
  DofVector j;
  DofVector rho;
  BoundaryFaceField lambda;
};

struct ElectricData {
  DofVector j;
  DofVector rho;
  BoundaryEdgeField lambda;
};

// Data of a known solution u. Every datum is built from canonical interpolants so that
// the discrete compatibility conditions hold exactly: J = curl of the NED interpolant
// (of sigma u, magnetostatic) and rho = cell divergence of the RT interpolant (of u, or
// eps u for the electric system).
MagnetostaticData magnetostatic_data(const Mesh& mesh, const VectorField& u, const TensorField& sigma);
ElectricData electric_data(const Mesh& mesh, const VectorField& u, const TensorField& epsilon);

MagnetostaticData zero_magnetostatic_data(const Mesh& mesh);
ElectricData zero_electric_data(const Mesh& mesh);

struct Manufactured {
  std::string name;
  std::string system;       // "magnetostatic" or "electric"
  std::string coefficient;  // coefficient preset spec
  VectorField u;
};

// manufactured-1..3 are magnetostatic, manufactured-4..6 electric.
const std::vector<Manufactured>& manufactured_solutions();
const Manufactured& manufactured(const std::string& name);

// Designed-to-fail data.
// rho = 1, J = 0, lambda = 0: fails the mean balance.
MagnetostaticData mean_mismatch_data(const Mesh& mesh);
// J = -x/|x|^3 with exact face fluxes (solid angles), rho = 0, lambda = 0: divergence-free
// but with flux -4 pi through every sphere around the origin.
MagnetostaticData radial_inverse_square_data(const Mesh& mesh);
// J = 0, rho = 0 and Lambda = tangential part of grad(theta)/(2 pi), theta the poloidal
// angle of a torus with major radius R: one unit of circulation around the section.
ElectricData poloidal_circulation_data(const Mesh& mesh, double major_radius = 2.0);

// Random compatible data built from random NED/RT/P0 vectors (deterministic in the seed).
MagnetostaticData random_magnetostatic_data(const Mesh& mesh, std::uint64_t seed);
ElectricData random_electric_data(const Mesh& mesh, std::uint64_t seed);

// Random Whitney vector with entries uniform in [-1, 1].
DofVector random_dofs(const Mesh& mesh, FormDegree degree, std::uint64_t seed);

// Closed-form harmonic fields used as references: e_phi / rho (torus) and x / |x|^3 (shell).
Vec3 azimuthal_field(const Point& x);
Vec3 radial_field(const Point& x);

// Signed solid angle of triangle (a, b, c) seen from the origin; positive when the normal
// (b - a) x (c - a) points away from the origin.
double solid_angle(const Point& a, const Point& b, const Point& c);

}  // namespace divcurl
