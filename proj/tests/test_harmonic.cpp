#include <Eigen/Dense>

#include "catch_amalgamated.hpp"

#include "divcurl/generators.hpp"
#include "divcurl/harmonic.hpp"
#include "divcurl/presets.hpp"

using namespace divcurl;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (const auto& t : a.triplets()) d(t.row, t.col) += t.value;
  return d;
}

Eigen::VectorXd as_eigen(const Vector& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

}  // namespace

TEST_CASE("basis dimensions follow the Betti numbers", "[harmonic]") {
  const Mesh cube = generate_cube(2);
  CHECK(magnetic_basis(cube, CoefficientField::identity()).dimension() == 0);
  CHECK(electric_basis(cube, CoefficientField::identity()).dimension() == 0);
  const Mesh torus = generate_solid_torus(2.0, 0.5, 0, true);
  CHECK(magnetic_basis(torus, CoefficientField::identity()).dimension() == 1);
  CHECK(electric_basis(torus, CoefficientField::identity()).dimension() == 0);
  const Mesh shell = generate_spherical_shell(1.0, 2.0, 0);
  CHECK(magnetic_basis(shell, CoefficientField::identity()).dimension() == 0);
  CHECK(electric_basis(shell, CoefficientField::identity()).dimension() == 1);
}

TEST_CASE("magnetic member satisfies its defining equations", "[harmonic]") {
  const Mesh m = generate_solid_torus(2.0, 0.5, 0, true);
  const auto sigma = coefficient_preset("random:3");
  const auto b = magnetic_basis(m, sigma);
  REQUIRE(b.dimension() == 1);
  const DofVector& u = b.fields[0];
  const double scale = vec::norm(u.values);
  CHECK(vec::norm(incidence(m, Incidence::div) * u.values) < 1e-10 * scale);
  CHECK(vec::norm_inf(trace_normal(u).values) < 1e-10 * scale);
  CHECK_THAT(cut_flux(u, 1), WithinAbs(1.0, 1e-8));
  CHECK_THAT(b.normalization[0][0], WithinAbs(1.0, 1e-8));
  const Vector mu = mass_matrix(m, FormDegree::RT, sigma) * u.values;
  const Vector weak_curl = incidence(m, Incidence::curl).transpose_times(mu);
  double worst = 0.0;
  for (int e : m.interior_edges()) worst = std::max(worst, std::abs(weak_curl[e]));
  CHECK(worst < 1e-8 * vec::norm(mu));
}

TEST_CASE("magnetic member matches a dense constrained solve", "[harmonic]") {
  // Oracle: the interior face fluxes solving div u = 0, weak curl(sigma u) = 0 on interior
  // edges and unit cut flux, with zero boundary flux, by dense least squares.
  const Mesh m = generate_solid_torus(2.0, 0.5, 0, true);
  const auto sigma = coefficient_preset("tilted");
  const auto& faces = m.interior_faces();
  const Eigen::MatrixXd d = dense(incidence(m, Incidence::div).select_cols(faces));
  const Eigen::MatrixXd mass = dense(mass_matrix(m, FormDegree::RT, sigma));
  const Eigen::MatrixXd c = dense(incidence(m, Incidence::curl));
  Eigen::MatrixXd mass_int(mass.rows(), faces.size());
  for (std::size_t k = 0; k < faces.size(); ++k) mass_int.col(k) = mass.col(faces[k]);
  Eigen::MatrixXd curl_rows(m.interior_edges().size(), faces.size());
  const Eigen::MatrixXd weak = c.transpose() * mass_int;
  for (std::size_t k = 0; k < m.interior_edges().size(); ++k) curl_rows.row(k) = weak.row(m.interior_edges()[k]);
  Eigen::RowVectorXd flux = Eigen::RowVectorXd::Zero(faces.size());
  const auto& cut = m.cuts().front();
  for (std::size_t k = 0; k < faces.size(); ++k)
    for (std::size_t q = 0; q < cut.faces.size(); ++q)
      if (cut.faces[q] == faces[k]) flux(k) = cut.face_sign[q];
  Eigen::MatrixXd sys(d.rows() + curl_rows.rows() + 1, faces.size());
  sys << d, curl_rows, flux;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.rows());
  rhs(sys.rows() - 1) = 1.0;
  const Eigen::VectorXd x = sys.completeOrthogonalDecomposition().solve(rhs);
  REQUIRE((sys * x - rhs).norm() < 1e-10);

  const auto b = magnetic_basis(m, sigma);
  Eigen::VectorXd got(faces.size());
  for (std::size_t k = 0; k < faces.size(); ++k) got(k) = b.fields[0].values[faces[k]];
  CHECK((got - x).norm() <= 1e-7 * x.norm());
}

TEST_CASE("electric member matches a dense Dirichlet solve", "[harmonic]") {
  const Mesh m = generate_spherical_shell(1.0, 2.0, 0);
  const auto eps = coefficient_preset("diagonal(1,2,3)");
  const auto b = electric_basis(m, eps);
  REQUIRE(b.dimension() == 1);
  const DofVector& u = b.fields[0];

  // Oracle: phi = 0 on the outer sphere, 1 on the inner one, eps-harmonic inside.
  const Eigen::MatrixXd k = dense(stiffness_matrix(m, eps));
  const auto& inner = m.interior_vertices();
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(m.num_vertices());
  for (int v : m.boundary_vertices())
    if (m.vertex_component(v) == 1) phi(v) = 1.0;
  Eigen::MatrixXd kii(inner.size(), inner.size());
  Eigen::VectorXd rhs(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (std::size_t j = 0; j < inner.size(); ++j) kii(i, j) = k(inner[i], inner[j]);
    rhs(i) = -k.row(inner[i]).dot(phi);
  }
  const Eigen::VectorXd pi = kii.llt().solve(rhs);
  for (std::size_t i = 0; i < inner.size(); ++i) phi(inner[i]) = pi(i);
  const Eigen::VectorXd ref = dense(incidence(m, Incidence::grad)) * phi;
  const Eigen::VectorXd got = as_eigen(u.values);
  // Same field up to the flux normalization.
  const double scale = got.dot(ref) / ref.dot(ref);
  CHECK((got - scale * ref).norm() <= 1e-7 * got.norm());
  CHECK(vec::norm(incidence(m, Incidence::curl) * u.values) < 1e-12 * vec::norm(u.values));
  CHECK(vec::norm_inf(trace_tangential(u).values) < 1e-12 * vec::norm(u.values));
  CHECK_THAT(b.normalization[0][0], WithinAbs(1.0, 1e-8));
  CHECK_THAT(std::abs(b.outer_flux[0]), WithinAbs(1.0, 1e-8));
}

TEST_CASE("theta0 embedding structure", "[harmonic]") {
  const Mesh m = generate_spherical_shell(1.0, 2.0, 0);
  const auto th = theta0_embedding(m);
  CHECK(th.rows() == m.num_vertices());
  CHECK(th.cols() == static_cast<int>(m.interior_vertices().size()) + 1);
  const Vector ones = th * Vector(th.cols(), 1.0);
  for (int v : m.boundary_vertices()) CHECK(ones[v] == (m.vertex_component(v) == 0 ? 0.0 : 1.0));
}

TEST_CASE("jump space gradient has the cut cochain", "[harmonic]") {
  const Mesh m = generate_solid_torus(2.0, 0.5, 0, true);
  const JumpSpace js(m);
  CHECK(js.dimension() == m.num_vertices() + 1);
  // The jump column is closed: curl of the cut cochain vanishes.
  const auto z = js.jump_cochain(0);
  CHECK(vec::norm(incidence(m, Incidence::curl) * z.values) == 0.0);
  // A constant vertex function has zero broken gradient.
  Vector coords(js.dimension(), 0.0);
  for (int v = 0; v < m.num_vertices(); ++v) coords[v] = 3.0;
  CHECK(vec::norm(js.gradient_field(coords).values) == 0.0);
}

TEST_CASE("flux Gram is the identity for random coefficients", "[harmonic]") {
  const Mesh torus = generate_solid_torus(2.0, 0.5, 0, true);
  const Mesh shell = generate_spherical_shell(1.0, 2.0, 0);
  for (std::uint64_t seed : {1, 2}) {
    const auto c = coefficient_preset("random:" + std::to_string(seed));
    const auto bm = magnetic_basis(torus, c);
    const auto be = electric_basis(shell, c);
    CHECK_THAT(bm.normalization[0][0], WithinAbs(1.0, 1e-8));
    CHECK_THAT(be.normalization[0][0], WithinAbs(1.0, 1e-8));
  }
}
