#include <random>

#include <Eigen/Dense>

#include "catch_amalgamated.hpp"

#include "divcurl/errors.hpp"
#include "divcurl/generators.hpp"
#include "divcurl/presets.hpp"
#include "divcurl/whitney.hpp"

using namespace divcurl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Mesh single_tet(const std::array<Point, 4>& p) {
  MeshInput in;
  in.vertices.assign(p.begin(), p.end());
  in.tets = {{0, 1, 2, 3}};
  if (signed_volume(p[0], p[1], p[2], p[3]) < 0) in.tets = {{0, 2, 1, 3}};
  return Mesh(std::move(in));
}

Eigen::MatrixXd dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (const auto& t : a.triplets()) d(t.row, t.col) += t.value;
  return d;
}

double max_abs_entry(const SparseMatrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

// Integral of lambda_i lambda_j over a tet: vol (1 + delta_ij) / 20.
double bary_product(double vol, int i, int j) { return vol * (i == j ? 2.0 : 1.0) / 20.0; }

}  // namespace

TEST_CASE("complex property holds exactly", "[whitney]") {
  for (const Mesh& m : {generate_cube(3), generate_spherical_shell(1.0, 2.0, 0), generate_solid_torus(2.0, 0.5, 0, true)}) {
    const auto g = incidence(m, Incidence::grad);
    const auto c = incidence(m, Incidence::curl);
    const auto d = incidence(m, Incidence::div);
    CHECK(g.rows() == m.num_edges());
    CHECK(c.rows() == m.num_faces());
    CHECK(d.rows() == m.num_tets());
    CHECK(max_abs_entry(c * g) == 0.0);
    CHECK(max_abs_entry(d * c) == 0.0);
  }
}

TEST_CASE("P1 mass matches the closed form", "[whitney]") {
  const Mesh m = single_tet({Point{0.1, 0, 0}, Point{1.3, 0.2, 0}, Point{0.2, 0.9, 0.1}, Point{0.3, 0.4, 1.1}});
  const auto mass = dense(mass_matrix(m, FormDegree::P1));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK_THAT(mass(i, j), WithinAbs(bary_product(m.volume(0), i, j), 1e-14));
}

TEST_CASE("NED mass matches the barycentric closed form", "[whitney]") {
  const Mesh m = single_tet({Point{0, 0, 0}, Point{1.2, 0.1, 0}, Point{0.3, 0.8, 0.2}, Point{0.1, 0.2, 0.9}});
  const auto& g = m.grad_lambda(0);
  const double vol = m.volume(0);
  const auto& sv = m.sorted_tet(0);
  const auto& te = m.tet_edges(0);
  // phi_e = lambda_a grad lambda_b - lambda_b grad lambda_a for local edge (a, b).
  Eigen::Matrix<double, 6, 6> oracle;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const auto [a, b] = kLocalEdges[p];
      const auto [c, d] = kLocalEdges[q];
      oracle(p, q) = bary_product(vol, a, c) * dot(g[b], g[d]) - bary_product(vol, a, d) * dot(g[b], g[c]) -
                     bary_product(vol, b, c) * dot(g[a], g[d]) + bary_product(vol, b, d) * dot(g[a], g[c]);
    }
  const auto mass = dense(mass_matrix(m, FormDegree::NED));
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const auto& ep = m.edges()[te[p]];
      const auto& eq = m.edges()[te[q]];
      // Global edges point from the lower to the higher vertex id, same as the local order.
      REQUIRE(ep[0] == sv[kLocalEdges[p][0]]);
      REQUIRE(eq[0] == sv[kLocalEdges[q][0]]);
      CHECK_THAT(mass(te[p], te[q]), WithinAbs(oracle(p, q), 1e-14));
    }
}

TEST_CASE("mass matrices are symmetric positive definite", "[whitney]") {
  const Mesh m = generate_cube(2);
  const auto sigma = coefficient_preset("tilted");
  for (FormDegree d : {FormDegree::P1, FormDegree::NED, FormDegree::RT, FormDegree::P0}) {
    const auto mass = mass_matrix(m, d, sigma);
    CHECK(mass.is_symmetric(1e-13));
    const Eigen::MatrixXd a = dense(mass);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("commuting interpolation for linear fields", "[whitney]") {
  const Mesh m = generate_cube(3);
  const auto g = incidence(m, Incidence::grad);
  const auto c = incidence(m, Incidence::curl);
  const auto d = incidence(m, Incidence::div);

  const ScalarField f = [](const Point& x) { return x[0] * x[0] - 2 * x[1] * x[2] + x[2]; };
  const VectorField grad_f = [](const Point& x) { return Vec3{2 * x[0], -2 * x[2], 1 - 2 * x[1]}; };
  const auto gi = g * interpolate(m, FormDegree::P1, f).values;
  const auto ni = interpolate(m, FormDegree::NED, grad_f).values;
  for (std::size_t e = 0; e < gi.size(); ++e) REQUIRE_THAT(gi[e], WithinAbs(ni[e], 1e-13));

  // u = (y z, x, x y), curl u = (x, 0, 1 - z).
  const VectorField u = [](const Point& x) { return Vec3{x[1] * x[2], x[0], x[0] * x[1]}; };
  const VectorField curl_u = [](const Point& x) { return Vec3{x[0], 0, 1 - x[2]}; };
  const auto cu = c * interpolate(m, FormDegree::NED, u).values;
  const auto rc = interpolate(m, FormDegree::RT, curl_u).values;
  for (std::size_t f2 = 0; f2 < cu.size(); ++f2) REQUIRE_THAT(cu[f2], WithinAbs(rc[f2], 1e-13));

  const VectorField w = [](const Point& x) { return Vec3{x[0] * x[1], x[2], x[0] * x[2]}; };  // div = y + x
  const auto dw = d * interpolate(m, FormDegree::RT, w).values;
  const auto p0 = interpolate(m, FormDegree::P0, ScalarField([](const Point& x) { return x[0] + x[1]; })).values;
  for (int t = 0; t < m.num_tets(); ++t) REQUIRE_THAT(dw[t], WithinAbs(p0[t] * m.volume(t), 1e-14));
}

TEST_CASE("lowest-order fields are reproduced exactly", "[whitney]") {
  const Mesh m = generate_spherical_shell(1.0, 2.0, 0);
  const VectorField ned = [](const Point& x) { return Vec3{1, 2, 3} + cross(Vec3{0.5, -1, 2}, x); };
  const VectorField rt = [](const Point& x) { return Vec3{1, -2, 0.5} + 0.7 * x; };
  CHECK(l2_error(interpolate(m, FormDegree::NED, ned), ned) < 1e-12 * l2_norm(m, ned));
  CHECK(l2_error(interpolate(m, FormDegree::RT, rt), rt) < 1e-12 * l2_norm(m, rt));
}

TEST_CASE("interpolation error is first order", "[whitney]") {
  const VectorField u = [](const Point& x) { return Vec3{std::sin(x[1]), std::cos(x[2] + x[0]), x[0] * x[1]}; };
  double prev_ned = 0, prev_rt = 0;
  for (int n : {4, 8}) {
    const Mesh m = generate_cube(n);
    const double e_ned = l2_error(interpolate(m, FormDegree::NED, u), u);
    const double e_rt = l2_error(interpolate(m, FormDegree::RT, u), u);
    if (prev_ned > 0) {
      CHECK(prev_ned / e_ned > 1.8);
      CHECK(prev_rt / e_rt > 1.8);
    }
    prev_ned = e_ned;
    prev_rt = e_rt;
  }
}

TEST_CASE("coefficient bounds and validation", "[whitney]") {
  const Mesh m = generate_cube(2);
  const auto b = coefficient_preset("diagonal(1,2,3)").bounds(m);
  CHECK_THAT(b.m, WithinRel(1.0, 1e-12));
  CHECK_THAT(b.M, WithinRel(3.0, 1e-12));
  const Mat3 indefinite{{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}}};
  CHECK_THROWS_AS(CoefficientField::constant(indefinite).bounds(m), CoefficientError);
  const Mat3 skew{{{1, 0.5, 0}, {0, 1, 0}, {0, 0, 1}}};
  CHECK_THROWS_AS(CoefficientField::constant(skew).bounds(m), CoefficientError);
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto r = coefficient_preset("random:" + std::to_string(seed)).bounds(m);
    CHECK(r.m > 0.0);
    CHECK(r.M >= r.m);
  }
}

TEST_CASE("weighted mass uses the coefficient", "[whitney]") {
  const Mesh m = generate_cube(2);
  const VectorField c = [](const Point&) { return Vec3{1, 2, 3}; };
  const auto u = interpolate(m, FormDegree::RT, c);
  const auto sigma = coefficient_preset("diagonal(2,3,4)");
  // int u.A u over the unit cube = 2 + 12 + 36.
  CHECK_THAT(l2_norm(u, &sigma), WithinRel(std::sqrt(50.0), 1e-12));
  CHECK_THAT(l2_norm(u, &sigma, Weighting::inverse), WithinRel(std::sqrt(0.5 + 4.0 / 3.0 + 9.0 / 4.0), 1e-12));
}

TEST_CASE("boundary traces of interpolated fields", "[whitney]") {
  const Mesh m = generate_cube(2);
  const VectorField c = [](const Point&) { return Vec3{0, 0, 1}; };
  const auto tn = trace_normal(interpolate(m, FormDegree::RT, c));
  // Net outward flux of a constant field is zero, and the top face carries +1.
  CHECK_THAT(boundary_integral(tn), WithinAbs(0.0, 1e-14));
  double top = 0.0;
  for (std::size_t bf = 0; bf < m.boundary_faces().size(); ++bf)
    if (outward_normal(m, static_cast<int>(bf))[2] > 0.5) top += tn.values[bf] * m.face_area(m.boundary_faces()[bf]);
  CHECK_THAT(top, WithinAbs(1.0, 1e-14));

  const auto tt = trace_tangential(interpolate(m, FormDegree::NED, c));
  const auto direct = boundary_tangential_field(m, c);
  for (std::size_t e = 0; e < tt.values.size(); ++e) REQUIRE_THAT(tt.values[e], WithinAbs(direct.values[e], 1e-14));
}

TEST_CASE("random dofs are deterministic in the seed", "[whitney]") {
  const Mesh m = generate_cube(2);
  CHECK(random_dofs(m, FormDegree::RT, 7).values == random_dofs(m, FormDegree::RT, 7).values);
  CHECK(random_dofs(m, FormDegree::RT, 7).values != random_dofs(m, FormDegree::RT, 8).values);
}
