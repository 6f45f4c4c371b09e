#include "catch_amalgamated.hpp"

#include "divcurl/decompose.hpp"
#include "divcurl/generators.hpp"
#include "divcurl/presets.hpp"

using namespace divcurl;
using Catch::Matchers::WithinAbs;

namespace {

double rel_distance(const Vector& a, const Vector& b, double scale) {
  return vec::norm(vec::add(a, b, -1.0)) / scale;
}

double max_pairing(const DecompositionResult& d) {
  double p = 0.0;
  for (const auto& [k, v] : d.pairings) p = std::max(p, v);
  return p;
}

}  // namespace

TEST_CASE("random fields decompose with exact reconstruction", "[decompose]") {
  const Mesh torus = generate_solid_torus(2.0, 0.5, 0, true);
  const Mesh shell = generate_spherical_shell(1.0, 2.0, 0);
  const auto sigma = coefficient_preset("random:1");
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto dm = hw_magnetic(random_dofs(torus, FormDegree::RT, seed), sigma, torus);
    CHECK(dm.reconstruction <= 1e-8);
    CHECK(max_pairing(dm) <= 1e-8);
    CHECK(dm.harmonic_coefficients.size() == 1);
    const auto de = hw_electric(random_dofs(shell, FormDegree::NED, seed), sigma, shell);
    CHECK(de.reconstruction <= 1e-8);
    CHECK(max_pairing(de) <= 1e-8);
    CHECK(de.harmonic_coefficients.size() == 1);
  }
}

TEST_CASE("decomposition is linear and deterministic", "[decompose]") {
  const Mesh m = generate_solid_torus(2.0, 0.5, 0, true);
  const auto sigma = CoefficientField::identity();
  const auto u = random_dofs(m, FormDegree::RT, 4);
  const auto v = random_dofs(m, FormDegree::RT, 5);
  DofVector w = u;
  w.values = vec::add(vec::scaled(u.values, 2.0), v.values, -3.0);
  const auto du = hw_magnetic(u, sigma, m);
  const auto dv = hw_magnetic(v, sigma, m);
  const auto dw = hw_magnetic(w, sigma, m);
  const double scale = vec::norm(w.values);
  auto combo = [](const Vector& a, const Vector& b) { return vec::add(vec::scaled(a, 2.0), b, -3.0); };
  CHECK(rel_distance(dw.h.values, combo(du.h.values, dv.h.values), scale) < 1e-8);
  CHECK(rel_distance(dw.gradient.values, combo(du.gradient.values, dv.gradient.values), scale) < 1e-8);
  CHECK(rel_distance(dw.rotational.values, combo(du.rotational.values, dv.rotational.values), scale) < 1e-8);

  const auto again = hw_magnetic(u, sigma, m);
  CHECK(rel_distance(again.h.values, du.h.values, vec::norm(u.values)) <= 1e-12);
  CHECK(rel_distance(again.gradient.values, du.gradient.values, vec::norm(u.values)) <= 1e-12);
  CHECK(rel_distance(again.rotational.values, du.rotational.values, vec::norm(u.values)) <= 1e-12);
}

TEST_CASE("basis members decompose as pure harmonic fields", "[decompose]") {
  const Mesh torus = generate_solid_torus(2.0, 0.5, 0, true);
  const auto bm = magnetic_basis(torus, CoefficientField::identity());
  const auto dm = hw_magnetic(bm.fields[0], CoefficientField::identity(), torus, {}, &bm);
  CHECK_THAT(dm.harmonic_coefficients[0], WithinAbs(1.0, 1e-8));
  CHECK(dm.norms.at("gradient") <= 1e-8 * dm.norms.at("u"));
  CHECK(dm.norms.at("rotational") <= 1e-8 * dm.norms.at("u"));

  const Mesh shell = generate_spherical_shell(1.0, 2.0, 0);
  const auto eps = coefficient_preset("rotated");
  const auto be = electric_basis(shell, eps);
  const auto de = hw_electric(be.fields[0], eps, shell, {}, &be);
  CHECK_THAT(de.harmonic_coefficients[0], WithinAbs(1.0, 1e-8));
  CHECK(de.norms.at("gradient") <= 1e-8 * de.norms.at("u"));
  CHECK(de.norms.at("rotational") <= 1e-8 * de.norms.at("u"));
}

TEST_CASE("pure components are recognized", "[decompose]") {
  const Mesh m = generate_cube(3);
  // curl of an edge field with zero boundary circulations is purely rotational.
  Vector x = random_dofs(m, FormDegree::NED, 6).values;
  for (int e : m.boundary_edges()) x[e] = 0.0;
  const DofVector rot(m, FormDegree::RT, incidence(m, Incidence::curl) * x);
  const auto dr = hw_magnetic(rot, CoefficientField::identity(), m);
  CHECK(dr.norms.at("gradient") <= 1e-8 * dr.norms.at("u"));
  CHECK(rel_distance(dr.rotational.values, rot.values, vec::norm(rot.values)) <= 1e-8);

  // Gradient of a P1 function vanishing on the boundary is a pure gradient.
  Vector phi = random_dofs(m, FormDegree::P1, 7).values;
  for (int v : m.boundary_vertices()) phi[v] = 0.0;
  const DofVector grad(m, FormDegree::NED, incidence(m, Incidence::grad) * phi);
  const auto dg = hw_electric(grad, coefficient_preset("tilted"), m);
  CHECK(dg.norms.at("rotational") <= 1e-8 * dg.norms.at("u"));
  CHECK(rel_distance(dg.gradient.values, grad.values, vec::norm(grad.values)) <= 1e-8);
  CHECK(rel_distance(dg.chi.values, phi, vec::norm(phi)) <= 1e-8);
}
