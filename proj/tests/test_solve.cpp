#include "catch_amalgamated.hpp"

#include "divcurl/errors.hpp"
#include "divcurl/generators.hpp"
#include "divcurl/presets.hpp"
#include "divcurl/solve.hpp"

using namespace divcurl;

namespace {

double rel_distance(const Vector& a, const Vector& b) { return vec::norm(vec::add(a, b, -1.0)) / vec::norm(b); }

DofVector plus_basis(const SolutionBundle& s, double c) {
  DofVector u = s.u0;
  for (const auto& f : s.basis.fields) vec::axpy(c, f.values, u.values);
  return u;
}

}  // namespace

TEST_CASE("constant fields are reproduced exactly", "[solve]") {
  const Mesh m = generate_cube(3);
  const VectorField u = [](const Point&) { return Vec3{0.3, -1.2, 0.7}; };
  const std::string spec = "tilted";
  const auto coeff = coefficient_preset(spec);
  const auto cb = coefficient_callback(spec);

  const auto dm = magnetostatic_data(m, u, cb);
  const auto sm = solve_magnetostatic(dm.j, dm.rho, dm.lambda, coeff, m);
  CHECK(rel_distance(sm.u0.values, interpolate(m, FormDegree::RT, u).values) < 1e-8);
  CHECK(sm.diagnostics.within());

  const auto de = electric_data(m, u, cb);
  const auto se = solve_electric(de.j, de.rho, de.lambda, coeff, m);
  CHECK(rel_distance(se.u0.values, interpolate(m, FormDegree::NED, u).values) < 1e-8);
  CHECK(se.diagnostics.within());
}

TEST_CASE("zero data give the zero particular solution", "[solve]") {
  const Mesh shell = generate_spherical_shell(1.0, 2.0, 0);
  const auto d = zero_electric_data(shell);
  const auto s = solve_electric(d.j, d.rho, d.lambda, CoefficientField::identity(), shell);
  CHECK(vec::norm(s.u0.values) == 0.0);
  CHECK(s.basis.dimension() == 1);
  CHECK(s.converged);
}

TEST_CASE("manufactured solutions converge on the cube", "[solve]") {
  for (const char* name : {"manufactured-1", "manufactured-4"}) {
    const auto& ms = manufactured(name);
    const auto coeff = coefficient_preset(ms.coefficient);
    const auto cb = coefficient_callback(ms.coefficient);
    double prev = 0.0;
    for (int n : {3, 6}) {
      const Mesh m = generate_cube(n);
      SolutionBundle s;
      if (ms.system == "magnetostatic") {
        const auto d = magnetostatic_data(m, ms.u, cb);
        s = solve_magnetostatic(d.j, d.rho, d.lambda, coeff, m);
      } else {
        const auto d = electric_data(m, ms.u, cb);
        s = solve_electric(d.j, d.rho, d.lambda, coeff, m);
      }
      CHECK(s.diagnostics.within());
      const double err = l2_error(s.u0, ms.u) / l2_norm(m, ms.u);
      CHECK(err < 0.3);
      if (prev > 0.0) CHECK(prev / err > 1.8);
      prev = err;
    }
  }
}

TEST_CASE("diagnostics are invariant along the solution family", "[solve]") {
  const Mesh torus = generate_solid_torus(2.0, 0.5, 0, true);
  const auto sigma = coefficient_preset("random:2");
  const auto dm = random_magnetostatic_data(torus, 9);
  const auto sm = solve_magnetostatic(dm.j, dm.rho, dm.lambda, sigma, torus);
  REQUIRE(sm.basis.dimension() == 1);
  for (double c : {-2.5, 10.0}) {
    const auto dg = magnetostatic_diagnostics(plus_basis(sm, c), dm.j, dm.rho, dm.lambda, sigma);
    CHECK(std::abs(dg.curl - sm.diagnostics.curl) < 1e-8);
    CHECK(std::abs(dg.div - sm.diagnostics.div) < 1e-8);
    CHECK(std::abs(dg.trace - sm.diagnostics.trace) < 1e-8);
  }

  const Mesh shell = generate_spherical_shell(1.0, 2.0, 0);
  const auto de = random_electric_data(shell, 9);
  const auto se = solve_electric(de.j, de.rho, de.lambda, sigma, shell);
  REQUIRE(se.basis.dimension() == 1);
  const auto dg = electric_diagnostics(plus_basis(se, 4.0), de.j, de.rho, de.lambda, sigma);
  CHECK(std::abs(dg.curl - se.diagnostics.curl) < 1e-8);
  CHECK(std::abs(dg.div - se.diagnostics.div) < 1e-8);
  CHECK(std::abs(dg.trace - se.diagnostics.trace) < 1e-8);
}

TEST_CASE("incompatible data are rejected before solving", "[solve]") {
  const Mesh m = generate_cube(2);
  const auto d = mean_mismatch_data(m);
  try {
    solve_magnetostatic(d.j, d.rho, d.lambda, CoefficientField::identity(), m);
    FAIL("expected CompatibilityError");
  } catch (const CompatibilityError& e) {
    CHECK(e.failing() == std::vector<std::string>{"meanBalance"});
  }
}

TEST_CASE("random data solve to tolerance on multiply connected meshes", "[solve]") {
  const Mesh torus = generate_solid_torus(2.0, 0.5, 0, true);
  const auto de = random_electric_data(torus, 4);
  const auto se = solve_electric(de.j, de.rho, de.lambda, coefficient_preset("rotated"), torus);
  CHECK(se.diagnostics.within());
  CHECK(se.basis.dimension() == 0);
  const Mesh shell = generate_spherical_shell(1.0, 2.0, 0);
  const auto dm = random_magnetostatic_data(shell, 4);
  const auto sm = solve_magnetostatic(dm.j, dm.rho, dm.lambda, CoefficientField::identity(), shell);
  CHECK(sm.diagnostics.within());
  CHECK(sm.basis.dimension() == 0);
}

TEST_CASE("solves are deterministic", "[solve]") {
  const Mesh m = generate_solid_torus(2.0, 0.5, 0, true);
  const auto d = random_magnetostatic_data(m, 1);
  const auto a = solve_magnetostatic(d.j, d.rho, d.lambda, CoefficientField::identity(), m);
  const auto b = solve_magnetostatic(d.j, d.rho, d.lambda, CoefficientField::identity(), m);
  CHECK(a.u0.values == b.u0.values);
}
