#include <numbers>

#include "catch_amalgamated.hpp"

#include "divcurl/compat.hpp"
#include "divcurl/generators.hpp"
#include "divcurl/presets.hpp"

using namespace divcurl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

bool only_fails(const CompatReport& r, const std::string& prefix) {
  const auto f = r.failing();
  if (f.empty()) return false;
  for (const auto& n : f)
    if (n.rfind(prefix, 0) != 0 && n.rfind("harmonicPairing", 0) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("random compatible data pass on every mesh", "[compat]") {
  for (const Mesh& m : {generate_cube(2), generate_spherical_shell(1.0, 2.0, 0), generate_solid_torus(2.0, 0.5, 0, true)}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto dm = random_magnetostatic_data(m, seed);
      const auto rm = check_magnetostatic(dm.j, dm.rho, dm.lambda, m);
      CHECK(rm.pass);
      CHECK(rm.failing().empty());
      const auto de = random_electric_data(m, seed);
      CHECK(check_electric(de.j, de.rho, de.lambda, m).pass);
    }
  }
}

TEST_CASE("mean mismatch fails only the mean balance", "[compat]") {
  const Mesh m = generate_cube(2);
  const auto d = mean_mismatch_data(m);
  const auto r = check_magnetostatic(d.j, d.rho, d.lambda, m);
  CHECK_FALSE(r.pass);
  CHECK(r.failing() == std::vector<std::string>{"meanBalance"});
  CHECK(r.find("meanBalance")->residual > 0.5);
}

TEST_CASE("inverse-square source fails the component flux", "[compat]") {
  const Mesh m = generate_spherical_shell(1.0, 2.0, 0);
  const auto d = radial_inverse_square_data(m);
  const auto r = check_magnetostatic(d.j, d.rho, d.lambda, m);
  CHECK_FALSE(r.pass);
  CHECK(only_fails(r, "gammaFlux"));
  CHECK(r.find("divJ")->pass);
  // Solid-angle fluxes are exact: 4 pi through each sphere.
  for (const char* name : {"gammaFlux_0", "gammaFlux_1"}) {
    const auto* c = r.find(name);
    REQUIRE(c);
    REQUIRE(c->value);
    CHECK_THAT(std::abs(*c->value), WithinRel(4.0 * std::numbers::pi, 1e-10));
  }
}

TEST_CASE("poloidal boundary field fails the cut circulation", "[compat]") {
  const Mesh m = generate_solid_torus(2.0, 0.5, 0, true);
  const auto d = poloidal_circulation_data(m);
  const auto r = check_electric(d.j, d.rho, d.lambda, m);
  CHECK_FALSE(r.pass);
  CHECK(only_fails(r, "cutCirculation"));
  CHECK_THAT(std::abs(*r.find("cutCirculation_1")->value), WithinAbs(1.0, 1e-10));
}

TEST_CASE("non-solenoidal current fails divJ", "[compat]") {
  const Mesh m = generate_cube(2);
  auto d = zero_magnetostatic_data(m);
  d.j = random_dofs(m, FormDegree::RT, 11);
  const auto r = check_magnetostatic(d.j, d.rho, d.lambda, m);
  CHECK_FALSE(r.find("divJ")->pass);
}

TEST_CASE("residuals are scale invariant", "[compat]") {
  const Mesh m = generate_solid_torus(2.0, 0.5, 0, true);
  for (double s : {1e-9, 1.0, 1e9}) {
    auto d = random_magnetostatic_data(m, 5);
    for (auto* v : {&d.j.values, &d.rho.values, &d.lambda.values})
      for (double& x : *v) x *= s;
    CHECK(check_magnetostatic(d.j, d.rho, d.lambda, m).pass);
    auto bad = mean_mismatch_data(m);
    for (double& x : bad.rho.values) x *= s;
    CHECK_FALSE(check_magnetostatic(bad.j, bad.rho, bad.lambda, m).pass);
  }
}

TEST_CASE("manufactured data pass", "[compat]") {
  const Mesh m = generate_cube(3);
  for (const auto& ms : manufactured_solutions()) {
    const auto cb = coefficient_callback(ms.coefficient);
    if (ms.system == "magnetostatic") {
      const auto d = magnetostatic_data(m, ms.u, cb);
      CHECK(check_magnetostatic(d.j, d.rho, d.lambda, m).pass);
    } else {
      const auto d = electric_data(m, ms.u, cb);
      CHECK(check_electric(d.j, d.rho, d.lambda, m, coefficient_preset(ms.coefficient)).pass);
    }
  }
}

TEST_CASE("zero data pass trivially", "[compat]") {
  const Mesh m = generate_spherical_shell(1.0, 2.0, 0);
  const auto dm = zero_magnetostatic_data(m);
  CHECK(check_magnetostatic(dm.j, dm.rho, dm.lambda, m).pass);
  const auto de = zero_electric_data(m);
  CHECK(check_electric(de.j, de.rho, de.lambda, m).pass);
}
