#include <numbers>
#include <sstream>

#include "catch_amalgamated.hpp"

#include "divcurl/errors.hpp"
#include "divcurl/generators.hpp"
#include "divcurl/msh_io.hpp"
#include "divcurl/topology.hpp"

using namespace divcurl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double total_volume(const Mesh& m) {
  double v = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) v += m.volume(t);
  return v;
}

int euler_characteristic(const Mesh& m) {
  return m.num_vertices() - m.num_edges() + m.num_faces() - m.num_tets();
}

}  // namespace

TEST_CASE("unit tet entities", "[mesh]") {
  const Mesh m = generate_unit_tet();
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_edges() == 6);
  CHECK(m.num_faces() == 4);
  CHECK(m.num_tets() == 1);
  CHECK_THAT(m.volume(0), WithinAbs(1.0 / 6.0, 1e-15));
  CHECK(m.boundary_faces().size() == 4);
  CHECK(m.betti() == std::pair{0, 0});
  // Barycentric gradients sum to zero.
  Vec3 s{0, 0, 0};
  for (const auto& g : m.grad_lambda(0)) s += g;
  CHECK(norm(s) < 1e-14);
}

TEST_CASE("cube counts and volume", "[mesh]") {
  for (int n : {1, 2, 3}) {
    const Mesh m = generate_cube(n);
    CHECK(m.num_tets() == 6 * n * n * n);
    CHECK(m.num_vertices() == (n + 1) * (n + 1) * (n + 1));
    CHECK_THAT(total_volume(m), WithinAbs(1.0, 1e-13));
    CHECK(euler_characteristic(m) == 1);
    CHECK(m.boundary_faces().size() == static_cast<std::size_t>(12 * n * n));
    CHECK(m.betti() == std::pair{0, 0});
    for (int t = 0; t < m.num_tets(); ++t) REQUIRE(m.volume(t) > 0);
  }
}

TEST_CASE("shell and torus topology", "[mesh]") {
  const Mesh shell = generate_spherical_shell(1.0, 2.0, 0);
  CHECK(shell.betti() == std::pair{1, 0});
  CHECK(shell.num_boundary_components() == 2);
  CHECK(betti_counts(shell) == std::pair{1, 0});
  // Polyhedral volume approaches 4/3 pi (8 - 1) from below.
  const double exact = 4.0 / 3.0 * std::numbers::pi * 7.0;
  CHECK(total_volume(shell) < exact);
  CHECK_THAT(total_volume(shell), WithinRel(exact, 0.08));
  CHECK_THAT(total_volume(generate_spherical_shell(1.0, 2.0, 1)), WithinRel(exact, 0.04));
  CHECK(euler_characteristic(shell) == 2);  // b0 - b1 + b2 = 1 - 0 + 1

  const Mesh torus = generate_solid_torus(2.0, 0.5, 0, true);
  CHECK(torus.betti() == std::pair{0, 1});
  CHECK(betti_counts(torus) == std::pair{0, 1});
  CHECK(euler_characteristic(torus) == 0);
  const auto coh = cohomology_check(torus);
  CHECK(coh.b1_rank == 1);
  CHECK(coh.b1_euler == 1);
  CHECK(coh.b1_cut_open == 0);
  const auto& cut = torus.cuts().front();
  CHECK_FALSE(cut.faces.empty());
  CHECK(cut.curve_edges.size() == cut.curve_sign.size());
}

TEST_CASE("torus without a cut fails the cohomology check", "[mesh]") {
  const Mesh torus = generate_solid_torus(2.0, 0.5, 0, false);
  CHECK(torus.betti() == std::pair{0, 0});
  CHECK_THROWS_AS(betti_counts(torus), CohomologyMismatch);
}

TEST_CASE("msh round trip keeps tags and cuts", "[mesh]") {
  const Mesh torus = generate_solid_torus(2.0, 0.5, 0, true);
  std::stringstream buf;
  write_msh(torus, buf);
  const Mesh back = read_msh(buf);
  CHECK(back.num_tets() == torus.num_tets());
  CHECK(back.num_vertices() == torus.num_vertices());
  CHECK(back.betti() == torus.betti());
  CHECK(back.cuts().front().faces.size() == torus.cuts().front().faces.size());
  CHECK_THAT(total_volume(back), WithinRel(total_volume(torus), 1e-12));

  const Mesh shell = generate_spherical_shell(1.0, 2.0, 0);
  std::stringstream buf2;
  write_msh(shell, buf2);
  CHECK(read_msh(buf2).betti() == std::pair{1, 0});
}

TEST_CASE("malformed msh input is rejected", "[mesh]") {
  std::stringstream bad("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n2\n1 0 0\n");
  CHECK_THROWS_AS(read_msh(bad), InputError);
  std::stringstream empty;
  CHECK_THROWS_AS(read_msh(empty), InputError);
}

TEST_CASE("primitive specs", "[mesh]") {
  CHECK(generate_primitive("cube:2").num_tets() == 48);
  CHECK(generate_primitive("torus:2,0.5,0,cut").betti() == std::pair{0, 1});
  CHECK(generate_primitive("torus:2,0.5,0").betti() == std::pair{0, 0});
  CHECK_THROWS_AS(generate_primitive("sphere:1"), InputError);
  CHECK_THROWS_AS(generate_primitive("cube:x"), InputError);
  CHECK_THROWS_AS(generate_primitive("torus:2,0.5"), InputError);
}

TEST_CASE("cube quality", "[mesh]") {
  const auto q = mesh_quality(generate_cube(4));
  CHECK_THAT(q.min_edge, WithinAbs(0.25, 1e-14));
  CHECK_THAT(q.max_edge, WithinAbs(std::sqrt(3.0) * 0.25, 1e-14));
  CHECK(q.min_dihedral > 0.0);
  CHECK(q.max_dihedral < std::numbers::pi);
  CHECK(q.cells == 384);
}
