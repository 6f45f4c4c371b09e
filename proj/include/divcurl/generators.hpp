#pragma once

#include <string>

#include "divcurl/mesh.hpp"

namespace divcurl {

// Kuhn split of [0,1]^3 into n^3 subcubes of 6 tets each.
Mesh generate_cube(int n);

// Cubed-sphere shell r_in <= |x| <= r_out. Level k uses 2k+4 angular cells per patch edge
// and k+3 geometrically graded radial layers; each hexahedron is split into 12 tets.
Mesh generate_spherical_shell(double r_in, double r_out, int level);

// Solid torus with major radius R and minor radius r around the z axis. Level k uses
// 2(k+1) cells across the section and 16(k+1) toroidal segments. With `with_cut`, the
// section at angle 0 becomes cut surface 1 with normal +e_phi.
Mesh generate_solid_torus(double major, double minor, int level, bool with_cut);

// Parses "cube:n", "shell:rin,rout,k", "torus:R,r,k[,cut]" (bare "cube", "shell", "torus"
// select defaults).
Mesh generate_primitive(const std::string& spec);

// Single tetrahedron (0,0,0),(1,0,0),(0,1,0),(0,0,1).
Mesh generate_unit_tet();

}  // namespace divcurl
