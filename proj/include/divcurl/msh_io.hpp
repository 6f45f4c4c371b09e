#pragma once

#include <filesystem>
#include <iosfwd>

#include "divcurl/mesh.hpp"

namespace divcurl {

// Gmsh MSH 2.2 ASCII. Triangles carry physical names gamma<i> (boundary components)
// or sigma<j> (cut surfaces, oriented by vertex order); tetrahedra form the volume.
Mesh load_msh(const std::filesystem::path& path);
Mesh read_msh(std::istream& in);

void write_msh(const Mesh& mesh, const std::filesystem::path& path);
void write_msh(const Mesh& mesh, std::ostream& out);

}  // namespace divcurl
