#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <string>
#include <utility>
#include <vector>

#include "divcurl/geometry.hpp"

namespace divcurl {

// Oriented triangle list describing one cut surface; the normal n_j of each triangle is
// (p1 - p0) x (p2 - p0) in the listed vertex order.
struct CutInput {
  std::vector<std::array<int, 3>> triangles;
};

struct MeshInput {
  std::vector<Point> vertices;
  std::vector<std::array<int, 4>> tets;
  // Optional boundary tagging. When empty, components are detected automatically and
  // the one with the largest bounding box becomes component 0.
  std::vector<std::array<int, 3>> boundary_triangles;
  std::vector<int> boundary_tags;  // gamma index per boundary triangle
  std::vector<CutInput> cuts;
};

struct CutSurface {
  int id = 0;                   // 1-based
  std::vector<int> faces;       // interior face ids
  std::vector<int> face_sign;   // +1 if n_j agrees with the global face orientation
  std::vector<int> curve_edges; // boundary loop edges (on the domain boundary)
  std::vector<int> curve_sign;  // +1 if tau_j agrees with the global edge orientation
  std::vector<int> vertices;    // all vertices of the cut faces
  std::vector<int> edge_jump;   // per global edge: jump cochain of the plus-side indicator
};

struct MeshQualityReport {
  double min_dihedral = 0.0;
  double max_dihedral = 0.0;
  double min_edge = 0.0;
  double max_edge = 0.0;
  int cells = 0;
  int vertices = 0;
};

// Local numbering inside a tet uses its vertices in ascending global order. Local edges are
// (0,1),(0,2),(0,3),(1,2),(1,3),(2,3); local face k is opposite local vertex k.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces{{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

class Mesh {
 public:
  explicit Mesh(MeshInput input);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_tets() const { return static_cast<int>(tets_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int v) const { return vertices_[v]; }
  // Positively oriented tets as stored.
  const std::vector<std::array<int, 4>>& tets() const { return tets_; }
  // Tet vertices in ascending id order and the orientation sign of that ordering.
  const std::array<int, 4>& sorted_tet(int t) const { return sorted_tets_[t]; }
  int tet_sign(int t) const { return tet_sign_[t]; }
  const std::vector<std::array<int, 4>>& sorted_tets() const { return sorted_tets_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  const std::array<int, 6>& tet_edges(int t) const { return tet_edges_[t]; }
  const std::array<int, 4>& tet_faces(int t) const { return tet_faces_[t]; }
  const std::array<int, 2>& face_tets(int f) const { return face_tets_[f]; }

  double volume(int t) const { return volumes_[t]; }
  // Gradients of the barycentric coordinates, in sorted local order.
  const std::array<Vec3, 4>& grad_lambda(int t) const { return grads_[t]; }
  Point tet_point(int t, const std::array<double, 4>& bary) const;
  double face_area(int f) const;
  // (p1 - p0) x (p2 - p0) for the ascending vertex order; length is twice the area.
  Vec3 face_area_normal(int f) const;
  double edge_length(int e) const;
  double max_edge_length() const { return max_edge_; }
  int find_edge(int a, int b) const;
  int find_face(int a, int b, int c) const;

  // Boundary data. Boundary entities are also indexed 0..n-1 in their own lists.
  const std::vector<int>& boundary_faces() const { return boundary_faces_; }
  int boundary_face_index(int f) const { return boundary_face_index_[f]; }
  int outward_sign(int bf) const { return outward_sign_[bf]; }
  int face_component(int bf) const { return face_component_[bf]; }
  int num_boundary_components() const { return static_cast<int>(component_faces_.size()); }
  const std::vector<int>& component_faces(int i) const { return component_faces_[i]; }
  const std::vector<int>& boundary_edges() const { return boundary_edges_; }
  int boundary_edge_index(int e) const { return boundary_edge_index_[e]; }
  const std::vector<int>& boundary_vertices() const { return boundary_vertices_; }
  int boundary_vertex_index(int v) const { return boundary_vertex_index_[v]; }
  int vertex_component(int v) const { return vertex_component_[v]; }
  const std::vector<int>& interior_vertices() const { return interior_vertices_; }
  const std::vector<int>& interior_edges() const { return interior_edges_; }
  const std::vector<int>& interior_faces() const { return interior_faces_; }

  const std::vector<CutSurface>& cuts() const { return cuts_; }
  int num_cuts() const { return static_cast<int>(cuts_.size()); }
  // Per tet and sorted local vertex: index of the cut whose plus side it sits on, or -1.
  int plus_cut(int t, int local) const { return plus_cut_[t][local]; }

  // (N1, N2) read off the boundary components and cuts.
  std::pair<int, int> betti() const { return {num_boundary_components() - 1, num_cuts()}; }

 private:
  void build_entities();
  void build_boundary(const MeshInput& input);
  void build_cuts(const MeshInput& input);

  std::vector<Point> vertices_;
  std::vector<std::array<int, 4>> tets_;
  std::vector<std::array<int, 4>> sorted_tets_;
  std::vector<int> tet_sign_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<std::array<int, 6>> tet_edges_;
  std::vector<std::array<int, 4>> tet_faces_;
  std::vector<std::array<int, 2>> face_tets_;
  std::vector<double> volumes_;
  std::vector<std::array<Vec3, 4>> grads_;
  double max_edge_ = 0.0;
  std::vector<std::vector<std::pair<int, int>>> vertex_edges_;  // (other vertex, edge id), other > v
  std::unordered_map<std::uint64_t, int> face_lookup_;

  std::vector<int> boundary_faces_;
  std::vector<int> boundary_face_index_;
  std::vector<int> outward_sign_;
  std::vector<int> face_component_;
  std::vector<std::vector<int>> component_faces_;
  std::vector<int> boundary_edges_;
  std::vector<int> boundary_edge_index_;
  std::vector<int> boundary_vertices_;
  std::vector<int> boundary_vertex_index_;
  std::vector<int> vertex_component_;
  std::vector<int> interior_vertices_;
  std::vector<int> interior_edges_;
  std::vector<int> interior_faces_;

  std::vector<CutSurface> cuts_;
  std::vector<std::array<int, 4>> plus_cut_;
};

MeshQualityReport mesh_quality(const Mesh& mesh);

}  // namespace divcurl
