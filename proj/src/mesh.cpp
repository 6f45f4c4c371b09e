#include "divcurl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "divcurl/errors.hpp"

namespace divcurl {

namespace {

std::uint64_t face_key(std::array<int, 3> f, std::uint64_t n) {
  std::sort(f.begin(), f.end());
  return (static_cast<std::uint64_t>(f[0]) * n + static_cast<std::uint64_t>(f[1])) * n +
         static_cast<std::uint64_t>(f[2]);
}

// Parity (+1 even, -1 odd) of the permutation that sorts three distinct ids.
int sort_parity(std::array<int, 3> v) {
  int swaps = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j + 1 < 3 - i; ++j)
      if (v[j] > v[j + 1]) {
        std::swap(v[j], v[j + 1]);
        ++swaps;
      }
  return swaps % 2 == 0 ? 1 : -1;
}

struct UnionFind {
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

double bbox_diagonal(const Mesh& mesh, const std::vector<int>& faces) {
  Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec3 hi{-lo[0], -lo[1], -lo[2]};
  for (int f : faces)
    for (int v : mesh.faces()[f])
      for (int c = 0; c < 3; ++c) {
        lo[c] = std::min(lo[c], mesh.vertex(v)[c]);
        hi[c] = std::max(hi[c], mesh.vertex(v)[c]);
      }
  return norm(hi - lo);
}

}  // namespace

Mesh::Mesh(MeshInput input) : vertices_(std::move(input.vertices)), tets_(std::move(input.tets)) {
  if (tets_.empty()) throw TopologyError("mesh has no tetrahedra");
  build_entities();
  build_boundary(input);
  build_cuts(input);
}

void Mesh::build_entities() {
  const int nv = num_vertices();
  const int nt = num_tets();
  sorted_tets_.resize(nt);
  tet_sign_.resize(nt);
  volumes_.resize(nt);
  grads_.resize(nt);
  double max_len = 0.0;
  for (int t = 0; t < nt; ++t) {
    auto& tet = tets_[t];
    for (int v : tet)
      if (v < 0 || v >= nv) throw TopologyError("tet references unknown vertex");
    double vol = signed_volume(vertices_[tet[0]], vertices_[tet[1]], vertices_[tet[2]], vertices_[tet[3]]);
    double scale = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) scale = std::max(scale, norm(vertices_[tet[a]] - vertices_[tet[b]]));
    max_len = std::max(max_len, scale);
    if (std::abs(vol) <= 1e-14 * scale * scale * scale) throw TopologyError("degenerate tetrahedron " + std::to_string(t));
    if (vol < 0.0) {
      std::swap(tet[2], tet[3]);
      vol = -vol;
    }
    volumes_[t] = vol;
    auto s = tet;
    std::sort(s.begin(), s.end());
    if (s[0] == s[1] || s[1] == s[2] || s[2] == s[3]) throw TopologyError("tet with repeated vertex");
    sorted_tets_[t] = s;
    const double sv = signed_volume(vertices_[s[0]], vertices_[s[1]], vertices_[s[2]], vertices_[s[3]]);
    tet_sign_[t] = sv > 0.0 ? 1 : -1;

    // Rows of the inverse Jacobian are the barycentric gradients 1..3.
    Mat3 jac;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) jac[r][c] = vertices_[s[c + 1]][r] - vertices_[s[0]][r];
    const Vec3 c0 = {jac[0][0], jac[1][0], jac[2][0]};
    const Vec3 c1 = {jac[0][1], jac[1][1], jac[2][1]};
    const Vec3 c2 = {jac[0][2], jac[1][2], jac[2][2]};
    const double d = dot(c0, cross(c1, c2));
    auto& g = grads_[t];
    g[1] = (1.0 / d) * cross(c1, c2);
    g[2] = (1.0 / d) * cross(c2, c0);
    g[3] = (1.0 / d) * cross(c0, c1);
    g[0] = -1.0 * (g[1] + g[2] + g[3]);
  }
  max_edge_ = max_len;

  vertex_edges_.assign(static_cast<std::size_t>(nv), {});
  tet_edges_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& s = sorted_tets_[t];
    for (int k = 0; k < 6; ++k) {
      const int a = s[kLocalEdges[k][0]];
      const int b = s[kLocalEdges[k][1]];
      auto& list = vertex_edges_[a];
      auto it = std::find_if(list.begin(), list.end(), [b](const auto& p) { return p.first == b; });
      int id;
      if (it == list.end()) {
        id = static_cast<int>(edges_.size());
        edges_.push_back({a, b});
        list.emplace_back(b, id);
      } else {
        id = it->second;
      }
      tet_edges_[t][k] = id;
    }
  }

  const auto key_base = static_cast<std::uint64_t>(nv) + 1;
  tet_faces_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& s = sorted_tets_[t];
    for (int k = 0; k < 4; ++k) {
      const std::array<int, 3> f{s[kLocalFaces[k][0]], s[kLocalFaces[k][1]], s[kLocalFaces[k][2]]};
      const auto key = face_key(f, key_base);
      auto [it, inserted] = face_lookup_.try_emplace(key, static_cast<int>(faces_.size()));
      if (inserted) {
        faces_.push_back(f);
        face_tets_.push_back({t, -1});
      } else {
        auto& ft = face_tets_[it->second];
        if (ft[1] != -1) throw TopologyError("non-manifold face shared by more than two tets");
        ft[1] = t;
      }
      tet_faces_[t][k] = it->second;
    }
  }
}

Point Mesh::tet_point(int t, const std::array<double, 4>& bary) const {
  Point p{0, 0, 0};
  for (int k = 0; k < 4; ++k) p += bary[k] * vertices_[sorted_tets_[t][k]];
  return p;
}

Vec3 Mesh::face_area_normal(int f) const {
  const auto& v = faces_[f];
  return cross(vertices_[v[1]] - vertices_[v[0]], vertices_[v[2]] - vertices_[v[0]]);
}

double Mesh::face_area(int f) const { return 0.5 * norm(face_area_normal(f)); }

double Mesh::edge_length(int e) const { return norm(vertices_[edges_[e][1]] - vertices_[edges_[e][0]]); }

int Mesh::find_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  if (a < 0 || b >= num_vertices()) return -1;
  for (const auto& [other, id] : vertex_edges_[a])
    if (other == b) return id;
  return -1;
}

int Mesh::find_face(int a, int b, int c) const {
  const int nv = num_vertices();
  if (std::min({a, b, c}) < 0 || std::max({a, b, c}) >= nv) return -1;
  auto it = face_lookup_.find(face_key({a, b, c}, static_cast<std::uint64_t>(nv) + 1));
  return it == face_lookup_.end() ? -1 : it->second;
}

void Mesh::build_boundary(const MeshInput& input) {
  const int nf = num_faces();
  boundary_face_index_.assign(nf, -1);
  for (int f = 0; f < nf; ++f) {
    if (face_tets_[f][1] == -1) {
      boundary_face_index_[f] = static_cast<int>(boundary_faces_.size());
      boundary_faces_.push_back(f);
    } else {
      interior_faces_.push_back(f);
    }
  }
  if (boundary_faces_.empty()) throw TopologyError("mesh has no boundary");

  outward_sign_.resize(boundary_faces_.size());
  for (std::size_t b = 0; b < boundary_faces_.size(); ++b) {
    const int f = boundary_faces_[b];
    const int t = face_tets_[f][0];
    int opposite = -1;
    for (int v : sorted_tets_[t])
      if (std::find(faces_[f].begin(), faces_[f].end(), v) == faces_[f].end()) opposite = v;
    const Vec3 n = face_area_normal(f);
    outward_sign_[b] = dot(n, vertices_[faces_[f][0]] - vertices_[opposite]) > 0.0 ? 1 : -1;
  }

  // Boundary edges and vertices.
  const int ne = num_edges();
  const int nv = num_vertices();
  boundary_edge_index_.assign(ne, -1);
  boundary_vertex_index_.assign(nv, -1);
  std::vector<char> edge_on(ne, 0);
  for (int f : boundary_faces_) {
    const auto& v = faces_[f];
    for (auto [a, b] : {std::pair{v[0], v[1]}, std::pair{v[0], v[2]}, std::pair{v[1], v[2]}}) edge_on[find_edge(a, b)] = 1;
    for (int x : v) boundary_vertex_index_[x] = 0;
  }
  for (int e = 0; e < ne; ++e) {
    if (edge_on[e]) {
      boundary_edge_index_[e] = static_cast<int>(boundary_edges_.size());
      boundary_edges_.push_back(e);
    } else {
      interior_edges_.push_back(e);
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (boundary_vertex_index_[v] == 0) {
      boundary_vertex_index_[v] = static_cast<int>(boundary_vertices_.size());
      boundary_vertices_.push_back(v);
    } else {
      boundary_vertex_index_[v] = -1;
      interior_vertices_.push_back(v);
    }
  }

  // Components: connected pieces of the boundary surface.
  const int nb = static_cast<int>(boundary_faces_.size());
  UnionFind uf(nb);
  {
    std::vector<int> first_face_of_vertex(nv, -1);
    for (int b = 0; b < nb; ++b)
      for (int v : faces_[boundary_faces_[b]]) {
        if (first_face_of_vertex[v] < 0)
          first_face_of_vertex[v] = b;
        else
          uf.unite(first_face_of_vertex[v], b);
      }
  }
  std::map<int, std::vector<int>> pieces;
  for (int b = 0; b < nb; ++b) pieces[uf.find(b)].push_back(boundary_faces_[b]);

  face_component_.assign(nb, -1);
  if (!input.boundary_triangles.empty()) {
    if (input.boundary_tags.size() != input.boundary_triangles.size())
      throw TagError("boundary tag list length mismatch");
    int max_tag = -1;
    for (std::size_t k = 0; k < input.boundary_triangles.size(); ++k) {
      const auto& tri = input.boundary_triangles[k];
      const int f = find_face(tri[0], tri[1], tri[2]);
      if (f < 0 || boundary_face_index_[f] < 0) throw TopologyError("tagged boundary triangle is not a boundary face");
      const int tag = input.boundary_tags[k];
      if (tag < 0) throw TagError("negative boundary tag");
      auto& slot = face_component_[boundary_face_index_[f]];
      if (slot >= 0 && slot != tag) throw TagError("boundary face carries two gamma tags");
      slot = tag;
      max_tag = std::max(max_tag, tag);
    }
    for (int c : face_component_)
      if (c < 0) throw TagError("boundary face without gamma tag");
    component_faces_.assign(static_cast<std::size_t>(max_tag) + 1, {});
    for (int b = 0; b < nb; ++b) component_faces_[face_component_[b]].push_back(boundary_faces_[b]);
    if (component_faces_[0].empty()) throw TagError("missing gamma0");
    for (const auto& c : component_faces_)
      if (c.empty()) throw TagError("gamma tags are not contiguous");
    for (const auto& [root, faces] : pieces) {
      const int tag = face_component_[boundary_face_index_[faces.front()]];
      for (int f : faces)
        if (face_component_[boundary_face_index_[f]] != tag)
          throw TagError("one connected boundary surface carries several gamma tags");
    }
    if (pieces.size() != component_faces_.size())
      throw TagError("gamma tag groups do not match the connected boundary components");
    const double d0 = bbox_diagonal(*this, component_faces_[0]);
    for (std::size_t i = 1; i < component_faces_.size(); ++i)
      if (bbox_diagonal(*this, component_faces_[i]) > d0 * (1.0 + 1e-12))
        throw TagError("gamma0 is not the outer boundary component (bounding-box cross-check)");
  } else {
    std::vector<std::vector<int>> comps;
    for (auto& [root, faces] : pieces) comps.push_back(std::move(faces));
    std::size_t outer = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const double d = bbox_diagonal(*this, comps[i]);
      if (d > best * (1.0 + 1e-12)) {
        best = d;
        outer = i;
      }
    }
    component_faces_.push_back(comps[outer]);
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (i != outer) component_faces_.push_back(comps[i]);
    for (std::size_t i = 0; i < component_faces_.size(); ++i)
      for (int f : component_faces_[i]) face_component_[boundary_face_index_[f]] = static_cast<int>(i);
  }

  vertex_component_.assign(nv, -1);
  for (int b = 0; b < nb; ++b)
    for (int v : faces_[boundary_faces_[b]]) {
      auto& c = vertex_component_[v];
      if (c >= 0 && c != face_component_[b]) throw TopologyError("vertex touches two boundary components");
      c = face_component_[b];
    }
}

void Mesh::build_cuts(const MeshInput& input) {
  const int nt = num_tets();
  const int ne = num_edges();
  plus_cut_.assign(nt, {-1, -1, -1, -1});
  std::vector<int> face_owner(num_faces(), 0);
  std::vector<int> vertex_owner(num_vertices(), 0);

  // tets containing each vertex, built lazily only for cut vertices
  std::vector<std::vector<int>> vertex_tets;
  if (!input.cuts.empty()) {
    vertex_tets.assign(num_vertices(), {});
    for (int t = 0; t < nt; ++t)
      for (int v : sorted_tets_[t]) vertex_tets[v].push_back(t);
  }

  for (std::size_t j = 0; j < input.cuts.size(); ++j) {
    const int id = static_cast<int>(j) + 1;
    CutSurface cut;
    cut.id = id;
    const auto& tris = input.cuts[j].triangles;
    if (tris.empty()) throw TopologyError("cut surface sigma" + std::to_string(id) + " is empty");
    std::map<int, int> edge_sum;
    std::map<int, int> edge_count;
    for (const auto& tri : tris) {
      const int f = find_face(tri[0], tri[1], tri[2]);
      if (f < 0) throw TopologyError("cut triangle is not a mesh face");
      if (face_tets_[f][1] < 0) throw TopologyError("cut face lies on the boundary");
      if (face_owner[f] != 0) throw TopologyError("cut faces overlap (shared or repeated face)");
      face_owner[f] = id;
      const int s = sort_parity(tri);
      cut.faces.push_back(f);
      cut.face_sign.push_back(s);
      const auto& v = faces_[f];
      // oriented boundary of [v0,v1,v2] is [v1,v2] - [v0,v2] + [v0,v1]
      const std::array<std::pair<int, int>, 3> es{{{find_edge(v[1], v[2]), 1}, {find_edge(v[0], v[2]), -1}, {find_edge(v[0], v[1]), 1}}};
      for (auto [e, c] : es) {
        edge_sum[e] += s * c;
        ++edge_count[e];
      }
    }
    for (const auto& [e, count] : edge_count) {
      if (count > 2) throw TopologyError("cut surface is non-manifold along an edge");
      const int sum = edge_sum[e];
      if (count == 2 && sum != 0) throw TopologyError("cut surface orientation is inconsistent");
      if (count == 1) {
        if (boundary_edge_index_[e] < 0) throw TopologyError("cut surface boundary does not lie on the domain boundary");
        cut.curve_edges.push_back(e);
        cut.curve_sign.push_back(sum);
      }
    }
    // edge connectivity of the face set
    {
      UnionFind uf(static_cast<int>(cut.faces.size()));
      std::map<int, int> first;
      for (std::size_t k = 0; k < cut.faces.size(); ++k) {
        const auto& v = faces_[cut.faces[k]];
        for (auto [a, b] : {std::pair{v[0], v[1]}, std::pair{v[0], v[2]}, std::pair{v[1], v[2]}}) {
          const int e = find_edge(a, b);
          auto [it, ins] = first.try_emplace(e, static_cast<int>(k));
          if (!ins) uf.unite(it->second, static_cast<int>(k));
        }
      }
      for (std::size_t k = 0; k < cut.faces.size(); ++k)
        if (uf.find(static_cast<int>(k)) != 0) throw TopologyError("cut surface is not edge-connected");
    }

    std::set<int> verts;
    for (int f : cut.faces) verts.insert(faces_[f].begin(), faces_[f].end());
    cut.vertices.assign(verts.begin(), verts.end());
    for (int v : cut.vertices) {
      if (vertex_owner[v] != 0) throw TopologyError("distinct cut surfaces share a vertex");
      vertex_owner[v] = id;
    }

    // Plus side per cut vertex: components of its tet star once cut faces are removed.
    for (int v : cut.vertices) {
      const auto& star = vertex_tets[v];
      const int ns = static_cast<int>(star.size());
      UnionFind uf(ns);
      std::map<int, int> face_first;
      for (int a = 0; a < ns; ++a) {
        const int t = star[a];
        for (int k = 0; k < 4; ++k) {
          const int f = tet_faces_[t][k];
          if (sorted_tets_[t][k] == v) continue;  // face opposite v does not contain v
          if (face_owner[f] == id) continue;
          auto [it, ins] = face_first.try_emplace(f, a);
          if (!ins) uf.unite(it->second, a);
        }
      }
      std::set<int> plus_roots, minus_roots;
      for (std::size_t k = 0; k < cut.faces.size(); ++k) {
        const int f = cut.faces[k];
        const auto& fv = faces_[f];
        if (std::find(fv.begin(), fv.end(), v) == fv.end()) continue;
        const Vec3 n = static_cast<double>(cut.face_sign[k]) * face_area_normal(f);
        for (int side = 0; side < 2; ++side) {
          const int t = face_tets_[f][side];
          int opposite = -1;
          for (int x : sorted_tets_[t])
            if (std::find(fv.begin(), fv.end(), x) == fv.end()) opposite = x;
          const bool plus = dot(n, vertices_[opposite] - vertices_[fv[0]]) > 0.0;
          const int a = static_cast<int>(std::find(star.begin(), star.end(), t) - star.begin());
          (plus ? plus_roots : minus_roots).insert(uf.find(a));
        }
      }
      for (int r : plus_roots)
        if (minus_roots.count(r)) throw TopologyError("cut surface does not separate its neighbourhood consistently");
      for (int a = 0; a < ns; ++a) {
        if (!plus_roots.count(uf.find(a))) continue;
        const int t = star[a];
        for (int k = 0; k < 4; ++k)
          if (sorted_tets_[t][k] == v) plus_cut_[t][k] = static_cast<int>(j);
      }
    }

    // Jump cochain: difference of the plus-side indicator along each edge.
    cut.edge_jump.assign(ne, 0);
    std::vector<char> seen(ne, 0);
    for (int t = 0; t < nt; ++t) {
      for (int k = 0; k < 6; ++k) {
        const int a = kLocalEdges[k][0];
        const int b = kLocalEdges[k][1];
        const int za = plus_cut_[t][a] == static_cast<int>(j) ? 1 : 0;
        const int zb = plus_cut_[t][b] == static_cast<int>(j) ? 1 : 0;
        const int e = tet_edges_[t][k];
        if (!seen[e]) {
          seen[e] = 1;
          cut.edge_jump[e] = zb - za;
        } else if (cut.edge_jump[e] != zb - za) {
          throw TopologyError("cut plus-side assignment is not consistent along an edge");
        }
      }
    }
    cuts_.push_back(std::move(cut));
  }
}

MeshQualityReport mesh_quality(const Mesh& mesh) {
  MeshQualityReport q;
  q.cells = mesh.num_tets();
  q.vertices = mesh.num_vertices();
  q.min_dihedral = std::numeric_limits<double>::max();
  q.max_dihedral = 0.0;
  q.min_edge = std::numeric_limits<double>::max();
  q.max_edge = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    q.min_edge = std::min(q.min_edge, mesh.edge_length(e));
    q.max_edge = std::max(q.max_edge, mesh.edge_length(e));
  }
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& g = mesh.grad_lambda(t);
    // dihedral angle along the edge shared by faces opposite i and j: pi - angle(grad_i, grad_j)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const double c = dot(g[i], g[j]) / (norm(g[i]) * norm(g[j]));
        const double angle = std::acos(-std::clamp(c, -1.0, 1.0));
        q.min_dihedral = std::min(q.min_dihedral, angle);
        q.max_dihedral = std::max(q.max_dihedral, angle);
      }
  }
  return q;
}

}  // namespace divcurl
