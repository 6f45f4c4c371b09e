#include "divcurl/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "divcurl/errors.hpp"

namespace divcurl {

namespace {

// Simplicial complex given by its tets; entities are rebuilt from scratch so the same
// routine serves the mesh and its cut-open copy.
struct Complex {
  int nv = 0;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<int, 3>> face_edges;
};

Complex build_complex(int nv, const std::vector<std::array<int, 4>>& tets) {
  Complex c;
  c.nv = nv;
  std::map<std::array<int, 2>, int> edge_id;
  std::map<std::array<int, 3>, int> face_id;
  for (auto t : tets) {
    std::sort(t.begin(), t.end());
    for (const auto& lf : kLocalFaces) {
      const std::array<int, 3> f{t[lf[0]], t[lf[1]], t[lf[2]]};
      if (face_id.try_emplace(f, static_cast<int>(c.faces.size())).second) c.faces.push_back(f);
    }
    for (const auto& le : kLocalEdges) {
      const std::array<int, 2> e{t[le[0]], t[le[1]]};
      if (edge_id.try_emplace(e, static_cast<int>(c.edges.size())).second) c.edges.push_back(e);
    }
  }
  for (const auto& f : c.faces)
    c.face_edges.push_back({edge_id.at({f[0], f[1]}), edge_id.at({f[0], f[2]}), edge_id.at({f[1], f[2]})});
  return c;
}

int connected_components(int nv, const std::vector<std::array<int, 2>>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(nv));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> used(nv, 0);
  for (auto [a, b] : edges) {
    used[a] = used[b] = 1;
    parent[find(a)] = find(b);
  }
  int count = 0;
  for (int v = 0; v < nv; ++v)
    if (used[v] && find(v) == v) ++count;
  return count;
}

// GF(2) rank of the face-to-edge boundary matrix by column reduction. Edges are ranked
// in lower-star order of their vertices, which keeps the reduced columns short.
int face_edge_rank_gf2(const Complex& c, const std::vector<int>& vertex_rank) {
  const int ne = static_cast<int>(c.edges.size());
  std::vector<std::pair<int, int>> key(ne);
  for (int e = 0; e < ne; ++e) {
    int ra = vertex_rank[c.edges[e][0]], rb = vertex_rank[c.edges[e][1]];
    key[e] = {std::max(ra, rb), std::min(ra, rb)};
  }
  std::vector<int> order(ne);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
  std::vector<int> edge_pos(ne);
  for (int i = 0; i < ne; ++i) edge_pos[order[i]] = i;

  const int nf = static_cast<int>(c.faces.size());
  std::vector<std::vector<int>> cols(nf);
  std::vector<int> face_order(nf);
  for (int f = 0; f < nf; ++f) {
    auto& col = cols[f];
    for (int e : c.face_edges[f]) col.push_back(edge_pos[e]);
    std::sort(col.begin(), col.end());
  }
  std::iota(face_order.begin(), face_order.end(), 0);
  std::sort(face_order.begin(), face_order.end(), [&](int a, int b) { return cols[a].back() < cols[b].back(); });

  std::vector<int> pivot_owner(ne, -1);
  int rank = 0;
  std::vector<int> tmp;
  for (int f : face_order) {
    auto& col = cols[f];
    while (!col.empty()) {
      const int low = col.back();
      const int owner = pivot_owner[low];
      if (owner < 0) {
        pivot_owner[low] = f;
        ++rank;
        break;
      }
      // symmetric difference of sorted index lists
      const auto& other = cols[owner];
      tmp.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(tmp));
      col.swap(tmp);
    }
  }
  return rank;
}

int first_betti(const Complex& c, const std::vector<Point>& coords) {
  std::vector<int> idx(static_cast<std::size_t>(c.nv));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return coords[a] < coords[b]; });
  std::vector<int> rank_of(static_cast<std::size_t>(c.nv));
  for (int i = 0; i < c.nv; ++i) rank_of[idx[i]] = i;
  const int b0 = connected_components(c.nv, c.edges);
  const int rank_grad = c.nv - b0;
  const int rank_curl = face_edge_rank_gf2(c, rank_of);
  return static_cast<int>(c.edges.size()) - rank_grad - rank_curl;
}

}  // namespace

CohomologyCheck cohomology_check(const Mesh& mesh) {
  CohomologyCheck out;
  const Complex full = build_complex(mesh.num_vertices(), mesh.sorted_tets());
  out.b1_rank = first_betti(full, mesh.vertices());
  const int chi = mesh.num_vertices() - mesh.num_edges() + mesh.num_faces() - mesh.num_tets();
  out.b1_euler = 1 + (mesh.num_boundary_components() - 1) - chi;

  // Cut-open complex: plus-side copies of cut vertices become new vertices.
  std::vector<Point> coords = mesh.vertices();
  std::vector<int> copy_of(static_cast<std::size_t>(mesh.num_vertices()), -1);
  std::vector<std::array<int, 4>> tets;
  tets.reserve(static_cast<std::size_t>(mesh.num_tets()));
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto s = mesh.sorted_tet(t);
    for (int k = 0; k < 4; ++k) {
      if (mesh.plus_cut(t, k) < 0) continue;
      int& c = copy_of[s[k]];
      if (c < 0) {
        c = static_cast<int>(coords.size());
        coords.push_back(coords[s[k]]);
      }
      s[k] = c;
    }
    tets.push_back(s);
  }
  const Complex open = build_complex(static_cast<int>(coords.size()), tets);
  // Copies share coordinates with their originals; break ties by id via stable ordering.
  for (std::size_t v = mesh.num_vertices(); v < coords.size(); ++v) coords[v][0] += 1e-9 * (1.0 + std::abs(coords[v][0]));
  out.b1_cut_open = first_betti(open, coords);
  return out;
}

std::pair<int, int> betti_counts(const Mesh& mesh, bool verify) {
  const auto counts = mesh.betti();
  if (verify) {
    const auto c = cohomology_check(mesh);
    if (c.b1_rank != c.b1_euler)
      throw CohomologyMismatch("rank and Euler characteristic disagree on the first Betti number");
    if (c.b1_rank != counts.second)
      throw CohomologyMismatch("first Betti number " + std::to_string(c.b1_rank) + " does not match " +
                               std::to_string(counts.second) + " cut surface(s)");
    if (c.b1_cut_open != 0) throw CohomologyMismatch("cut surfaces do not make the domain simply connected");
  }
  return counts;
}

}  // namespace divcurl
