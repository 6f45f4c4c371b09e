#include "divcurl/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "divcurl/errors.hpp"

namespace divcurl {

namespace {

// Hexahedron given by bottom quad (b0..b3, cyclic) and top quad (t0..t3) above it.
// Adds a centre vertex and splits every quad face along the diagonal through its
// smallest vertex id, which keeps neighbouring hexes conforming.
void split_hex(std::vector<Point>& pts, std::vector<std::array<int, 4>>& tets, const std::array<int, 4>& b,
               const std::array<int, 4>& t) {
  Point c{0, 0, 0};
  for (int k = 0; k < 4; ++k) c += 0.125 * (pts[b[k]] + pts[t[k]]);
  const int centre = static_cast<int>(pts.size());
  pts.push_back(c);
  const std::array<std::array<int, 4>, 6> quads{{{b[0], b[1], b[2], b[3]},
                                                 {t[0], t[1], t[2], t[3]},
                                                 {b[0], b[1], t[1], t[0]},
                                                 {b[1], b[2], t[2], t[1]},
                                                 {b[2], b[3], t[3], t[2]},
                                                 {b[3], b[0], t[0], t[3]}}};
  for (const auto& q : quads) {
    const int m = static_cast<int>(std::min_element(q.begin(), q.end()) - q.begin());
    const int a = q[m], p = q[(m + 1) % 4], r = q[(m + 2) % 4], s = q[(m + 3) % 4];
    tets.push_back({a, p, r, centre});
    tets.push_back({a, r, s, centre});
  }
}

void split_quad(const std::array<int, 4>& q, std::vector<std::array<int, 3>>& out) {
  const int m = static_cast<int>(std::min_element(q.begin(), q.end()) - q.begin());
  const int a = q[m], p = q[(m + 1) % 4], r = q[(m + 2) % 4], s = q[(m + 3) % 4];
  out.push_back({a, p, r});
  out.push_back({a, r, s});
}

}  // namespace

Mesh generate_cube(int n) {
  if (n < 1) throw InputError("cube: n must be >= 1");
  MeshInput in;
  const int m = n + 1;
  auto id = [m](int i, int j, int k) { return (k * m + j) * m + i; };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        in.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(k) / n});
  const std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          std::array<int, 4> tet;
          tet[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            tet[s + 1] = id(c[0], c[1], c[2]);
          }
          in.tets.push_back(tet);
        }
  return Mesh(std::move(in));
}

Mesh generate_spherical_shell(double r_in, double r_out, int level) {
  if (!(r_in > 0.0) || !(r_in < r_out)) throw InputError("shell: require 0 < r_in < r_out");
  if (level < 0) throw InputError("shell: level must be >= 0");
  const int a = 2 * level + 4;
  const int nr = level + 3;

  // Lattice points on the surface of the cube {0..a}^3.
  std::map<std::array<int, 3>, int> surf;
  std::vector<std::array<int, 3>> lattice;
  for (int k = 0; k <= a; ++k)
    for (int j = 0; j <= a; ++j)
      for (int i = 0; i <= a; ++i)
        if (i == 0 || j == 0 || k == 0 || i == a || j == a || k == a) {
          surf[{i, j, k}] = static_cast<int>(lattice.size());
          lattice.push_back({i, j, k});
        }
  const int ns = static_cast<int>(lattice.size());
  MeshInput in;
  in.vertices.resize(static_cast<std::size_t>(ns) * (nr + 1));
  for (int s = 0; s < ns; ++s) {
    Vec3 d;
    for (int c = 0; c < 3; ++c) d[c] = std::tan(0.25 * std::numbers::pi * (2.0 * lattice[s][c] / a - 1.0));
    d = (1.0 / norm(d)) * d;
    for (int l = 0; l <= nr; ++l) {
      // geometric grading keeps the relative radial step constant
      const double r = r_in * std::pow(r_out / r_in, static_cast<double>(l) / nr);
      in.vertices[static_cast<std::size_t>(s) * (nr + 1) + l] = r * d;
    }
  }
  auto vid = [nr](int s, int l) { return s * (nr + 1) + l; };

  // Surface quads of the six patches, each as a cyclic lattice loop.
  std::vector<std::array<int, 4>> quads;
  for (int axis = 0; axis < 3; ++axis)
    for (int side : {0, a}) {
      const int u = (axis + 1) % 3, v = (axis + 2) % 3;
      for (int p = 0; p < a; ++p)
        for (int q = 0; q < a; ++q) {
          std::array<int, 4> loop;
          const std::array<std::array<int, 2>, 4> corners{{{p, q}, {p + 1, q}, {p + 1, q + 1}, {p, q + 1}}};
          for (int c = 0; c < 4; ++c) {
            std::array<int, 3> x;
            x[axis] = side;
            x[u] = corners[c][0];
            x[v] = corners[c][1];
            loop[c] = surf.at(x);
          }
          quads.push_back(loop);
        }
    }
  for (const auto& q : quads)
    for (int l = 0; l < nr; ++l) {
      std::array<int, 4> bottom, top;
      for (int c = 0; c < 4; ++c) {
        bottom[c] = vid(q[c], l);
        top[c] = vid(q[c], l + 1);
      }
      split_hex(in.vertices, in.tets, bottom, top);
    }
  return Mesh(std::move(in));
}

Mesh generate_solid_torus(double major, double minor, int level, bool with_cut) {
  if (!(minor > 0.0) || !(minor < major)) throw InputError("torus: require 0 < r < R");
  if (level < 0) throw InputError("torus: level must be >= 0");
  const int m = 2 * (level + 1);
  const int nphi = 16 * (level + 1);
  const int per = (m + 1) * (m + 1);
  MeshInput in;
  in.vertices.resize(static_cast<std::size_t>(per) * nphi);
  for (int k = 0; k < nphi; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / nphi;
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= m; ++i) {
        const double x = 2.0 * i / m - 1.0;
        const double y = 2.0 * j / m - 1.0;
        // square-to-disk map
        const double sx = x * std::sqrt(1.0 - 0.5 * y * y);
        const double sy = y * std::sqrt(1.0 - 0.5 * x * x);
        const double rho = major + minor * sx;
        in.vertices[static_cast<std::size_t>(k) * per + j * (m + 1) + i] = {rho * std::cos(phi), rho * std::sin(phi),
                                                                            minor * sy};
      }
  }
  auto vid = [&](int k, int i, int j) { return (k % nphi) * per + j * (m + 1) + i; };
  for (int k = 0; k < nphi; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        const std::array<int, 4> b{vid(k, i, j), vid(k, i + 1, j), vid(k, i + 1, j + 1), vid(k, i, j + 1)};
        const std::array<int, 4> t{vid(k + 1, i, j), vid(k + 1, i + 1, j), vid(k + 1, i + 1, j + 1),
                                   vid(k + 1, i, j + 1)};
        split_hex(in.vertices, in.tets, b, t);
      }
  if (with_cut) {
    CutInput cut;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) split_quad({vid(0, i, j), vid(0, i + 1, j), vid(0, i + 1, j + 1), vid(0, i, j + 1)}, cut.triangles);
    // orient every triangle with normal +e_phi = +y at angle 0
    for (auto& tri : cut.triangles) {
      const Vec3 n = cross(in.vertices[tri[1]] - in.vertices[tri[0]], in.vertices[tri[2]] - in.vertices[tri[0]]);
      if (n[1] < 0.0) std::swap(tri[1], tri[2]);
    }
    in.cuts.push_back(std::move(cut));
  }
  return Mesh(std::move(in));
}

Mesh generate_unit_tet() {
  MeshInput in;
  in.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  in.tets = {{0, 1, 2, 3}};
  return Mesh(std::move(in));
}

Mesh generate_primitive(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::vector<std::string> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(item);
  }
  auto num = [&](std::size_t i, double fallback) {
    if (i >= args.size()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(args[i], &used);
      if (used != args[i].size()) throw InputError("bad number '" + args[i] + "' in mesh spec");
      return v;
    } catch (const std::logic_error&) {
      throw InputError("bad number '" + args[i] + "' in mesh spec");
    }
  };
  if (kind == "cube") {
    if (args.size() > 1) throw InputError("cube spec takes one argument");
    return generate_cube(static_cast<int>(num(0, 4)));
  }
  if (kind == "tet") return generate_unit_tet();
  if (kind == "shell") {
    if (args.size() > 3) throw InputError("shell spec takes rin,rout,k");
    return generate_spherical_shell(num(0, 1.0), num(1, 2.0), static_cast<int>(num(2, 1)));
  }
  if (kind == "torus") {
    bool cut = args.empty();
    if (args.size() == 4) {
      if (args[3] != "cut") throw InputError("torus spec: fourth argument must be 'cut'");
      cut = true;
    }
    if (args.size() > 4 || (args.size() > 0 && args.size() < 3))
      throw InputError("torus spec takes R,r,k[,cut]");
    return generate_solid_torus(num(0, 2.0), num(1, 0.5), static_cast<int>(num(2, 1)), cut);
  }
  throw InputError("unknown mesh primitive '" + kind + "'");
}

}  // namespace divcurl
