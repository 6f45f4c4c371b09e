#include "divcurl/whitney.hpp"

#include <algorithm>
#include <cmath>

#include "divcurl/errors.hpp"
#include "divcurl/quadrature.hpp"

namespace divcurl {

std::string to_string(FormDegree d) {
  switch (d) {
    case FormDegree::P1: return "P1";
    case FormDegree::NED: return "NED";
    case FormDegree::RT: return "RT";
    case FormDegree::P0: return "P0";
  }
  return "?";
}

int entity_count(const Mesh& mesh, FormDegree d) {
  switch (d) {
    case FormDegree::P1: return mesh.num_vertices();
    case FormDegree::NED: return mesh.num_edges();
    case FormDegree::RT: return mesh.num_faces();
    case FormDegree::P0: return mesh.num_tets();
  }
  return 0;
}

DofVector::DofVector(const Mesh& m, FormDegree d)
    : degree(d), values(static_cast<std::size_t>(entity_count(m, d)), 0.0), mesh(&m) {}

DofVector::DofVector(const Mesh& m, FormDegree d, Vector v) : degree(d), values(std::move(v)), mesh(&m) {
  if (static_cast<int>(values.size()) != entity_count(m, d))
    throw DimensionError("DofVector length does not match the " + to_string(d) + " entity count");
}

// ---------------------------------------------------------------------------
// coefficients

CoefficientField CoefficientField::identity() {
  CoefficientField c;
  c.identity_ = true;
  c.kind_ = "identity";
  return c;
}

CoefficientField CoefficientField::constant(const Mat3& a, std::string kind) {
  CoefficientField c;
  c.kind_ = std::move(kind);
  c.callback_ = [a](const Point&) { return a; };
  return c;
}

CoefficientField CoefficientField::per_cell(std::vector<Mat3> values, std::string kind) {
  CoefficientField c;
  c.kind_ = std::move(kind);
  c.cells_ = std::move(values);
  return c;
}

CoefficientField CoefficientField::analytic(Callback f, std::string kind, bool per_cell_constant) {
  CoefficientField c;
  c.kind_ = std::move(kind);
  c.callback_ = std::move(f);
  c.per_cell_constant_ = per_cell_constant;
  return c;
}

Mat3 CoefficientField::at(const Mesh& mesh, int cell, const Point& x) const {
  if (identity_) return identity3();
  if (!cells_.empty()) {
    if (static_cast<int>(cells_.size()) != mesh.num_tets()) throw CoefficientError("per-cell coefficient size mismatch");
    return cells_[cell];
  }
  if (per_cell_constant_) return callback_(mesh.tet_point(cell, {0.25, 0.25, 0.25, 0.25}));
  return callback_(x);
}

Mat3 CoefficientField::weighted(const Mesh& mesh, int cell, const Point& x, Weighting w) const {
  if (w == Weighting::identity || identity_) return identity3();
  const Mat3 a = at(mesh, cell, x);
  return w == Weighting::coefficient ? a : inverse_symmetric(a);
}

EllipticityBounds CoefficientField::bounds(const Mesh& mesh) const {
  if (identity_) return {1.0, 1.0};
  EllipticityBounds b{1e300, 0.0};
  const auto& rule = tet_rule_degree2();
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (const auto& q : rule.points) {
      const Mat3 a = at(mesh, t, mesh.tet_point(t, q));
      double scale = 0.0;
      for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::abs(v));
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          if (std::abs(a[i][j] - a[j][i]) > 1e-12 * scale) throw CoefficientError("coefficient is not symmetric");
      const auto ev = symmetric_eigenvalues(a);
      if (!(ev[0] > 0.0)) throw CoefficientError("coefficient is not positive definite (ellipticity violated)");
      b.m = std::min(b.m, ev[0]);
      b.M = std::max(b.M, ev[2]);
    }
  return b;
}

// ---------------------------------------------------------------------------
// incidence

SparseMatrix incidence(const Mesh& mesh, Incidence which) {
  std::vector<Triplet> t;
  switch (which) {
    case Incidence::grad:
      for (int e = 0; e < mesh.num_edges(); ++e) {
        t.push_back({e, mesh.edges()[e][0], -1.0});
        t.push_back({e, mesh.edges()[e][1], 1.0});
      }
      return SparseMatrix::from_triplets(mesh.num_edges(), mesh.num_vertices(), std::move(t));
    case Incidence::curl:
      for (int f = 0; f < mesh.num_faces(); ++f) {
        const auto& v = mesh.faces()[f];
        t.push_back({f, mesh.find_edge(v[0], v[1]), 1.0});
        t.push_back({f, mesh.find_edge(v[1], v[2]), 1.0});
        t.push_back({f, mesh.find_edge(v[0], v[2]), -1.0});
      }
      return SparseMatrix::from_triplets(mesh.num_faces(), mesh.num_edges(), std::move(t));
    case Incidence::div:
      for (int c = 0; c < mesh.num_tets(); ++c)
        for (int k = 0; k < 4; ++k) t.push_back({c, mesh.tet_faces(c)[k], static_cast<double>(rt_div_sign(mesh, c, k))});
      return SparseMatrix::from_triplets(mesh.num_tets(), mesh.num_faces(), std::move(t));
  }
  return {};
}

int rt_div_sign(const Mesh& mesh, int t, int k) { return (k % 2 == 0 ? 1 : -1) * mesh.tet_sign(t); }

// ---------------------------------------------------------------------------
// local bases

std::array<Vec3, 6> ned_basis(const Mesh& mesh, int t, const std::array<double, 4>& l) {
  const auto& g = mesh.grad_lambda(t);
  std::array<Vec3, 6> out;
  for (int k = 0; k < 6; ++k) {
    const int i = kLocalEdges[k][0], j = kLocalEdges[k][1];
    out[k] = l[i] * g[j] - l[j] * g[i];
  }
  return out;
}

std::array<Vec3, 6> ned_curls(const Mesh& mesh, int t) {
  const auto& g = mesh.grad_lambda(t);
  std::array<Vec3, 6> out;
  for (int k = 0; k < 6; ++k) out[k] = 2.0 * cross(g[kLocalEdges[k][0]], g[kLocalEdges[k][1]]);
  return out;
}

std::array<Vec3, 4> rt_basis(const Mesh& mesh, int t, const std::array<double, 4>& l) {
  const auto& g = mesh.grad_lambda(t);
  std::array<Vec3, 4> out;
  for (int k = 0; k < 4; ++k) {
    const int i = kLocalFaces[k][0], j = kLocalFaces[k][1], m = kLocalFaces[k][2];
    out[k] = 2.0 * (l[i] * cross(g[j], g[m]) + l[j] * cross(g[m], g[i]) + l[m] * cross(g[i], g[j]));
  }
  return out;
}

double evaluate_scalar(const DofVector& v, int t, const std::array<double, 4>& bary) {
  const Mesh& mesh = *v.mesh;
  if (v.degree == FormDegree::P0) return v.values[t];
  if (v.degree != FormDegree::P1) throw DimensionError("evaluate_scalar needs a P1 or P0 vector");
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += bary[k] * v.values[mesh.sorted_tet(t)[k]];
  return s;
}

Vec3 evaluate_vector(const DofVector& v, int t, const std::array<double, 4>& bary) {
  const Mesh& mesh = *v.mesh;
  Vec3 out{0, 0, 0};
  if (v.degree == FormDegree::NED) {
    const auto b = ned_basis(mesh, t, bary);
    for (int k = 0; k < 6; ++k) out += v.values[mesh.tet_edges(t)[k]] * b[k];
  } else if (v.degree == FormDegree::RT) {
    const auto b = rt_basis(mesh, t, bary);
    for (int k = 0; k < 4; ++k) out += v.values[mesh.tet_faces(t)[k]] * b[k];
  } else {
    throw DimensionError("evaluate_vector needs a NED or RT vector");
  }
  return out;
}

// ---------------------------------------------------------------------------
// mass matrices

SparseMatrix mass_matrix(const Mesh& mesh, FormDegree degree, const CoefficientField& coeff, Weighting weighting) {
  std::vector<Triplet> trip;
  const auto& rule = tet_rule_degree2();
  switch (degree) {
    case FormDegree::P0: {
      Vector d(static_cast<std::size_t>(mesh.num_tets()));
      for (int t = 0; t < mesh.num_tets(); ++t) d[t] = mesh.volume(t);
      return SparseMatrix::diagonal(d);
    }
    case FormDegree::P1:
      for (int t = 0; t < mesh.num_tets(); ++t) {
        const auto& s = mesh.sorted_tet(t);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) trip.push_back({s[i], s[j], mesh.volume(t) * (i == j ? 0.1 : 0.05)});
      }
      return SparseMatrix::from_triplets(mesh.num_vertices(), mesh.num_vertices(), std::move(trip));
    case FormDegree::NED:
    case FormDegree::RT: {
      const bool ned = degree == FormDegree::NED;
      const int nloc = ned ? 6 : 4;
      trip.reserve(static_cast<std::size_t>(mesh.num_tets()) * nloc * nloc);
      for (int t = 0; t < mesh.num_tets(); ++t) {
        double local[6][6] = {};
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          const auto& l = rule.points[q];
          const Mat3 a = coeff.weighted(mesh, t, mesh.tet_point(t, l), weighting);
          std::array<Vec3, 6> b{};
          if (ned) {
            b = ned_basis(mesh, t, l);
          } else {
            const auto r = rt_basis(mesh, t, l);
            std::copy(r.begin(), r.end(), b.begin());
          }
          const double w = rule.weights[q] * mesh.volume(t);
          for (int i = 0; i < nloc; ++i) {
            const Vec3 ab = a * b[i];
            for (int j = 0; j < nloc; ++j) local[i][j] += w * dot(ab, b[j]);
          }
        }
        for (int i = 0; i < nloc; ++i) {
          const int gi = ned ? mesh.tet_edges(t)[i] : mesh.tet_faces(t)[i];
          for (int j = 0; j < nloc; ++j) {
            const int gj = ned ? mesh.tet_edges(t)[j] : mesh.tet_faces(t)[j];
            // symmetrize the local block against rounding in the weighted product
            trip.push_back({gi, gj, 0.5 * (local[i][j] + local[j][i])});
          }
        }
      }
      const int n = ned ? mesh.num_edges() : mesh.num_faces();
      return SparseMatrix::from_triplets(n, n, std::move(trip));
    }
  }
  return {};
}

SparseMatrix stiffness_matrix(const Mesh& mesh, const CoefficientField& coeff, Weighting weighting) {
  const SparseMatrix g = incidence(mesh, Incidence::grad);
  return g.transpose() * (mass_matrix(mesh, FormDegree::NED, coeff, weighting) * g);
}

SparseMatrix mixed_mass(const Mesh& mesh, const CoefficientField& coeff, Weighting weighting) {
  std::vector<Triplet> trip;
  const auto& rule = tet_rule_degree2();
  const bool plain = coeff.is_identity() || weighting == Weighting::identity;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    double local[4][6] = {};
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const auto w = rt_basis(mesh, t, l);
      auto p = ned_basis(mesh, t, l);
      if (!plain) {
        const Mat3 a = coeff.weighted(mesh, t, mesh.tet_point(t, l), weighting);
        for (auto& v : p) v = a * v;
      }
      const double wt = rule.weights[q] * mesh.volume(t);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) local[i][j] += wt * dot(w[i], p[j]);
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 6; ++j) trip.push_back({mesh.tet_faces(t)[i], mesh.tet_edges(t)[j], local[i][j]});
  }
  return SparseMatrix::from_triplets(mesh.num_faces(), mesh.num_edges(), std::move(trip));
}

SparseMatrix p1_p0_mass(const Mesh& mesh) {
  std::vector<Triplet> trip;
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (int v : mesh.sorted_tet(t)) trip.push_back({v, t, 0.25 * mesh.volume(t)});
  return SparseMatrix::from_triplets(mesh.num_vertices(), mesh.num_tets(), std::move(trip));
}

// ---------------------------------------------------------------------------
// interpolation and norms

DofVector interpolate(const Mesh& mesh, FormDegree degree, const ScalarField& field) {
  DofVector out(mesh, degree);
  if (degree == FormDegree::P1) {
    for (int v = 0; v < mesh.num_vertices(); ++v) out.values[v] = field(mesh.vertex(v));
  } else if (degree == FormDegree::P0) {
    const auto& rule = tet_rule_degree5();
    for (int t = 0; t < mesh.num_tets(); ++t) {
      double s = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * field(mesh.tet_point(t, rule.points[q]));
      out.values[t] = s;
    }
  } else {
    throw DimensionError("scalar field interpolates into P1 or P0 only");
  }
  return out;
}

DofVector interpolate(const Mesh& mesh, FormDegree degree, const VectorField& field) {
  DofVector out(mesh, degree);
  if (degree == FormDegree::NED) {
    const auto& rule = line_rule_degree5();
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const Point& a = mesh.vertex(mesh.edges()[e][0]);
      const Vec3 d = mesh.vertex(mesh.edges()[e][1]) - a;
      double s = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * dot(field(a + rule.points[q] * d), d);
      out.values[e] = s;
    }
  } else if (degree == FormDegree::RT) {
    const auto& rule = triangle_rule_degree4();
    for (int f = 0; f < mesh.num_faces(); ++f) {
      const auto& v = mesh.faces()[f];
      const Vec3 half_normal = 0.5 * mesh.face_area_normal(f);
      double s = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& b = rule.points[q];
        const Point x = b[0] * mesh.vertex(v[0]) + b[1] * mesh.vertex(v[1]) + b[2] * mesh.vertex(v[2]);
        s += rule.weights[q] * dot(field(x), half_normal);
      }
      out.values[f] = s;
    }
  } else {
    throw DimensionError("vector field interpolates into NED or RT only");
  }
  return out;
}

double l2_norm(const DofVector& v, const CoefficientField* weight, Weighting w) {
  const Mesh& mesh = *v.mesh;
  const auto& rule = tet_rule_degree5();
  const bool scalar = v.degree == FormDegree::P1 || v.degree == FormDegree::P0;
  double s = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const double wt = rule.weights[q] * mesh.volume(t);
      if (scalar) {
        const double x = evaluate_scalar(v, t, l);
        s += wt * x * x;
      } else {
        const Vec3 x = evaluate_vector(v, t, l);
        const Vec3 ax = weight ? weight->weighted(mesh, t, mesh.tet_point(t, l), w) * x : x;
        s += wt * dot(x, ax);
      }
    }
  return std::sqrt(s);
}

double l2_error(const DofVector& v, const VectorField& exact) {
  const Mesh& mesh = *v.mesh;
  const auto& rule = tet_rule_degree5();
  double s = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const Vec3 d = evaluate_vector(v, t, l) - exact(mesh.tet_point(t, l));
      s += rule.weights[q] * mesh.volume(t) * dot(d, d);
    }
  return std::sqrt(s);
}

double l2_error(const DofVector& v, const ScalarField& exact) {
  const Mesh& mesh = *v.mesh;
  const auto& rule = tet_rule_degree5();
  double s = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const double d = evaluate_scalar(v, t, l) - exact(mesh.tet_point(t, l));
      s += rule.weights[q] * mesh.volume(t) * d * d;
    }
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, const VectorField& f) {
  const auto& rule = tet_rule_degree5();
  double s = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = f(mesh.tet_point(t, rule.points[q]));
      s += rule.weights[q] * mesh.volume(t) * dot(x, x);
    }
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, const ScalarField& f) {
  const auto& rule = tet_rule_degree5();
  double s = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double x = f(mesh.tet_point(t, rule.points[q]));
      s += rule.weights[q] * mesh.volume(t) * x * x;
    }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// boundary calculus

namespace {

struct SurfaceFrame {
  std::array<Point, 3> p;
  std::array<Vec3, 3> grad;  // tangential barycentric gradients
  std::array<int, 3> edges;  // local edges (0,1),(0,2),(1,2)
  Vec3 normal;               // unit outward
  double area;
};

SurfaceFrame surface_frame(const Mesh& mesh, int bf) {
  SurfaceFrame s;
  const int f = mesh.boundary_faces()[bf];
  const auto& v = mesh.faces()[f];
  for (int i = 0; i < 3; ++i) s.p[i] = mesh.vertex(v[i]);
  const Vec3 e1 = s.p[1] - s.p[0], e2 = s.p[2] - s.p[0];
  const double g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
  const double det = g11 * g22 - g12 * g12;
  s.grad[1] = (g22 / det) * e1 + (-g12 / det) * e2;
  s.grad[2] = (-g12 / det) * e1 + (g11 / det) * e2;
  s.grad[0] = -1.0 * (s.grad[1] + s.grad[2]);
  s.edges = {mesh.find_edge(v[0], v[1]), mesh.find_edge(v[0], v[2]), mesh.find_edge(v[1], v[2])};
  const Vec3 n = mesh.face_area_normal(f);
  s.area = 0.5 * norm(n);
  s.normal = (static_cast<double>(mesh.outward_sign(bf)) / norm(n)) * n;
  return s;
}

constexpr std::array<std::array<int, 2>, 3> kTriEdges{{{0, 1}, {0, 2}, {1, 2}}};

std::array<Vec3, 3> surface_whitney(const SurfaceFrame& s, const std::array<double, 3>& l) {
  std::array<Vec3, 3> out;
  for (int k = 0; k < 3; ++k) {
    const int i = kTriEdges[k][0], j = kTriEdges[k][1];
    out[k] = l[i] * s.grad[j] - l[j] * s.grad[i];
  }
  return out;
}

Vec3 tangential_at(const BoundaryEdgeField& lam, const SurfaceFrame& s, const std::array<double, 3>& l) {
  const auto w = surface_whitney(s, l);
  Vec3 u{0, 0, 0};
  for (int k = 0; k < 3; ++k) u += lam.values[lam.mesh->boundary_edge_index(s.edges[k])] * w[k];
  return u;
}

}  // namespace

BoundaryFaceField zero_boundary_face_field(const Mesh& mesh) {
  return {&mesh, Vector(mesh.boundary_faces().size(), 0.0)};
}

BoundaryEdgeField zero_boundary_edge_field(const Mesh& mesh) {
  return {&mesh, Vector(mesh.boundary_edges().size(), 0.0)};
}

BoundaryFaceField boundary_face_field(const Mesh& mesh, const ScalarField& g) {
  BoundaryFaceField out = zero_boundary_face_field(mesh);
  const auto& rule = triangle_rule_degree4();
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const auto& v = mesh.faces()[mesh.boundary_faces()[b]];
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      s += rule.weights[q] * g(l[0] * mesh.vertex(v[0]) + l[1] * mesh.vertex(v[1]) + l[2] * mesh.vertex(v[2]));
    }
    out.values[b] = s;
  }
  return out;
}

BoundaryEdgeField boundary_tangential_field(const Mesh& mesh, const VectorField& u) {
  BoundaryEdgeField out = zero_boundary_edge_field(mesh);
  const auto& rule = line_rule_degree5();
  for (std::size_t b = 0; b < mesh.boundary_edges().size(); ++b) {
    const auto& e = mesh.edges()[mesh.boundary_edges()[b]];
    const Point& a = mesh.vertex(e[0]);
    const Vec3 d = mesh.vertex(e[1]) - a;
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * dot(u(a + rule.points[q] * d), d);
    out.values[b] = s;
  }
  return out;
}

BoundaryFaceField trace_normal(const DofVector& v) {
  if (v.degree != FormDegree::RT) throw DimensionError("trace_normal needs an RT vector");
  const Mesh& mesh = *v.mesh;
  BoundaryFaceField out = zero_boundary_face_field(mesh);
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const int f = mesh.boundary_faces()[b];
    out.values[b] = mesh.outward_sign(static_cast<int>(b)) * v.values[f] / mesh.face_area(f);
  }
  return out;
}

BoundaryEdgeField trace_tangential(const DofVector& v) {
  if (v.degree != FormDegree::NED) throw DimensionError("trace_tangential needs a NED vector");
  const Mesh& mesh = *v.mesh;
  BoundaryEdgeField out = zero_boundary_edge_field(mesh);
  for (std::size_t b = 0; b < mesh.boundary_edges().size(); ++b) out.values[b] = v.values[mesh.boundary_edges()[b]];
  return out;
}

Vec3 outward_normal(const Mesh& mesh, int bf) { return surface_frame(mesh, bf).normal; }

Vec3 tangential_value(const BoundaryEdgeField& lam, int bf, const std::array<double, 3>& bary) {
  return tangential_at(lam, surface_frame(*lam.mesh, bf), bary);
}

Vector surface_divergence(const BoundaryEdgeField& lam) {
  const Mesh& mesh = *lam.mesh;
  Vector out(mesh.boundary_vertices().size(), 0.0);
  const std::array<double, 3> centroid{1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const auto s = surface_frame(mesh, static_cast<int>(b));
    const Vec3 big_lambda = cross(tangential_at(lam, s, centroid), s.normal);
    const auto& v = mesh.faces()[mesh.boundary_faces()[b]];
    for (int i = 0; i < 3; ++i) out[mesh.boundary_vertex_index(v[i])] -= s.area * dot(big_lambda, s.grad[i]);
  }
  return out;
}

Vector boundary_p1_functional(const BoundaryFaceField& g) {
  const Mesh& mesh = *g.mesh;
  Vector out(mesh.boundary_vertices().size(), 0.0);
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const int f = mesh.boundary_faces()[b];
    for (int v : mesh.faces()[f]) out[mesh.boundary_vertex_index(v)] += g.values[b] * mesh.face_area(f) / 3.0;
  }
  return out;
}

double boundary_integral(const BoundaryFaceField& g) {
  const Mesh& mesh = *g.mesh;
  double s = 0.0;
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) s += g.values[b] * mesh.face_area(mesh.boundary_faces()[b]);
  return s;
}

Vector tangential_load(const BoundaryEdgeField& lam) {
  const Mesh& mesh = *lam.mesh;
  Vector out(static_cast<std::size_t>(mesh.num_edges()), 0.0);
  const auto& rule = triangle_rule_degree2();
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const auto s = surface_frame(mesh, static_cast<int>(b));
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const Vec3 big_lambda = cross(tangential_at(lam, s, l), s.normal);
      const auto w = surface_whitney(s, l);
      for (int k = 0; k < 3; ++k) out[s.edges[k]] += rule.weights[q] * s.area * dot(big_lambda, w[k]);
    }
  }
  return out;
}

SparseMatrix boundary_edge_mass(const Mesh& mesh) {
  std::vector<Triplet> trip;
  const auto& rule = triangle_rule_degree2();
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const auto s = surface_frame(mesh, static_cast<int>(b));
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto w = surface_whitney(s, rule.points[q]);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          trip.push_back({mesh.boundary_edge_index(s.edges[i]), mesh.boundary_edge_index(s.edges[j]),
                          rule.weights[q] * s.area * dot(w[i], w[j])});
    }
  }
  const int n = static_cast<int>(mesh.boundary_edges().size());
  return SparseMatrix::from_triplets(n, n, std::move(trip));
}

double boundary_l2_norm(const BoundaryFaceField& g) {
  const Mesh& mesh = *g.mesh;
  double s = 0.0;
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b)
    s += g.values[b] * g.values[b] * mesh.face_area(mesh.boundary_faces()[b]);
  return std::sqrt(s);
}

double boundary_l2_norm(const BoundaryEdgeField& lam) {
  const SparseMatrix m = boundary_edge_mass(*lam.mesh);
  return std::sqrt(std::max(0.0, vec::dot(lam.values, m * lam.values)));
}

}  // namespace divcurl
