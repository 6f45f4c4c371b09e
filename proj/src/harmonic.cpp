#include "divcurl/harmonic.hpp"

#include <cmath>

#include "divcurl/errors.hpp"

namespace divcurl {

JumpSpace::JumpSpace(const Mesh& mesh) : mesh_(&mesh) {
  const int nv = mesh.num_vertices();
  std::vector<Triplet> t;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    t.push_back({e, mesh.edges()[e][0], -1.0});
    t.push_back({e, mesh.edges()[e][1], 1.0});
  }
  for (int j = 0; j < mesh.num_cuts(); ++j) {
    const auto& z = mesh.cuts()[j].edge_jump;
    for (int e = 0; e < mesh.num_edges(); ++e)
      if (z[e] != 0) t.push_back({e, nv + j, -static_cast<double>(z[e])});
  }
  gradient_ = SparseMatrix::from_triplets(mesh.num_edges(), dimension(), std::move(t));
}

SparseMatrix JumpSpace::stiffness(const CoefficientField& coeff, Weighting weighting) const {
  const SparseMatrix m = mass_matrix(*mesh_, FormDegree::NED, coeff, weighting);
  return gradient_.transpose() * (m * gradient_);
}

DofVector JumpSpace::gradient_field(std::span<const double> coords) const {
  if (static_cast<int>(coords.size()) != dimension()) throw DimensionError("JumpSpace coordinate length mismatch");
  return DofVector(*mesh_, FormDegree::NED, gradient_ * coords);
}

double JumpSpace::local_value(std::span<const double> coords, int t, int k) const {
  const int v = mesh_->sorted_tet(t)[k];
  const int j = mesh_->plus_cut(t, k);
  return coords[v] - (j >= 0 ? coords[jump_index(j)] : 0.0);
}

DofVector JumpSpace::jump_cochain(int j) const {
  DofVector z(*mesh_, FormDegree::NED);
  const auto& jump = mesh_->cuts().at(j).edge_jump;
  for (int e = 0; e < mesh_->num_edges(); ++e) z.values[e] = jump[e];
  return z;
}

double cut_flux(const DofVector& v, int j) {
  if (v.degree != FormDegree::RT) throw DimensionError("cut_flux needs an RT vector");
  if (j < 1 || j > v.mesh->num_cuts()) throw InputError("bad cut id " + std::to_string(j));
  const auto& cut = v.mesh->cuts()[j - 1];
  double s = 0.0;
  for (std::size_t k = 0; k < cut.faces.size(); ++k) s += cut.face_sign[k] * v.values[cut.faces[k]];
  return s;
}

double boundary_flux(const DofVector& v, int i) {
  if (v.degree != FormDegree::RT) throw DimensionError("boundary_flux needs an RT vector");
  const Mesh& mesh = *v.mesh;
  if (i < 0 || i >= mesh.num_boundary_components()) throw InputError("bad boundary component id " + std::to_string(i));
  double s = 0.0;
  for (int f : mesh.component_faces(i)) s += mesh.outward_sign(mesh.boundary_face_index(f)) * v.values[f];
  return s;
}

double cut_circulation(const BoundaryEdgeField& lam, int j) {
  const Mesh& mesh = *lam.mesh;
  if (j < 1 || j > mesh.num_cuts()) throw InputError("bad cut id " + std::to_string(j));
  const auto& cut = mesh.cuts()[j - 1];
  double s = 0.0;
  for (std::size_t k = 0; k < cut.curve_edges.size(); ++k)
    s += cut.curve_sign[k] * lam.values[mesh.boundary_edge_index(cut.curve_edges[k])];
  return s;
}

SparseMatrix theta0_embedding(const Mesh& mesh) {
  const int ni = static_cast<int>(mesh.interior_vertices().size());
  std::vector<Triplet> t;
  for (int k = 0; k < ni; ++k) t.push_back({mesh.interior_vertices()[k], k, 1.0});
  for (int v : mesh.boundary_vertices()) {
    const int c = mesh.vertex_component(v);
    if (c >= 1) t.push_back({v, ni + c - 1, 1.0});
  }
  return SparseMatrix::from_triplets(mesh.num_vertices(), ni + mesh.num_boundary_components() - 1, std::move(t));
}

namespace {

void require_converged(const SolveStats& s, const std::string& stage) {
  if (!s.converged)
    throw SolverError(stage, "no convergence (relative residual " + std::to_string(s.relative_residual) + ")", s.iterations,
                      s.relative_residual);
}

}  // namespace

HarmonicBasis magnetic_basis(const Mesh& mesh, const CoefficientField& sigma, const SolverConfig& cfg) {
  HarmonicBasis basis;
  basis.kind = HarmonicKind::magnetic;
  basis.coefficient_kind = sigma.kind();
  basis.bounds = sigma.bounds(mesh);
  const int n2 = mesh.num_cuts();
  if (n2 == 0) return basis;

  // (a) scalar potential on the cut-open mesh
  const JumpSpace space(mesh);
  const SparseMatrix k = space.stiffness(sigma, Weighting::inverse);
  const int nv = mesh.num_vertices();
  Vector ones(static_cast<std::size_t>(space.dimension()), 0.0);
  for (int v = 0; v < nv; ++v) ones[v] = 1.0 / std::sqrt(static_cast<double>(nv));
  const std::vector<Vector> nullspace{ones};

  // (b) RT representative: sigma-energy minimizer over interior faces with zero cell
  // divergence and prescribed cut fluxes.
  const auto& interior = mesh.interior_faces();
  const SparseMatrix m2 = mass_matrix(mesh, FormDegree::RT, sigma, Weighting::coefficient);
  const SparseMatrix a = m2.select(interior, interior);
  const SparseMatrix d = incidence(mesh, Incidence::div).select_cols(interior);
  std::vector<int> face_pos(static_cast<std::size_t>(mesh.num_faces()), -1);
  for (std::size_t i = 0; i < interior.size(); ++i) face_pos[interior[i]] = static_cast<int>(i);
  std::vector<Triplet> flux_rows;
  for (int j = 0; j < n2; ++j) {
    const auto& cut = mesh.cuts()[j];
    for (std::size_t q = 0; q < cut.faces.size(); ++q)
      flux_rows.push_back({j, face_pos[cut.faces[q]], static_cast<double>(cut.face_sign[q])});
  }
  const SparseMatrix f = SparseMatrix::from_triplets(n2, static_cast<int>(interior.size()), std::move(flux_rows));
  const SparseMatrix constraint = vstack(d, f);
  const SparseMatrix pmix = mixed_mass(mesh);
  const SparseMatrix m1_inv = mass_matrix(mesh, FormDegree::NED, sigma, Weighting::inverse);

  for (int j = 0; j < n2; ++j) {
    Vector rhs(static_cast<std::size_t>(space.dimension()), 0.0);
    rhs[space.jump_index(j)] = 1.0;
    SolverConfig c = cfg;
    c.throw_on_failure = false;
    auto sol = cg_solve(k, rhs, c, nullspace);
    require_converged(sol.stats, "magnetic basis: jump problem");
    basis.stats.push_back(sol.stats);
    const Vector kq = k * sol.x;
    std::vector<double> jg(static_cast<std::size_t>(n2));
    for (int l = 0; l < n2; ++l) jg[l] = kq[space.jump_index(l)];
    basis.jump_gram.push_back(jg);
    DofVector g = space.gradient_field(sol.x);

    Vector zero_f(interior.size(), 0.0);
    Vector g_rhs(static_cast<std::size_t>(constraint.rows()), 0.0);
    g_rhs[mesh.num_tets() + j] = 1.0;
    auto sad = minres_saddle(a, constraint, zero_f, g_rhs, c);
    require_converged(sad.stats, "magnetic basis: flux representative");
    basis.stats.push_back(sad.stats);
    DofVector u(mesh, FormDegree::RT);
    for (std::size_t i = 0; i < interior.size(); ++i) u.values[interior[i]] = sad.x[i];

    // || u - sigma^-1 g ||_sigma^2 = u.M2s.u - 2 u.P.g + g.M1inv.g
    const double uu = vec::dot(u.values, m2 * u.values);
    const double ug = vec::dot(u.values, pmix * g.values);
    const double gg = vec::dot(g.values, m1_inv * g.values);
    const double gap = std::sqrt(std::max(0.0, uu - 2.0 * ug + gg)) / std::max(std::sqrt(uu), 1e-300);
    basis.gradient_relation = std::max(basis.gradient_relation, gap);

    basis.fields.push_back(std::move(u));
    basis.gradients.push_back(std::move(g));
  }
  for (int j = 0; j < n2; ++j) {
    std::vector<double> row(static_cast<std::size_t>(n2));
    for (int l = 0; l < n2; ++l) row[l] = cut_flux(basis.fields[j], l + 1);
    basis.normalization.push_back(row);
  }
  return basis;
}

HarmonicBasis electric_basis(const Mesh& mesh, const CoefficientField& epsilon, const SolverConfig& cfg) {
  HarmonicBasis basis;
  basis.kind = HarmonicKind::electric;
  basis.coefficient_kind = epsilon.kind();
  basis.bounds = epsilon.bounds(mesh);
  const int n1 = mesh.num_boundary_components() - 1;
  if (n1 == 0) return basis;

  const SparseMatrix emb = theta0_embedding(mesh);
  const SparseMatrix g = incidence(mesh, Incidence::grad);
  const SparseMatrix m1 = mass_matrix(mesh, FormDegree::NED, epsilon, Weighting::coefficient);
  const SparseMatrix k_full = g.transpose() * (m1 * g);
  const SparseMatrix k = emb.transpose() * (k_full * emb);
  const int ni = static_cast<int>(mesh.interior_vertices().size());

  // Indicator vectors of the boundary components, used as weak flux functionals.
  std::vector<Vector> indicator(static_cast<std::size_t>(n1) + 1, Vector(static_cast<std::size_t>(mesh.num_vertices()), 0.0));
  for (int v : mesh.boundary_vertices()) indicator[mesh.vertex_component(v)][v] = 1.0;

  for (int i = 0; i < n1; ++i) {
    Vector rhs(static_cast<std::size_t>(k.rows()), 0.0);
    rhs[ni + i] = 1.0;
    SolverConfig c = cfg;
    c.throw_on_failure = false;
    auto sol = cg_solve(k, rhs, c);
    require_converged(sol.stats, "electric basis: boundary-component problem");
    basis.stats.push_back(sol.stats);
    DofVector q(mesh, FormDegree::P1, emb * sol.x);
    DofVector field(mesh, FormDegree::NED, g * q.values);
    const Vector kq = k_full * q.values;
    std::vector<double> row(static_cast<std::size_t>(n1));
    for (int l = 0; l < n1; ++l) row[l] = vec::dot(indicator[l + 1], kq);
    basis.normalization.push_back(row);
    basis.outer_flux.push_back(vec::dot(indicator[0], kq));
    basis.gradients.push_back(field);
    basis.fields.push_back(std::move(field));
    basis.potentials.push_back(std::move(q));
  }
  return basis;
}

}  // namespace divcurl
