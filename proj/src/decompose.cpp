#include "divcurl/decompose.hpp"

#include <cmath>

#include "divcurl/compat.hpp"
#include "divcurl/errors.hpp"
#include "divcurl/potentials.hpp"

namespace divcurl {

namespace {

SolverConfig quiet(const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.throw_on_failure = false;
  return c;
}

double inner(const SparseMatrix& m, std::span<const double> a, std::span<const double> b) {
  return vec::dot(a, m * b);
}

double energy(const SparseMatrix& m, std::span<const double> a) { return std::sqrt(std::max(0.0, inner(m, a, a))); }

void fill_summary(DecompositionResult& r, const SparseMatrix& m, const DofVector& u) {
  const double uu = inner(m, u.values, u.values);
  const double un = std::sqrt(uu);
  Vector rest = u.values;
  vec::axpy(-1.0, r.h.values, rest);
  vec::axpy(-1.0, r.gradient.values, rest);
  vec::axpy(-1.0, r.rotational.values, rest);
  r.reconstruction = energy(m, rest) / (un + kResidualFloor);
  const double scale = uu + kResidualFloor;
  r.pairings["harmonic_gradient"] = std::abs(inner(m, r.h.values, r.gradient.values)) / scale;
  r.pairings["rotational_harmonic"] = std::abs(inner(m, r.rotational.values, r.h.values)) / scale;
  r.pairings["gradient_rotational"] = std::abs(inner(m, r.gradient.values, r.rotational.values)) / scale;
  r.norms["u"] = un;
  r.norms["h"] = energy(m, r.h.values);
  r.norms["gradient"] = energy(m, r.gradient.values);
  r.norms["rotational"] = energy(m, r.rotational.values);
}

}  // namespace

DecompositionResult hw_magnetic(const DofVector& u, const CoefficientField& sigma, const Mesh& mesh,
                                const SolverConfig& cfg, const HarmonicBasis* basis) {
  if (u.degree != FormDegree::RT || u.mesh != &mesh) throw InputError("hw_magnetic needs an RT vector on the mesh");
  cfg.validate();
  DecompositionResult r;
  r.kind = DecompositionKind::magnetic;
  HarmonicBasis own;
  if (basis == nullptr) {
    own = magnetic_basis(mesh, sigma, cfg);
    basis = &own;
  }
  const SparseMatrix m2s = mass_matrix(mesh, FormDegree::RT, sigma);

  // (1) sigma-orthogonal split u = z + gradient, z divergence-free with zero normal trace
  const auto& faces = mesh.interior_faces();
  std::vector<int> cells;
  for (int t = 1; t < mesh.num_tets(); ++t) cells.push_back(t);
  const Vector mu = m2s * u.values;
  Vector f(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) f[i] = mu[faces[i]];
  DofVector z(mesh, FormDegree::RT);
  if (vec::norm(f) > 0.0) {
    const Vector g(cells.size(), 0.0);
    auto sad = minres_saddle(m2s.select(faces, faces), incidence(mesh, Incidence::div).select(cells, faces), f, g,
                             quiet(cfg));
    detail::require_converged(sad.stats, "hw_magnetic: divergence-free projection");
    r.stats.push_back(sad.stats);
    for (std::size_t i = 0; i < faces.size(); ++i) z.values[faces[i]] = sad.x[i];
  }
  r.gradient = DofVector(mesh, FormDegree::RT, vec::add(u.values, z.values, -1.0));

  // (2) harmonic part from the cut fluxes
  r.h = DofVector(mesh, FormDegree::RT);
  for (int j = 0; j < basis->dimension(); ++j) {
    const double c = cut_flux(z, j + 1);
    r.harmonic_coefficients.push_back(c);
    vec::axpy(c, basis->fields[j].values, r.h.values);
  }

  // (3) w with zero tangential trace and curl w = z - h
  const Vector target = vec::add(z.values, r.h.values, -1.0);
  const Vector zero(static_cast<std::size_t>(mesh.num_edges()), 0.0);
  auto cp = curl_potential(mesh, target, mesh.interior_edges(), zero, tangential_gauge(mesh), cfg);
  r.stats.insert(r.stats.end(), cp.stats.begin(), cp.stats.end());
  r.w = DofVector(mesh, FormDegree::NED, std::move(cp.x));
  r.rotational = DofVector(mesh, FormDegree::RT, incidence(mesh, Incidence::curl) * r.w.values);

  // (4) chi in P1: int sigma^-1 grad chi . grad mu = int u . grad mu
  const SparseMatrix gm = incidence(mesh, Incidence::grad);
  const SparseMatrix x = mixed_mass(mesh);
  const Vector rhs = gm.transpose_times(x.transpose_times(u.values));
  const int nv = mesh.num_vertices();
  const std::vector<Vector> ns{Vector(static_cast<std::size_t>(nv), 1.0 / std::sqrt(static_cast<double>(nv)))};
  Vector chi(static_cast<std::size_t>(nv), 0.0);
  Vector rp = rhs;
  vec::axpy(-vec::dot(rp, ns[0]), ns[0], rp);
  if (vec::norm(rp) > 0.0) {
    auto sol = cg_solve(stiffness_matrix(mesh, sigma, Weighting::inverse), rhs, quiet(cfg), ns);
    detail::require_converged(sol.stats, "hw_magnetic: Neumann problem");
    r.stats.push_back(sol.stats);
    chi = std::move(sol.x);
  }
  r.chi = DofVector(mesh, FormDegree::P1, std::move(chi));

  fill_summary(r, m2s, u);
  // || gradient - sigma^-1 grad chi ||_sigma relative to the gradient component
  const Vector gchi = gm * r.chi.values;
  const double gg = inner(m2s, r.gradient.values, r.gradient.values);
  const double cross_term = vec::dot(r.gradient.values, x * gchi);
  const double cc = inner(mass_matrix(mesh, FormDegree::NED, sigma, Weighting::inverse), gchi, gchi);
  r.certificates["gradient_consistency"] =
      std::sqrt(std::max(0.0, gg - 2.0 * cross_term + cc)) / (std::sqrt(gg) + kResidualFloor);
  r.certificates["curl_potential_residual"] =
      energy(mass_matrix(mesh, FormDegree::RT), vec::add(r.rotational.values, target, -1.0)) /
      (energy(mass_matrix(mesh, FormDegree::RT), target) + r.norms["u"] + kResidualFloor);
  return r;
}

DecompositionResult hw_electric(const DofVector& u, const CoefficientField& epsilon, const Mesh& mesh,
                                const SolverConfig& cfg, const HarmonicBasis* basis) {
  if (u.degree != FormDegree::NED || u.mesh != &mesh) throw InputError("hw_electric needs a NED vector on the mesh");
  cfg.validate();
  DecompositionResult r;
  r.kind = DecompositionKind::electric;
  HarmonicBasis own;
  if (basis == nullptr) {
    own = electric_basis(mesh, epsilon, cfg);
    basis = &own;
  }
  const SparseMatrix m1e = mass_matrix(mesh, FormDegree::NED, epsilon);
  const SparseMatrix gm = incidence(mesh, Incidence::grad);

  // (1) chi in P1 with zero trace: int eps grad chi . grad mu = int eps u . grad mu
  const auto& inner_v = mesh.interior_vertices();
  const Vector gu = gm.transpose_times(m1e * u.values);
  Vector rhs(inner_v.size());
  for (std::size_t i = 0; i < inner_v.size(); ++i) rhs[i] = gu[inner_v[i]];
  Vector chi(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  if (!inner_v.empty() && vec::norm(rhs) > 0.0) {
    auto sol = cg_solve(stiffness_matrix(mesh, epsilon).select(inner_v, inner_v), rhs, quiet(cfg));
    detail::require_converged(sol.stats, "hw_electric: Dirichlet problem");
    r.stats.push_back(sol.stats);
    for (std::size_t i = 0; i < inner_v.size(); ++i) chi[inner_v[i]] = sol.x[i];
  }
  r.chi = DofVector(mesh, FormDegree::P1, std::move(chi));
  r.gradient = DofVector(mesh, FormDegree::NED, gm * r.chi.values);
  const Vector y = vec::add(u.values, r.gradient.values, -1.0);

  // (2) harmonic part from the weak fluxes of eps y through the inner components
  r.h = DofVector(mesh, FormDegree::NED);
  const Vector my = gm.transpose_times(m1e * y);
  for (int i = 0; i < basis->dimension(); ++i) {
    double c = 0.0;
    for (int v : mesh.boundary_vertices())
      if (mesh.vertex_component(v) == i + 1) c += my[v];
    r.harmonic_coefficients.push_back(c);
    vec::axpy(c, basis->fields[i].values, r.h.values);
  }

  // (3) rotational remainder and its potential: curl w = eps * rotational, psi-type gauge
  r.rotational = DofVector(mesh, FormDegree::NED, vec::add(y, r.h.values, -1.0));
  const SparseMatrix m2 = mass_matrix(mesh, FormDegree::RT);
  const Vector load = mixed_mass(mesh, epsilon) * r.rotational.values;
  Vector target(static_cast<std::size_t>(mesh.num_faces()), 0.0);
  if (vec::norm(load) > 0.0) {
    auto sol = cg_solve(m2, load, quiet(cfg));
    detail::require_converged(sol.stats, "hw_electric: RT projection");
    r.stats.push_back(sol.stats);
    target = std::move(sol.x);
  }
  std::vector<int> all(static_cast<std::size_t>(mesh.num_edges()));
  for (int e = 0; e < mesh.num_edges(); ++e) all[e] = e;
  const Vector zero(all.size(), 0.0);
  auto cp = curl_potential(mesh, target, all, zero, normal_gauge(mesh), cfg);
  r.stats.insert(r.stats.end(), cp.stats.begin(), cp.stats.end());
  r.w = DofVector(mesh, FormDegree::NED, std::move(cp.x));

  fill_summary(r, m1e, u);
  const Vector cw = incidence(mesh, Incidence::curl) * r.w.values;
  r.certificates["rotational_consistency"] =
      energy(m2, vec::add(cw, target, -1.0)) / (energy(m2, target) + kResidualFloor);
  return r;
}

}  // namespace divcurl
