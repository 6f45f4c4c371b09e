#include "divcurl/solve.hpp"

#include <algorithm>
#include <cmath>

#include "divcurl/errors.hpp"

namespace divcurl {

namespace {

SolverConfig quiet(const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.throw_on_failure = false;
  return c;
}

double energy_norm(const SparseMatrix& m, std::span<const double> x) {
  return std::sqrt(std::max(0.0, vec::dot(x, m * x)));
}

Vector restrict(const Vector& v, const std::vector<int>& ids) {
  Vector out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = v[ids[i]];
  return out;
}

// Each residual is measured against the terms of its own equation plus those of the other
// two, so that round-off in a vanishing equation does not read as a violation.
void normalize(Diagnostics& d, double s_curl, double s_div, double s_trace) {
  const double total = s_curl + s_div + s_trace;
  d.curl = d.curl_abs / (s_curl + total + kResidualFloor);
  d.div = d.div_abs / (s_div + total + kResidualFloor);
  d.trace = d.trace_abs / (s_trace + total + kResidualFloor);
}

void gate(const CompatReport& report) {
  if (!report.pass) throw CompatibilityError(report.failing());
}

}  // namespace

double relative_mesh_size(const Mesh& mesh) {
  Point lo = mesh.vertex(0), hi = mesh.vertex(0);
  for (const auto& p : mesh.vertices())
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  return mesh.max_edge_length() / norm(hi - lo);
}

Diagnostics magnetostatic_diagnostics(const DofVector& u, const DofVector& j, const DofVector& rho,
                                      const BoundaryFaceField& lam, const CoefficientField& sigma) {
  const Mesh& mesh = *u.mesh;
  Diagnostics d;
  const auto& inner = mesh.interior_edges();
  const SparseMatrix c = incidence(mesh, Incidence::curl);
  const SparseMatrix m2s = mass_matrix(mesh, FormDegree::RT, sigma);
  const Vector a = restrict(c.transpose_times(m2s * u.values), inner);
  const Vector b = restrict(mixed_mass(mesh).transpose_times(j.values), inner);
  d.curl_abs = vec::norm(vec::add(a, b, -1.0));
  const double s_curl = vec::norm(a) + vec::norm(b);

  const SparseMatrix dv = incidence(mesh, Incidence::div);
  Vector du = dv * u.values;
  Vector src(static_cast<std::size_t>(mesh.num_tets()));
  for (int t = 0; t < mesh.num_tets(); ++t) src[t] = rho.values[t] * mesh.volume(t);
  d.div_abs = vec::norm(vec::add(du, src, -1.0));
  const double s_div = vec::norm(du) + vec::norm(src);

  const BoundaryFaceField un = trace_normal(u);
  d.trace_abs = boundary_l2_norm(BoundaryFaceField{&mesh, vec::add(un.values, lam.values, -1.0)});
  const double s_trace = boundary_l2_norm(un) + boundary_l2_norm(lam);
  normalize(d, s_curl, s_div, s_trace);
  return d;
}

Diagnostics electric_diagnostics(const DofVector& u, const DofVector& j, const DofVector& rho,
                                 const BoundaryEdgeField& lam, const CoefficientField& epsilon) {
  const Mesh& mesh = *u.mesh;
  Diagnostics d;
  const SparseMatrix c = incidence(mesh, Incidence::curl);
  const SparseMatrix m2 = mass_matrix(mesh, FormDegree::RT);
  const Vector cu = c * u.values;
  d.curl_abs = energy_norm(m2, vec::add(cu, j.values, -1.0));
  const double s_curl = energy_norm(m2, cu) + energy_norm(m2, j.values);

  const auto& inner = mesh.interior_vertices();
  const SparseMatrix m1e = mass_matrix(mesh, FormDegree::NED, epsilon);
  const Vector a = restrict(incidence(mesh, Incidence::grad).transpose_times(m1e * u.values), inner);
  const Vector b = restrict(p1_p0_mass(mesh) * rho.values, inner);
  d.div_abs = vec::norm(vec::add(a, b));
  const double s_div = vec::norm(a) + vec::norm(b);

  const BoundaryEdgeField ut = trace_tangential(u);
  d.trace_abs = boundary_l2_norm(BoundaryEdgeField{&mesh, vec::add(ut.values, lam.values, -1.0)});
  const double s_trace = boundary_l2_norm(ut) + boundary_l2_norm(lam);
  normalize(d, s_curl, s_div, s_trace);
  return d;
}

SolutionBundle solve_magnetostatic(const DofVector& j, const DofVector& rho, const BoundaryFaceField& lam,
                                   const CoefficientField& sigma, const Mesh& mesh, const SolveOptions& opts) {
  opts.solver.validate();
  SolutionBundle out;
  out.system = HarmonicKind::magnetic;
  out.compat = check_magnetostatic(j, rho, lam, mesh, opts.compat_tol);
  if (opts.check_data) gate(out.compat);
  sigma.bounds(mesh);

  // (1) vector potential
  out.potential = vector_potential_normal(j, mesh, opts.solver);
  for (const auto& s : out.potential.stats) out.stats.emplace_back("vector potential", s);
  const DofVector& psi = out.potential.field;

  // (2)+(3) conormal Neumann problem in mixed form: u in RT with the boundary fluxes fixed
  // by lambda, sigma u = psi + grad q weakly (q in P0) and D u = rho exactly.
  const auto& inner = mesh.interior_faces();
  const SparseMatrix m2s = mass_matrix(mesh, FormDegree::RT, sigma);
  const SparseMatrix dv = incidence(mesh, Incidence::div);
  Vector ub(static_cast<std::size_t>(mesh.num_faces()), 0.0);
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const int f = mesh.boundary_faces()[b];
    ub[f] = mesh.outward_sign(static_cast<int>(b)) * lam.values[b] * mesh.face_area(f);
  }
  const Vector xpsi = mixed_mass(mesh) * psi.values;
  const Vector mub = m2s * ub;
  Vector f(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) f[i] = xpsi[inner[i]] - mub[inner[i]];
  // the cell equations sum to the mean balance; the first one is implied by the others
  std::vector<int> cells;
  for (int t = 1; t < mesh.num_tets(); ++t) cells.push_back(t);
  const Vector dub = dv * ub;
  Vector g(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) g[i] = rho.values[cells[i]] * mesh.volume(cells[i]) - dub[cells[i]];
  Vector u = ub;
  Vector q(static_cast<std::size_t>(mesh.num_tets()), 0.0);
  if (vec::norm(f) > 0.0 || vec::norm(g) > 0.0) {
    auto sad = minres_saddle(m2s.select(inner, inner), dv.select(cells, inner), f, g, quiet(opts.solver));
    detail::require_converged(sad.stats, "magnetostatic: mixed Neumann problem");
    out.stats.emplace_back("mixed Neumann problem", sad.stats);
    for (std::size_t i = 0; i < inner.size(); ++i) u[inner[i]] = sad.x[i];
    for (std::size_t i = 0; i < cells.size(); ++i) q[cells[i]] = sad.mult[i];
    double mean = 0.0, vol = 0.0;
    for (int t = 0; t < mesh.num_tets(); ++t) {
      mean += q[t] * mesh.volume(t);
      vol += mesh.volume(t);
    }
    for (double& x : q) x -= mean / vol;
  }
  out.scalar_potential = DofVector(mesh, FormDegree::P0, std::move(q));
  out.u0 = DofVector(mesh, FormDegree::RT, std::move(u));

  // (4) harmonic family
  if (opts.with_basis) {
    out.basis = magnetic_basis(mesh, sigma, opts.solver);
    for (const auto& s : out.basis.stats) out.stats.emplace_back("magnetic basis", s);
  }
  out.diagnostics = magnetostatic_diagnostics(out.u0, j, rho, lam, sigma);
  out.converged = out.diagnostics.within();
  return out;
}

SolutionBundle solve_electric(const DofVector& j, const DofVector& rho, const BoundaryEdgeField& lam,
                              const CoefficientField& epsilon, const Mesh& mesh, const SolveOptions& opts) {
  opts.solver.validate();
  SolutionBundle out;
  out.system = HarmonicKind::electric;
  out.compat = check_electric(j, rho, lam, mesh, epsilon, opts.compat_tol);
  if (opts.check_data) gate(out.compat);
  epsilon.bounds(mesh);

  // (1) tangential vector potential
  out.potential = vector_potential_tangential(j, lam, mesh, opts.solver);
  for (const auto& s : out.potential.stats) out.stats.emplace_back("vector potential", s);
  const DofVector& v = out.potential.field;

  // (2) eps-weighted Dirichlet problem: int eps (grad q + v) . grad mu = -int rho mu
  const auto& inner = mesh.interior_vertices();
  const SparseMatrix g = incidence(mesh, Incidence::grad);
  const SparseMatrix m1e = mass_matrix(mesh, FormDegree::NED, epsilon);
  const SparseMatrix k = stiffness_matrix(mesh, epsilon).select(inner, inner);
  const Vector m01rho = p1_p0_mass(mesh) * rho.values;
  const Vector gv = g.transpose_times(m1e * v.values);
  Vector rhs(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) rhs[i] = -m01rho[inner[i]] - gv[inner[i]];
  Vector q(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  if (!inner.empty() && vec::norm(rhs) > 0.0) {
    auto sol = cg_solve(k, rhs, quiet(opts.solver));
    detail::require_converged(sol.stats, "electric: Dirichlet problem");
    out.stats.emplace_back("Dirichlet problem", sol.stats);
    for (std::size_t i = 0; i < inner.size(); ++i) q[inner[i]] = sol.x[i];
  }
  out.scalar_potential = DofVector(mesh, FormDegree::P1, q);

  // (3) u0 = grad q + v
  Vector u = g * q;
  vec::axpy(1.0, v.values, u);
  out.u0 = DofVector(mesh, FormDegree::NED, std::move(u));

  if (opts.with_basis) {
    out.basis = electric_basis(mesh, epsilon, opts.solver);
    for (const auto& s : out.basis.stats) out.stats.emplace_back("electric basis", s);
  }
  out.diagnostics = electric_diagnostics(out.u0, j, rho, lam, epsilon);
  out.converged = out.diagnostics.within();
  return out;
}

}  // namespace divcurl
