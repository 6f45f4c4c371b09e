#include "divcurl/potentials.hpp"

#include <cmath>

#include "divcurl/compat.hpp"
#include "divcurl/errors.hpp"
#include "divcurl/harmonic.hpp"

namespace divcurl {

namespace detail {

SparseMatrix abs_entries(const SparseMatrix& b) {
  auto t = b.triplets();
  for (auto& e : t) e.value = std::abs(e.value);
  return SparseMatrix::from_triplets(b.rows(), b.cols(), std::move(t));
}

double relative_apply(const SparseMatrix& b, std::span<const double> x, std::span<const double> rhs) {
  Vector r = b * x;
  Vector ax(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) ax[i] = std::abs(x[i]);
  Vector scale = abs_entries(b) * ax;
  double rhs_norm = 0.0;
  if (!rhs.empty()) {
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= rhs[i];
    rhs_norm = vec::norm(rhs);
  }
  return vec::norm(r) / (vec::norm(scale) + rhs_norm + kResidualFloor);
}

void require_converged(const SolveStats& s, const std::string& stage) {
  if (!s.converged)
    throw SolverError(stage, "no convergence (relative residual " + std::to_string(s.relative_residual) + ")",
                      s.iterations, s.relative_residual);
}

}  // namespace detail

using detail::require_converged;

namespace {

SolverConfig quiet(const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.throw_on_failure = false;
  return c;
}

double rt_norm(const SparseMatrix& m2, std::span<const double> x) { return std::sqrt(std::max(0.0, vec::dot(x, m2 * x))); }

}  // namespace

SparseMatrix normal_gauge(const Mesh& mesh) {
  const JumpSpace space(mesh);
  std::vector<int> cols;
  for (int c = 1; c < space.dimension(); ++c) cols.push_back(c);
  return space.gradient().select_cols(cols);
}

SparseMatrix tangential_gauge(const Mesh& mesh) {
  return incidence(mesh, Incidence::grad) * theta0_embedding(mesh);
}

CurlPotential curl_potential(const Mesh& mesh, std::span<const double> target, const std::vector<int>& free_edges,
                             std::span<const double> fixed, const SparseMatrix& gauge, const SolverConfig& cfg) {
  if (static_cast<int>(target.size()) != mesh.num_faces() || static_cast<int>(fixed.size()) != mesh.num_edges())
    throw DimensionError("curl_potential: size mismatch");
  CurlPotential out;
  const SparseMatrix c = incidence(mesh, Incidence::curl);
  const SparseMatrix m2 = mass_matrix(mesh, FormDegree::RT);
  const SparseMatrix m1 = mass_matrix(mesh, FormDegree::NED);
  const SparseMatrix cf = c.select_cols(free_edges);
  const SparseMatrix a = cf.transpose() * (m2 * cf);

  Vector r = c * fixed;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = target[i] - r[i];
  const Vector f = cf.transpose_times(m2 * r);

  SolverConfig sc = quiet(cfg);
  out.x.assign(fixed.begin(), fixed.end());
  if (vec::norm(f) > 0.0) {
    auto sol = cg_solve(a, f, sc);
    require_converged(sol.stats, "curl potential: curl-curl");
    out.stats.push_back(sol.stats);
    for (std::size_t i = 0; i < free_edges.size(); ++i) out.x[free_edges[i]] = sol.x[i];
  }

  // remove the gauge component; only free entries change
  if (gauge.cols() > 0) {
    const SparseMatrix k = gauge.transpose() * (m1 * gauge);
    const Vector b = gauge.transpose_times(m1 * out.x);
    if (vec::norm(b) > 0.0) {
      auto sol = cg_solve(k, b, sc);
      require_converged(sol.stats, "curl potential: gauge projection");
      out.stats.push_back(sol.stats);
      const Vector shift = gauge * sol.x;
      for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] -= shift[i];
    }
  }
  return out;
}

PotentialResult vector_potential_normal(const DofVector& j, const Mesh& mesh, const SolverConfig& cfg) {
  if (j.degree != FormDegree::RT || j.mesh != &mesh) throw InputError("J must be an RT vector on the given mesh");
  cfg.validate();
  std::vector<int> all(static_cast<std::size_t>(mesh.num_edges()));
  for (int e = 0; e < mesh.num_edges(); ++e) all[e] = e;
  const Vector zero(static_cast<std::size_t>(mesh.num_edges()), 0.0);
  const SparseMatrix gauge = normal_gauge(mesh);
  auto cp = curl_potential(mesh, j.values, all, zero, gauge, cfg);

  PotentialResult res;
  res.field = DofVector(mesh, FormDegree::NED, std::move(cp.x));
  res.stats = std::move(cp.stats);
  const SparseMatrix c = incidence(mesh, Incidence::curl);
  const SparseMatrix m2 = mass_matrix(mesh, FormDegree::RT);
  const SparseMatrix m1 = mass_matrix(mesh, FormDegree::NED);
  const Vector cpsi = c * res.field.values;
  const double jn = rt_norm(m2, j.values);
  res.certificates["curl_residual"] = rt_norm(m2, vec::add(cpsi, j.values, -1.0)) / (jn + kResidualFloor);
  const Vector m1psi = m1 * res.field.values;
  res.certificates["weak_div_residual"] =
      detail::relative_apply(incidence(mesh, Incidence::grad).transpose(), m1psi);
  const JumpSpace space(mesh);
  for (int k = 0; k < mesh.num_cuts(); ++k) {
    const DofVector z = space.jump_cochain(k);
    res.certificates["cut_flux_" + std::to_string(k + 1)] = vec::dot(z.values, m1psi);
  }
  return res;
}

PotentialResult vector_potential_tangential(const DofVector& j, const BoundaryEdgeField& lam, const Mesh& mesh,
                                            const SolverConfig& cfg) {
  if (j.degree != FormDegree::RT || j.mesh != &mesh) throw InputError("J must be an RT vector on the given mesh");
  if (lam.mesh != &mesh || lam.values.size() != mesh.boundary_edges().size())
    throw InputError("Lambda must be a boundary edge field on the given mesh");
  cfg.validate();
  Vector fixed(static_cast<std::size_t>(mesh.num_edges()), 0.0);
  for (std::size_t b = 0; b < mesh.boundary_edges().size(); ++b) fixed[mesh.boundary_edges()[b]] = lam.values[b];
  const SparseMatrix gauge = tangential_gauge(mesh);
  auto cp = curl_potential(mesh, j.values, mesh.interior_edges(), fixed, gauge, cfg);

  PotentialResult res;
  res.field = DofVector(mesh, FormDegree::NED, std::move(cp.x));
  res.stats = std::move(cp.stats);
  const SparseMatrix c = incidence(mesh, Incidence::curl);
  const SparseMatrix m2 = mass_matrix(mesh, FormDegree::RT);
  const SparseMatrix m1 = mass_matrix(mesh, FormDegree::NED);
  const Vector cv = c * res.field.values;
  res.certificates["curl_residual"] =
      rt_norm(m2, vec::add(cv, j.values, -1.0)) / (rt_norm(m2, j.values) + rt_norm(m2, cv) + kResidualFloor);
  const BoundaryEdgeField trace = trace_tangential(res.field);
  const BoundaryEdgeField diff{&mesh, vec::add(trace.values, lam.values, -1.0)};
  res.certificates["trace_residual"] =
      boundary_l2_norm(diff) / (boundary_l2_norm(lam) + boundary_l2_norm(trace) + kResidualFloor);
  const Vector m1v = m1 * res.field.values;
  res.certificates["weak_div_residual"] = detail::relative_apply(gauge.transpose(), m1v);
  return res;
}

PotentialResult solve_divcurl(const DofVector& j, const DofVector& rho, const BoundaryEdgeField& lam, const Mesh& mesh,
                              const SolverConfig& cfg) {
  if (rho.degree != FormDegree::P0 || rho.mesh != &mesh) throw InputError("rho must be a P0 vector on the given mesh");
  PotentialResult res = vector_potential_tangential(j, lam, mesh, cfg);

  const auto& inner = mesh.interior_vertices();
  const SparseMatrix g = incidence(mesh, Incidence::grad);
  const SparseMatrix m1 = mass_matrix(mesh, FormDegree::NED);
  const SparseMatrix k = stiffness_matrix(mesh).select(inner, inner);
  const Vector m01rho = p1_p0_mass(mesh) * rho.values;
  const Vector gv = g.transpose_times(m1 * res.field.values);
  Vector rhs(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) rhs[i] = -m01rho[inner[i]] - gv[inner[i]];
  Vector q(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  if (!inner.empty() && vec::norm(rhs) > 0.0) {
    auto sol = cg_solve(k, rhs, quiet(cfg));
    require_converged(sol.stats, "div-curl: Dirichlet problem");
    res.stats.push_back(sol.stats);
    for (std::size_t i = 0; i < inner.size(); ++i) q[inner[i]] = sol.x[i];
  }
  vec::axpy(1.0, g * q, res.field.values);

  // weak div v = rho against interior hat functions
  const Vector gvf = g.transpose_times(m1 * res.field.values);
  Vector r(inner.size()), s(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    r[i] = gvf[inner[i]] + m01rho[inner[i]];
    s[i] = m01rho[inner[i]];
  }
  res.certificates["div_residual"] = vec::norm(r) / (vec::norm(s) + vec::norm(gvf) + kResidualFloor);
  res.certificates.erase("weak_div_residual");
  return res;
}

}  // namespace divcurl
