#include "divcurl/compat.hpp"

#include <cmath>

#include "divcurl/errors.hpp"
#include "divcurl/harmonic.hpp"

namespace divcurl {

const CompatCondition* CompatReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> CompatReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : conditions)
    if (!c.pass) out.push_back(c.name);
  return out;
}

namespace {

void check_inputs(const DofVector& j, const DofVector& rho, const Mesh& mesh) {
  if (j.degree != FormDegree::RT || j.mesh != &mesh) throw InputError("J must be an RT vector on the given mesh");
  if (rho.degree != FormDegree::P0 || rho.mesh != &mesh) throw InputError("rho must be a P0 vector on the given mesh");
}

void add(CompatReport& r, CompatCondition c) {
  c.pass = c.residual <= c.threshold;
  r.pass = r.pass && c.pass;
  r.conditions.push_back(std::move(c));
}

// ||D J|| relative to the same sum taken with absolute values, plus the data scale.
double div_residual(const DofVector& j, const Mesh& mesh, double data_scale) {
  const SparseMatrix d = incidence(mesh, Incidence::div);
  Vector dj = d * j.values;
  Vector abs_j(j.values.size());
  for (std::size_t i = 0; i < abs_j.size(); ++i) abs_j[i] = std::abs(j.values[i]);
  const SparseMatrix dabs = SparseMatrix::from_triplets(d.rows(), d.cols(), [&] {
    auto t = d.triplets();
    for (auto& e : t) e.value = std::abs(e.value);
    return t;
  }());
  const Vector scale = dabs * abs_j;
  return vec::norm(dj) / (vec::norm(scale) + data_scale + kResidualFloor);
}

double l1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double rho_scale(const DofVector& rho, const Mesh& mesh) {
  double s = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) s += std::abs(rho.values[t]) * mesh.volume(t);
  return s;
}

}  // namespace

CompatReport check_magnetostatic(const DofVector& j, const DofVector& rho, const BoundaryFaceField& lam, const Mesh& mesh,
                                 double tol) {
  check_inputs(j, rho, mesh);
  if (lam.mesh != &mesh || lam.values.size() != mesh.boundary_faces().size())
    throw InputError("lambda must be a boundary face field on the given mesh");
  CompatReport r;
  r.system = "magnetostatic";
  double lam_abs = 0.0;
  for (std::size_t b = 0; b < lam.values.size(); ++b)
    lam_abs += std::abs(lam.values[b]) * mesh.face_area(mesh.boundary_faces()[b]);
  const double rho_abs = rho_scale(rho, mesh);
  // Residuals are measured against the whole data set so that round-off in a vanishing
  // datum does not read as a violation.
  const double data_scale = l1(j.values) + rho_abs + lam_abs;
  add(r, {"divJ", div_residual(j, mesh, data_scale), tol, true, true, "", std::nullopt});
  for (int i = 0; i < mesh.num_boundary_components(); ++i) {
    double abs_sum = 0.0;
    for (int f : mesh.component_faces(i)) abs_sum += std::abs(j.values[f]);
    const double flux = boundary_flux(j, i);
    add(r, {"gammaFlux_" + std::to_string(i), std::abs(flux) / (abs_sum + data_scale + kResidualFloor), tol, true, true,
            "", flux});
  }
  double rho_int = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) rho_int += rho.values[t] * mesh.volume(t);
  const double lam_int = boundary_integral(lam);
  add(r, {"meanBalance", std::abs(rho_int - lam_int) / (data_scale + kResidualFloor), tol, true, true, "",
          rho_int - lam_int});
  return r;
}

CompatReport check_electric(const DofVector& j, const DofVector& rho, const BoundaryEdgeField& lam, const Mesh& mesh,
                            const CoefficientField& sigma, double tol) {
  check_inputs(j, rho, mesh);
  if (lam.mesh != &mesh || lam.values.size() != mesh.boundary_edges().size())
    throw InputError("Lambda must be a boundary edge field on the given mesh");
  CompatReport r;
  r.system = "electric";
  const double data_scale = l1(j.values) + rho_scale(rho, mesh) + l1(lam.values);
  add(r, {"divJ", div_residual(j, mesh, data_scale), tol, true, true, "", std::nullopt});
  add(r, {"lambdaNormal", 0.0, tol, true, true, "tangential by representation (boundary-edge circulations)", std::nullopt});

  // <J.n, psi_v> - <div_T Lambda, psi_v> for all boundary P1 functions psi_v
  Vector jn(mesh.boundary_vertices().size(), 0.0), jn_abs(jn.size(), 0.0);
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const int f = mesh.boundary_faces()[b];
    const double flux = mesh.outward_sign(static_cast<int>(b)) * j.values[f];
    for (int v : mesh.faces()[f]) {
      jn[mesh.boundary_vertex_index(v)] += flux / 3.0;
      jn_abs[mesh.boundary_vertex_index(v)] += std::abs(flux) / 3.0;
    }
  }
  const Vector divt = surface_divergence(lam);
  // |div_T Lambda| is bounded per vertex by the circulations of the incident faces
  Vector circ_abs(jn.size(), 0.0);
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const int f = mesh.boundary_faces()[b];
    const auto& fv = mesh.faces()[f];
    const int e[3] = {mesh.find_edge(fv[0], fv[1]), mesh.find_edge(fv[1], fv[2]), mesh.find_edge(fv[0], fv[2])};
    double s = 0.0;
    for (int k : e) s += std::abs(lam.values[mesh.boundary_edge_index(k)]);
    for (int v : fv) circ_abs[mesh.boundary_vertex_index(v)] += s / 3.0;
  }
  const double jn_res =
      vec::norm(vec::add(jn, divt, -1.0)) / (vec::norm(jn_abs) + vec::norm(circ_abs) + data_scale + kResidualFloor);
  add(r, {"jnEqualsDivT", jn_res, tol, true, true, "weak residual against boundary P1 functions", std::nullopt});

  for (int c = 1; c <= mesh.num_cuts(); ++c) {
    const auto& cut = mesh.cuts()[c - 1];
    double scale = 0.0;
    for (int f : cut.faces) scale += std::abs(j.values[f]);
    for (int e : cut.curve_edges) scale += std::abs(lam.values[mesh.boundary_edge_index(e)]);
    const double flux = cut_flux(j, c);
    const double circ = cut_circulation(lam, c);
    const double res = std::abs(flux - circ) / (scale + data_scale + kResidualFloor);
    add(r, {"cutCirculation_" + std::to_string(c), res, tol, true, true, "", flux - circ});
    // The pairing of J against K_T plus the boundary term is equivalent to the cut form.
    add(r, {"harmonicPairing_" + std::to_string(c), res, tol, true, false,
            "derived from cutCirculation_" + std::to_string(c) + " (equivalent cut form), coefficient " + sigma.kind(),
            std::nullopt});
  }
  return r;
}

}  // namespace divcurl
