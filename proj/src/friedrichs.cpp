#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <Eigen/Dense>

#include "divcurl/decompose.hpp"
#include "divcurl/errors.hpp"
#include "divcurl/presets.hpp"
#include "divcurl/quadrature.hpp"

namespace divcurl {

namespace {

constexpr std::array<double, 4> kCentroid{0.25, 0.25, 0.25, 0.25};
constexpr double kKernelRatio = 1e-12;

FormDegree space_of(FriedrichsKind kind) { return kind == FriedrichsKind::normal ? FormDegree::RT : FormDegree::NED; }

Vector lumped_p1_mass(const Mesh& mesh) {
  Vector m(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (int v : mesh.sorted_tet(t)) m[v] += 0.25 * mesh.volume(t);
  return m;
}

// Moments of a Whitney field against componentwise P1 hat functions (row 3v + c).
SparseMatrix p1_moments(const Mesh& mesh, FriedrichsKind kind) {
  const auto& rule = tet_rule_degree2();
  std::vector<Triplet> trip;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& verts = mesh.sorted_tet(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const double wt = rule.weights[q] * mesh.volume(t);
      if (kind == FriedrichsKind::normal) {
        const auto b = rt_basis(mesh, t, l);
        for (int k = 0; k < 4; ++k)
          for (int i = 0; i < 4; ++i)
            for (int c = 0; c < 3; ++c)
              trip.push_back({3 * verts[k] + c, mesh.tet_faces(t)[i], wt * l[k] * b[i][c]});
      } else {
        const auto b = ned_basis(mesh, t, l);
        for (int k = 0; k < 4; ++k)
          for (int i = 0; i < 6; ++i)
            for (int c = 0; c < 3; ++c)
              trip.push_back({3 * verts[k] + c, mesh.tet_edges(t)[i], wt * l[k] * b[i][c]});
      }
    }
  }
  return SparseMatrix::from_triplets(3 * mesh.num_vertices(), entity_count(mesh, space_of(kind)), std::move(trip));
}

SparseMatrix block3(const SparseMatrix& a) {
  std::vector<Triplet> trip;
  for (const auto& e : a.triplets())
    for (int c = 0; c < 3; ++c) trip.push_back({3 * e.row + c, 3 * e.col + c, e.value});
  return SparseMatrix::from_triplets(3 * a.rows(), 3 * a.cols(), std::move(trip));
}

// Weak derivative tested against functions vanishing on the boundary: the functional rows and a
// lumped inverse mass on the test space, so that f^T inv_mass f is its squared norm.
struct WeakOperator {
  SparseMatrix functional;
  Vector inv_mass;
  std::vector<int> support;  // test entities (interior edges or vertices)
};

// curl(sigma u) for an RT field, against NED functions on interior edges.
WeakOperator weak_curl(const Mesh& mesh, const CoefficientField& coeff) {
  const auto& ie = mesh.interior_edges();
  WeakOperator op;
  op.support = ie;
  op.functional =
      incidence(mesh, Incidence::curl).select_cols(ie).transpose() * mass_matrix(mesh, FormDegree::RT, coeff);
  op.inv_mass = mass_matrix(mesh, FormDegree::NED).select(ie, ie).diagonal_entries();
  for (double& x : op.inv_mass) x = 1.0 / x;
  return op;
}

// div(eps u) for a NED field, against P1 functions on interior vertices.
WeakOperator weak_div(const Mesh& mesh, const CoefficientField& coeff) {
  const auto& iv = mesh.interior_vertices();
  const Vector lumped = lumped_p1_mass(mesh);
  WeakOperator op;
  op.support = iv;
  op.functional = (incidence(mesh, Incidence::grad).transpose() * mass_matrix(mesh, FormDegree::NED, coeff))
                      .select_rows(iv)
                      .scaled(-1.0);
  for (int v : iv) op.inv_mass.push_back(1.0 / lumped[v]);
  return op;
}

std::vector<Vector> flux_rows(const Mesh& mesh, const CoefficientField& coeff, FriedrichsKind kind) {
  std::vector<Vector> rows;
  if (kind == FriedrichsKind::normal) {
    for (const auto& cut : mesh.cuts()) {
      Vector r(static_cast<std::size_t>(mesh.num_faces()), 0.0);
      for (std::size_t k = 0; k < cut.faces.size(); ++k) r[cut.faces[k]] = cut.face_sign[k];
      rows.push_back(std::move(r));
    }
  } else {
    const SparseMatrix gm = incidence(mesh, Incidence::grad);
    const SparseMatrix m1 = mass_matrix(mesh, FormDegree::NED, coeff);
    for (int i = 1; i < mesh.num_boundary_components(); ++i) {
      Vector theta(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
      for (int v : mesh.boundary_vertices())
        if (mesh.vertex_component(v) == i) theta[v] = 1.0;
      rows.push_back(m1.transpose_times(gm * theta));
    }
  }
  return rows;
}

// Trace values per boundary face at the face centroid: u.n (one component) for the normal kind,
// the tangential part u_T (three components) for the tangential kind. Row c * nb + b.
SparseMatrix face_trace(const Mesh& mesh, FriedrichsKind kind) {
  const int nb = static_cast<int>(mesh.boundary_faces().size());
  std::vector<Triplet> trip;
  if (kind == FriedrichsKind::normal) {
    for (int b = 0; b < nb; ++b) {
      const int f = mesh.boundary_faces()[b];
      trip.push_back({b, f, mesh.outward_sign(b) / mesh.face_area(f)});
    }
    return SparseMatrix::from_triplets(nb, mesh.num_faces(), std::move(trip));
  }
  BoundaryEdgeField unit = zero_boundary_edge_field(mesh);
  const std::array<double, 3> centroid{1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (int b = 0; b < nb; ++b) {
    const auto& v = mesh.faces()[mesh.boundary_faces()[b]];
    for (const auto& [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      const int e = mesh.find_edge(v[i], v[j]);
      const int be = mesh.boundary_edge_index(e);
      unit.values[be] = 1.0;
      const Vec3 t = tangential_value(unit, b, centroid);
      unit.values[be] = 0.0;
      for (int c = 0; c < 3; ++c)
        if (t[c] != 0.0) trip.push_back({c * nb + b, e, t[c]});
    }
  }
  return SparseMatrix::from_triplets(3 * nb, mesh.num_edges(), std::move(trip));
}

// Extension operator z = [x; ext] -> P1 field (row c * nv + v): boundary vertices carry the
// area-weighted average of the adjacent face traces, interior vertices the free unknowns.
SparseMatrix trace_extension(const Mesh& mesh, FriedrichsKind kind, int dofs) {
  const int comps = kind == FriedrichsKind::normal ? 1 : 3;
  const int nb = static_cast<int>(mesh.boundary_faces().size());
  const int nv = mesh.num_vertices();
  const SparseMatrix tr = face_trace(mesh, kind);
  Vector patch(static_cast<std::size_t>(nv), 0.0);
  for (int f : mesh.boundary_faces())
    for (int v : mesh.faces()[f]) patch[v] += mesh.face_area(f);
  std::vector<Triplet> avg;
  for (int b = 0; b < nb; ++b) {
    const int f = mesh.boundary_faces()[b];
    for (int v : mesh.faces()[f])
      for (int c = 0; c < comps; ++c) avg.push_back({c * nv + v, c * nb + b, mesh.face_area(f) / patch[v]});
  }
  const SparseMatrix bnd = SparseMatrix::from_triplets(comps * nv, comps * nb, std::move(avg)) * tr;
  std::vector<Triplet> trip = bnd.triplets();
  const auto& inner = mesh.interior_vertices();
  const int ni = static_cast<int>(inner.size());
  for (int c = 0; c < comps; ++c)
    for (int k = 0; k < ni; ++k) trip.push_back({c * nv + inner[k], dofs + c * ni + k, 1.0});
  return SparseMatrix::from_triplets(comps * nv, dofs + comps * ni, std::move(trip));
}

// Jumps of the face-centroid trace across boundary edges (row c * ne + be); with edge-length
// weights this is the mesh-scale part of the discrete H^{1/2} seminorm of a piecewise constant.
SparseMatrix trace_jumps(const Mesh& mesh, FriedrichsKind kind, const SparseMatrix& trace) {
  const int comps = kind == FriedrichsKind::normal ? 1 : 3;
  const int nb = static_cast<int>(mesh.boundary_faces().size());
  const int ne = static_cast<int>(mesh.boundary_edges().size());
  std::vector<std::array<int, 2>> sides(static_cast<std::size_t>(ne), {-1, -1});
  for (int b = 0; b < nb; ++b) {
    const auto& v = mesh.faces()[mesh.boundary_faces()[b]];
    for (const auto& [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      auto& s = sides[mesh.boundary_edge_index(mesh.find_edge(v[i], v[j]))];
      s[s[0] < 0 ? 0 : 1] = b;
    }
  }
  std::vector<Triplet> trip;
  for (int e = 0; e < ne; ++e) {
    if (sides[e][1] < 0) continue;
    for (int c = 0; c < comps; ++c) {
      trip.push_back({c * ne + e, c * nb + sides[e][0], 1.0});
      trip.push_back({c * ne + e, c * nb + sides[e][1], -1.0});
    }
  }
  return SparseMatrix::from_triplets(comps * ne, comps * nb, std::move(trip)) * trace;
}

SparseMatrix blockn(const SparseMatrix& a, int comps) {
  std::vector<Triplet> trip;
  for (const auto& e : a.triplets())
    for (int c = 0; c < comps; ++c) trip.push_back({c * a.rows() + e.row, c * a.cols() + e.col, e.value});
  return SparseMatrix::from_triplets(comps * a.rows(), comps * a.cols(), std::move(trip));
}

SparseMatrix widened(const SparseMatrix& a, int cols) { return SparseMatrix::from_triplets(a.rows(), cols, a.triplets()); }

// L2 projection into componentwise P1 and the H1 form of that projection.
struct H1Projection {
  SparseMatrix moments, moments_t, mass, h1;
  Vector mass_inv_diag;
  SolverConfig inner;

  H1Projection(const Mesh& mesh, FriedrichsKind kind, int cols)
      : moments(widened(p1_moments(mesh, kind), cols)),
        moments_t(moments.transpose()),
        mass(block3(mass_matrix(mesh, FormDegree::P1))),
        h1(block3(stiffness_matrix(mesh) + mass_matrix(mesh, FormDegree::P1))),
        mass_inv_diag(safe_inverse_diagonal(mass.diagonal_entries())) {
    inner.rel_tol = 1e-12;
    inner.abs_tol = 1e-300;
  }
  Vector solve_mass(std::span<const double> b) const {
    const LinearOperator op = [this](std::span<const double> x, std::span<double> y) { mass.multiply(x, y); };
    auto sol = cg_solve(op, b.size(), b, mass_inv_diag, inner);
    return std::move(sol.x);
  }
  Vector project(std::span<const double> x) const { return solve_mass(moments * x); }
  Vector apply(std::span<const double> x) const { return moments_t * solve_mass(h1 * project(x)); }
};

// Named term x^T F^T G F x; the transpose of F is kept so every product is a row sweep.
struct GramTerm {
  std::string name;
  SparseMatrix factor;
  SparseMatrix factor_t;
  SparseMatrix weight;

  GramTerm(std::string n, SparseMatrix f, SparseMatrix w)
      : name(std::move(n)), factor(std::move(f)), factor_t(factor.transpose()), weight(std::move(w)) {}
  double value(std::span<const double> x) const {
    const Vector fx = factor * x;
    return vec::dot(fx, weight * fx);
  }
};

// Sum of Gram terms, kept factored because the products fill in.
struct FactoredForm {
  int size = 0;
  std::vector<GramTerm> terms;

  Vector apply(std::span<const double> x) const {
    Vector y(static_cast<std::size_t>(size), 0.0);
    for (const auto& g : terms) vec::axpy(1.0, g.factor_t * (g.weight * (g.factor * x)), y);
    return y;
  }
  Vector diagonal() const {
    Vector d(static_cast<std::size_t>(size), 0.0);
    for (const auto& g : terms) {
      const auto rp = g.factor_t.row_ptr();
      const auto ci = g.factor_t.col_idx();
      const auto va = g.factor_t.values();
      for (int i = 0; i < size; ++i)
        for (int a = rp[i]; a < rp[i + 1]; ++a)
          for (int b = rp[i]; b < rp[i + 1]; ++b) d[i] += va[a] * va[b] * g.weight.at(ci[a], ci[b]);
    }
    return d;
  }
};

struct FactoredForms {
  std::unique_ptr<H1Projection> lhs;
  FactoredForm rhs;
  int dofs = 0;
};

FactoredForms build_forms(const Mesh& mesh, const CoefficientField& coeff, FriedrichsKind kind,
                          const FriedrichsOptions& opts) {
  coeff.bounds(mesh);
  const int n = entity_count(mesh, space_of(kind));
  const int comps = kind == FriedrichsKind::normal ? 1 : 3;
  const SparseMatrix h1p1 = stiffness_matrix(mesh) + mass_matrix(mesh, FormDegree::P1);
  SparseMatrix ext;
  int total = n;
  if (opts.trace_norm == TraceNorm::h_half) {
    ext = trace_extension(mesh, kind, n);
    total = ext.cols();
  }

  FactoredForms forms;
  forms.dofs = n;
  forms.rhs.size = total;
  forms.lhs = std::make_unique<H1Projection>(mesh, kind, total);

  auto& r = forms.rhs.terms;
  const bool with_l2 = opts.include_l2 && !opts.flux_form;
  if (kind == FriedrichsKind::normal) {
    const SparseMatrix m2 = mass_matrix(mesh, FormDegree::RT);
    Vector inv_vol(static_cast<std::size_t>(mesh.num_tets()));
    for (int t = 0; t < mesh.num_tets(); ++t) inv_vol[t] = 1.0 / mesh.volume(t);
    Vector area;
    for (int f : mesh.boundary_faces()) area.push_back(mesh.face_area(f));
    r.emplace_back("div", widened(incidence(mesh, Incidence::div), total), SparseMatrix::diagonal(inv_vol));
    const WeakOperator curl = weak_curl(mesh, coeff);
    r.emplace_back("curl", widened(curl.functional, total), SparseMatrix::diagonal(curl.inv_mass));
    r.emplace_back("trace", widened(face_trace(mesh, kind), total), SparseMatrix::diagonal(area));
    if (with_l2) r.emplace_back("l2", widened(SparseMatrix::identity(n), total), m2);
  } else {
    std::vector<Triplet> sel;
    for (std::size_t b = 0; b < mesh.boundary_edges().size(); ++b)
      sel.push_back({static_cast<int>(b), mesh.boundary_edges()[b], 1.0});
    const SparseMatrix eb =
        SparseMatrix::from_triplets(static_cast<int>(mesh.boundary_edges().size()), total, std::move(sel));
    r.emplace_back("curl", widened(incidence(mesh, Incidence::curl), total), mass_matrix(mesh, FormDegree::RT));
    const WeakOperator div = weak_div(mesh, coeff);
    r.emplace_back("div", widened(div.functional, total), SparseMatrix::diagonal(div.inv_mass));
    r.emplace_back("trace", eb, boundary_edge_mass(mesh));
    if (with_l2) r.emplace_back("l2", widened(SparseMatrix::identity(n), total), mass_matrix(mesh, FormDegree::NED));
  }
  if (opts.flux_form) {
    std::vector<Triplet> trip;
    const auto rows = flux_rows(mesh, coeff, kind);
    for (std::size_t k = 0; k < rows.size(); ++k)
      for (int i = 0; i < n; ++i)
        if (rows[k][i] != 0.0) trip.push_back({static_cast<int>(k), i, rows[k][i]});
    const int nr = static_cast<int>(rows.size());
    r.emplace_back("flux", SparseMatrix::from_triplets(nr, total, std::move(trip)), SparseMatrix::identity(nr));
  }
  if (opts.trace_norm == TraceNorm::h_half) {
    r.emplace_back("trace_extension", ext, blockn(h1p1, comps));
    Vector lengths;
    for (int c = 0; c < comps; ++c)
      for (int e : mesh.boundary_edges()) lengths.push_back(mesh.edge_length(e));
    r.emplace_back("trace_jump", widened(trace_jumps(mesh, kind, face_trace(mesh, kind)), total),
                   SparseMatrix::diagonal(lengths));
  }
  return forms;
}

}  // namespace

struct FriedrichsForms::Impl {
  FactoredForms forms;
};

FriedrichsForms::FriedrichsForms(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
int FriedrichsForms::dofs() const { return impl_->forms.dofs; }
int FriedrichsForms::size() const { return impl_->forms.rhs.size; }
Vector FriedrichsForms::lhs(std::span<const double> z) const { return impl_->forms.lhs->apply(z); }
Vector FriedrichsForms::rhs(std::span<const double> z) const { return impl_->forms.rhs.apply(z); }
Vector FriedrichsForms::p1_projection(std::span<const double> z) const { return impl_->forms.lhs->project(z); }
std::map<std::string, double> FriedrichsForms::rhs_terms(std::span<const double> z) const {
  std::map<std::string, double> out;
  for (const auto& g : impl_->forms.rhs.terms) out[g.name] = g.value(z);
  return out;
}

FriedrichsForms friedrichs_forms(const Mesh& mesh, const CoefficientField& coeff, FriedrichsKind kind,
                                 const FriedrichsOptions& opts) {
  auto impl = std::make_shared<FriedrichsForms::Impl>();
  impl->forms = build_forms(mesh, coeff, kind, opts);
  return FriedrichsForms(std::move(impl));
}

namespace {

double p_norm(const std::vector<std::pair<double, double>>& weighted, double p) {
  double s = 0.0;
  for (const auto& [w, m] : weighted) s += w * std::pow(std::abs(m), p);
  return std::pow(s, 1.0 / p);
}

// Ratio of the W1,p-type norm of the P1 projection to the p-type right-hand side.
double sampled_ratio(const Mesh& mesh, const CoefficientField& coeff, FriedrichsKind kind,
                     const FriedrichsOptions& opts, const DofVector& x, const H1Projection& proj) {
  const double p = opts.p;
  const Vector pv = proj.project(x.values);
  const Vector lumped = lumped_p1_mass(mesh);
  std::vector<std::pair<double, double>> val, grad;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    val.push_back({lumped[v], norm(Vec3{pv[3 * v], pv[3 * v + 1], pv[3 * v + 2]})});
  for (int t = 0; t < mesh.num_tets(); ++t) {
    double f2 = 0.0;
    const auto& gl = mesh.grad_lambda(t);
    for (int c = 0; c < 3; ++c) {
      Vec3 g{0, 0, 0};
      for (int k = 0; k < 4; ++k) g = g + pv[3 * mesh.sorted_tet(t)[k] + c] * gl[k];
      f2 += dot(g, g);
    }
    grad.push_back({mesh.volume(t), std::sqrt(f2)});
  }
  const double lhs = std::pow(std::pow(p_norm(val, p), p) + std::pow(p_norm(grad, p), p), 1.0 / p);

  double rhs = 0.0;
  std::vector<std::pair<double, double>> l2, curl, div, trace;
  for (int t = 0; t < mesh.num_tets(); ++t) l2.push_back({mesh.volume(t), norm(evaluate_vector(x, t, kCentroid))});
  if (kind == FriedrichsKind::normal) {
    const WeakOperator op = weak_curl(mesh, coeff);
    const Vector f = op.functional * x.values;
    DofVector wc(mesh, FormDegree::NED);
    for (std::size_t k = 0; k < op.support.size(); ++k) wc.values[op.support[k]] = op.inv_mass[k] * f[k];
    const Vector dx = incidence(mesh, Incidence::div) * x.values;
    for (int t = 0; t < mesh.num_tets(); ++t) {
      curl.push_back({mesh.volume(t), norm(evaluate_vector(wc, t, kCentroid))});
      div.push_back({mesh.volume(t), dx[t] / mesh.volume(t)});
    }
    const BoundaryFaceField un = trace_normal(x);
    for (std::size_t b = 0; b < un.values.size(); ++b)
      trace.push_back({mesh.face_area(mesh.boundary_faces()[b]), un.values[b]});
  } else {
    const DofVector cx(mesh, FormDegree::RT, incidence(mesh, Incidence::curl) * x.values);
    const WeakOperator op = weak_div(mesh, coeff);
    const Vector f = op.functional * x.values;
    for (int t = 0; t < mesh.num_tets(); ++t) curl.push_back({mesh.volume(t), norm(evaluate_vector(cx, t, kCentroid))});
    for (std::size_t k = 0; k < op.support.size(); ++k)
      div.push_back({lumped[op.support[k]], op.inv_mass[k] * f[k]});
    const BoundaryEdgeField ut = trace_tangential(x);
    for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b)
      trace.push_back({mesh.face_area(mesh.boundary_faces()[b]),
                       norm(tangential_value(ut, static_cast<int>(b), {1.0 / 3, 1.0 / 3, 1.0 / 3}))});
  }
  rhs = p_norm(curl, p) + p_norm(div, p) + p_norm(trace, p);
  if (opts.flux_form) {
    for (const auto& r : flux_rows(mesh, coeff, kind)) rhs += std::abs(vec::dot(r, x.values));
  } else if (opts.include_l2) {
    rhs += p_norm(l2, p);
  }
  return lhs / std::max(rhs, 1e-300);
}

}  // namespace

FriedrichsEstimate friedrichs_constant(const Mesh& mesh, const CoefficientField& coeff, FriedrichsKind kind,
                                       const FriedrichsOptions& opts) {
  if (!(opts.p >= 1.0)) throw InputError("Friedrichs exponent p must be >= 1");
  if (opts.power_steps < 1 || opts.samples < 1) throw InputError("power_steps and samples must be positive");
  FriedrichsEstimate est;
  est.kind = kind;
  est.coefficient_kind = coeff.kind();
  est.rhs_form = std::string(opts.flux_form ? "flux" : (opts.include_l2 ? "l2" : "no-l2")) +
                 (opts.trace_norm == TraceNorm::h_half ? "+h_half-trace" : "+l2-trace");
  const FormDegree degree = space_of(kind);

  if (std::abs(opts.p - 2.0) > 1e-12) {
    coeff.bounds(mesh);
    est.lower_bound = true;
    const H1Projection proj(mesh, kind, entity_count(mesh, degree));
    double best = 0.0;
    for (int s = 0; s < opts.samples; ++s) {
      DofVector x = random_dofs(mesh, degree, opts.seed + static_cast<std::uint64_t>(s));
      const double r = sampled_ratio(mesh, coeff, kind, opts, x, proj);
      if (r > best) {
        best = r;
        est.extremal = std::move(x);
      }
      est.history.push_back(best);
    }
    est.constant = best;
    est.converged = true;
    return est;
  }

  // Power steps x <- rhs^-1 lhs x; the estimate is the top Ritz value of the pencil on the span of
  // the rhs-orthonormalized iterates, which is never above the true top eigenvalue.
  const FactoredForms forms = build_forms(mesh, coeff, kind, opts);
  const std::size_t total = static_cast<std::size_t>(forms.rhs.size);

  // Without the L2 term the harmonic fields lie in the kernel of the right-hand side, so the
  // constant is infinite; certify with the first basis member instead of iterating.
  const int betti = kind == FriedrichsKind::normal ? mesh.betti().second : mesh.betti().first;
  if (!opts.include_l2 && !opts.flux_form && betti > 0) {
    const HarmonicBasis hb =
        kind == FriedrichsKind::normal ? magnetic_basis(mesh, coeff, opts.solver) : electric_basis(mesh, coeff, opts.solver);
    Vector z(total, 0.0);
    std::copy(hb.fields[0].values.begin(), hb.fields[0].values.end(), z.begin());
    const double l = vec::dot(z, forms.lhs->apply(z));
    const double r = vec::dot(z, forms.rhs.apply(z));
    est.kernel_ratio = r / std::max(l, 1e-300);
    if (est.kernel_ratio <= kKernelRatio) {
      est.unbounded = true;
      est.converged = true;
      est.constant = std::numeric_limits<double>::infinity();
      est.extremal = hb.fields[0];
      for (const auto& g : forms.rhs.terms) est.rhs_terms[g.name] = g.value(z) / std::max(l, 1e-300);
      return est;
    }
  }
  const Vector rhs_inv_diag = safe_inverse_diagonal(forms.rhs.diagonal());
  const LinearOperator rhs_op = [&forms](std::span<const double> x, std::span<double> y) {
    const Vector r = forms.rhs.apply(x);
    std::copy(r.begin(), r.end(), y.begin());
  };
  SolverConfig cfg = opts.solver;
  cfg.throw_on_failure = false;
  cfg.rel_tol = std::max(cfg.rel_tol, 1e-6);

  Vector next(total, 0.0);
  {
    const DofVector start = random_dofs(mesh, degree, opts.seed);
    std::copy(start.values.begin(), start.values.end(), next.begin());
  }
  std::vector<Vector> basis, lhs_basis;
  Eigen::MatrixXd projected;
  Eigen::VectorXd ritz_vector;
  double theta = 0.0;
  for (int k = 0; k < opts.power_steps; ++k) {
    const double start_norm = std::sqrt(std::max(vec::dot(next, forms.rhs.apply(next)), 0.0));
    for (int pass = 0; pass < 2; ++pass) {
      const Vector rn = forms.rhs.apply(next);
      for (const auto& b : basis) vec::axpy(-vec::dot(b, rn), b, next);
    }
    const double nrm = std::sqrt(std::max(vec::dot(next, forms.rhs.apply(next)), 0.0));
    if (!(nrm > 1e-10 * start_norm)) break;  // the iterates span an invariant subspace
    basis.push_back(vec::scaled(next, 1.0 / nrm));
    lhs_basis.push_back(forms.lhs->apply(basis.back()));

    const int m = static_cast<int>(basis.size());
    projected.conservativeResize(m, m);
    for (int i = 0; i < m; ++i) {
      projected(i, m - 1) = vec::dot(basis[i], lhs_basis.back());
      projected(m - 1, i) = projected(i, m - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(projected);
    const double next_theta = eig.eigenvalues()(m - 1);
    ritz_vector = eig.eigenvectors().col(m - 1);
    est.rayleigh_change = k == 0 ? 1.0 : std::abs(next_theta - theta) / std::max(next_theta, 1e-300);
    theta = next_theta;
    est.history.push_back(std::sqrt(std::max(theta, 0.0)));
    est.steps = k + 1;
    if (k >= 4 && est.rayleigh_change < 1e-10) break;

    auto sol = cg_solve(rhs_op, total, lhs_basis.back(), rhs_inv_diag, cfg);
    if (!sol.stats.converged) {
      est.constant = est.history.back();
      throw SolverError("friedrichs: right-hand-side solve", "no convergence at power step " + std::to_string(k),
                        sol.stats.iterations, sol.stats.relative_residual);
    }
    next = std::move(sol.x);
  }

  Vector top(total, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) vec::axpy(ritz_vector(static_cast<Eigen::Index>(i)), basis[i], top);
  est.extremal = DofVector(mesh, degree, Vector(top.begin(), top.begin() + forms.dofs));
  const double scale = std::max(vec::dot(top, forms.rhs.apply(top)), 1e-300);
  for (const auto& g : forms.rhs.terms) est.rhs_terms[g.name] = g.value(top) / scale;
  est.constant = std::sqrt(std::max(theta, 0.0));
  est.converged = est.rayleigh_change < 1e-6;
  return est;
}

}  // namespace divcurl
