#include "divcurl/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "divcurl/errors.hpp"

namespace divcurl {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json matrix_json(const std::vector<std::vector<double>>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = Json::array();
    for (double v : r) row.push_back(number(v));
    out.push_back(std::move(row));
  }
  return out;
}

Json map_json(const std::map<std::string, double>& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[k] = number(v);
  return out;
}

Json stats_json(const SolveStats& s) {
  return Json{{"iterations", s.iterations}, {"relative_residual", number(s.relative_residual)}, {"converged", s.converged}};
}

const char* kind_name(HarmonicKind k) { return k == HarmonicKind::magnetic ? "magnetic" : "electric"; }

}  // namespace

Json Report::to_json() const {
  Json doc;
  doc["command"] = command;
  doc["mesh"] = mesh;
  doc["coefficient"] = coefficient;
  doc["results"] = results;
  doc["residuals"] = map_json(residuals);
  doc["stats"] = Json{{"iterations", iterations}, {"seconds", seconds}};
  doc["timestamp"] = timestamp;
  return doc;
}

void Report::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

Json mesh_summary(const Mesh& mesh) {
  const auto [n1, n2] = mesh.betti();
  return Json{{"cells", mesh.num_tets()}, {"vertices", mesh.num_vertices()}, {"betti", {n1, n2}}};
}

Json coefficient_summary(const CoefficientField& coeff, const Mesh& mesh) {
  const EllipticityBounds b = coeff.bounds(mesh);
  return Json{{"kind", coeff.kind()}, {"m", b.m}, {"M", b.M}};
}

Json quality_json(const MeshQualityReport& q) {
  return Json{{"min_dihedral", q.min_dihedral}, {"max_dihedral", q.max_dihedral}, {"min_edge", q.min_edge},
              {"max_edge", q.max_edge}};
}

Json to_json(const CompatReport& report) {
  Json conds = Json::array();
  for (const auto& c : report.conditions) {
    Json e{{"name", c.name},         {"residual", number(c.residual)}, {"threshold", c.threshold},
           {"pass", c.pass},         {"computed", c.computed}};
    if (c.value) e["value"] = number(*c.value);
    if (!c.note.empty()) e["note"] = c.note;
    conds.push_back(std::move(e));
  }
  return Json{{"system", report.system}, {"pass", report.pass}, {"failing", report.failing()}, {"conditions", conds}};
}

Json to_json(const HarmonicBasis& basis) {
  Json out{{"kind", kind_name(basis.kind)},
           {"dimension", basis.dimension()},
           {"flux_gram", matrix_json(basis.normalization)},
           {"flux_gram_defect", number(identity_defect(basis.normalization))}};
  if (basis.kind == HarmonicKind::magnetic) {
    out["jump_gram"] = matrix_json(basis.jump_gram);
    out["gradient_relation"] = number(basis.gradient_relation);
  } else {
    Json flux = Json::array();
    for (double v : basis.outer_flux) flux.push_back(number(v));
    out["outer_flux"] = flux;
  }
  Json norms = Json::array();
  for (const auto& f : basis.fields) norms.push_back(number(l2_norm(f)));
  out["l2_norms"] = norms;
  Json st = Json::array();
  for (const auto& s : basis.stats) st.push_back(stats_json(s));
  out["solves"] = st;
  return out;
}

Json to_json(const Diagnostics& d) {
  return Json{{"curl", number(d.curl)},         {"div", number(d.div)},         {"trace", number(d.trace)},
              {"curl_abs", number(d.curl_abs)}, {"div_abs", number(d.div_abs)}, {"trace_abs", number(d.trace_abs)},
              {"within_tolerance", d.within()}};
}

Json to_json(const DecompositionResult& d) {
  Json coeffs = Json::array();
  for (double c : d.harmonic_coefficients) coeffs.push_back(number(c));
  Json st = Json::array();
  for (const auto& s : d.stats) st.push_back(stats_json(s));
  return Json{{"kind", d.kind == DecompositionKind::magnetic ? "magnetic" : "electric"},
              {"reconstruction", number(d.reconstruction)},
              {"pairings", map_json(d.pairings)},
              {"norms", map_json(d.norms)},
              {"harmonic_coefficients", coeffs},
              {"certificates", map_json(d.certificates)},
              {"solves", st}};
}

Json to_json(const FriedrichsEstimate& f) {
  Json hist = Json::array();
  for (double v : f.history) hist.push_back(number(v));
  return Json{{"kind", f.kind == FriedrichsKind::normal ? "normal" : "tangential"},
              {"constant", number(f.constant)},
              {"unbounded", f.unbounded},
              {"kernel_ratio", number(f.kernel_ratio)},
              {"rhs_form", f.rhs_form},
              {"rhs_terms", map_json(f.rhs_terms)},
              {"lower_bound", f.lower_bound},
              {"converged", f.converged},
              {"rayleigh_change", number(f.rayleigh_change)},
              {"steps", f.steps},
              {"history", hist}};
}

double identity_defect(const std::vector<std::vector<double>>& gram) {
  double worst = 0.0;
  for (std::size_t i = 0; i < gram.size(); ++i)
    for (std::size_t j = 0; j < gram[i].size(); ++j)
      worst = std::max(worst, std::abs(gram[i][j] - (i == j ? 1.0 : 0.0)));
  return worst;
}

void write_vtk(const DofVector& field, const std::string& name, const std::filesystem::path& path) {
  if (!field.mesh) throw InputError("write_vtk: field has no mesh");
  const Mesh& mesh = *field.mesh;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << std::setprecision(12);
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& p : mesh.vertices()) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  const int nt = mesh.num_tets();
  out << "CELLS " << nt << ' ' << 5 * nt << '\n';
  for (const auto& t : mesh.tets()) out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) out << "10\n";

  switch (field.degree) {
    case FormDegree::P1:
      out << "POINT_DATA " << mesh.num_vertices() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : field.values) out << v << '\n';
      break;
    case FormDegree::P0:
      out << "CELL_DATA " << nt << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : field.values) out << v << '\n';
      break;
    case FormDegree::NED:
    case FormDegree::RT: {
      out << "CELL_DATA " << nt << "\nVECTORS " << name << " double\n";
      const std::array<double, 4> centroid{0.25, 0.25, 0.25, 0.25};
      for (int t = 0; t < nt; ++t) {
        const Vec3 v = evaluate_vector(field, t, centroid);
        out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
      }
      break;
    }
  }
}

}  // namespace divcurl
