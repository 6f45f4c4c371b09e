#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "divcurl/decompose.hpp"
#include "divcurl/errors.hpp"
#include "divcurl/generators.hpp"
#include "divcurl/msh_io.hpp"
#include "divcurl/presets.hpp"
#include "divcurl/report.hpp"
#include "divcurl/solve.hpp"
#include "divcurl/topology.hpp"

namespace divcurl::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  std::string mesh;
  std::string coeff = "identity";
  bool coeff_given = false;
  std::string system;
  bool system_given = false;
  std::string kind;
  std::string data;
  std::string j, rho, lambda;  // per-datum overrides
  double p = 2.0;
  double tol = 1e-8;
  double solver_tol = 1e-10;
  int max_iter = 0;
  std::string out = ".";
  std::uint64_t seed = 42;
  bool no_l2 = false;
  bool flux_form = false;
  std::string trace = "h_half";
  int steps = 100;
  int samples = 200;
  bool timing = false;
  bool no_vtk = false;
};

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::string strip_file_prefix(const std::string& spec) { return starts_with(spec, "file:") ? spec.substr(5) : spec; }

std::unique_ptr<const Mesh> load_mesh(const std::string& spec) {
  if (spec.empty()) throw InputError("--mesh is required");
  const std::string path = strip_file_prefix(spec);
  if (starts_with(spec, "file:") || fs::exists(path) || path.ends_with(".msh")) {
    if (!fs::exists(path)) throw InputError("mesh file not found: " + path);
    return std::make_unique<const Mesh>(load_msh(path));
  }
  return std::make_unique<const Mesh>(generate_primitive(spec));
}

CoefficientField load_coefficient(const std::string& spec, const Mesh& mesh) {
  const std::string path = strip_file_prefix(spec);
  if (starts_with(spec, "file:") || fs::exists(path)) {
    if (!fs::exists(path)) throw InputError("coefficient file not found: " + path);
    return coefficient_from_file(path, mesh);
  }
  return coefficient_preset(spec);
}

TensorField tensor_callback(const std::string& spec) {
  if (starts_with(spec, "file:") || fs::exists(spec))
    throw InputError("analytic data needs an analytic coefficient, not a per-cell file");
  return coefficient_callback(spec);
}

Vector read_values(std::istream& in, std::size_t expected, const std::string& what) {
  Vector v;
  double x = 0.0;
  while (in >> x) v.push_back(x);
  if (!in.eof()) throw ParseError(what + ": non-numeric entry");
  if (v.size() != expected)
    throw InputError(what + ": expected " + std::to_string(expected) + " values, got " + std::to_string(v.size()));
  return v;
}

Vector read_value_file(const std::string& path, std::size_t expected, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw InputError(what + ": cannot open " + path);
  return read_values(in, expected, what);
}

// Sectioned data file: "[j]", "[rho]", "[lambda]" headers, each followed by one value per entity.
std::map<std::string, std::string> read_sections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("data file not found: " + path);
  std::map<std::string, std::string> sections;
  std::string line, current;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string::npos) throw ParseError("data file: bad section header '" + line + "'");
      current = line.substr(1, close - 1);
      if (current != "j" && current != "rho" && current != "lambda")
        throw ParseError("data file: unknown section '" + current + "'");
      continue;
    }
    if (current.empty()) throw ParseError("data file: values before the first section");
    sections[current] += line + '\n';
  }
  return sections;
}

// Applies a per-datum override: zero | one | file:<path>.
void override_values(Vector& target, const std::string& spec, const std::string& what) {
  if (spec.empty()) return;
  if (spec == "zero") {
    std::fill(target.begin(), target.end(), 0.0);
  } else if (spec == "one") {
    std::fill(target.begin(), target.end(), 1.0);
  } else if (starts_with(spec, "file:")) {
    target = read_value_file(spec.substr(5), target.size(), what);
  } else {
    throw InputError("--" + what + ": expected zero, one or file:<path>, got '" + spec + "'");
  }
}

template <class Data>
void apply_data_file(Data& d, const std::string& path) {
  auto sections = read_sections(path);
  auto fill = [&](Vector& target, const char* name) {
    auto it = sections.find(name);
    if (it == sections.end()) return;
    std::istringstream in(it->second);
    target = read_values(in, target.size(), std::string("data file [") + name + "]");
  };
  fill(d.j.values, "j");
  fill(d.rho.values, "rho");
  fill(d.lambda.values, "lambda");
}

MagnetostaticData magnetostatic_dataset(const RunConfig& cfg, const Mesh& mesh) {
  const std::string& s = cfg.data;
  MagnetostaticData d;
  if (s.empty() || s == "zero") d = zero_magnetostatic_data(mesh);
  else if (s == "mean-mismatch") d = mean_mismatch_data(mesh);
  else if (s == "radial-inverse-square") d = radial_inverse_square_data(mesh);
  else if (s == "random") d = random_magnetostatic_data(mesh, cfg.seed);
  else if (starts_with(s, "manufactured-")) {
    const auto& m = manufactured(s);
    if (m.system != "magnetostatic") throw InputError(s + " is an electric dataset");
    d = magnetostatic_data(mesh, m.u, tensor_callback(cfg.coeff));
  } else if (s == "azimuthal") d = magnetostatic_data(mesh, azimuthal_field, tensor_callback(cfg.coeff));
  else if (s == "radial") d = magnetostatic_data(mesh, radial_field, tensor_callback(cfg.coeff));
  else if (starts_with(s, "file:")) {
    d = zero_magnetostatic_data(mesh);
    apply_data_file(d, s.substr(5));
  } else throw InputError("unknown magnetostatic data '" + s + "'");
  override_values(d.j.values, cfg.j, "j");
  override_values(d.rho.values, cfg.rho, "rho");
  override_values(d.lambda.values, cfg.lambda, "lambda");
  return d;
}

ElectricData electric_dataset(const RunConfig& cfg, const Mesh& mesh) {
  const std::string& s = cfg.data;
  ElectricData d;
  if (s.empty() || s == "zero") d = zero_electric_data(mesh);
  else if (s == "poloidal-circulation") d = poloidal_circulation_data(mesh);
  else if (s == "random") d = random_electric_data(mesh, cfg.seed);
  else if (starts_with(s, "manufactured-")) {
    const auto& m = manufactured(s);
    if (m.system != "electric") throw InputError(s + " is a magnetostatic dataset");
    d = electric_data(mesh, m.u, tensor_callback(cfg.coeff));
  } else if (s == "azimuthal") d = electric_data(mesh, azimuthal_field, tensor_callback(cfg.coeff));
  else if (s == "radial") d = electric_data(mesh, radial_field, tensor_callback(cfg.coeff));
  else if (starts_with(s, "file:")) {
    d = zero_electric_data(mesh);
    apply_data_file(d, s.substr(5));
  } else throw InputError("unknown electric data '" + s + "'");
  override_values(d.j.values, cfg.j, "j");
  override_values(d.rho.values, cfg.rho, "rho");
  override_values(d.lambda.values, cfg.lambda, "lambda");
  return d;
}

long long total_iterations(const std::vector<SolveStats>& stats) {
  long long n = 0;
  for (const auto& s : stats) n += s.iterations;
  return n;
}

class Runner {
 public:
  explicit Runner(RunConfig cfg) : cfg_(std::move(cfg)) {}

  int run() {
    const auto start = std::chrono::steady_clock::now();
    report_.command = cfg_.command;
    report_.timestamp = utc_timestamp();
    mesh_ = load_mesh(cfg_.mesh);
    report_.mesh = mesh_summary(*mesh_);
    resolve_defaults();
    coeff_ = load_coefficient(cfg_.coeff, *mesh_);
    report_.coefficient = coefficient_summary(coeff_, *mesh_);

    int code = kOk;
    try {
      if (cfg_.command == "mesh-info") code = mesh_info();
      else if (cfg_.command == "check") code = check();
      else if (cfg_.command == "basis") code = basis();
      else if (cfg_.command == "solve") code = solve();
      else if (cfg_.command == "decompose") code = decompose();
      else if (cfg_.command == "friedrichs") code = friedrichs();
    } catch (const SolverError& e) {
      report_.results["error"] = Json{{"stage", e.stage()}, {"message", e.what()}, {"iterations", e.iterations()},
                                      {"residual", e.residual()}};
      finish(start);
      throw;
    }
    finish(start);
    return code;
  }

 private:
  void finish(std::chrono::steady_clock::time_point start) {
    if (cfg_.timing)
      report_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report_.write(fs::path(cfg_.out) / "report.json");
  }

  void resolve_defaults() {
    if (starts_with(cfg_.data, "manufactured-")) {
      const auto& m = manufactured(cfg_.data);
      if (!cfg_.coeff_given) cfg_.coeff = m.coefficient;
      if (!cfg_.system_given && (cfg_.command == "solve" || cfg_.command == "check")) cfg_.system = m.system;
    }
    if (cfg_.system.empty()) cfg_.system = "magnetostatic";
    if (cfg_.kind.empty()) cfg_.kind = cfg_.command == "friedrichs" ? "normal" : "magnetic";
  }

  SolverConfig solver() const {
    SolverConfig s;
    s.rel_tol = cfg_.solver_tol;
    s.max_iter = cfg_.max_iter;
    return s;
  }

  void export_field(const DofVector& f, const std::string& name) {
    if (cfg_.no_vtk || f.size() == 0) return;
    write_vtk(f, name, fs::path(cfg_.out) / (name + ".vtk"));
    report_.results["fields"].push_back(name + ".vtk");
  }

  bool magnetic_kind() const {
    if (cfg_.kind == "magnetic") return true;
    if (cfg_.kind == "electric") return false;
    throw InputError("--kind must be magnetic or electric for " + cfg_.command);
  }

  int mesh_info() {
    const Mesh& m = *mesh_;
    const auto coh = cohomology_check(m);
    const auto [n1, n2] = m.betti();
    report_.results = Json{
        {"entities",
         {{"vertices", m.num_vertices()},
          {"edges", m.num_edges()},
          {"faces", m.num_faces()},
          {"cells", m.num_tets()},
          {"boundary_faces", m.boundary_faces().size()}}},
        {"boundary_components", m.num_boundary_components()},
        {"cuts", m.num_cuts()},
        {"quality", quality_json(mesh_quality(m))},
        {"cohomology", {{"b1_rank", coh.b1_rank}, {"b1_euler", coh.b1_euler}, {"b1_cut_open", coh.b1_cut_open}}}};
    report_.residuals["betti_mismatch"] = std::abs(coh.b1_rank - n2) + std::abs(coh.b1_euler - n2);
    (void)n1;
    return kOk;
  }

  CompatReport run_check() {
    if (cfg_.system == "magnetostatic") {
      const auto d = magnetostatic_dataset(cfg_, *mesh_);
      return check_magnetostatic(d.j, d.rho, d.lambda, *mesh_, cfg_.tol);
    }
    const auto d = electric_dataset(cfg_, *mesh_);
    return check_electric(d.j, d.rho, d.lambda, *mesh_, coeff_, cfg_.tol);
  }

  int report_compat(const CompatReport& rep) {
    report_.results["compat"] = to_json(rep);
    for (const auto& c : rep.conditions) report_.residuals[c.name] = c.residual;
    if (rep.pass) return kOk;
    std::string names;
    for (const auto& n : rep.failing()) names += (names.empty() ? "" : ", ") + n;
    std::cerr << "divcurl: incompatible data: " << names << '\n';
    return kCompat;
  }

  int check() {
    report_.results["system"] = cfg_.system;
    report_.results["data"] = cfg_.data.empty() ? "zero" : cfg_.data;
    return report_compat(run_check());
  }

  int basis() {
    const bool magnetic = magnetic_kind();
    const auto b = magnetic ? magnetic_basis(*mesh_, coeff_, solver()) : electric_basis(*mesh_, coeff_, solver());
    report_.results = to_json(b);
    report_.residuals["flux_gram_defect"] = identity_defect(b.normalization);
    if (magnetic) report_.residuals["gradient_relation"] = b.gradient_relation;
    report_.iterations = total_iterations(b.stats);
    for (int k = 0; k < b.dimension(); ++k) export_field(b.fields[k], "basis_" + std::to_string(k + 1));
    return kOk;
  }

  // Relative L2 error of the family member closest (in the mass norm) to the interpolant of `exact`.
  static double family_error(const SolutionBundle& s, const VectorField& exact) {
    const Mesh& mesh = *s.u0.mesh;
    const DofVector target = interpolate(mesh, s.u0.degree, exact);
    const SparseMatrix mass = mass_matrix(mesh, s.u0.degree);
    auto inner = [&](const Vector& a, const Vector& b) { return vec::dot(a, mass * b); };
    const Vector diff = vec::add(target.values, s.u0.values, -1.0);
    DofVector best = s.u0;
    std::vector<Vector> ortho;
    for (const auto& f : s.basis.fields) {
      Vector q = f.values;
      for (const auto& o : ortho) vec::axpy(-inner(o, q), o, q);
      const double n = std::sqrt(inner(q, q));
      if (n > 0) ortho.push_back(vec::scaled(q, 1.0 / n));
    }
    for (const auto& o : ortho) vec::axpy(inner(o, diff), o, best.values);
    return l2_error(best, exact) / (l2_norm(mesh, exact) + kResidualFloor);
  }

  int solve() {
    const bool magnetic = cfg_.system == "magnetostatic";
    report_.results["system"] = cfg_.system;
    report_.results["data"] = cfg_.data.empty() ? "zero" : cfg_.data;
    SolveOptions opts;
    opts.solver = solver();
    opts.compat_tol = cfg_.tol;

    SolutionBundle s;
    Diagnostics shifted;
    if (magnetic) {
      const auto d = magnetostatic_dataset(cfg_, *mesh_);
      const auto rep = check_magnetostatic(d.j, d.rho, d.lambda, *mesh_, cfg_.tol);
      if (const int code = report_compat(rep); code != kOk) return code;
      s = solve_magnetostatic(d.j, d.rho, d.lambda, coeff_, *mesh_, opts);
      shifted = magnetostatic_diagnostics(shifted_member(s), d.j, d.rho, d.lambda, coeff_);
    } else {
      const auto d = electric_dataset(cfg_, *mesh_);
      const auto rep = check_electric(d.j, d.rho, d.lambda, *mesh_, coeff_, cfg_.tol);
      if (const int code = report_compat(rep); code != kOk) return code;
      s = solve_electric(d.j, d.rho, d.lambda, coeff_, *mesh_, opts);
      shifted = electric_diagnostics(shifted_member(s), d.j, d.rho, d.lambda, coeff_);
    }

    const Diagnostics& dg = s.diagnostics;
    const double invariance = std::max({std::abs(shifted.curl_abs - dg.curl_abs), std::abs(shifted.div_abs - dg.div_abs),
                                        std::abs(shifted.trace_abs - dg.trace_abs)});
    auto& r = report_.results;
    r["converged"] = s.converged;
    r["family_dimension"] = s.basis.dimension();
    r["u0_norm"] = l2_norm(s.u0);
    r["diagnostics"] = to_json(dg);
    r["family_invariance"] = invariance;
    r["potential_certificates"] = Json::object();
    for (const auto& [k, v] : s.potential.certificates) r["potential_certificates"][k] = std::isfinite(v) ? Json(v) : Json();
    if (starts_with(cfg_.data, "manufactured-")) {
      const auto& m = manufactured(cfg_.data);
      r["reference"] = Json{{"name", m.name},
                            {"relative_l2_error", l2_error(s.u0, m.u) / (l2_norm(*mesh_, m.u) + kResidualFloor)},
                            {"family_relative_error", family_error(s, m.u)}};
    }
    Json st = Json::object();
    long long iters = 0;
    for (const auto& [name, stats] : s.stats) {
      st[name] = Json{{"iterations", stats.iterations}, {"relative_residual", stats.relative_residual},
                      {"converged", stats.converged}};
      iters += stats.iterations;
    }
    r["solves"] = st;
    report_.iterations = iters;
    report_.residuals["curl"] = dg.curl;
    report_.residuals["div"] = dg.div;
    report_.residuals["trace"] = dg.trace;
    report_.residuals["family_invariance"] = invariance;

    export_field(s.u0, "u0");
    export_field(s.scalar_potential, "scalar_potential");
    export_field(s.potential.field, "vector_potential");
    for (int k = 0; k < s.basis.dimension(); ++k) export_field(s.basis.fields[k], "basis_" + std::to_string(k + 1));
    if (!s.converged) {
      std::cerr << "divcurl: solve did not converge\n";
      return kSolver;
    }
    return kOk;
  }

  static DofVector shifted_member(const SolutionBundle& s) {
    DofVector u = s.u0;
    for (const auto& f : s.basis.fields) vec::axpy(1.0, f.values, u.values);
    return u;
  }

  DofVector decomposition_input(bool magnetic) {
    const Mesh& mesh = *mesh_;
    const FormDegree degree = magnetic ? FormDegree::RT : FormDegree::NED;
    const std::string s = cfg_.data.empty() ? "random" : cfg_.data;
    if (s == "random") return random_dofs(mesh, degree, cfg_.seed);
    if (s == "zero") return DofVector(mesh, degree);
    if (starts_with(s, "basis")) {
      int k = 1;
      if (starts_with(s, "basis:")) {
        try {
          k = std::stoi(s.substr(6));
        } catch (const std::logic_error&) {
          throw InputError("bad basis index in '" + s + "'");
        }
      }
      const auto b = magnetic ? magnetic_basis(mesh, coeff_, solver()) : electric_basis(mesh, coeff_, solver());
      if (k < 1 || k > b.dimension())
        throw InputError("basis index " + std::to_string(k) + " out of range (dimension " +
                         std::to_string(b.dimension()) + ")");
      return b.fields[k - 1];
    }
    if (starts_with(s, "manufactured-")) return interpolate(mesh, degree, manufactured(s).u);
    if (s == "azimuthal") return interpolate(mesh, degree, VectorField(azimuthal_field));
    if (s == "radial") return interpolate(mesh, degree, VectorField(radial_field));
    if (starts_with(s, "file:"))
      return DofVector(mesh, degree, read_value_file(s.substr(5), entity_count(mesh, degree), "field file"));
    throw InputError("unknown decomposition input '" + s + "'");
  }

  int decompose() {
    const bool magnetic = magnetic_kind();
    const DofVector u = decomposition_input(magnetic);
    const auto d = magnetic ? hw_magnetic(u, coeff_, *mesh_, solver()) : hw_electric(u, coeff_, *mesh_, solver());
    report_.results = to_json(d);
    report_.results["input"] = cfg_.data.empty() ? "random" : cfg_.data;
    report_.residuals["reconstruction"] = d.reconstruction;
    for (const auto& [k, v] : d.pairings) report_.residuals["pairing_" + k] = v;
    report_.iterations = total_iterations(d.stats);
    export_field(d.h, "harmonic");
    export_field(d.gradient, "gradient");
    export_field(d.rotational, "rotational");
    export_field(d.chi, "chi");
    export_field(d.w, "w");
    return kOk;
  }

  int friedrichs() {
    FriedrichsKind kind;
    if (cfg_.kind == "normal") kind = FriedrichsKind::normal;
    else if (cfg_.kind == "tangential") kind = FriedrichsKind::tangential;
    else throw InputError("--kind must be normal or tangential for friedrichs");
    FriedrichsOptions opts;
    opts.p = cfg_.p;
    opts.include_l2 = !cfg_.no_l2;
    opts.flux_form = cfg_.flux_form;
    opts.trace_norm = cfg_.trace == "l2" ? TraceNorm::l2 : TraceNorm::h_half;
    opts.power_steps = cfg_.steps;
    opts.samples = cfg_.samples;
    opts.seed = cfg_.seed;
    opts.solver.max_iter = cfg_.max_iter;
    const auto est = friedrichs_constant(*mesh_, coeff_, kind, opts);
    report_.results = to_json(est);
    report_.results["p"] = cfg_.p;
    report_.results["trace_norm"] = cfg_.trace;
    report_.residuals["rayleigh_change"] = est.rayleigh_change;
    report_.iterations = est.steps;
    export_field(est.extremal, "extremal");
    return kOk;
  }

  RunConfig cfg_;
  std::unique_ptr<const Mesh> mesh_;
  CoefficientField coeff_ = CoefficientField::identity();
  Report report_;
};

void add_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--mesh", cfg.mesh, "mesh file (.msh) or primitive: cube:n | shell:rin,rout,k | torus:R,r,k[,cut]");
  sub->add_option("--coeff", cfg.coeff, "identity | diagonal(a,b,c) | rotated | tilted | smooth | random:<seed> | file:<path>");
  sub->add_option("--system", cfg.system, "magnetostatic | electric")
      ->check(CLI::IsMember({"magnetostatic", "electric"}));
  sub->add_option("--kind", cfg.kind, "magnetic | electric | normal | tangential")
      ->check(CLI::IsMember({"magnetic", "electric", "normal", "tangential"}));
  sub->add_option("--data", cfg.data, "dataset or field preset, or file:<path>");
  sub->add_option("--j", cfg.j, "override J: zero | one | file:<path>");
  sub->add_option("--rho", cfg.rho, "override rho: zero | one | file:<path>");
  sub->add_option("--lambda", cfg.lambda, "override the boundary datum: zero | one | file:<path>");
  sub->add_option("--p", cfg.p, "Lebesgue exponent for friedrichs")->check(CLI::PositiveNumber);
  sub->add_option("--tol", cfg.tol, "compatibility tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--solver-tol", cfg.solver_tol, "relative tolerance of the iterative solvers")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-iter", cfg.max_iter, "iteration cap of the iterative solvers (0: 10 n)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out", cfg.out, "output directory");
  sub->add_option("--seed", cfg.seed, "seed for random data and sampling");
  sub->add_flag("--no-l2", cfg.no_l2, "friedrichs: drop the L2 term from the right-hand side");
  sub->add_flag("--flux-form", cfg.flux_form, "friedrichs: use squared fluxes instead of the L2 term");
  sub->add_option("--trace", cfg.trace, "friedrichs trace norm: h_half | l2")->check(CLI::IsMember({"h_half", "l2"}));
  sub->add_option("--steps", cfg.steps, "friedrichs power steps")->check(CLI::PositiveNumber);
  sub->add_option("--samples", cfg.samples, "friedrichs samples for p != 2")->check(CLI::PositiveNumber);
  sub->add_flag("--timing", cfg.timing, "record wall time in stats.seconds");
  sub->add_flag("--no-vtk", cfg.no_vtk, "skip VTK field export");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Discrete div-curl systems on tetrahedral meshes", "divcurl"};
  app.set_config("--config", "", "INI-style config; [command] sections hold the same keys as the flags");
  app.require_subcommand(1, 1);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"mesh-info", "mesh statistics, quality and topology"},
      {"check", "compatibility conditions of a dataset"},
      {"basis", "harmonic field basis"},
      {"solve", "solve a div-curl system"},
      {"decompose", "orthogonal decomposition of a field"},
      {"friedrichs", "discrete Friedrichs constant"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_options(sub, cfg);
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "divcurl: " << e.what() << '\n';
    return kInput;
  }
  for (const auto* sub : app.get_subcommands()) {
    cfg.coeff_given = sub->get_option("--coeff")->count() > 0;
    cfg.system_given = sub->get_option("--system")->count() > 0;
  }

  try {
    return Runner(cfg).run();
  } catch (const CompatibilityError& e) {
    std::cerr << "divcurl: " << e.what() << '\n';
    return kCompat;
  } catch (const SolverError& e) {
    std::cerr << "divcurl: solver failure in " << e.what() << '\n';
    return kSolver;
  } catch (const InputError& e) {
    std::cerr << "divcurl: input error: " << e.what() << '\n';
    return kInput;
  } catch (const DimensionError& e) {
    std::cerr << "divcurl: input error: " << e.what() << '\n';
    return kInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "divcurl: input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "divcurl: internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace divcurl::cli
