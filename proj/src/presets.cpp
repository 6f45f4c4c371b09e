#include "divcurl/presets.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "divcurl/errors.hpp"

namespace divcurl {

namespace {

// Portable uniform draws: mt19937_64 output is fully specified, the std distributions are not.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a[i] * b[j];
  return m;
}

Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m[i][j] += a[i][k] * b[k][j];
  return m;
}

Mat3 transpose(const Mat3& a) {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a[j][i];
  return m;
}

Mat3 diag(double a, double b, double c) {
  Mat3 m{};
  m[0][0] = a;
  m[1][1] = b;
  m[2][2] = c;
  return m;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad number '" + item + "' in '" + s + "'");
    }
  }
  return out;
}

TensorField random_field(std::uint64_t seed) {
  Uniform draw(seed);
  std::array<std::array<double, 3>, 3> base{}, amp{}, phase{};
  std::array<std::array<Vec3, 3>, 3> freq{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      base[i][j] = draw(-0.8, 0.8);
      amp[i][j] = draw(0.0, 0.4);
      phase[i][j] = draw(0.0, 2.0 * std::numbers::pi);
      freq[i][j] = {draw(-2.0, 2.0), draw(-2.0, 2.0), draw(-2.0, 2.0)};
    }
  return [=](const Point& x) {
    Mat3 b{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b[i][j] = base[i][j] + amp[i][j] * std::sin(dot(freq[i][j], x) + phase[i][j]);
    Mat3 a = matmul(transpose(b), b);
    for (int i = 0; i < 3; ++i) a[i][i] += 0.5;
    return a;
  };
}

}  // namespace

TensorField coefficient_callback(const std::string& spec) {
  if (spec == "identity" || spec.empty()) return [](const Point&) { return identity3(); };
  if (spec == "rotated") {
    const double s = 1.0 / std::sqrt(3.0);
    Mat3 a = identity3();
    const Mat3 dd = outer({s, s, s}, {s, s, s});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a[i][j] += 0.5 * dd[i][j];
    return [a](const Point&) { return a; };
  }
  if (spec == "tilted") {
    const double c = std::cos(std::numbers::pi / 6), s = std::sin(std::numbers::pi / 6);
    Mat3 r{};
    r[0][0] = 1.0;
    r[1][1] = c;
    r[1][2] = -s;
    r[2][1] = s;
    r[2][2] = c;
    const Mat3 a = matmul(matmul(r, diag(1, 1, 2)), transpose(r));
    return [a](const Point&) { return a; };
  }
  if (spec == "smooth") {
    return [](const Point& x) {
      Mat3 a = diag(1.5 + 0.5 * std::sin(x[0] + x[1]), 1.0 + 0.5 * x[2] * x[2], 2.0 + 0.5 * std::cos(x[1]));
      a[0][1] = a[1][0] = 0.3 * std::cos(x[2]);
      return a;
    };
  }
  if (spec.rfind("diagonal(", 0) == 0 && spec.back() == ')') {
    const auto v = parse_numbers(spec.substr(9, spec.size() - 10));
    if (v.size() != 3) throw InputError("diagonal(a,b,c) needs three entries");
    const Mat3 a = diag(v[0], v[1], v[2]);
    return [a](const Point&) { return a; };
  }
  if (spec.rfind("random:", 0) == 0) {
    const auto v = parse_numbers(spec.substr(7));
    if (v.size() != 1 || v[0] < 0) throw InputError("random:<seed> needs a non-negative seed");
    return random_field(static_cast<std::uint64_t>(v[0]));
  }
  throw InputError("unknown coefficient '" + spec + "'");
}

CoefficientField coefficient_preset(const std::string& spec) {
  if (spec == "identity" || spec.empty()) return CoefficientField::identity();
  auto f = coefficient_callback(spec);
  if (spec == "rotated" || spec == "tilted" || spec.rfind("diagonal(", 0) == 0)
    return CoefficientField::constant(f({0, 0, 0}), spec);
  return CoefficientField::analytic(std::move(f), spec);
}

CoefficientField coefficient_from_file(const std::string& path, const Mesh& mesh) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open coefficient file '" + path + "'");
  std::vector<Mat3> cells;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    if (v.empty()) continue;
    Mat3 a{};
    if (v.size() == 9) {
      for (int i = 0; i < 9; ++i) a[i / 3][i % 3] = v[i];
    } else if (v.size() == 6) {
      a = diag(v[0], v[1], v[2]);
      a[0][1] = a[1][0] = v[3];
      a[0][2] = a[2][0] = v[4];
      a[1][2] = a[2][1] = v[5];
    } else {
      throw ParseError("coefficient file '" + path + "': expected 6 or 9 numbers per line");
    }
    cells.push_back(a);
  }
  if (static_cast<int>(cells.size()) != mesh.num_tets())
    throw InputError("coefficient file has " + std::to_string(cells.size()) + " cells, mesh has " +
                     std::to_string(mesh.num_tets()));
  auto c = CoefficientField::per_cell(std::move(cells), "per-cell");
  c.bounds(mesh);
  return c;
}

namespace {

DofVector cell_divergence(const DofVector& rt) {
  const Mesh& mesh = *rt.mesh;
  Vector d = incidence(mesh, Incidence::div) * rt.values;
  for (int t = 0; t < mesh.num_tets(); ++t) d[t] /= mesh.volume(t);
  return DofVector(mesh, FormDegree::P0, std::move(d));
}

}  // namespace

MagnetostaticData magnetostatic_data(const Mesh& mesh, const VectorField& u, const TensorField& sigma) {
  const DofVector su = interpolate(mesh, FormDegree::NED, VectorField([&](const Point& x) { return sigma(x) * u(x); }));
  const DofVector ur = interpolate(mesh, FormDegree::RT, u);
  MagnetostaticData d;
  d.j = DofVector(mesh, FormDegree::RT, incidence(mesh, Incidence::curl) * su.values);
  d.rho = cell_divergence(ur);
  d.lambda = trace_normal(ur);
  return d;
}

ElectricData electric_data(const Mesh& mesh, const VectorField& u, const TensorField& epsilon) {
  const DofVector un = interpolate(mesh, FormDegree::NED, u);
  const DofVector eu = interpolate(mesh, FormDegree::RT, VectorField([&](const Point& x) { return epsilon(x) * u(x); }));
  ElectricData d;
  d.j = DofVector(mesh, FormDegree::RT, incidence(mesh, Incidence::curl) * un.values);
  d.rho = cell_divergence(eu);
  d.lambda = trace_tangential(un);
  return d;
}

MagnetostaticData zero_magnetostatic_data(const Mesh& mesh) {
  return {DofVector(mesh, FormDegree::RT), DofVector(mesh, FormDegree::P0), zero_boundary_face_field(mesh)};
}

ElectricData zero_electric_data(const Mesh& mesh) {
  return {DofVector(mesh, FormDegree::RT), DofVector(mesh, FormDegree::P0), zero_boundary_edge_field(mesh)};
}

const std::vector<Manufactured>& manufactured_solutions() {
  static const std::vector<Manufactured> list{
      {"manufactured-1", "magnetostatic", "identity", [](const Point& x) { return Vec3{2 * x[0], -2 * x[1], 0.0}; }},
      {"manufactured-2", "magnetostatic", "rotated",
       [](const Point& x) { return Vec3{x[1] * x[1] + x[0], x[2] * x[2], x[0] * x[0] - x[1] * x[2]}; }},
      {"manufactured-3", "magnetostatic", "smooth",
       [](const Point& x) { return Vec3{std::cos(x[1]), std::sin(x[2]), x[0] * x[1]}; }},
      {"manufactured-4", "electric", "rotated",
       [](const Point& x) {
         return Vec3{std::cos(x[0]) * std::sinh(x[1]), std::sin(x[0]) * std::cosh(x[1]), 0.0};
       }},
      {"manufactured-5", "electric", "diagonal(2,1,3)",
       [](const Point& x) { return Vec3{-x[1] * x[2], x[0] * x[2], x[0] * x[1] * x[1]}; }},
      {"manufactured-6", "electric", "smooth",
       [](const Point& x) { return Vec3{std::sin(x[1]), x[2] * x[2], std::cos(x[0])}; }},
  };
  return list;
}

const Manufactured& manufactured(const std::string& name) {
  for (const auto& m : manufactured_solutions())
    if (m.name == name) return m;
  throw InputError("unknown manufactured solution '" + name + "'");
}

MagnetostaticData mean_mismatch_data(const Mesh& mesh) {
  auto d = zero_magnetostatic_data(mesh);
  std::fill(d.rho.values.begin(), d.rho.values.end(), 1.0);
  return d;
}

double solid_angle(const Point& a, const Point& b, const Point& c) {
  const double la = norm(a), lb = norm(b), lc = norm(c);
  const double num = dot(a, cross(b, c));
  const double den = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
  return 2.0 * std::atan2(num, den);
}

MagnetostaticData radial_inverse_square_data(const Mesh& mesh) {
  auto d = zero_magnetostatic_data(mesh);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& v = mesh.faces()[f];
    d.j.values[f] = -solid_angle(mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2]));
  }
  return d;
}

ElectricData poloidal_circulation_data(const Mesh& mesh, double major_radius) {
  auto d = zero_electric_data(mesh);
  auto theta = [&](const Point& x) { return std::atan2(x[2], std::hypot(x[0], x[1]) - major_radius); };
  for (std::size_t b = 0; b < mesh.boundary_edges().size(); ++b) {
    const auto& e = mesh.edges()[mesh.boundary_edges()[b]];
    double dt = theta(mesh.vertex(e[1])) - theta(mesh.vertex(e[0]));
    if (dt > std::numbers::pi) dt -= 2.0 * std::numbers::pi;
    if (dt < -std::numbers::pi) dt += 2.0 * std::numbers::pi;
    d.lambda.values[b] = dt / (2.0 * std::numbers::pi);
  }
  return d;
}

DofVector random_dofs(const Mesh& mesh, FormDegree degree, std::uint64_t seed) {
  Uniform draw(seed);
  DofVector v(mesh, degree);
  for (double& x : v.values) x = draw(-1.0, 1.0);
  return v;
}

MagnetostaticData random_magnetostatic_data(const Mesh& mesh, std::uint64_t seed) {
  const DofVector y = random_dofs(mesh, FormDegree::NED, seed);
  const DofVector r = random_dofs(mesh, FormDegree::RT, seed + 0x9e3779b97f4a7c15ULL);
  MagnetostaticData d;
  d.j = DofVector(mesh, FormDegree::RT, incidence(mesh, Incidence::curl) * y.values);
  d.rho = cell_divergence(r);
  d.lambda = trace_normal(r);
  return d;
}

ElectricData random_electric_data(const Mesh& mesh, std::uint64_t seed) {
  const DofVector y = random_dofs(mesh, FormDegree::NED, seed);
  ElectricData d;
  d.j = DofVector(mesh, FormDegree::RT, incidence(mesh, Incidence::curl) * y.values);
  d.rho = random_dofs(mesh, FormDegree::P0, seed + 0x9e3779b97f4a7c15ULL);
  d.lambda = trace_tangential(y);
  return d;
}

Vec3 azimuthal_field(const Point& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  return {-x[1] / r2, x[0] / r2, 0.0};
}

Vec3 radial_field(const Point& x) {
  const double r = norm(x);
  return (1.0 / (r * r * r)) * x;
}

}  // namespace divcurl
