#include "divcurl/msh_io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>

#include "divcurl/errors.hpp"

namespace divcurl {

namespace {

std::string next_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  return {};
}

void expect(std::istream& in, const std::string& tag) {
  if (next_line(in) != tag) throw ParseError("expected " + tag);
}

int parse_named_index(const std::string& name, const std::string& prefix) {
  if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return -1;
  for (std::size_t i = prefix.size(); i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return -1;
  return std::stoi(name.substr(prefix.size()));
}

}  // namespace

Mesh read_msh(std::istream& in) {
  std::map<int, std::string> names;  // physical tag -> name
  std::unordered_map<long, int> node_index;
  MeshInput mi;
  std::map<int, CutInput> cuts;
  bool have_format = false, have_nodes = false, have_elements = false;
  struct Tri {
    std::array<int, 3> v;
    int phys;
  };
  std::vector<Tri> triangles;

  for (std::string line = next_line(in); !line.empty(); line = next_line(in)) {
    if (line == "$MeshFormat") {
      std::istringstream ss(next_line(in));
      std::string version;
      int file_type = -1;
      ss >> version >> file_type;
      if (version.rfind("2.2", 0) != 0 || file_type != 0) throw ParseError("only MSH 2.2 ASCII is supported");
      expect(in, "$EndMeshFormat");
      have_format = true;
    } else if (line == "$PhysicalNames") {
      int n = 0;
      if (!(std::istringstream(next_line(in)) >> n)) throw ParseError("bad $PhysicalNames count");
      for (int i = 0; i < n; ++i) {
        std::istringstream ss(next_line(in));
        int dim = 0, tag = 0;
        std::string name;
        if (!(ss >> dim >> tag)) throw ParseError("bad physical name entry");
        std::getline(ss, name);
        const auto q0 = name.find('"');
        const auto q1 = name.rfind('"');
        if (q0 == std::string::npos || q1 == q0) throw ParseError("physical name must be quoted");
        names[tag] = name.substr(q0 + 1, q1 - q0 - 1);
      }
      expect(in, "$EndPhysicalNames");
    } else if (line == "$Nodes") {
      int n = 0;
      if (!(std::istringstream(next_line(in)) >> n) || n < 0) throw ParseError("bad $Nodes count");
      mi.vertices.reserve(n);
      for (int i = 0; i < n; ++i) {
        std::istringstream ss(next_line(in));
        long id = 0;
        Point p;
        if (!(ss >> id >> p[0] >> p[1] >> p[2])) throw ParseError("bad node line");
        if (!node_index.emplace(id, static_cast<int>(mi.vertices.size())).second) throw ParseError("duplicate node id");
        mi.vertices.push_back(p);
      }
      expect(in, "$EndNodes");
      have_nodes = true;
    } else if (line == "$Elements") {
      if (!have_nodes) throw ParseError("$Elements before $Nodes");
      int n = 0;
      if (!(std::istringstream(next_line(in)) >> n) || n < 0) throw ParseError("bad $Elements count");
      for (int i = 0; i < n; ++i) {
        std::istringstream ss(next_line(in));
        long id = 0;
        int type = 0, ntags = 0;
        if (!(ss >> id >> type >> ntags)) throw ParseError("bad element line");
        std::vector<int> tags(ntags);
        for (int& t : tags)
          if (!(ss >> t)) throw ParseError("bad element tags");
        const int phys = ntags > 0 ? tags[0] : 0;
        auto node = [&]() {
          long v = 0;
          if (!(ss >> v)) throw ParseError("bad element node list");
          auto it = node_index.find(v);
          if (it == node_index.end()) throw ParseError("element references unknown node");
          return it->second;
        };
        if (type == 4) {
          std::array<int, 4> t{};
          for (int& v : t) v = node();
          mi.tets.push_back(t);
        } else if (type == 2) {
          Tri tri{};
          for (int& v : tri.v) v = node();
          tri.phys = phys;
          triangles.push_back(tri);
        }
        // other element types (points, lines) carry no information for this model
      }
      expect(in, "$EndElements");
      have_elements = true;
    } else if (!line.empty() && line[0] == '$') {
      // skip unknown sections
      const std::string end = "$End" + line.substr(1);
      std::string l;
      do {
        l = next_line(in);
        if (l.empty()) throw ParseError("unterminated section " + line);
      } while (l != end);
    } else {
      throw ParseError("unexpected content: " + line);
    }
  }
  if (!have_format) throw ParseError("missing $MeshFormat section");
  if (!have_nodes) throw ParseError("missing $Nodes section");
  if (!have_elements) throw ParseError("missing $Elements section");

  for (const auto& tri : triangles) {
    auto it = names.find(tri.phys);
    if (it == names.end()) throw TagError("triangle without a named physical group");
    const int gamma = parse_named_index(it->second, "gamma");
    const int sigma = parse_named_index(it->second, "sigma");
    if (gamma >= 0) {
      mi.boundary_triangles.push_back(tri.v);
      mi.boundary_tags.push_back(gamma);
    } else if (sigma >= 1) {
      cuts[sigma].triangles.push_back(tri.v);
    } else {
      throw TagError("unrecognised surface physical name '" + it->second + "'");
    }
  }
  if (mi.boundary_triangles.empty()) throw TagError("missing gamma0");
  int expected = 1;
  for (auto& [j, cut] : cuts) {
    if (j != expected++) throw TagError("sigma tags are not contiguous from sigma1");
    mi.cuts.push_back(std::move(cut));
  }
  return Mesh(std::move(mi));
}

Mesh load_msh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mesh file " + path.string());
  return read_msh(in);
}

void write_msh(const Mesh& mesh, std::ostream& out) {
  const int ncomp = mesh.num_boundary_components();
  const int ncut = mesh.num_cuts();
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$PhysicalNames\n" << (1 + ncomp + ncut) << "\n";
  out << "3 1 \"domain\"\n";
  for (int i = 0; i < ncomp; ++i) out << "2 " << (100 + i) << " \"gamma" << i << "\"\n";
  for (int j = 1; j <= ncut; ++j) out << "2 " << (200 + j) << " \"sigma" << j << "\"\n";
  out << "$EndPhysicalNames\n";
  out << "$Nodes\n" << mesh.num_vertices() << "\n" << std::setprecision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& p = mesh.vertex(v);
    out << (v + 1) << ' ' << p[0] << ' ' << p[1] << ' ' << p[2] << "\n";
  }
  out << "$EndNodes\n";
  std::size_t count = mesh.boundary_faces().size() + static_cast<std::size_t>(mesh.num_tets());
  for (const auto& c : mesh.cuts()) count += c.faces.size();
  out << "$Elements\n" << count << "\n";
  long id = 1;
  for (int i = 0; i < ncomp; ++i)
    for (int f : mesh.component_faces(i)) {
      const auto& v = mesh.faces()[f];
      out << id++ << " 2 2 " << (100 + i) << ' ' << (100 + i) << ' ' << v[0] + 1 << ' ' << v[1] + 1 << ' ' << v[2] + 1 << "\n";
    }
  for (const auto& c : mesh.cuts())
    for (std::size_t k = 0; k < c.faces.size(); ++k) {
      auto v = mesh.faces()[c.faces[k]];
      if (c.face_sign[k] < 0) std::swap(v[1], v[2]);
      out << id++ << " 2 2 " << (200 + c.id) << ' ' << (200 + c.id) << ' ' << v[0] + 1 << ' ' << v[1] + 1 << ' ' << v[2] + 1
          << "\n";
    }
  for (const auto& t : mesh.tets())
    out << id++ << " 4 2 1 1 " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << ' ' << t[3] + 1 << "\n";
  out << "$EndElements\n";
}

void write_msh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write mesh file " + path.string());
  write_msh(mesh, out);
}

}  // namespace divcurl
