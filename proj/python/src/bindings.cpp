#include <filesystem>
#include <memory>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "divcurl/errors.hpp"
#include "divcurl/generators.hpp"
#include "divcurl/msh_io.hpp"
#include "divcurl/presets.hpp"
#include "divcurl/report.hpp"

namespace py = pybind11;
using namespace divcurl;

namespace {

using MeshPtr = std::shared_ptr<Mesh>;

MeshPtr load(const std::string& spec) {
  const std::string path = spec.starts_with("file:") ? spec.substr(5) : spec;
  if (spec.starts_with("file:") || std::filesystem::exists(path) || path.ends_with(".msh"))
    return std::make_shared<Mesh>(load_msh(path));
  return std::make_shared<Mesh>(generate_primitive(spec));
}

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::array_t<double> to_array(const Vector& v) { return py::array_t<double>(v.size(), v.data()); }

FormDegree degree_of(const std::string& s) {
  if (s == "P1") return FormDegree::P1;
  if (s == "NED") return FormDegree::NED;
  if (s == "RT") return FormDegree::RT;
  if (s == "P0") return FormDegree::P0;
  throw InputError("unknown form degree '" + s + "'");
}

bool is_magnetic(const std::string& kind) {
  if (kind == "magnetic") return true;
  if (kind == "electric") return false;
  throw InputError("kind must be magnetic or electric");
}

py::dict basis(const MeshPtr& m, const std::string& kind, const std::string& coeff) {
  const auto c = coefficient_preset(coeff);
  const auto b = is_magnetic(kind) ? magnetic_basis(*m, c) : electric_basis(*m, c);
  py::list fields;
  for (const auto& f : b.fields) fields.append(to_array(f.values));
  py::dict out;
  out["report"] = to_py(to_json(b));
  out["fields"] = fields;
  return out;
}

py::dict decompose(const MeshPtr& m, const std::string& kind, py::array_t<double, py::array::c_style> values,
                   const std::string& coeff) {
  const bool magnetic = is_magnetic(kind);
  const FormDegree d = magnetic ? FormDegree::RT : FormDegree::NED;
  if (values.ndim() != 1 || values.shape(0) != entity_count(*m, d))
    throw DimensionError("field has the wrong number of degrees of freedom");
  const DofVector u(*m, d, Vector(values.data(), values.data() + values.shape(0)));
  const auto c = coefficient_preset(coeff);
  const auto r = magnetic ? hw_magnetic(u, c, *m) : hw_electric(u, c, *m);
  py::dict out;
  out["report"] = to_py(to_json(r));
  out["h"] = to_array(r.h.values);
  out["gradient"] = to_array(r.gradient.values);
  out["rotational"] = to_array(r.rotational.values);
  return out;
}

py::object friedrichs(const MeshPtr& m, const std::string& kind, const std::string& coeff, bool include_l2) {
  FriedrichsOptions opts;
  opts.include_l2 = include_l2;
  const FriedrichsKind k = kind == "normal" ? FriedrichsKind::normal : FriedrichsKind::tangential;
  if (kind != "normal" && kind != "tangential") throw InputError("kind must be normal or tangential");
  return to_py(to_json(friedrichs_constant(*m, coefficient_preset(coeff), k, opts)));
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Whitney-form div-curl solvers";

  auto base = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(mod, "InputError", base.ptr());
  py::register_exception<SolverError>(mod, "SolverError", base.ptr());
  py::register_exception<CompatibilityError>(mod, "CompatibilityError", base.ptr());
  py::register_exception<DimensionError>(mod, "DimensionError", base.ptr());

  py::class_<Mesh, MeshPtr>(mod, "Mesh")
      .def(py::init(&load), py::arg("spec"), "Primitive spec (cube:4, shell:1,2,0, torus:2,0.5,0,cut) or .msh path.")
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_edges", &Mesh::num_edges)
      .def_property_readonly("num_faces", &Mesh::num_faces)
      .def_property_readonly("num_tets", &Mesh::num_tets)
      .def_property_readonly("betti", &Mesh::betti)
      .def("summary", [](const Mesh& m) { return to_py(mesh_summary(m)); })
      .def("__repr__", [](const Mesh& m) {
        return "<Mesh " + std::to_string(m.num_tets()) + " tets, " + std::to_string(m.num_vertices()) + " vertices>";
      });

  mod.def("random_field", [](const MeshPtr& m, const std::string& degree, std::uint64_t seed) {
    return to_array(random_dofs(*m, degree_of(degree), seed).values);
  }, py::arg("mesh"), py::arg("degree"), py::arg("seed") = 42);

  mod.def("harmonic_basis", &basis, py::arg("mesh"), py::arg("kind") = "magnetic", py::arg("coeff") = "identity");
  mod.def("decompose", &decompose, py::arg("mesh"), py::arg("kind"), py::arg("values"), py::arg("coeff") = "identity");
  mod.def("friedrichs", &friedrichs, py::arg("mesh"), py::arg("kind") = "normal", py::arg("coeff") = "identity",
          py::arg("include_l2") = true);

  mod.def("run_cli", [](const std::vector<std::string>& args) { return cli::run(args); }, py::arg("args"),
          "Run a divcurl subcommand in-process and return its exit code.");
}
