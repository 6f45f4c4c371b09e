#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "divcurl/compat.hpp"
#include "divcurl/decompose.hpp"
#include "divcurl/solve.hpp"

namespace divcurl {

using Json = nlohmann::ordered_json;

// Top-level report document. Non-finite numbers serialize as null.
struct Report {
  std::string command;
  Json mesh = Json::object();
  Json coefficient = Json::object();
  Json results = Json::object();
  std::map<std::string, double> residuals;
  long long iterations = 0;
  double seconds = 0.0;
  std::string timestamp;

  Json to_json() const;
  void write(const std::filesystem::path& path) const;
};

// UTC, ISO 8601, second resolution.
std::string utc_timestamp();

Json mesh_summary(const Mesh& mesh);
Json coefficient_summary(const CoefficientField& coeff, const Mesh& mesh);
Json quality_json(const MeshQualityReport& q);

Json to_json(const CompatReport& report);
Json to_json(const HarmonicBasis& basis);
Json to_json(const Diagnostics& d);
Json to_json(const DecompositionResult& d);
Json to_json(const FriedrichsEstimate& f);

// Largest entry of |G - I| over a square matrix given as rows.
double identity_defect(const std::vector<std::vector<double>>& gram);

// VTK legacy ASCII unstructured grid with one field. P1 writes point data; NED and RT are
// averaged per cell (their value at the centroid); P0 writes cell scalars.
void write_vtk(const DofVector& field, const std::string& name, const std::filesystem::path& path);

}  // namespace divcurl
