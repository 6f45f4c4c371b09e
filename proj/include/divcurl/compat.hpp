#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divcurl/whitney.hpp"

namespace divcurl {

inline constexpr double kResidualFloor = 1e-300;

struct CompatCondition {
  std::string name;
  double residual = 0.0;  // dimensionless, scale-normalized
  double threshold = 0.0;
  bool pass = true;
  bool computed = true;   // false when the value is derived from an equivalent condition
  std::string note;
  std::optional<double> value;  // the raw quantity behind the residual, when meaningful
};

struct CompatReport {
  std::string system;
  std::vector<CompatCondition> conditions;
  bool pass = true;

  const CompatCondition* find(const std::string& name) const;
  std::vector<std::string> failing() const;
};

CompatReport check_magnetostatic(const DofVector& j, const DofVector& rho, const BoundaryFaceField& lam, const Mesh& mesh,
                                 double tol = 1e-8);

// The coefficient is recorded only: the pairing condition against K_T is evaluated in its
// equivalent cut-circulation form, which does not involve a coefficient.
CompatReport check_electric(const DofVector& j, const DofVector& rho, const BoundaryEdgeField& lam, const Mesh& mesh,
                            const CoefficientField& sigma = CoefficientField::identity(), double tol = 1e-8);

}  // namespace divcurl
