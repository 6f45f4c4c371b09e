#pragma once

#include <array>
#include <vector>

namespace divcurl {

// Weights sum to one; multiply by the measure of the entity.
struct TetRule {
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;
};

struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

struct LineRule {
  std::vector<double> points;  // parameter in [0,1]
  std::vector<double> weights;
};

const TetRule& tet_rule_degree2();   // 4 points
const TetRule& tet_rule_degree5();   // 14 points, positive weights
const TriangleRule& triangle_rule_degree2();  // 3 points
const TriangleRule& triangle_rule_degree4();  // 6 points
const LineRule& line_rule_degree5();          // 3-point Gauss-Legendre

}  // namespace divcurl
