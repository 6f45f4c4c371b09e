#include "divcurl/quadrature.hpp"

#include <cmath>

namespace divcurl {

namespace {

void add_tet_orbit4(TetRule& r, double a, double w) {
  const double b = 1.0 - 3.0 * a;
  r.points.push_back({b, a, a, a});
  r.points.push_back({a, b, a, a});
  r.points.push_back({a, a, b, a});
  r.points.push_back({a, a, a, b});
  for (int i = 0; i < 4; ++i) r.weights.push_back(w);
}

void add_tet_orbit6(TetRule& r, double a, double w) {
  const double b = 0.5 - a;
  r.points.push_back({a, a, b, b});
  r.points.push_back({a, b, a, b});
  r.points.push_back({a, b, b, a});
  r.points.push_back({b, a, a, b});
  r.points.push_back({b, a, b, a});
  r.points.push_back({b, b, a, a});
  for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

void add_tri_orbit3(TriangleRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.points.push_back({b, a, a});
  r.points.push_back({a, b, a});
  r.points.push_back({a, a, b});
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

}  // namespace

const TetRule& tet_rule_degree2() {
  static const TetRule rule = [] {
    TetRule r;
    add_tet_orbit4(r, 0.1381966011250105, 0.25);
    return r;
  }();
  return rule;
}

const TetRule& tet_rule_degree5() {
  static const TetRule rule = [] {
    TetRule r;
    add_tet_orbit4(r, 0.0927352503108912264, 0.0734930431163619495);
    add_tet_orbit4(r, 0.310885919263300609, 0.112687925718015850);
    add_tet_orbit6(r, 0.0455037041256496494, 0.0425460207770814664);
    return r;
  }();
  return rule;
}

const TriangleRule& triangle_rule_degree2() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    add_tri_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
    return r;
  }();
  return rule;
}

const TriangleRule& triangle_rule_degree4() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    add_tri_orbit3(r, 0.445948490915965, 0.223381589678011);
    add_tri_orbit3(r, 0.091576213509771, 0.109951743655322);
    return r;
  }();
  return rule;
}

const LineRule& line_rule_degree5() {
  static const LineRule rule = [] {
    LineRule r;
    const double s = 0.5 * std::sqrt(0.6);
    r.points = {0.5 - s, 0.5, 0.5 + s};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

}  // namespace divcurl
