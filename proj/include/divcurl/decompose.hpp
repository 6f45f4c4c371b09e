#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "divcurl/harmonic.hpp"
#include "divcurl/linsolve.hpp"

namespace divcurl {

enum class DecompositionKind { magnetic, electric };

// Magnetic (u in RT):   u = h + gradient + curl w, orthogonal in the sigma inner product.
// Electric (u in NED):  u = h + grad chi + rotational, orthogonal in the eps inner product.
struct DecompositionResult {
  DecompositionKind kind = DecompositionKind::magnetic;
  DofVector h;
  DofVector chi;         // P1 scalar potential
  DofVector w;           // NED vector potential
  DofVector gradient;    // gradient component in the space of u
  DofVector rotational;  // rotational component in the space of u
  std::vector<double> harmonic_coefficients;
  double reconstruction = 0.0;                  // relative, weighted L2
  std::map<std::string, double> pairings;       // relative to ||u||^2
  std::map<std::string, double> norms;          // weighted L2 norms of u and the components
  std::map<std::string, double> certificates;   // consistency of chi and w with their components
  std::vector<SolveStats> stats;
};

DecompositionResult hw_magnetic(const DofVector& u, const CoefficientField& sigma, const Mesh& mesh,
                                const SolverConfig& cfg = {}, const HarmonicBasis* basis = nullptr);
DecompositionResult hw_electric(const DofVector& u, const CoefficientField& epsilon, const Mesh& mesh,
                                const SolverConfig& cfg = {}, const HarmonicBasis* basis = nullptr);

enum class FriedrichsKind { normal, tangential };

// Boundary-trace term of the right-hand side: plain boundary L2, or L2 plus the energy of the
// discrete P1 harmonic extension of the vertex-averaged trace (an H^{1/2}-type norm).
enum class TraceNorm { l2, h_half };

struct FriedrichsOptions {
  double p = 2.0;
  bool include_l2 = true;      // the ||u||_{L2} term on the right-hand side
  bool flux_form = false;      // replace the L2 term by squared cut (normal) / component (tangential) fluxes
  TraceNorm trace_norm = TraceNorm::h_half;
  int power_steps = 100;
  int samples = 200;           // p != 2
  std::uint64_t seed = 42;
  SolverConfig solver;
};

struct FriedrichsEstimate {
  FriedrichsKind kind = FriedrichsKind::normal;
  std::string coefficient_kind;
  double constant = 0.0;             // C_h
  double rayleigh_change = 0.0;      // relative change of the Ritz value over the last power step
  bool lower_bound = false;          // sampled estimate (p != 2)
  bool converged = false;
  std::string rhs_form;              // which right-hand side was used
  DofVector extremal;
  std::vector<double> history;       // C_h after each power step (or sample maximum)
  int steps = 0;
  std::map<std::string, double> rhs_terms;  // share of each right-hand-side term at the extremal field
  bool unbounded = false;            // a harmonic field makes the right-hand side vanish; constant is +inf
  double kernel_ratio = 0.0;         // rhs / lhs at that harmonic field
};

FriedrichsEstimate friedrichs_constant(const Mesh& mesh, const CoefficientField& coeff, FriedrichsKind kind,
                                       const FriedrichsOptions& opts = {});

// Quadratic forms used by the estimate, exposed for tests. Vectors z = [x; ext] hold the Whitney
// field x in the first dofs() entries and interior values of the trace extension after it.
// z^T lhs(z) is the H1-type norm squared of the L2 projection of x into vector P1; the
// right-hand side squared of x is the minimum of z^T rhs(z) over the extension block.
class FriedrichsForms {
 public:
  struct Impl;
  explicit FriedrichsForms(std::shared_ptr<const Impl> impl);

  int dofs() const;
  int size() const;
  Vector lhs(std::span<const double> z) const;
  Vector rhs(std::span<const double> z) const;
  Vector p1_projection(std::span<const double> z) const;  // row 3v + c
  std::map<std::string, double> rhs_terms(std::span<const double> z) const;

 private:
  std::shared_ptr<const Impl> impl_;
};
FriedrichsForms friedrichs_forms(const Mesh& mesh, const CoefficientField& coeff, FriedrichsKind kind,
                                 const FriedrichsOptions& opts = {});

}  // namespace divcurl
