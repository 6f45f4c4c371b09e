#pragma once

#include <utility>

#include "divcurl/mesh.hpp"

namespace divcurl {

struct CohomologyCheck {
  int b1_rank = 0;      // first Betti number from GF(2) ranks of the incidence matrices
  int b1_euler = 0;     // b0 + b2 - chi, with b2 = N1
  int b1_cut_open = 0;  // first Betti number of the complex cut open along all cuts
};

// (N1, N2). With verify, the cut count is cross-checked against the rank-based first
// Betti number and the cut-open complex; a mismatch throws CohomologyMismatch.
std::pair<int, int> betti_counts(const Mesh& mesh, bool verify = true);

CohomologyCheck cohomology_check(const Mesh& mesh);

}  // namespace divcurl
