#pragma once

#include <cstdint>

#include "digft/basis.hpp"
#include "digft/graph.hpp"
#include "digft/proxcore.hpp"

namespace digft {

enum class BasisInit { IdentityCompletion, RandomOrthonormal };

struct SocConfig {
  double beta = 100.0;
  int max_outer_iterations = 500;
  double tol_infeasibility = 1e-6;   // on ||X - P||_inf
  double tol_objective = 1e-8;       // on relative GDV change
  BasisInit init = BasisInit::IdentityCompletion;
  std::uint64_t seed = 0;
  ProxGdvConfig prox;

  void validate() const;
};

struct SocResult {
  FourierBasis basis;
  ConvergenceTrace trace;
  bool converged = false;
  int iterations = 0;
  double final_infeasibility = 0.0;
};

// Splitting with orthogonality constraints: alternate the per-column prox of
// GDV (first column pinned to the scaled constant), the SVD projection onto
// orthonormal matrices, and the Bregman multiplier update. Returns the
// feasible iterate P, post-processed (sign rule, GDV-sorted columns).
SocResult soc_basis(const DirectedGraph& g, const SocConfig& cfg = {});

}  // namespace digft
