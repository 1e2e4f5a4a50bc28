#pragma once

#include <cstdint>
#include <vector>

#include "digft/basis.hpp"
#include "digft/graph.hpp"
#include "digft/proxcore.hpp"
#include "digft/variation.hpp"

namespace digft {

enum class BalancedNumerator { Auto, GDV, GAV };

// Start each column from the matching Laplacian eigenvector (projected and
// median-centered) or from a seeded Gaussian draw. The spectral start lands
// in the right basin far more often; Gaussian retries remain the fallback.
enum class BalancedInit { Spectral, SeededGaussian };

struct BalancedConfig {
  double alpha = 1.0;          // step constant
  double epsilon = 1e-6;       // stop on |E(x^n) - E(x^{n-1})|
  int max_iterations = 2000;   // per vector
  BalancedNumerator numerator = BalancedNumerator::Auto;  // GAV if undirected
  double sign_zero = 0.0;      // value of sign(0) in the subgradient choice
  BalancedInit init = BalancedInit::Spectral;
  std::uint64_t seed = 0;
  // Independent starts per vector (first spectral when enabled, Gaussian
  // after); the run with the smallest final ratio wins.
  int starts = 3;
  int max_retries = 5;  // extra attempts allowed for degenerate iterates
  // The descent guarantee inherits the prox accuracy, so the inner solves
  // run tighter here than the shared default.
  ProxGdvConfig prox{1.0, 5000, 1e-12, 1.0};

  void validate() const;
};

struct BalancedTraceRow {
  int column = 0;     // k, 1-based basis column index
  int iteration = 0;  // n within the column's run
  double e = 0.0;
  double b = 0.0;
  double f = 0.0;
  double median = 0.0;  // of the iterate; zero by construction up to rounding
};

struct BalancedVectorSummary {
  int column = 0;
  int iterations = 0;
  int retries = 0;
  double e_emitted = 0.0;   // ratio at the emitted vector
  double e_centered = 0.0;  // ratio after median-centering the emitted vector
};

struct BalancedTrace {
  std::vector<BalancedTraceRow> rows;
  std::vector<BalancedVectorSummary> vectors;
};

struct BalancedResult {
  FourierBasis basis;
  BalancedTrace trace;
  // Orthonormality deviation measured before the final stabilization pass;
  // flagged when it exceeds 1e-6.
  double stabilization_deviation = 0.0;
  bool stabilization_flagged = false;
};

// Explicit-implicit descent on the ratio E(x) = f(x) / sum_i |x_i - m(x)|,
// one basis vector at a time under orthogonality to the previously found
// vectors. f is GDV for directed graphs and GAV for undirected ones.
BalancedResult balanced_basis(const DirectedGraph& g, const BalancedConfig& cfg = {});

}  // namespace digft
