#pragma once

#include <Eigen/Dense>

#include "digft/basis.hpp"
#include "digft/graph.hpp"

namespace digft {

using Spectrum = Eigen::VectorXd;
using GraphSignal = Eigen::VectorXd;

struct SpectralResult {
  FourierBasis basis;
  Eigen::VectorXd eigenvalues;  // aligned with basis columns
  bool symmetrized = false;     // input was directed and got symmetrized
};

// Orthonormal eigenvectors of the Laplacian, ascending eigenvalues, first
// column rotated to the scaled constant vector (always in the nullspace).
// Directed input is symmetrized with the warning flag set.
SpectralResult laplacian_eigenbasis(const DirectedGraph& g);

// Orthonormal eigenvectors of the adjacency matrix, descending eigenvalues
// (low frequency = large eigenvalue). Directed input is an error.
SpectralResult adjacency_eigenbasis(const DirectedGraph& g);

Spectrum gft_forward(const FourierBasis& basis, const GraphSignal& s);
GraphSignal gft_inverse(const FourierBasis& basis, const Spectrum& coeffs);

enum class OrderingMetric { GDV, GAV, GQV, TV_L };

// Stable re-sort of columns 2..N by the chosen metric; column 1 stays fixed.
FourierBasis order_by_variation(const FourierBasis& basis, const DirectedGraph& g,
                                OrderingMetric metric);

}  // namespace digft
