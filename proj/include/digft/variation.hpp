#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "digft/graph.hpp"

namespace digft {

// Indicator of a vertex subset S, aligned with graph node indices.
struct VertexSubset {
  std::vector<bool> membership;

  static VertexSubset from_mask(int n, std::uint64_t mask) {
    VertexSubset s;
    s.membership.resize(n);
    for (int i = 0; i < n; ++i) s.membership[i] = (mask >> i) & 1u;
    return s;
  }

  Eigen::VectorXd indicator() const {
    Eigen::VectorXd x(membership.size());
    for (std::size_t i = 0; i < membership.size(); ++i) x(i) = membership[i] ? 1.0 : 0.0;
    return x;
  }
};

enum class VariationKind { GDV, GAV };

// Cheeger-type ratio E = f(x) / B(x) with B(x) = sum_i |x_i - m(x)| and m the
// median. Undefined (flag, not failure) when B = 0, i.e. x constant.
struct CheegerObjective {
  VariationKind kind;
  double value = 0.0;    // E, meaningful only when defined
  double numerator = 0.0;
  double balance = 0.0;  // B
  double median = 0.0;
  bool defined = false;
};

// Total weight of directed edges leaving S.
double cut_size(const DirectedGraph& g, const VertexSubset& s);

// Lovasz extension of the cut size, evaluated by the sorted-increment formula
// with a stable (value, index) sort. Agrees with gdv() for all inputs.
double lovasz_extension(const DirectedGraph& g, const Eigen::VectorXd& x);

// Graph directed variation: sum over links u->v of w * max(x_u - x_v, 0).
double gdv(const DirectedGraph& g, const Eigen::VectorXd& x);

// Graph absolute variation over the symmetrized weights. Equals gdv() when
// the graph is already symmetric.
double gav(const DirectedGraph& g, const Eigen::VectorXd& x);

// Graph quadratic variation over the upper adjacency triangle; equals x^T L x
// on undirected graphs.
double gqv(const DirectedGraph& g, const Eigen::VectorXd& x);

// || s - A s / rho(A) ||_1 where rho is the spectral radius. Throws
// NumericalError when rho(A) is numerically zero.
double tv_adjacency(const DirectedGraph& g, const Eigen::VectorXd& s);

// || L s ||_1.
double tv_laplacian(const DirectedGraph& g, const Eigen::VectorXd& s);

CheegerObjective cheeger_eval(const DirectedGraph& g, const Eigen::VectorXd& x,
                              VariationKind kind);

// Minimum cut over nonempty proper subsets by enumeration (n <= 20).
// Ties broken by the smallest indicator read as a binary number.
std::pair<VertexSubset, double> brute_force_min_cut(const DirectedGraph& g);

// Midpoint-of-central-order-statistics median (continuous in x for even n).
double median_of(const Eigen::VectorXd& x);

// Column-wise totals over a basis matrix.
double total_gdv(const DirectedGraph& g, const Eigen::MatrixXd& basis);
double total_gav(const DirectedGraph& g, const Eigen::MatrixXd& basis);
double total_gqv(const DirectedGraph& g, const Eigen::MatrixXd& basis);

}  // namespace digft
