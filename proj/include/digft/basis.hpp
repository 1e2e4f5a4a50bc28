#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "digft/graph.hpp"

namespace digft {

// Per-iteration solver record. theta_inf and rho are meaningful only for the
// augmented-Lagrangian method and stay zero otherwise.
struct TraceRecord {
  int iteration = 0;
  double objective = 0.0;           // total GDV of the X iterate
  double objective_feasible = 0.0;  // total GDV of the P iterate
  double infeasibility = 0.0;       // ||X - P||_inf
  double theta_inf = 0.0;
  double rho = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
};

// Orthonormal GFT basis. The first column is the scaled constant vector for
// every method that pins it (all solvers and the Laplacian baseline);
// column_variation holds the method's per-column metric, by which columns
// 2..N are sorted ascending.
struct FourierBasis {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd column_variation;
  std::string method;
  bool converged = true;

  int size() const { return static_cast<int>(vectors.rows()); }
};

// b * 1 with b = 1/sqrt(N).
Eigen::VectorXd constant_column(int n);

double max_orthonormality_deviation(const Eigen::MatrixXd& x);
bool first_column_is_constant(const Eigen::MatrixXd& x, double tol);

// Two-pass modified Gram-Schmidt, keeping column order. Throws
// NumericalError when a column degenerates.
void orthonormalize_columns(Eigen::MatrixXd& x);

// Sets column 1 to b*1 exactly and re-orthonormalizes the rest against it.
// Returns the max orthonormality deviation measured before the pass.
double stabilize_pinned(Eigen::MatrixXd& x);

// Per column (from `first_col` on): flip the sign if it strictly lowers the
// metric; on ties make the first nonzero entry positive.
void apply_sign_rule(Eigen::MatrixXd& x,
                     const std::function<double(const Eigen::VectorXd&)>& metric,
                     int first_col = 1);

// Stable sort of columns [first_col, N) by ascending key; keys are permuted
// alongside.
void sort_columns_by(Eigen::MatrixXd& x, Eigen::VectorXd& keys, int first_col = 1);

// Full post-processing shared by the solvers: pin the constant column,
// stabilize, sign-fix and sort by the given metric, and fill
// column_variation with the metric values.
FourierBasis finalize_basis(const DirectedGraph& g, Eigen::MatrixXd x, std::string method,
                            const std::function<double(const Eigen::VectorXd&)>& metric);

// Deterministic orthonormal initializations with the first column pinned.
Eigen::MatrixXd identity_completion_init(int n);
Eigen::MatrixXd random_orthonormal_init(int n, std::uint64_t seed);

}  // namespace digft
