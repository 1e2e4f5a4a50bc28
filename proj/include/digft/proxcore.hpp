#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "digft/graph.hpp"

namespace digft {

// Parameters of the splitting scheme behind prox_gdv. The consensus variable
// lives in edge space; sigma is the splitting penalty, adapted by residual
// balancing during a solve.
struct ProxGdvConfig {
  double sigma = 1.0;
  int max_iterations = 2000;
  double tolerance = 1e-8;      // primal/dual residual tolerance
  double over_relaxation = 1.0; // in [1, 2)

  void validate() const;
};

// Prox of z -> lambda * max(z, 0): v if v < 0; 0 if 0 <= v <= lambda;
// v - lambda otherwise.
double hinge_prox(double v, double lambda);

// Sparse map from vertex space to edge space. Row e for a link u -> v of
// weight w maps x to x_u - x_v; weights() carries w per row. Applying to a
// constant vector yields zero exactly.
class EdgeDifferenceOperator {
public:
  explicit EdgeDifferenceOperator(const DirectedGraph& g);

  int edge_count() const { return static_cast<int>(matrix_.rows()); }
  int node_count() const { return static_cast<int>(matrix_.cols()); }
  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  const Eigen::SparseMatrix<double>& normal_matrix() const { return normal_; }  // E^T E
  const Eigen::VectorXd& weights() const { return weights_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix_ * x; }
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& z) const {
    return matrix_.transpose() * z;
  }

private:
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SparseMatrix<double> normal_;
  Eigen::VectorXd weights_;
};

struct ProxResult {
  Eigen::VectorXd x;
  bool converged = false;
  int iterations = 0;
  // Infinity norm of E^T s + mu (x - target), with s the per-edge hinge
  // multipliers below; for the constrained variant the norm is taken after
  // projection onto the feasible subspace.
  double stationarity = 0.0;
  Eigen::VectorXd multipliers;  // per-edge, in [0, w_e] elementwise
};

// Reusable edge-space state so a caller looping over slowly moving targets
// can resume instead of restarting.
struct ProxWarmStart {
  Eigen::VectorXd z;
  Eigen::VectorXd u;
  double sigma = 0.0;
  bool valid(int edge_count) const {
    return sigma > 0.0 && z.size() == edge_count && u.size() == edge_count;
  }
};

// Solves argmin_x GDV(x) + (mu/2) ||x - target||^2 (optionally restricted to
// the orthogonal complement of a prefix of orthonormal vectors) by operator
// splitting over the edge-difference map: hinge prox per edge, regularized
// linear solve per vertex block.
class ProxGdvSolver {
public:
  explicit ProxGdvSolver(const DirectedGraph& g, ProxGdvConfig cfg = {});

  const EdgeDifferenceOperator& op() const { return op_; }

  ProxResult solve(const Eigen::VectorXd& target, double mu) const;
  // tolerance_override <= 0 keeps the configured tolerance.
  ProxResult solve(const Eigen::VectorXd& target, double mu, ProxWarmStart& warm,
                   double tolerance_override = 0.0) const;
  ProxResult solve_constrained(const Eigen::VectorXd& target, double mu,
                               const std::vector<Eigen::VectorXd>& prefix) const;

private:
  EdgeDifferenceOperator op_;
  ProxGdvConfig cfg_;
};

ProxResult prox_gdv(const DirectedGraph& g, const Eigen::VectorXd& target, double mu,
                    const ProxGdvConfig& cfg = {});
ProxResult prox_gdv_constrained(const DirectedGraph& g, const Eigen::VectorXd& target, double mu,
                                const std::vector<Eigen::VectorXd>& prefix,
                                const ProxGdvConfig& cfg = {});

// With SVD M = Q S T^T, returns Q T^T: the orthonormal matrix maximizing
// trace(P^T M). Rank-deficient M resolves to the decomposition's canonical
// singular-vector completion.
Eigen::MatrixXd nearest_orthonormal(const Eigen::MatrixXd& m);

// x minus its projections onto each prefix vector (two passes).
Eigen::VectorXd project_complement(const Eigen::VectorXd& x,
                                   const std::vector<Eigen::VectorXd>& prefix);

// Orthonormal basis of the complement of span(prefix), n x (n - |prefix|).
Eigen::MatrixXd complement_basis(int n, const std::vector<Eigen::VectorXd>& prefix);

}  // namespace digft
