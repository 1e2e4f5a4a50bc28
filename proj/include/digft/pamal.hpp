#pragma once

#include <cstdint>
#include <functional>

#include "digft/basis.hpp"
#include "digft/graph.hpp"
#include "digft/proxcore.hpp"
#include "digft/soc.hpp"

namespace digft {

struct PamalConfig {
  double rho1 = 50.0;          // initial penalty
  double gamma = 1.5;          // penalty growth, > 1
  double tau = 0.5;            // infeasibility-decrease factor, in [0, 1)
  double epsilon_decay = 0.9;  // inner tolerance schedule eps^k = decay^k
  // Tightens the inner tolerance to min(eps^k, max(link * ||R||_inf,
  // tol_final)) so the penalty rule sees accurately solved subproblems;
  // 0 keeps the pure schedule.
  double inner_link = 0.3;
  double c1 = 0.5;             // proximal constants
  double c2 = 0.5;
  double c_lower = 0.5;        // bounds any schedule must respect
  double c_upper = 0.5;
  double lambda_min = -1000.0;  // multiplier box, entrywise
  double lambda_max = 1000.0;
  int max_outer_iterations = 200;
  int max_inner_iterations = 500;
  double tol_final = 1e-6;   // on ||P - X||_inf and the achieved ||Theta||_inf
  // Multiplier stationarity ||subgradient - Lambda||_inf required at exit;
  // extra outer iterations absorb the residual rho R into Lambda.
  double tol_kkt = 1e-4;
  BasisInit init = BasisInit::IdentityCompletion;
  std::uint64_t seed = 0;
  ProxGdvConfig prox;
  // Optional proximal-constant schedules by (outer k, inner n); when unset
  // the constants c1/c2 are used throughout. Values must stay within
  // [c_lower, c_upper].
  std::function<double(int, int)> c1_schedule;
  std::function<double(int, int)> c2_schedule;

  void validate() const;
};

struct PamalState {
  Eigen::MatrixXd x;
  Eigen::MatrixXd p;
  Eigen::MatrixXd lambda;
  double rho = 0.0;
  double r_prev_inf = 0.0;  // ||R^{k-1}||_inf
  int outer_index = 0;
  // Theta's noise floor scales with rho times the prox accuracy; when the
  // inner loop stalls above its target the prox tolerance is tightened by
  // this persistent factor.
  double prox_tol_scale = 1.0;
};

struct PamalInnerResult {
  double theta_inf = 0.0;
  int inner_iterations = 0;
  bool hit_cap = false;
  double kkt_residual = 0.0;  // max over free columns of ||s_c - Lambda_c||_inf
};

struct PamalResult {
  FourierBasis basis;
  ConvergenceTrace trace;
  bool converged = false;
  int outer_iterations = 0;
  double final_infeasibility = 0.0;
  double final_rho = 0.0;
  double kkt_residual = 0.0;
  bool inner_cap_hit = false;
};

// ||Theta||_inf of the inner-loop subgradient pair
// Theta_1 = c1 (X_prev - X) + rho (P_prev - P), Theta_2 = c2 (P_prev - P).
double theta_norm_inf(double c1, double c2, double rho, const Eigen::MatrixXd& x_prev,
                      const Eigen::MatrixXd& x, const Eigen::MatrixXd& p_prev,
                      const Eigen::MatrixXd& p);

// Inner proximal Gauss-Seidel loop: per-column prox of GDV with
// mu = rho + c1 on target (rho P + Lambda + c1 X) / (rho + c1), first column
// pinned; closed-form SVD update of P; subgradient norm Theta as the stop
// test. Runs until ||Theta||_inf <= eps or the iteration cap.
PamalInnerResult pam_inner(const DirectedGraph& g, PamalState& state, double eps,
                           const PamalConfig& cfg, const ProxGdvSolver& prox,
                           std::vector<ProxWarmStart>& warm, ConvergenceTrace* trace);

// Outer loop: multiplier update clipped to the box, penalty growth by the
// tau/gamma rule on R = P - X, joint (infeasibility, eps^k) stopping.
PamalResult pamal_basis(const DirectedGraph& g, const PamalConfig& cfg = {});

}  // namespace digft
