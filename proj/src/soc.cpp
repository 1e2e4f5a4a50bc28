#include "digft/soc.hpp"

#include <cmath>
#include <stdexcept>

#include "digft/variation.hpp"

namespace digft {

void SocConfig::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (max_outer_iterations < 1) throw std::invalid_argument("max_outer_iterations must be >= 1");
  if (!(tol_infeasibility > 0.0) || !(tol_objective > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  prox.validate();
}

SocResult soc_basis(const DirectedGraph& g, const SocConfig& cfg) {
  cfg.validate();
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("need at least two nodes");

  const ProxGdvSolver prox(g, cfg.prox);
  Eigen::MatrixXd x = cfg.init == BasisInit::IdentityCompletion
                          ? identity_completion_init(n)
                          : random_orthonormal_init(n, cfg.seed);
  Eigen::MatrixXd p = x;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  std::vector<ProxWarmStart> warm(n);

  SocResult res;
  double prev_obj = total_gdv(g, x);
  bool converged = false;
  int iter = 0;

  for (iter = 1; iter <= cfg.max_outer_iterations; ++iter) {
    const Eigen::MatrixXd target = p - b;
    for (int k = 1; k < n; ++k)
      x.col(k) = prox.solve(target.col(k), cfg.beta, warm[k]).x;

    const Eigen::MatrixXd y = x + b;
    p = nearest_orthonormal(y);
    b += x - p;

    const double obj = total_gdv(g, x);
    const double infeas = (x - p).cwiseAbs().maxCoeff();
    res.trace.records.push_back(
        {iter, obj, total_gdv(g, p), infeas, 0.0, 0.0});

    const double rel_change = std::abs(obj - prev_obj) / std::max(1.0, std::abs(prev_obj));
    prev_obj = obj;
    if (infeas <= cfg.tol_infeasibility && rel_change <= cfg.tol_objective) {
      converged = true;
      break;
    }
  }

  res.converged = converged;
  res.iterations = std::min(iter, cfg.max_outer_iterations);
  res.final_infeasibility = (x - p).cwiseAbs().maxCoeff();
  res.basis = finalize_basis(g, p, "soc",
                             [&g](const Eigen::VectorXd& v) { return gdv(g, v); });
  res.basis.converged = converged;
  return res;
}

}  // namespace digft
