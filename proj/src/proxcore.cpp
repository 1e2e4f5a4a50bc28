#include "digft/proxcore.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "digft/errors.hpp"

namespace digft {

void ProxGdvConfig::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (over_relaxation < 1.0 || over_relaxation >= 2.0)
    throw std::invalid_argument("over_relaxation must lie in [1, 2)");
}

double hinge_prox(double v, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  if (v < 0.0) return v;
  if (v <= lambda) return 0.0;
  return v - lambda;
}

EdgeDifferenceOperator::EdgeDifferenceOperator(const DirectedGraph& g) {
  const int m = g.edge_count();
  const int n = g.node_count();
  matrix_.resize(m, n);
  weights_.resize(m);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * m);
  int row = 0;
  for (const Edge& e : g.edges()) {
    trip.emplace_back(row, e.src, 1.0);
    trip.emplace_back(row, e.dst, -1.0);
    weights_(row) = e.weight;
    ++row;
  }
  matrix_.setFromTriplets(trip.begin(), trip.end());
  matrix_.makeCompressed();
  normal_ = Eigen::SparseMatrix<double>(matrix_.transpose() * matrix_);
  normal_.makeCompressed();
}

namespace {

// One splitting iteration sequence shared by the sparse full-space and dense
// reduced-space paths. Op provides apply / apply_transpose and a regularized
// normal solve that is refactored when sigma changes.
template <class Op>
ProxResult run_splitting(Op& op, const Eigen::VectorXd& weights, const Eigen::VectorXd& target,
                         double mu, const ProxGdvConfig& cfg, ProxWarmStart* warm) {
  const int m = static_cast<int>(weights.size());
  const int n = static_cast<int>(target.size());
  const double alpha = cfg.over_relaxation;

  double sigma = cfg.sigma;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  if (warm != nullptr && warm->valid(m)) {
    z = warm->z;
    u = warm->u;
    sigma = warm->sigma;
  }
  op.prepare(mu, sigma);

  Eigen::VectorXd x = target;
  if (m == 0) {
    ProxResult res;
    res.x = x;
    res.converged = true;
    res.iterations = 0;
    res.stationarity = 0.0;
    res.multipliers = Eigen::VectorXd::Zero(0);
    return res;
  }

  auto objective = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& exx) {
    double hinge = 0.0;
    for (int e = 0; e < m; ++e) hinge += weights(e) * std::max(exx(e), 0.0);
    return hinge + 0.5 * mu * (xx - target).squaredNorm();
  };

  double best_obj = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x = x;
  bool converged = false;
  int iter = 0;

  Eigen::VectorXd ex = op.apply(x);
  const double atol = cfg.tolerance;
  const double rtol = cfg.tolerance;

  for (iter = 1; iter <= cfg.max_iterations; ++iter) {
    const Eigen::VectorXd z_prev = z;

    x = op.solve_normal(mu * target + sigma * op.apply_transpose(z - u));
    ex = op.apply(x);

    const Eigen::VectorXd ax = alpha == 1.0 ? ex : (alpha * ex + (1.0 - alpha) * z_prev);
    for (int e = 0; e < m; ++e) z(e) = hinge_prox(ax(e) + u(e), weights(e) / sigma);
    u += ax - z;

    const double r_pri = (ex - z).norm();
    const double r_dual = sigma * op.apply_transpose(z - z_prev).norm();
    const double eps_pri =
        std::sqrt(static_cast<double>(m)) * atol + rtol * std::max(ex.norm(), z.norm());
    const double eps_dual = std::sqrt(static_cast<double>(n)) * atol +
                            rtol * sigma * op.apply_transpose(u).norm();

    const double obj = objective(x, ex);
    if (obj < best_obj) {
      best_obj = obj;
      best_x = x;
    }

    if (r_pri <= eps_pri && r_dual <= eps_dual) {
      converged = true;
      break;
    }

    if (iter % 25 == 0) {
      if (r_pri > 10.0 * r_dual && sigma < cfg.sigma * 1e8) {
        sigma *= 2.0;
        u /= 2.0;
        op.prepare(mu, sigma);
      } else if (r_dual > 10.0 * r_pri && sigma > cfg.sigma * 1e-8) {
        sigma /= 2.0;
        u *= 2.0;
        op.prepare(mu, sigma);
      }
    }
  }

  ProxResult res;
  res.converged = converged;
  res.iterations = std::min(iter, cfg.max_iterations);
  res.x = converged ? x : best_x;

  // With alpha = 1 the scaled dual is a valid per-edge multiplier after every
  // update; the clamp only matters under over-relaxation.
  Eigen::VectorXd s = (sigma * u).cwiseMax(0.0).cwiseMin(weights);
  res.multipliers = s;
  res.stationarity =
      (op.apply_transpose(s) + mu * (res.x - target)).template lpNorm<Eigen::Infinity>();

  if (warm != nullptr) {
    warm->z = z;
    warm->u = u;
    warm->sigma = sigma;
  }
  return res;
}

struct SparseOp {
  const EdgeDifferenceOperator& edge_op;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::SparseMatrix<double> identity;
  bool analyzed = false;

  explicit SparseOp(const EdgeDifferenceOperator& e) : edge_op(e) {
    const int n = e.node_count();
    identity.resize(n, n);
    identity.setIdentity();
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return edge_op.apply(x); }
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& z) const {
    return edge_op.apply_transpose(z);
  }
  void prepare(double mu, double sigma) {
    Eigen::SparseMatrix<double> normal = mu * identity + sigma * edge_op.normal_matrix();
    if (!analyzed) {
      ldlt.analyzePattern(normal);
      analyzed = true;
    }
    ldlt.factorize(normal);
    if (ldlt.info() != Eigen::Success)
      throw NumericalError("prox normal-equation factorization failed");
  }
  Eigen::VectorXd solve_normal(const Eigen::VectorXd& rhs) const { return ldlt.solve(rhs); }
};

struct DenseOp {
  Eigen::MatrixXd b;  // reduced edge operator, m x k
  Eigen::LLT<Eigen::MatrixXd> llt;

  Eigen::VectorXd apply(const Eigen::VectorXd& y) const { return b * y; }
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& z) const { return b.transpose() * z; }
  void prepare(double mu, double sigma) {
    const int k = static_cast<int>(b.cols());
    Eigen::MatrixXd normal = sigma * (b.transpose() * b);
    normal.diagonal().array() += mu;
    llt.compute(normal);
    if (llt.info() != Eigen::Success)
      throw NumericalError("prox normal-equation factorization failed");
    (void)k;
  }
  Eigen::VectorXd solve_normal(const Eigen::VectorXd& rhs) const { return llt.solve(rhs); }
};

}  // namespace

ProxGdvSolver::ProxGdvSolver(const DirectedGraph& g, ProxGdvConfig cfg)
    : op_(g), cfg_(cfg) {
  cfg_.validate();
}

ProxResult ProxGdvSolver::solve(const Eigen::VectorXd& target, double mu) const {
  ProxWarmStart none;
  ProxResult res = solve(target, mu, none);
  return res;
}

ProxResult ProxGdvSolver::solve(const Eigen::VectorXd& target, double mu, ProxWarmStart& warm,
                                double tolerance_override) const {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (target.size() != op_.node_count())
    throw std::invalid_argument("target length does not match graph");
  SparseOp op(op_);
  ProxGdvConfig cfg = cfg_;
  if (tolerance_override > 0.0) cfg.tolerance = tolerance_override;
  return run_splitting(op, op_.weights(), target, mu, cfg, &warm);
}

ProxResult ProxGdvSolver::solve_constrained(const Eigen::VectorXd& target, double mu,
                                            const std::vector<Eigen::VectorXd>& prefix) const {
  if (prefix.empty()) return solve(target, mu);
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (target.size() != op_.node_count())
    throw std::invalid_argument("target length does not match graph");

  const Eigen::MatrixXd q = complement_basis(op_.node_count(), prefix);
  DenseOp op;
  op.b = op_.matrix() * q;
  const Eigen::VectorXd reduced_target = q.transpose() * target;
  ProxResult res = run_splitting(op, op_.weights(), reduced_target, mu, cfg_, nullptr);
  res.x = q * res.x;
  return res;
}

ProxResult prox_gdv(const DirectedGraph& g, const Eigen::VectorXd& target, double mu,
                    const ProxGdvConfig& cfg) {
  return ProxGdvSolver(g, cfg).solve(target, mu);
}

ProxResult prox_gdv_constrained(const DirectedGraph& g, const Eigen::VectorXd& target, double mu,
                                const std::vector<Eigen::VectorXd>& prefix,
                                const ProxGdvConfig& cfg) {
  return ProxGdvSolver(g, cfg).solve_constrained(target, mu, prefix);
}

Eigen::MatrixXd nearest_orthonormal(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw std::invalid_argument("matrix must be finite");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Eigen::VectorXd project_complement(const Eigen::VectorXd& x,
                                   const std::vector<Eigen::VectorXd>& prefix) {
  Eigen::VectorXd out = x;
  for (int pass = 0; pass < 2; ++pass)
    for (const Eigen::VectorXd& v : prefix) out -= v.dot(out) * v;
  return out;
}

Eigen::MatrixXd complement_basis(int n, const std::vector<Eigen::VectorXd>& prefix) {
  const int p = static_cast<int>(prefix.size());
  if (p == 0) return Eigen::MatrixXd::Identity(n, n);
  if (p > n) throw std::invalid_argument("prefix larger than the ambient dimension");
  Eigen::MatrixXd pm(n, p);
  for (int j = 0; j < p; ++j) {
    if (prefix[j].size() != n) throw std::invalid_argument("prefix vector length mismatch");
    pm.col(j) = prefix[j];
  }
  for (int a = 0; a < p; ++a)
    for (int b = 0; b <= a; ++b) {
      const double dot = pm.col(a).dot(pm.col(b));
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(dot - expected) > 1e-8)
        throw std::invalid_argument("prefix vectors are not orthonormal");
    }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(pm);
  const Eigen::MatrixXd q_full = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q_full.rightCols(n - p);
}

}  // namespace digft
