#include "digft/balanced.hpp"

#include <cmath>
#include <stdexcept>

#include "digft/errors.hpp"
#include "digft/rng.hpp"

namespace digft {

void BalancedConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (starts < 1) throw std::invalid_argument("starts must be >= 1");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  prox.validate();
}

namespace {

// Project off the found vectors, center on the median, normalize. Returns
// false when the candidate degenerates.
bool feasible_start(Eigen::VectorXd v, const std::vector<Eigen::VectorXd>& prefix,
                    Eigen::VectorXd& out) {
  v = project_complement(v, prefix);
  v.array() -= median_of(v);
  const double norm = v.norm();
  if (norm < 1e-10) return false;
  out = v / norm;
  return true;
}

bool draw_start(Rng& rng, const std::vector<Eigen::VectorXd>& prefix, int n,
                Eigen::VectorXd& out) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return feasible_start(std::move(v), prefix, out);
}

Eigen::VectorXd sign_vector(const Eigen::VectorXd& x, double sign_zero) {
  Eigen::VectorXd w(x.size());
  for (int i = 0; i < x.size(); ++i)
    w(i) = x(i) > 0.0 ? 1.0 : (x(i) < 0.0 ? -1.0 : sign_zero);
  return w;
}

// Zero-sum direction in the subdifferential of sum_i |x_i - m(x)|. When the
// strict sides of the median balance, this is exactly w - mean(w) 1; with an
// asymmetric tie pool at the median the imbalance must be absorbed by the
// tied coordinates alone, or the direction leaves the subdifferential and
// the descent guarantee breaks.
Eigen::VectorXd balance_subgradient(const Eigen::VectorXd& x, double median,
                                    double sign_zero) {
  const Eigen::VectorXd w = sign_vector(x, sign_zero);
  std::vector<int> tied;
  double imbalance = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    if (x(i) == median)
      tied.push_back(i);
    else
      imbalance += x(i) > median ? 1.0 : -1.0;
  }
  if (tied.empty()) return w.array() - w.mean();
  Eigen::VectorXd v = w;
  const double share = -imbalance / static_cast<double>(tied.size());
  for (int i : tied) v(i) = share;
  return v;
}

}  // namespace

BalancedResult balanced_basis(const DirectedGraph& g, const BalancedConfig& cfg) {
  cfg.validate();
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("need at least two nodes");

  const bool use_gav = cfg.numerator == BalancedNumerator::GAV ||
                       (cfg.numerator == BalancedNumerator::Auto && g.is_symmetric());
  const VariationKind kind = use_gav ? VariationKind::GAV : VariationKind::GDV;
  // GAV equals GDV on the symmetrized graph, so one prox kernel serves both.
  const DirectedGraph prox_graph = use_gav && !g.is_symmetric() ? symmetrize(g) : g;
  const ProxGdvSolver prox(prox_graph, cfg.prox);

  BalancedResult res;
  Rng rng(cfg.seed);
  Eigen::MatrixXd basis(n, n);
  basis.col(0) = constant_column(n);
  std::vector<Eigen::VectorXd> prefix{basis.col(0)};

  Eigen::MatrixXd spectral_starts;
  if (cfg.init == BalancedInit::Spectral) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        (g.is_symmetric() ? g : symmetrize(g)).laplacian());
    spectral_starts = eig.eigenvectors();
  }

  for (int k = 1; k < n; ++k) {
    BalancedVectorSummary summary;
    summary.column = k;

    Eigen::VectorXd emitted;
    double emitted_e = std::numeric_limits<double>::infinity();
    bool emitted_set = false;
    int produced = 0;
    const int max_attempts = cfg.starts + cfg.max_retries;

    for (int attempt = 0; attempt < max_attempts && produced < cfg.starts; ++attempt) {
      Eigen::VectorXd x;
      const bool ok =
          (attempt == 0 && cfg.init == BalancedInit::Spectral)
              ? feasible_start(spectral_starts.col(k), prefix, x)
              : draw_start(rng, prefix, n, x);
      if (!ok) continue;

      double e_prev = std::numeric_limits<double>::infinity();
      Eigen::VectorXd x_hat = project_complement(x, prefix);
      if (x_hat.norm() > 1e-12) x_hat.normalize();
      int iterations = 0;

      for (int it = 1; it <= cfg.max_iterations; ++it) {
        const CheegerObjective cur = cheeger_eval(g, x, kind);
        res.trace.rows.push_back({k, it, cur.defined ? cur.value : 0.0, cur.balance,
                                  cur.numerator, cur.median});
        iterations = it;

        if (!cur.defined) break;
        if (cur.numerator <= 1e-14) {
          // The ratio is already at its floor; nothing left to descend.
          x_hat = project_complement(x, prefix);
          break;
        }
        if (std::abs(cur.value - e_prev) < cfg.epsilon) break;
        e_prev = cur.value;

        const Eigen::VectorXd v = balance_subgradient(x, cur.median, cfg.sign_zero);
        const Eigen::VectorXd h = x + cfg.alpha * v;
        const double mu = cur.value / cfg.alpha;
        x_hat = prox.solve_constrained(h, mu, prefix).x;

        Eigen::VectorXd y = x_hat.array() - median_of(x_hat);
        const double y_norm = y.norm();
        if (y_norm < 1e-10) break;  // degenerate; next attempt
        x = y / y_norm;
      }

      const double x_hat_norm = x_hat.norm();
      if (x_hat_norm < 1e-10) {
        summary.retries += 1;
        continue;
      }
      ++produced;
      const Eigen::VectorXd candidate = x_hat / x_hat_norm;
      const CheegerObjective cand_obj = cheeger_eval(g, candidate, kind);
      const double cand_e = cand_obj.defined ? cand_obj.value : 0.0;
      if (!emitted_set || cand_e < emitted_e) {
        emitted = candidate;
        emitted_e = cand_e;
        emitted_set = true;
        summary.iterations = iterations;
      }
    }

    if (!emitted_set)
      throw NumericalError("balanced method: degenerate iterates for column " +
                           std::to_string(k) + " after " + std::to_string(max_attempts) +
                           " attempts");

    const CheegerObjective e_out = cheeger_eval(g, emitted, kind);
    summary.e_emitted = e_out.defined ? e_out.value : 0.0;
    Eigen::VectorXd centered = emitted.array() - median_of(emitted);
    if (centered.norm() > 1e-12) {
      centered.normalize();
      const CheegerObjective e_cen = cheeger_eval(g, centered, kind);
      summary.e_centered = e_cen.defined ? e_cen.value : 0.0;
    }
    res.trace.vectors.push_back(summary);

    basis.col(k) = emitted;
    prefix.push_back(emitted);
  }

  res.stabilization_deviation = max_orthonormality_deviation(basis);
  res.stabilization_flagged = res.stabilization_deviation > 1e-6;

  auto metric = [&](const Eigen::VectorXd& v) {
    const CheegerObjective c = cheeger_eval(g, v, kind);
    return c.defined ? c.value : 0.0;
  };
  res.basis = finalize_basis(g, basis, "balanced", metric);
  res.basis.converged = !res.stabilization_flagged;
  return res;
}

}  // namespace digft
