#include "digft/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "digft/errors.hpp"
#include "digft/rng.hpp"

namespace digft {

Eigen::VectorXd constant_column(int n) {
  return Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

double max_orthonormality_deviation(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd gram = x.transpose() * x;
  return (gram - Eigen::MatrixXd::Identity(x.cols(), x.cols()))
      .cwiseAbs()
      .maxCoeff();
}

bool first_column_is_constant(const Eigen::MatrixXd& x, double tol) {
  return (x.col(0) - constant_column(static_cast<int>(x.rows()))).cwiseAbs().maxCoeff() <= tol;
}

void orthonormalize_columns(Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.cols());
  for (int k = 0; k < n; ++k) {
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < k; ++j) x.col(k) -= x.col(j).dot(x.col(k)) * x.col(j);
    const double norm = x.col(k).norm();
    if (norm < 1e-8) throw NumericalError("degenerate column during orthonormalization");
    x.col(k) /= norm;
  }
}

double stabilize_pinned(Eigen::MatrixXd& x) {
  const double before = std::max(
      max_orthonormality_deviation(x),
      (x.col(0) - constant_column(static_cast<int>(x.rows()))).cwiseAbs().maxCoeff());
  x.col(0) = constant_column(static_cast<int>(x.rows()));
  orthonormalize_columns(x);
  // Re-pin: the normalization above may move the constant by one ulp.
  x.col(0) = constant_column(static_cast<int>(x.rows()));
  return before;
}

void apply_sign_rule(Eigen::MatrixXd& x,
                     const std::function<double(const Eigen::VectorXd&)>& metric,
                     int first_col) {
  for (int k = first_col; k < x.cols(); ++k) {
    const double plus = metric(x.col(k));
    const double minus = metric(-x.col(k));
    const double tie = 1e-12 * std::max(1.0, std::abs(plus) + std::abs(minus));
    bool flip;
    if (std::abs(plus - minus) <= tie) {
      int lead = 0;
      while (lead < x.rows() && std::abs(x(lead, k)) <= 1e-12) ++lead;
      flip = lead < x.rows() && x(lead, k) < 0.0;
    } else {
      flip = minus < plus;
    }
    if (flip) x.col(k) = -x.col(k);
  }
}

void sort_columns_by(Eigen::MatrixXd& x, Eigen::VectorXd& keys, int first_col) {
  const int n = static_cast<int>(x.cols());
  std::vector<int> order(n - first_col);
  std::iota(order.begin(), order.end(), first_col);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys(a) < keys(b); });
  Eigen::MatrixXd xs = x;
  Eigen::VectorXd ks = keys;
  for (std::size_t i = 0; i < order.size(); ++i) {
    x.col(first_col + static_cast<int>(i)) = xs.col(order[i]);
    keys(first_col + static_cast<int>(i)) = ks(order[i]);
  }
}

FourierBasis finalize_basis(const DirectedGraph& g, Eigen::MatrixXd x, std::string method,
                            const std::function<double(const Eigen::VectorXd&)>& metric) {
  (void)g;
  stabilize_pinned(x);
  apply_sign_rule(x, metric);
  Eigen::VectorXd keys(x.cols());
  for (int k = 0; k < x.cols(); ++k) keys(k) = metric(x.col(k));
  sort_columns_by(x, keys);

  FourierBasis basis;
  basis.vectors = std::move(x);
  basis.column_variation = std::move(keys);
  basis.method = std::move(method);
  return basis;
}

Eigen::MatrixXd identity_completion_init(int n) {
  Eigen::MatrixXd x(n, n);
  x.col(0) = constant_column(n);
  for (int k = 1; k < n; ++k) x.col(k) = Eigen::VectorXd::Unit(n, k);
  orthonormalize_columns(x);
  return x;
}

Eigen::MatrixXd random_orthonormal_init(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(n, n);
  x.col(0) = Eigen::VectorXd::Ones(n);
  for (int k = 1; k < n; ++k)
    for (int i = 0; i < n; ++i) x(i, k) = rng.normal();
  orthonormalize_columns(x);
  // The first column of the Gram-Schmidt output is the normalized constant.
  x.col(0) = constant_column(n);
  return x;
}

}  // namespace digft
