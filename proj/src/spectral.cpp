#include "digft/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "digft/errors.hpp"
#include "digft/variation.hpp"

namespace digft {

namespace {

// Rotate the near-null eigenvector block so its first column is exactly the
// scaled constant (1 is always in the Laplacian nullspace; for disconnected
// graphs the block is wider than one column).
void align_constant_column(Eigen::MatrixXd& vectors, const Eigen::VectorXd& values) {
  const int n = static_cast<int>(vectors.rows());
  const double tol = 1e-9 * std::max(1.0, values.cwiseAbs().maxCoeff());
  int block = 0;
  while (block < n && std::abs(values(block)) <= tol) ++block;
  block = std::max(block, 1);

  // Candidates: the constant first, then the block's own columns; modified
  // Gram-Schmidt keeps the first `block` independent ones. Exactly one
  // candidate drops since the constant lies in the block's span.
  Eigen::MatrixXd rotated(n, block);
  rotated.col(0) = constant_column(n);
  int out = 1;
  for (int j = 0; j < block && out < block; ++j) {
    Eigen::VectorXd v = vectors.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (int t = 0; t < out; ++t) v -= rotated.col(t).dot(v) * rotated.col(t);
    if (v.norm() >= 1e-8) rotated.col(out++) = v.normalized();
  }
  if (out != block) throw NumericalError("failed to rotate the Laplacian nullspace block");
  vectors.leftCols(block) = rotated;
}

}  // namespace

SpectralResult laplacian_eigenbasis(const DirectedGraph& g) {
  SpectralResult res;
  DirectedGraph work = g;
  if (!g.is_symmetric()) {
    work = symmetrize(g);
    res.symmetrized = true;
  }

  const Eigen::MatrixXd l = work.laplacian();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(l);
  if (eig.info() != Eigen::Success) throw NumericalError("Laplacian eigensolver failed");

  Eigen::MatrixXd vectors = eig.eigenvectors();  // ascending eigenvalues
  Eigen::VectorXd values = eig.eigenvalues();
  align_constant_column(vectors, values);
  apply_sign_rule(vectors, [&](const Eigen::VectorXd& v) { return gdv(work, v); });

  res.basis.vectors = std::move(vectors);
  res.basis.column_variation = values;
  res.basis.method = "laplacian";
  res.eigenvalues = std::move(values);
  return res;
}

SpectralResult adjacency_eigenbasis(const DirectedGraph& g) {
  if (!g.is_symmetric())
    throw std::invalid_argument("adjacency eigenbasis requires a symmetric graph");

  const Eigen::MatrixXd a = g.adjacency();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() != Eigen::Success) throw NumericalError("adjacency eigensolver failed");

  const int n = g.node_count();
  Eigen::MatrixXd vectors(n, n);
  Eigen::VectorXd values(n);
  for (int k = 0; k < n; ++k) {  // descending eigenvalues
    vectors.col(k) = eig.eigenvectors().col(n - 1 - k);
    values(k) = eig.eigenvalues()(n - 1 - k);
  }
  apply_sign_rule(vectors, [&](const Eigen::VectorXd& v) { return gdv(g, v); },
                  /*first_col=*/0);

  SpectralResult res;
  res.basis.vectors = std::move(vectors);
  res.basis.column_variation = values;
  res.basis.method = "adjacency";
  res.eigenvalues = std::move(values);
  return res;
}

Spectrum gft_forward(const FourierBasis& basis, const GraphSignal& s) {
  if (s.size() != basis.vectors.rows())
    throw std::invalid_argument("signal length does not match basis dimension");
  return basis.vectors.transpose() * s;
}

GraphSignal gft_inverse(const FourierBasis& basis, const Spectrum& coeffs) {
  if (coeffs.size() != basis.vectors.cols())
    throw std::invalid_argument("spectrum length does not match basis dimension");
  return basis.vectors * coeffs;
}

FourierBasis order_by_variation(const FourierBasis& basis, const DirectedGraph& g,
                                OrderingMetric metric) {
  if (basis.vectors.rows() != g.node_count())
    throw std::invalid_argument("basis dimension does not match graph");

  auto eval = [&](const Eigen::VectorXd& v) {
    switch (metric) {
      case OrderingMetric::GDV: return gdv(g, v);
      case OrderingMetric::GAV: return gav(g, v);
      case OrderingMetric::GQV: return gqv(g, v);
      case OrderingMetric::TV_L: return tv_laplacian(g, v);
    }
    throw std::logic_error("unknown metric");
  };

  FourierBasis out = basis;
  Eigen::VectorXd keys(out.vectors.cols());
  for (int k = 0; k < out.vectors.cols(); ++k) keys(k) = eval(out.vectors.col(k));
  sort_columns_by(out.vectors, keys);
  out.column_variation = std::move(keys);
  return out;
}

}  // namespace digft
