#include "digft/variation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "digft/errors.hpp"

namespace digft {

double cut_size(const DirectedGraph& g, const VertexSubset& s) {
  if (static_cast<int>(s.membership.size()) != g.node_count())
    throw std::invalid_argument("subset size does not match graph");
  double total = 0.0;
  for (const Edge& e : g.edges())
    if (s.membership[e.src] && !s.membership[e.dst]) total += e.weight;
  return total;
}

double lovasz_extension(const DirectedGraph& g, const Eigen::VectorXd& x) {
  const int n = g.node_count();
  if (x.size() != n) throw std::invalid_argument("signal length does not match graph");
  if (!x.allFinite()) throw std::invalid_argument("signal must be finite");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return x(a) < x(b); });

  // f(x) = sum_{i=1}^{N-1} F(C_i) (x_(i+1) - x_(i)) + x_(1) F(V) with C_i the
  // strict upper level set at x_(i). Suffix sets of the stable sort coincide
  // with the level sets wherever the increment is nonzero.
  VertexSubset upper;
  upper.membership.assign(n, true);
  double value = 0.0;  // F(V) = 0 for the cut, so the x_(1) term vanishes.
  for (int i = 0; i + 1 < n; ++i) {
    upper.membership[order[i]] = false;
    const double increment = x(order[i + 1]) - x(order[i]);
    if (increment != 0.0) value += cut_size(g, upper) * increment;
  }
  return value;
}

double gdv(const DirectedGraph& g, const Eigen::VectorXd& x) {
  if (x.size() != g.node_count()) throw std::invalid_argument("signal length does not match graph");
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const double d = x(e.src) - x(e.dst);
    if (d > 0.0) total += e.weight * d;
  }
  return total;
}

double gav(const DirectedGraph& g, const Eigen::VectorXd& x) {
  if (x.size() != g.node_count()) throw std::invalid_argument("signal length does not match graph");
  // Symmetrized weight per unordered pair: (a_ij + a_ji) / 2. For an already
  // symmetric graph this is just the shared weight.
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    // Count each unordered pair once, splitting the weight of each direction.
    total += 0.5 * e.weight * std::abs(x(e.src) - x(e.dst));
  }
  return total;
}

double gqv(const DirectedGraph& g, const Eigen::VectorXd& x) {
  if (x.size() != g.node_count()) throw std::invalid_argument("signal length does not match graph");
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    if (e.dst > e.src) {
      const double d = x(e.src) - x(e.dst);
      total += e.weight * d * d;
    }
  }
  return total;
}

double tv_adjacency(const DirectedGraph& g, const Eigen::VectorXd& s) {
  if (s.size() != g.node_count()) throw std::invalid_argument("signal length does not match graph");
  const Eigen::MatrixXd a = g.adjacency();
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(a, /*computeEigenvectors=*/false);
  const double rho = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (!(rho > 1e-14)) throw NumericalError("adjacency spectral radius is zero");
  return (s - (a / rho) * s).lpNorm<1>();
}

double tv_laplacian(const DirectedGraph& g, const Eigen::VectorXd& s) {
  if (s.size() != g.node_count()) throw std::invalid_argument("signal length does not match graph");
  return (g.laplacian() * s).lpNorm<1>();
}

double median_of(const Eigen::VectorXd& x) {
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) throw std::invalid_argument("median of empty vector");
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

CheegerObjective cheeger_eval(const DirectedGraph& g, const Eigen::VectorXd& x,
                              VariationKind kind) {
  CheegerObjective out;
  out.kind = kind;
  out.median = median_of(x);
  out.balance = (x.array() - out.median).abs().sum();
  out.numerator = kind == VariationKind::GDV ? gdv(g, x) : gav(g, x);
  if (out.balance > 0.0) {
    out.value = out.numerator / out.balance;
    out.defined = true;
  }
  return out;
}

std::pair<VertexSubset, double> brute_force_min_cut(const DirectedGraph& g) {
  const int n = g.node_count();
  if (n > 20) throw std::invalid_argument("brute_force_min_cut limited to n <= 20");
  if (n < 2) throw std::invalid_argument("need at least two nodes for a proper subset");

  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < all; ++mask) {
    const double value = cut_size(g, VertexSubset::from_mask(n, mask));
    if (value < best) {
      best = value;
      best_mask = mask;
    }
  }
  return {VertexSubset::from_mask(n, best_mask), best};
}

namespace {
double column_total(const DirectedGraph& g, const Eigen::MatrixXd& basis,
                    double (*metric)(const DirectedGraph&, const Eigen::VectorXd&)) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < basis.cols(); ++k) total += metric(g, basis.col(k));
  return total;
}
}  // namespace

double total_gdv(const DirectedGraph& g, const Eigen::MatrixXd& basis) {
  return column_total(g, basis, &gdv);
}
double total_gav(const DirectedGraph& g, const Eigen::MatrixXd& basis) {
  return column_total(g, basis, &gav);
}
double total_gqv(const DirectedGraph& g, const Eigen::MatrixXd& basis) {
  return column_total(g, basis, &gqv);
}

}  // namespace digft
