#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "digft/spectral.hpp"
#include "digft/variation.hpp"
#include "support/oracles.hpp"

using namespace digft;

TEST_CASE("laplacian eigenbasis") {
  SUBCASE("undirected pair") {
    const DirectedGraph g = from_edge_list("0\t1\t1.0\n1\t0\t1.0");
    const SpectralResult r = laplacian_eigenbasis(g);
    CHECK(!r.symmetrized);
    CHECK(r.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-12));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(r.basis.vectors(0, 0) - s) <= 1e-12);
    CHECK(std::abs(std::abs(r.basis.vectors(0, 1)) - s) <= 1e-12);
  }

  SUBCASE("edgeless graph keeps the pinned completion") {
    const SpectralResult r = laplacian_eigenbasis(from_edge_list("n=3\n"));
    CHECK(r.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
    CHECK(first_column_is_constant(r.basis.vectors, 0.0));
    CHECK(max_orthonormality_deviation(r.basis.vectors) <= 1e-10);
  }

  SUBCASE("orthonormality and ordering on random graphs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const DirectedGraph g = gen_scale_free(12, 2, seed);
      const SpectralResult r = laplacian_eigenbasis(g);
      CHECK(max_orthonormality_deviation(r.basis.vectors) <= 1e-10);
      CHECK(first_column_is_constant(r.basis.vectors, 1e-12));
      for (int k = 1; k < 12; ++k) CHECK(r.eigenvalues(k) >= r.eigenvalues(k - 1) - 1e-12);
      // Columns are eigenvectors.
      const Eigen::MatrixXd l = g.laplacian();
      for (int k = 0; k < 12; ++k)
        CHECK((l * r.basis.vectors.col(k) - r.eigenvalues(k) * r.basis.vectors.col(k))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-9);
    }
  }

  SUBCASE("directed input is symmetrized with the flag set") {
    const DirectedGraph g = from_edge_list("0\t1\t1.0\n1\t2\t1.0\n2\t0\t1.0");
    const SpectralResult r = laplacian_eigenbasis(g);
    CHECK(r.symmetrized);
    CHECK(max_orthonormality_deviation(r.basis.vectors) <= 1e-10);
  }

  SUBCASE("disconnected graph still pins the constant") {
    // Two components: the nullspace is two-dimensional.
    const DirectedGraph g = from_edge_list("n=4\n0\t1\t1.0\n1\t0\t1.0\n2\t3\t1.0\n3\t2\t1.0");
    const SpectralResult r = laplacian_eigenbasis(g);
    CHECK(first_column_is_constant(r.basis.vectors, 0.0));
    CHECK(max_orthonormality_deviation(r.basis.vectors) <= 1e-10);
    CHECK(std::abs(r.eigenvalues(0)) <= 1e-12);
    CHECK(std::abs(r.eigenvalues(1)) <= 1e-12);
  }
}

TEST_CASE("adjacency eigenbasis") {
  SUBCASE("undirected pair, descending eigenvalues") {
    const DirectedGraph g = from_edge_list("0\t1\t1.0\n1\t0\t1.0");
    const SpectralResult r = adjacency_eigenbasis(g);
    CHECK(r.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.eigenvalues(1) == doctest::Approx(-1.0).epsilon(1e-12));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(r.basis.vectors(0, 0)) - s) <= 1e-12);
  }

  SUBCASE("edgeless") {
    const SpectralResult r = adjacency_eigenbasis(from_edge_list("n=3\n"));
    CHECK(r.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("directed input is an error") {
    const DirectedGraph g = from_edge_list("0\t1\t1.0\n1\t2\t1.0\n2\t0\t1.0");
    CHECK_THROWS_AS(adjacency_eigenbasis(g), std::invalid_argument);
  }
}

TEST_CASE("gft transforms") {
  Rng rng(41);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const DirectedGraph g = gen_scale_free(10, 2, seed);
    const FourierBasis basis = laplacian_eigenbasis(g).basis;

    Eigen::VectorXd s(10);
    for (int i = 0; i < 10; ++i) s(i) = rng.normal();

    const Spectrum coeffs = gft_forward(basis, s);
    CHECK((gft_inverse(basis, coeffs) - s).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(std::abs(coeffs.norm() - s.norm()) <= 1e-10);

    Eigen::VectorXd t(10);
    for (int i = 0; i < 10; ++i) t(i) = rng.normal();
    CHECK(std::abs(gft_forward(basis, s).dot(gft_forward(basis, t)) - s.dot(t)) <= 1e-10);
  }

  SUBCASE("constant signal concentrates on the pinned column") {
    const DirectedGraph g = gen_scale_free(9, 2, 7);
    const FourierBasis basis = laplacian_eigenbasis(g).basis;
    const Spectrum coeffs = gft_forward(basis, Eigen::VectorXd::Constant(9, 2.0));
    CHECK(coeffs(0) == doctest::Approx(2.0 * 3.0).epsilon(1e-12));
    CHECK(coeffs.tail(8).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("dimension mismatch") {
    const FourierBasis basis = laplacian_eigenbasis(from_edge_list("n=3\n")).basis;
    CHECK_THROWS_AS(gft_forward(basis, Eigen::VectorXd::Zero(5)), std::invalid_argument);
    CHECK_THROWS_AS(gft_inverse(basis, Eigen::VectorXd::Zero(5)), std::invalid_argument);
  }
}

TEST_CASE("ordering by variation") {
  const DirectedGraph g = gen_scale_free(11, 2, 3);
  const SpectralResult r = laplacian_eigenbasis(g);

  SUBCASE("already sorted stays put") {
    const FourierBasis sorted = order_by_variation(r.basis, g, OrderingMetric::GQV);
    CHECK((sorted.vectors - r.basis.vectors).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("gqv ordering reproduces the eigenvalue ordering") {
    // For unit eigenvectors the quadratic variation equals the eigenvalue.
    FourierBasis shuffled = r.basis;
    shuffled.vectors.col(1).swap(shuffled.vectors.col(9));
    shuffled.vectors.col(3).swap(shuffled.vectors.col(6));
    const FourierBasis sorted = order_by_variation(shuffled, g, OrderingMetric::GQV);
    CHECK((sorted.vectors - r.basis.vectors).cwiseAbs().maxCoeff() <= 1e-12);
    for (int k = 0; k < 11; ++k)
      CHECK(sorted.column_variation(k) == doctest::Approx(r.eigenvalues(k)).epsilon(1e-9));
  }

  SUBCASE("column one never moves") {
    for (auto metric : {OrderingMetric::GDV, OrderingMetric::GAV, OrderingMetric::TV_L}) {
      const FourierBasis sorted = order_by_variation(r.basis, g, metric);
      CHECK((sorted.vectors.col(0) - r.basis.vectors.col(0)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("gqv totals are basis invariant") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DirectedGraph g = gen_scale_free(13, 3, seed);
    const double tr = g.laplacian().trace();
    for (const FourierBasis& basis :
         {laplacian_eigenbasis(g).basis, adjacency_eigenbasis(g).basis}) {
      CHECK(std::abs(total_gqv(g, basis.vectors) - tr) <= 1e-8 * std::max(1.0, tr));
    }
  }
}
