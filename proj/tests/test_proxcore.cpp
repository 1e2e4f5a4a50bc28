#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "digft/basis.hpp"
#include "digft/proxcore.hpp"
#include "digft/variation.hpp"
#include "support/oracles.hpp"

using namespace digft;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

double grid_min_hinge(double v, double lambda) {
  double best_z = -2.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400000; ++i) {
    const double z = -2.0 + i * 1e-5;
    const double val = lambda * std::max(z, 0.0) + 0.5 * (z - v) * (z - v);
    if (val < best) {
      best = val;
      best_z = z;
    }
  }
  return best_z;
}

}  // namespace

TEST_CASE("hinge prox") {
  CHECK(hinge_prox(-1.0, 0.5) == -1.0);
  CHECK(hinge_prox(0.3, 0.5) == 0.0);
  CHECK(hinge_prox(2.0, 0.5) == 1.5);

  SUBCASE("matches the grid oracle") {
    for (double v : {-1.5, -0.2, 0.0, 0.3, 0.5, 0.9, 1.7}) {
      for (double lambda : {0.0, 0.25, 0.5, 1.0}) {
        CHECK(std::abs(hinge_prox(v, lambda) - grid_min_hinge(v, lambda)) <= 2e-5);
      }
    }
  }

  CHECK_THROWS_AS(hinge_prox(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("edge difference operator") {
  Rng rng(21);
  const DirectedGraph g = testing::random_directed_graph(7, 0.4, rng);
  const EdgeDifferenceOperator op(g);
  CHECK(op.edge_count() == g.edge_count());
  CHECK(op.apply(Eigen::VectorXd::Ones(7)).cwiseAbs().maxCoeff() == 0.0);

  // Row e carries x_src - x_dst and the edge weight.
  Eigen::VectorXd x(7);
  for (int i = 0; i < 7; ++i) x(i) = rng.normal();
  const Eigen::VectorXd ex = op.apply(x);
  int row = 0;
  double hinge = 0.0;
  for (const Edge& e : g.edges()) {
    CHECK(ex(row) == x(e.src) - x(e.dst));
    hinge += op.weights()(row) * std::max(ex(row), 0.0);
    ++row;
  }
  CHECK(hinge == doctest::Approx(gdv(g, x)).epsilon(1e-14));
}

TEST_CASE("prox of gdv: pinned cases") {
  const DirectedGraph g = from_edge_list("0\t1\t1.0");

  SUBCASE("constant target is a fixed point") {
    const Eigen::VectorXd t = Eigen::VectorXd::Constant(2, 1.7);
    const ProxResult r = prox_gdv(g, t, 1.0);
    CHECK(r.converged);
    CHECK((r.x - t).cwiseAbs().maxCoeff() <= 1e-7);
  }

  SUBCASE("two-node analytic optimum") {
    const ProxResult r = prox_gdv(g, vec({1.0, 0.0}), 1.0);
    CHECK(r.converged);
    CHECK(std::abs(r.x(0) - 0.5) <= 1e-6);
    CHECK(std::abs(r.x(1) - 0.5) <= 1e-6);
  }

  SUBCASE("inactive hinge returns the target") {
    const ProxResult r = prox_gdv(g, vec({0.0, 1.0}), 1.0);
    CHECK(r.converged);
    CHECK((r.x - vec({0.0, 1.0})).cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("prox of gdv: oracle agreement and certificates") {
  Rng rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
    const DirectedGraph g = testing::random_directed_graph(n, 0.6, rng);
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t(i) = rng.normal();
    const double mu = rng.uniform(0.5, 4.0);

    const ProxResult r = prox_gdv(g, t, mu);
    CHECK(r.converged);
    CHECK(r.stationarity <= 1e-6);
    // Multipliers are box-feasible.
    const EdgeDifferenceOperator op(g);
    for (int e = 0; e < op.edge_count(); ++e) {
      CHECK(r.multipliers(e) >= -1e-12);
      CHECK(r.multipliers(e) <= op.weights()(e) + 1e-12);
    }

    const Eigen::VectorXd oracle = testing::prox_oracle_primal_dual(g, t, mu);
    const double gap = testing::prox_objective(g, r.x, t, mu) -
                       testing::prox_objective(g, oracle, t, mu);
    CHECK(gap <= 1e-5);
  }
}

TEST_CASE("prox of gdv is nonexpansive in practice") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 3));
    const DirectedGraph g = testing::random_directed_graph(n, 0.5, rng);
    Eigen::VectorXd t1(n), t2(n);
    for (int i = 0; i < n; ++i) {
      t1(i) = rng.normal();
      t2(i) = rng.normal();
    }
    const double mu = rng.uniform(0.5, 3.0);
    const Eigen::VectorXd x1 = prox_gdv(g, t1, mu).x;
    const Eigen::VectorXd x2 = prox_gdv(g, t2, mu).x;
    CHECK((x1 - x2).norm() <= (t1 - t2).norm() + 1e-6);
  }
}

TEST_CASE("constrained prox") {
  SUBCASE("empty prefix reduces to the unconstrained prox") {
    Rng rng(24);
    const DirectedGraph g = testing::random_directed_graph(5, 0.5, rng);
    Eigen::VectorXd t(5);
    for (int i = 0; i < 5; ++i) t(i) = rng.normal();
    const Eigen::VectorXd a = prox_gdv(g, t, 2.0).x;
    const Eigen::VectorXd b = prox_gdv_constrained(g, t, 2.0, {}).x;
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-9);
  }

  SUBCASE("feasible target with inactive hinge is a fixed point") {
    // Chain 0->1->2: an increasing signal keeps every hinge inactive.
    const DirectedGraph g = from_edge_list("0\t1\t1.0\n1\t2\t1.0");
    const Eigen::VectorXd t = vec({-1.0, 0.0, 1.0});
    const std::vector<Eigen::VectorXd> prefix{constant_column(3)};
    const ProxResult r = prox_gdv_constrained(g, t, 1.0, prefix);
    CHECK(r.converged);
    CHECK((r.x - t).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK(std::abs(r.x.dot(prefix[0])) <= 1e-10);
  }

  SUBCASE("two-node pair against the line-grid oracle") {
    const DirectedGraph g = from_edge_list("0\t1\t1.0\n1\t0\t1.0");
    const std::vector<Eigen::VectorXd> prefix{constant_column(2)};
    const Eigen::VectorXd t = vec({1.0, 0.0});
    const ProxResult r = prox_gdv_constrained(g, t, 1.0, prefix);
    CHECK(r.converged);

    const Eigen::VectorXd oracle =
        testing::prox_oracle_line_grid(g, t, 1.0, vec({1.0, -1.0}));
    CHECK((r.x - oracle).cwiseAbs().maxCoeff() <= 1e-5);
    const double gap = testing::prox_objective(g, r.x, t, 1.0) -
                       testing::prox_objective(g, oracle, t, 1.0);
    CHECK(gap <= 1e-6);
  }

  SUBCASE("result is orthogonal to the prefix") {
    Rng rng(25);
    for (int trial = 0; trial < 20; ++trial) {
      const DirectedGraph g = testing::random_directed_graph(6, 0.5, rng);
      Eigen::VectorXd t(6);
      for (int i = 0; i < 6; ++i) t(i) = rng.normal();
      std::vector<Eigen::VectorXd> prefix{constant_column(6)};
      Eigen::VectorXd extra(6);
      for (int i = 0; i < 6; ++i) extra(i) = rng.normal();
      extra = project_complement(extra, prefix).normalized();
      prefix.push_back(extra);

      const ProxResult r = prox_gdv_constrained(g, t, 1.5, prefix);
      for (const auto& v : prefix) CHECK(std::abs(r.x.dot(v)) <= 1e-8);
    }
  }
}

TEST_CASE("nearest orthonormal") {
  CHECK((nearest_orthonormal(Eigen::MatrixXd::Identity(4, 4)) -
         Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  SUBCASE("orthonormal fixed point") {
    const Eigen::MatrixXd q = random_orthonormal_init(6, 5);
    CHECK((nearest_orthonormal(q) - q).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("positive diagonal maps to the identity") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 0.5;
    CHECK((nearest_orthonormal(m) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <=
          1e-14);
  }

  SUBCASE("trace optimality against random orthonormal samples") {
    Rng rng(26);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
      const Eigen::MatrixXd p = nearest_orthonormal(m);
      CHECK(max_orthonormality_deviation(p) <= 1e-12);
      const double best = (p.transpose() * m).trace();
      for (int sample = 0; sample < 200; ++sample) {
        const Eigen::MatrixXd z = random_orthonormal_init(n, rng.next_u64());
        CHECK(best >= (z.transpose() * m).trace() - 1e-9);
      }
    }
  }

  SUBCASE("rank-deficient input stays orthonormal") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 0) = 1.0;
    CHECK(max_orthonormality_deviation(nearest_orthonormal(m)) <= 1e-12);
  }
}

TEST_CASE("project complement") {
  CHECK((project_complement(vec({1.0, 2.0}), {}) - vec({1.0, 2.0})).cwiseAbs().maxCoeff() ==
        0.0);

  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<Eigen::VectorXd> prefix{vec({r, r})};

  SUBCASE("vectors in the span vanish") {
    CHECK(project_complement(vec({3.0, 3.0}), prefix).cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("hand value") {
    const Eigen::VectorXd p = project_complement(vec({1.0, 0.0}), prefix);
    CHECK(std::abs(p(0) - 0.5) <= 1e-15);
    CHECK(std::abs(p(1) + 0.5) <= 1e-15);
  }

  SUBCASE("orthogonality after projection") {
    Rng rng(27);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 4 + static_cast<int>(rng.uniform_int(0, 4));
      std::vector<Eigen::VectorXd> basis{constant_column(n)};
      Eigen::VectorXd extra(n);
      for (int i = 0; i < n; ++i) extra(i) = rng.normal();
      basis.push_back(project_complement(extra, basis).normalized());
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = rng.normal();
      const Eigen::VectorXd p = project_complement(x, basis);
      for (const auto& v : basis) CHECK(std::abs(p.dot(v)) <= 1e-12);
    }
  }
}
