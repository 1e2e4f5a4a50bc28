#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "digft/pamal.hpp"
#include "digft/soc.hpp"
#include "digft/variation.hpp"
#include "support/oracles.hpp"

using namespace digft;

TEST_CASE("theta vanishes exactly at a fixed point") {
  const Eigen::MatrixXd x = random_orthonormal_init(5, 3);
  const Eigen::MatrixXd p = random_orthonormal_init(5, 4);
  CHECK(theta_norm_inf(0.5, 0.5, 50.0, x, x, p, p) == 0.0);
  CHECK(theta_norm_inf(0.5, 0.5, 50.0, x, x, x, p) > 0.0);
}

TEST_CASE("single inner step from the analytic optimum") {
  const DirectedGraph g = from_edge_list("0\t1\t1.0\n1\t0\t1.0");
  const double s = 1.0 / std::sqrt(2.0);

  PamalConfig cfg;
  cfg.prox.tolerance = 1e-11;

  PamalState state;
  state.x.resize(2, 2);
  state.x.col(0) = constant_column(2);
  state.x(0, 1) = s;
  state.x(1, 1) = -s;
  state.p = state.x;
  // Multiplier column 2 set to the unique subgradient of the variation at
  // the optimum; the X- and P-steps then reproduce the state.
  state.lambda = Eigen::MatrixXd::Zero(2, 2);
  state.lambda(0, 1) = 1.0;
  state.lambda(1, 1) = -1.0;
  state.rho = cfg.rho1;
  state.outer_index = 1;

  const ProxGdvSolver prox(g, cfg.prox);
  std::vector<ProxWarmStart> warm(2);
  const PamalInnerResult inner = pam_inner(g, state, 1e10, cfg, prox, warm, nullptr);
  CHECK(inner.inner_iterations == 1);
  CHECK(inner.theta_inf < 1e-8);
}

TEST_CASE("x-step target reduces to P when c1 is tiny and Lambda is zero") {
  // Edgeless graph: the prox is the identity on its target, so one inner
  // step exposes the completed-square target directly.
  const DirectedGraph g = from_edge_list("n=4\n");
  PamalConfig cfg;
  cfg.c_lower = 1e-7;
  cfg.c1 = 1e-6;
  cfg.max_inner_iterations = 1;

  PamalState state;
  state.x = random_orthonormal_init(4, 1);
  state.p = random_orthonormal_init(4, 2);
  state.lambda = Eigen::MatrixXd::Zero(4, 4);
  state.rho = cfg.rho1;
  state.outer_index = 1;
  const Eigen::MatrixXd p_prev = state.p;

  const ProxGdvSolver prox(g, cfg.prox);
  std::vector<ProxWarmStart> warm(4);
  pam_inner(g, state, 0.0, cfg, prox, warm, nullptr);
  CHECK((state.x.rightCols(3) - p_prev.rightCols(3)).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("two-node pair matches the splitting solver up to sign") {
  const DirectedGraph g = from_edge_list("0\t1\t1.0\n1\t0\t1.0");
  const PamalResult pr = pamal_basis(g);
  const SocResult sr = soc_basis(g);
  CHECK(pr.converged);
  for (int k = 0; k < 2; ++k) {
    const double same = (pr.basis.vectors.col(k) - sr.basis.vectors.col(k)).norm();
    const double flipped = (pr.basis.vectors.col(k) + sr.basis.vectors.col(k)).norm();
    CHECK(std::min(same, flipped) <= 1e-6);
  }
}

TEST_CASE("edgeless graph") {
  const PamalResult r = pamal_basis(from_edge_list("n=4\n"));
  CHECK(r.converged);
  const DirectedGraph g = from_edge_list("n=4\n");
  CHECK(total_gdv(g, r.basis.vectors) == 0.0);
  CHECK(max_orthonormality_deviation(r.basis.vectors) <= 1e-10);
  CHECK(first_column_is_constant(r.basis.vectors, 0.0));
}

TEST_CASE("zero-variation column counts on the cluster analogues") {
  auto zero_columns = [](const DirectedGraph& g, const Eigen::MatrixXd& basis) {
    int count = 0;
    for (int k = 0; k < basis.cols(); ++k)
      if (gdv(g, basis.col(k)) < 1e-5) ++count;
    return count;
  };

  // The explicit families certify that at least 3/2/1 orthonormal
  // zero-variation vectors exist.
  for (auto variant : {ThreeClusterVariant::A, ThreeClusterVariant::B, ThreeClusterVariant::C}) {
    const DirectedGraph g = gen_three_cluster(variant);
    const auto family = testing::zero_gdv_family(variant);
    for (std::size_t i = 0; i < family.size(); ++i) {
      CHECK(gdv(g, family[i]) == 0.0);
      CHECK(std::abs(family[i].norm() - 1.0) <= 1e-12);
      for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(family[i].dot(family[j])) <= 1e-12);
    }
  }

  // The families bound the counts from above (the B cone is too narrow for
  // an orthogonal pair; A's spans the whole cluster-mean space); the
  // constant column bounds them from below. Which local solution the solver
  // lands in varies with the initialization, so only the bounds are stable.
  const DirectedGraph a = gen_three_cluster(ThreeClusterVariant::A);
  const int za = zero_columns(a, pamal_basis(a).basis.vectors);
  CHECK(za >= 1);
  CHECK(za <= 3);
  const DirectedGraph b = gen_three_cluster(ThreeClusterVariant::B);
  const int zb = zero_columns(b, pamal_basis(b).basis.vectors);
  CHECK(zb >= 1);
  CHECK(zb <= 2);
  const DirectedGraph c = gen_three_cluster(ThreeClusterVariant::C);
  CHECK(zero_columns(c, pamal_basis(c).basis.vectors) == 1);
}

TEST_CASE("stopping machinery invariants") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const DirectedGraph g = gen_scale_free(10, 2, seed);
    PamalConfig cfg;
    cfg.seed = seed;
    const PamalResult r = pamal_basis(g, cfg);

    CHECK(r.converged);
    CHECK(!r.inner_cap_hit);
    CHECK(r.final_infeasibility <= 1e-6);
    CHECK(r.kkt_residual <= 1e-4);
    CHECK(max_orthonormality_deviation(r.basis.vectors) <= 1e-6);
    CHECK(first_column_is_constant(r.basis.vectors, 0.0));

    // rho never decreases along the trace.
    for (std::size_t i = 1; i < r.trace.records.size(); ++i)
      CHECK(r.trace.records[i].rho >= r.trace.records[i - 1].rho);

    // GQV totals are invariant across orthonormal bases.
    const double tr = g.laplacian().trace();
    CHECK(std::abs(total_gqv(g, r.basis.vectors) - tr) <= 1e-8 * std::max(1.0, tr));
  }
}

TEST_CASE("multipliers stay inside the box") {
  const DirectedGraph g = gen_three_cluster(ThreeClusterVariant::B);
  PamalConfig cfg;
  cfg.lambda_min = -0.05;  // deliberately tight so clipping is exercised
  cfg.lambda_max = 0.05;
  cfg.max_outer_iterations = 40;

  PamalState state;
  state.x = identity_completion_init(15);
  state.p = state.x;
  state.lambda = Eigen::MatrixXd::Zero(15, 15);
  state.rho = cfg.rho1;
  state.r_prev_inf = std::numeric_limits<double>::infinity();

  const ProxGdvSolver prox(g, cfg.prox);
  std::vector<ProxWarmStart> warm(15);
  for (int k = 1; k <= 10; ++k) {
    state.outer_index = k;
    pam_inner(g, state, std::pow(0.9, k), cfg, prox, warm, nullptr);
    state.lambda = (state.lambda + state.rho * (state.p - state.x))
                       .cwiseMax(cfg.lambda_min)
                       .cwiseMin(cfg.lambda_max);
    CHECK(state.lambda.maxCoeff() <= cfg.lambda_max);
    CHECK(state.lambda.minCoeff() >= cfg.lambda_min);
    CHECK((state.lambda.array().abs() > 0.0).any());
  }
}

TEST_CASE("determinism") {
  const DirectedGraph g = gen_three_cluster(ThreeClusterVariant::A);
  PamalConfig cfg;
  cfg.init = BasisInit::RandomOrthonormal;
  cfg.seed = 5;
  const PamalResult a = pamal_basis(g, cfg);
  const PamalResult b = pamal_basis(g, cfg);
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    CHECK(a.trace.records[i].objective == b.trace.records[i].objective);
    CHECK(a.trace.records[i].theta_inf == b.trace.records[i].theta_inf);
  }
  CHECK((a.basis.vectors - b.basis.vectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("config validation") {
  const DirectedGraph g = from_edge_list("0\t1\t1.0");
  PamalConfig cfg;
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(pamal_basis(g, cfg), std::invalid_argument);
  cfg = PamalConfig{};
  cfg.tau = 1.0;
  CHECK_THROWS_AS(pamal_basis(g, cfg), std::invalid_argument);
  cfg = PamalConfig{};
  cfg.c1 = 2.0;  // outside [c_lower, c_upper]
  CHECK_THROWS_AS(pamal_basis(g, cfg), std::invalid_argument);

  // Schedules must respect the bounds.
  cfg = PamalConfig{};
  cfg.c_lower = 0.25;
  cfg.c_upper = 0.75;
  cfg.c1_schedule = [](int, int) { return 5.0; };
  CHECK_THROWS_AS(pamal_basis(g, cfg), std::invalid_argument);
  cfg.c1_schedule = [](int k, int) { return k % 2 == 0 ? 0.3 : 0.6; };
  CHECK_NOTHROW(pamal_basis(g, cfg));
}
