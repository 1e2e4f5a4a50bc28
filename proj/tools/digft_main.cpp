#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "digft/balanced.hpp"
#include "digft/errors.hpp"
#include "digft/experiment.hpp"
#include "digft/graph.hpp"
#include "digft/io.hpp"
#include "digft/pamal.hpp"
#include "digft/soc.hpp"
#include "digft/spectral.hpp"
#include "digft/variation.hpp"

namespace fs = std::filesystem;
using namespace digft;

namespace {

struct GenOptions {
  std::string model = "three-cluster";
  std::string variant = "A";
  int nodes = 20;
  int min_degree = 2;
  double radius = 0.35;
  double directed_fraction = 0.25;
  std::uint64_t seed = 1;
  std::string output;
};

struct BasisOptions {
  std::string method = "pamal";
  std::string graph;
  std::string output;
  std::string trace;
  std::string sidecar;
  std::string init = "identity";
  std::uint64_t seed = 0;

  SocConfig soc;
  PamalConfig pamal;
  BalancedConfig balanced;
  ProxGdvConfig prox;
};

struct TransformOptions {
  std::string basis;
  std::string signal;
  std::string output;
  bool inverse = false;
};

struct MetricsOptions {
  std::string graph;
  std::string basis;
  std::string output;
};

struct ExperimentOptions {
  std::string id = "convergence-spread";
  std::string out_dir;
  int seeds = 20;
  int nodes = 20;
  std::uint64_t base_seed = 1;
  std::vector<int> d_min_values;
  std::vector<std::string> variants;
  std::vector<std::string> methods;
  std::vector<int> timing_nodes;
  int threads = 0;
  double beta = 100.0;
  double rho1 = 50.0;
};

int run_gen(const GenOptions& opt) {
  DirectedGraph g = [&]() {
    if (opt.model == "three-cluster") {
      if (opt.variant == "A") return gen_three_cluster(ThreeClusterVariant::A);
      if (opt.variant == "B") return gen_three_cluster(ThreeClusterVariant::B);
      if (opt.variant == "C") return gen_three_cluster(ThreeClusterVariant::C);
      throw std::invalid_argument("variant must be A, B or C");
    }
    if (opt.model == "scale-free") return gen_scale_free(opt.nodes, opt.min_degree, opt.seed);
    if (opt.model == "geometric")
      return gen_random_geometric(opt.nodes, opt.radius, opt.directed_fraction, opt.seed);
    throw std::invalid_argument("model must be three-cluster, scale-free or geometric");
  }();
  save_edge_list(g, opt.output);
  std::cout << "wrote " << opt.output << " (" << g.node_count() << " nodes, "
            << g.edge_count() << " edge records)\n";
  return 0;
}

std::string basis_config_text(const BasisOptions& opt) {
  std::ostringstream os;
  os << "method=" << opt.method << "\nseed=" << opt.seed << "\ninit=" << opt.init
     << "\nbeta=" << format_double(opt.soc.beta) << "\nrho1=" << format_double(opt.pamal.rho1)
     << "\ngamma=" << format_double(opt.pamal.gamma) << "\ntau=" << format_double(opt.pamal.tau)
     << "\nalpha=" << format_double(opt.balanced.alpha)
     << "\nprox_sigma=" << format_double(opt.prox.sigma)
     << "\nprox_tol=" << format_double(opt.prox.tolerance) << "\n";
  return os.str();
}

BasisMetrics compute_totals(const DirectedGraph& g, const FourierBasis& basis) {
  BasisMetrics m;
  m.total_gdv = total_gdv(g, basis.vectors);
  m.total_gav = total_gav(g, basis.vectors);
  m.total_gqv = total_gqv(g, basis.vectors);
  for (int k = 0; k < basis.vectors.cols(); ++k)
    m.total_tv_l += tv_laplacian(g, basis.vectors.col(k));
  return m;
}

int run_basis(const BasisOptions& opt_in) {
  BasisOptions opt = opt_in;
  const DirectedGraph g = load_edge_list(opt.graph);
  const BasisInit init =
      opt.init == "random" ? BasisInit::RandomOrthonormal : BasisInit::IdentityCompletion;
  const std::string digest = config_digest(basis_config_text(opt));
  const fs::path sidecar =
      opt.sidecar.empty() ? fs::path(opt.output + ".json") : fs::path(opt.sidecar);

  opt.soc.prox = opt.prox;
  opt.pamal.prox = opt.prox;
  opt.balanced.prox = opt.prox;

  auto save = [&](const FourierBasis& basis) {
    const BasisMetrics m = compute_totals(g, basis);
    save_basis(basis, opt.output, sidecar, digest, &m);
  };

  if (opt.method == "soc") {
    SocConfig cfg = opt.soc;
    cfg.init = init;
    cfg.seed = opt.seed;
    SocResult r = soc_basis(g, cfg);
    save(r.basis);
    if (!opt.trace.empty()) write_trace_csv(r.trace, opt.trace, false);
    if (!r.converged)
      std::cerr << "warning: stopped at the iteration cap with infeasibility "
                << format_double(r.final_infeasibility) << "\n";
  } else if (opt.method == "pamal") {
    PamalConfig cfg = opt.pamal;
    cfg.init = init;
    cfg.seed = opt.seed;
    PamalResult r = pamal_basis(g, cfg);
    save(r.basis);
    if (!opt.trace.empty()) write_trace_csv(r.trace, opt.trace, true);
    if (!r.converged)
      std::cerr << "warning: stopped at the iteration cap with infeasibility "
                << format_double(r.final_infeasibility) << "\n";
  } else if (opt.method == "balanced") {
    BalancedConfig cfg = opt.balanced;
    cfg.seed = opt.seed;
    BalancedResult r = balanced_basis(g, cfg);
    save(r.basis);
    if (!opt.trace.empty()) write_balanced_trace_csv(r.trace, opt.trace);
    if (r.stabilization_flagged)
      std::cerr << "warning: pre-stabilization orthonormality deviation "
                << format_double(r.stabilization_deviation) << "\n";
  } else if (opt.method == "laplacian") {
    SpectralResult r = laplacian_eigenbasis(g);
    save(r.basis);
    if (r.symmetrized) std::cerr << "warning: directed input symmetrized\n";
  } else if (opt.method == "adjacency") {
    SpectralResult r = adjacency_eigenbasis(g);
    save(r.basis);
  } else {
    throw std::invalid_argument("unknown method '" + opt.method + "'");
  }
  std::cout << "wrote " << opt.output << " and " << sidecar.string() << "\n";
  return 0;
}

int run_transform(const TransformOptions& opt) {
  const FourierBasis basis = load_basis_matrix(opt.basis);
  const Eigen::VectorXd input = read_signal(opt.signal);
  const Eigen::VectorXd output =
      opt.inverse ? gft_inverse(basis, input) : gft_forward(basis, input);
  write_signal(output, opt.output);
  std::cout << "wrote " << opt.output << "\n";
  return 0;
}

int run_metrics(const MetricsOptions& opt) {
  const DirectedGraph g = load_edge_list(opt.graph);
  const FourierBasis basis = load_basis_matrix(opt.basis);
  if (basis.vectors.rows() != g.node_count())
    throw std::invalid_argument("basis dimension does not match graph");

  const bool to_stdout = opt.output.empty() || opt.output == "-";
  std::ofstream file;
  if (!to_stdout) {
    file.open(opt.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + opt.output);
  }
  std::ostream& out = to_stdout ? std::cout : file;

  out << "column,gdv,gav,gqv,tv_l\n";
  for (int k = 0; k < basis.vectors.cols(); ++k) {
    const Eigen::VectorXd v = basis.vectors.col(k);
    out << (k + 1) << ',' << format_double(gdv(g, v)) << ',' << format_double(gav(g, v))
        << ',' << format_double(gqv(g, v)) << ',' << format_double(tv_laplacian(g, v))
        << '\n';
  }
  if (!to_stdout) std::cout << "wrote " << opt.output << "\n";
  return 0;
}

int run_experiment_cmd(const ExperimentOptions& opt) {
  ExperimentSpec spec;
  spec.id = experiment_id_from_string(opt.id);
  spec.out_dir = opt.out_dir;
  spec.seeds = opt.seeds;
  spec.nodes = opt.nodes;
  spec.base_seed = opt.base_seed;
  spec.threads = opt.threads;
  if (!opt.d_min_values.empty()) spec.d_min_values = opt.d_min_values;
  if (!opt.timing_nodes.empty()) spec.timing_nodes = opt.timing_nodes;
  spec.methods = opt.methods;
  if (!opt.variants.empty()) {
    spec.variants.clear();
    for (const std::string& v : opt.variants) {
      if (v == "A") spec.variants.push_back(ThreeClusterVariant::A);
      else if (v == "B") spec.variants.push_back(ThreeClusterVariant::B);
      else if (v == "C") spec.variants.push_back(ThreeClusterVariant::C);
      else throw std::invalid_argument("variant must be A, B or C");
    }
  }
  spec.soc.beta = opt.beta;
  spec.pamal.rho1 = opt.rho1;

  const ExperimentResult result = run_experiment(spec);
  std::cout << result.summary << "\n";
  for (const auto& f : result.files) std::cout << "  " << f.string() << "\n";
  return result.all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph Fourier bases for directed graphs by directed-variation minimization"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value config file; command-line flags take precedence");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a graph edge list");
  gen_cmd->fallthrough();
  gen_cmd->add_option("--model", gen.model, "three-cluster | scale-free | geometric");
  gen_cmd->add_option("--variant", gen.variant, "three-cluster variant: A | B | C");
  gen_cmd->add_option("--nodes", gen.nodes, "node count");
  gen_cmd->add_option("--min-degree", gen.min_degree, "scale-free minimum degree");
  gen_cmd->add_option("--radius", gen.radius, "geometric connection radius");
  gen_cmd->add_option("--directed-fraction", gen.directed_fraction,
                      "share of connected pairs kept one-directional");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("-o,--output", gen.output, "edge-list output path")->required();

  BasisOptions basis;
  auto* basis_cmd = app.add_subcommand("basis", "compute a Fourier basis");
  basis_cmd->fallthrough();
  basis_cmd->add_option("--method", basis.method,
                        "soc | pamal | balanced | laplacian | adjacency");
  basis_cmd->add_option("--graph", basis.graph, "edge-list input")->required();
  basis_cmd->add_option("-o,--output", basis.output, "basis CSV output")->required();
  basis_cmd->add_option("--trace", basis.trace, "trace CSV output");
  basis_cmd->add_option("--sidecar", basis.sidecar, "JSON sidecar path (default <output>.json)");
  basis_cmd->add_option("--init", basis.init, "identity | random");
  basis_cmd->add_option("--seed", basis.seed, "random-init / balanced seed");
  basis_cmd->add_option("--beta", basis.soc.beta, "SOC penalty");
  basis_cmd->add_option("--max-outer", basis.soc.max_outer_iterations, "SOC outer cap");
  basis_cmd->add_option("--tol-infeasibility", basis.soc.tol_infeasibility,
                        "SOC infeasibility tolerance");
  basis_cmd->add_option("--tol-objective", basis.soc.tol_objective,
                        "SOC relative objective tolerance");
  basis_cmd->add_option("--rho1", basis.pamal.rho1, "initial penalty");
  basis_cmd->add_option("--gamma", basis.pamal.gamma, "penalty growth factor");
  basis_cmd->add_option("--tau", basis.pamal.tau, "infeasibility-decrease factor");
  basis_cmd->add_option("--epsilon-decay", basis.pamal.epsilon_decay,
                        "inner tolerance decay");
  basis_cmd->add_option("--inner-link", basis.pamal.inner_link,
                        "inner tolerance tightening factor (0 = pure schedule)");
  basis_cmd->add_option("--c1", basis.pamal.c1, "proximal constant c1");
  basis_cmd->add_option("--c2", basis.pamal.c2, "proximal constant c2");
  basis_cmd->add_option("--c-lower", basis.pamal.c_lower, "lower bound on c1, c2");
  basis_cmd->add_option("--c-upper", basis.pamal.c_upper, "upper bound on c1, c2");
  basis_cmd->add_option("--lambda-min", basis.pamal.lambda_min, "multiplier box lower bound");
  basis_cmd->add_option("--lambda-max", basis.pamal.lambda_max, "multiplier box upper bound");
  basis_cmd->add_option("--pamal-max-outer", basis.pamal.max_outer_iterations,
                        "outer iteration cap");
  basis_cmd->add_option("--pamal-max-inner", basis.pamal.max_inner_iterations,
                        "inner iteration cap");
  basis_cmd->add_option("--tol-final", basis.pamal.tol_final, "final infeasibility tolerance");
  basis_cmd->add_option("--tol-kkt", basis.pamal.tol_kkt,
                        "multiplier stationarity tolerance");
  basis_cmd->add_option("--alpha", basis.balanced.alpha, "balanced step constant");
  basis_cmd->add_option("--epsilon", basis.balanced.epsilon, "balanced stop threshold");
  basis_cmd->add_option("--max-iterations", basis.balanced.max_iterations,
                        "balanced per-vector cap");
  basis_cmd->add_option("--starts", basis.balanced.starts, "balanced starts per vector");
  basis_cmd->add_option("--sign-zero", basis.balanced.sign_zero,
                        "subgradient value at exact zeros");
  std::string balanced_init = "spectral";
  basis_cmd->add_option("--balanced-init", balanced_init,
                        "balanced start mode: spectral | gaussian");
  std::string kind = "auto";
  basis_cmd->add_option("--kind", kind, "balanced numerator: auto | gdv | gav");
  basis_cmd->add_option("--prox-sigma", basis.prox.sigma, "splitting penalty");
  basis_cmd->add_option("--prox-tol", basis.prox.tolerance, "prox residual tolerance");
  basis_cmd->add_option("--prox-max-iterations", basis.prox.max_iterations,
                        "prox iteration cap");
  basis_cmd->add_option("--prox-over-relaxation", basis.prox.over_relaxation,
                        "prox over-relaxation in [1, 2)");

  TransformOptions transform;
  auto* transform_cmd = app.add_subcommand("transform", "apply a basis to a signal");
  transform_cmd->fallthrough();
  transform_cmd->add_option("--basis", transform.basis, "basis CSV")->required();
  transform_cmd->add_option("--signal", transform.signal, "signal file")->required();
  transform_cmd->add_flag("--inverse", transform.inverse, "apply the inverse transform");
  transform_cmd->add_option("-o,--output", transform.output, "output signal path")->required();

  MetricsOptions metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "per-column variation metrics");
  metrics_cmd->fallthrough();
  metrics_cmd->add_option("--graph", metrics.graph, "edge-list input")->required();
  metrics_cmd->add_option("--basis", metrics.basis, "basis CSV")->required();
  metrics_cmd->add_option("-o,--output", metrics.output,
                          "metrics CSV output (default: stdout)");

  ExperimentOptions experiment;
  auto* exp_cmd = app.add_subcommand("experiment", "run a reproducible experiment");
  exp_cmd->fallthrough();
  exp_cmd->add_option("--id", experiment.id,
                      "convergence-spread | gav-vs-mindegree | gqv-invariance | "
                      "zero-gdv-counts | timing");
  exp_cmd->add_option("--out-dir", experiment.out_dir, "output directory")->required();
  exp_cmd->add_option("--seeds", experiment.seeds, "ensemble size");
  exp_cmd->add_option("--nodes", experiment.nodes, "graph size");
  exp_cmd->add_option("--base-seed", experiment.base_seed, "first seed");
  exp_cmd->add_option("--d-min", experiment.d_min_values, "minimum degrees to sweep");
  exp_cmd->add_option("--variant", experiment.variants, "three-cluster variants");
  exp_cmd->add_option("--method", experiment.methods, "methods to run");
  exp_cmd->add_option("--timing-nodes", experiment.timing_nodes, "sizes for the timing sweep");
  exp_cmd->add_option("--threads", experiment.threads, "worker pool size (0 = auto)");
  exp_cmd->add_option("--beta", experiment.beta, "SOC penalty");
  exp_cmd->add_option("--rho1", experiment.rho1, "initial penalty");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*basis_cmd) {
      basis.balanced.numerator = kind == "gdv"   ? BalancedNumerator::GDV
                                 : kind == "gav" ? BalancedNumerator::GAV
                                                 : BalancedNumerator::Auto;
      basis.balanced.init = balanced_init == "gaussian" ? BalancedInit::SeededGaussian
                                                        : BalancedInit::Spectral;
      return run_basis(basis);
    }
    if (*transform_cmd) return run_transform(transform);
    if (*metrics_cmd) return run_metrics(metrics);
    if (*exp_cmd) return run_experiment_cmd(experiment);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
