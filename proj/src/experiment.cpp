#include "digft/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

#include "digft/errors.hpp"
#include "digft/io.hpp"
#include "digft/spectral.hpp"
#include "digft/variation.hpp"

namespace digft {

ExperimentId experiment_id_from_string(const std::string& name) {
  if (name == "convergence-spread") return ExperimentId::ConvergenceSpread;
  if (name == "gav-vs-mindegree") return ExperimentId::GavVsMinDegree;
  if (name == "gqv-invariance") return ExperimentId::GqvInvariance;
  if (name == "zero-gdv-counts") return ExperimentId::ZeroGdvCounts;
  if (name == "timing") return ExperimentId::Timing;
  throw std::invalid_argument("unknown experiment id '" + name + "'");
}

std::string experiment_id_to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::ConvergenceSpread: return "convergence-spread";
    case ExperimentId::GavVsMinDegree: return "gav-vs-mindegree";
    case ExperimentId::GqvInvariance: return "gqv-invariance";
    case ExperimentId::ZeroGdvCounts: return "zero-gdv-counts";
    case ExperimentId::Timing: return "timing";
  }
  throw std::logic_error("unknown experiment id");
}

void ExperimentSpec::validate() const {
  if (seeds < 1) throw std::invalid_argument("seeds count must be >= 1");
  if (nodes < 2) throw std::invalid_argument("nodes must be >= 2");
  if (out_dir.empty()) throw std::invalid_argument("output directory required");
  soc.validate();
  pamal.validate();
  balanced.validate();
}

std::string ExperimentSpec::canonical_text() const {
  std::ostringstream os;
  os << "experiment=" << experiment_id_to_string(id) << "\n";
  os << "nodes=" << nodes << "\nseeds=" << seeds << "\nbase_seed=" << base_seed << "\n";
  os << "d_min=";
  for (int d : d_min_values) os << d << ";";
  os << "\nvariants=";
  for (auto v : variants) os << static_cast<int>(v) << ";";
  os << "\nmethods=";
  for (const auto& m : methods) os << m << ";";
  os << "\ntiming_nodes=";
  for (int t : timing_nodes) os << t << ";";
  os << "\nsoc.beta=" << format_double(soc.beta) << "\nsoc.max_outer=" << soc.max_outer_iterations
     << "\nsoc.tol_inf=" << format_double(soc.tol_infeasibility)
     << "\nsoc.tol_obj=" << format_double(soc.tol_objective)
     << "\npamal.rho1=" << format_double(pamal.rho1)
     << "\npamal.gamma=" << format_double(pamal.gamma)
     << "\npamal.tau=" << format_double(pamal.tau)
     << "\npamal.eps_decay=" << format_double(pamal.epsilon_decay)
     << "\npamal.c1=" << format_double(pamal.c1) << "\npamal.c2=" << format_double(pamal.c2)
     << "\npamal.lambda=" << format_double(pamal.lambda_min) << ":"
     << format_double(pamal.lambda_max) << "\npamal.max_outer=" << pamal.max_outer_iterations
     << "\npamal.max_inner=" << pamal.max_inner_iterations
     << "\npamal.tol_final=" << format_double(pamal.tol_final)
     << "\nbalanced.alpha=" << format_double(balanced.alpha)
     << "\nbalanced.epsilon=" << format_double(balanced.epsilon) << "\n";
  return os.str();
}

int resolve_thread_count(int requested, int task_count) {
  int threads = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* env = std::getenv("DIGFT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) threads = std::min(threads, cap);
  }
  return std::max(1, std::min(threads, task_count));
}

std::vector<std::string> parallel_for(int count, int threads,
                                      const std::function<void(int)>& body) {
  std::vector<std::string> errors(count);
  if (count == 0) return errors;
  const int workers = resolve_thread_count(threads, count);

  std::atomic<int> next{0};
  auto run = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      } catch (...) {
        errors[i] = "unknown error";
      }
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  return errors;
}

namespace {

namespace fs = std::filesystem;

std::vector<std::string> methods_or(const ExperimentSpec& spec,
                                    std::vector<std::string> defaults) {
  return spec.methods.empty() ? defaults : spec.methods;
}

void write_manifest(const ExperimentSpec& spec, const std::vector<fs::path>& files,
                    const std::vector<std::string>& notes, ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["artifact_version"] = kVersion;
  j["experiment"] = experiment_id_to_string(spec.id);
  j["config_digest"] = config_digest(spec.canonical_text());
  j["nodes"] = spec.nodes;
  std::vector<std::uint64_t> seed_list;
  for (int s = 0; s < spec.seeds; ++s) seed_list.push_back(spec.base_seed + s);
  j["seeds"] = seed_list;
  std::vector<std::string> names;
  for (const auto& f : files) names.push_back(f.filename().string());
  j["files"] = names;
  j["notes"] = notes;

  const fs::path path = spec.out_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  result.files.push_back(path);
}

struct MethodRun {
  Eigen::MatrixXd basis;
  ConvergenceTrace trace;
  bool ok = false;
  std::string error;
  double seconds = 0.0;
};

MethodRun run_method(const std::string& method, const DirectedGraph& g,
                     const ExperimentSpec& spec, std::uint64_t seed, BasisInit init) {
  MethodRun out;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (method == "soc") {
      SocConfig cfg = spec.soc;
      cfg.seed = seed;
      cfg.init = init;
      SocResult r = soc_basis(g, cfg);
      out.basis = r.basis.vectors;
      out.trace = std::move(r.trace);
    } else if (method == "pamal") {
      PamalConfig cfg = spec.pamal;
      cfg.seed = seed;
      cfg.init = init;
      PamalResult r = pamal_basis(g, cfg);
      out.basis = r.basis.vectors;
      out.trace = std::move(r.trace);
    } else if (method == "balanced") {
      BalancedConfig cfg = spec.balanced;
      cfg.seed = seed;
      BalancedResult r = balanced_basis(g, cfg);
      out.basis = r.basis.vectors;
    } else if (method == "laplacian") {
      out.basis = laplacian_eigenbasis(g).basis.vectors;
    } else if (method == "adjacency") {
      out.basis = adjacency_eigenbasis(g).basis.vectors;
    } else {
      throw std::invalid_argument("unknown method '" + method + "'");
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void run_convergence_spread(const ExperimentSpec& spec, ExperimentResult& result) {
  const auto methods = methods_or(spec, {"soc", "pamal"});
  const DirectedGraph g = gen_three_cluster(ThreeClusterVariant::A);

  for (const std::string& method : methods) {
    std::vector<MethodRun> runs(spec.seeds);
    parallel_for(spec.seeds, spec.threads, [&](int i) {
      runs[i] = run_method(method, g, spec, spec.base_seed + i,
                           BasisInit::RandomOrthonormal);
    });

    const fs::path traces_path = spec.out_dir / ("spread_traces_" + method + ".csv");
    std::ofstream traces(traces_path, std::ios::binary);
    traces << "seed,iteration,gdv\n";
    std::size_t longest = 0;
    for (int i = 0; i < spec.seeds; ++i) {
      if (!runs[i].ok) {
        result.failures += 1;
        continue;
      }
      longest = std::max(longest, runs[i].trace.records.size());
      for (const TraceRecord& r : runs[i].trace.records)
        traces << (spec.base_seed + i) << ',' << r.iteration << ','
               << format_double(r.objective) << '\n';
    }
    result.files.push_back(traces_path);

    // Mean +- std per iteration index; shorter runs are extended with their
    // final value so late indices average over all runs.
    const fs::path curve_path = spec.out_dir / ("spread_curve_" + method + ".csv");
    std::ofstream curve(curve_path, std::ios::binary);
    curve << "iteration,mean,std\n";
    for (std::size_t it = 0; it < longest; ++it) {
      double sum = 0.0, sum2 = 0.0;
      int count = 0;
      for (const MethodRun& run : runs) {
        if (!run.ok || run.trace.records.empty()) continue;
        const std::size_t idx = std::min(it, run.trace.records.size() - 1);
        const double v = run.trace.records[idx].objective;
        sum += v;
        sum2 += v * v;
        ++count;
      }
      if (count == 0) continue;
      const double mean = sum / count;
      const double var = std::max(0.0, sum2 / count - mean * mean);
      curve << (it + 1) << ',' << format_double(mean) << ','
            << format_double(std::sqrt(var)) << '\n';
    }
    result.files.push_back(curve_path);

    const fs::path summary_path = spec.out_dir / ("spread_summary_" + method + ".csv");
    std::ofstream summary(summary_path, std::ios::binary);
    summary << "seed,status,final_gdv\n";
    double fsum = 0.0, fsum2 = 0.0;
    int fcount = 0;
    for (int i = 0; i < spec.seeds; ++i) {
      if (!runs[i].ok || runs[i].trace.records.empty()) {
        summary << (spec.base_seed + i) << ",failed,\n";
        continue;
      }
      const double v = runs[i].trace.records.back().objective;
      summary << (spec.base_seed + i) << ",ok," << format_double(v) << '\n';
      fsum += v;
      fsum2 += v * v;
      ++fcount;
    }
    if (fcount > 0) {
      const double mean = fsum / fcount;
      const double stdev = std::sqrt(std::max(0.0, fsum2 / fcount - mean * mean));
      summary << "# mean," << format_double(mean) << '\n';
      summary << "# std," << format_double(stdev) << '\n';
      summary << "# std_over_mean,"
              << format_double(mean != 0.0 ? stdev / mean : 0.0) << '\n';
    }
    result.files.push_back(summary_path);
  }
}

void run_gav_vs_mindegree(const ExperimentSpec& spec, ExperimentResult& result) {
  const auto methods = methods_or(spec, {"soc", "pamal", "laplacian", "adjacency"});

  struct Cell {
    int d_min;
    std::uint64_t seed;
    std::string method;
    bool ok = false;
    std::string error;
    double gav_total = 0.0;
  };
  std::vector<Cell> cells;
  for (int d : spec.d_min_values)
    for (int s = 0; s < spec.seeds; ++s)
      for (const auto& m : methods) cells.push_back({d, spec.base_seed + s, m, false, "", 0.0});

  parallel_for(static_cast<int>(cells.size()), spec.threads, [&](int i) {
    Cell& c = cells[i];
    const DirectedGraph g = gen_scale_free(spec.nodes, c.d_min, c.seed);
    MethodRun run = run_method(c.method, g, spec, c.seed, BasisInit::IdentityCompletion);
    if (!run.ok) {
      c.error = run.error;
      return;
    }
    c.gav_total = total_gav(g, run.basis);
    c.ok = true;
  });

  const fs::path per_path = spec.out_dir / "gav_per_instance.csv";
  std::ofstream per(per_path, std::ios::binary);
  per << "d_min,seed,method,status,total_gav\n";
  for (const Cell& c : cells) {
    per << c.d_min << ',' << c.seed << ',' << c.method << ',' << (c.ok ? "ok" : "failed") << ',';
    if (c.ok)
      per << format_double(c.gav_total);
    else
      result.failures += 1;
    per << '\n';
  }
  result.files.push_back(per_path);

  const fs::path table_path = spec.out_dir / "gav_table.csv";
  std::ofstream table(table_path, std::ios::binary);
  table << "d_min,method,mean_gav,std_gav,count\n";
  for (int d : spec.d_min_values) {
    for (const auto& m : methods) {
      double sum = 0.0, sum2 = 0.0;
      int count = 0;
      for (const Cell& c : cells) {
        if (c.d_min != d || c.method != m || !c.ok) continue;
        sum += c.gav_total;
        sum2 += c.gav_total * c.gav_total;
        ++count;
      }
      if (count == 0) {
        table << d << ',' << m << ",,,0\n";
        continue;
      }
      const double mean = sum / count;
      const double stdev = std::sqrt(std::max(0.0, sum2 / count - mean * mean));
      table << d << ',' << m << ',' << format_double(mean) << ',' << format_double(stdev)
            << ',' << count << '\n';
    }
  }
  result.files.push_back(table_path);
}

void run_gqv_invariance(const ExperimentSpec& spec, ExperimentResult& result) {
  const auto methods = methods_or(spec, {"soc", "pamal", "laplacian", "adjacency"});
  const int d_min = spec.d_min_values.empty() ? 2 : spec.d_min_values.front();

  struct Cell {
    std::uint64_t seed;
    std::string method;
    bool ok = false;
    double gqv_total = 0.0;
    double trace_l = 0.0;
  };
  std::vector<Cell> cells;
  for (int s = 0; s < spec.seeds; ++s)
    for (const auto& m : methods) cells.push_back({spec.base_seed + s, m, false, 0.0, 0.0});

  parallel_for(static_cast<int>(cells.size()), spec.threads, [&](int i) {
    Cell& c = cells[i];
    const DirectedGraph g = gen_scale_free(spec.nodes, d_min, c.seed);
    MethodRun run = run_method(c.method, g, spec, c.seed, BasisInit::IdentityCompletion);
    if (!run.ok) return;
    c.gqv_total = total_gqv(g, run.basis);
    c.trace_l = g.laplacian().trace();
    c.ok = true;
  });

  const fs::path path = spec.out_dir / "gqv_invariance.csv";
  std::ofstream out(path, std::ios::binary);
  out << "seed,method,status,total_gqv,trace_l,abs_deviation\n";
  for (const Cell& c : cells) {
    out << c.seed << ',' << c.method << ',' << (c.ok ? "ok" : "failed") << ',';
    if (c.ok)
      out << format_double(c.gqv_total) << ',' << format_double(c.trace_l) << ','
          << format_double(std::abs(c.gqv_total - c.trace_l));
    else {
      out << ",,";
      result.failures += 1;
    }
    out << '\n';
  }
  result.files.push_back(path);
}

void run_zero_gdv_counts(const ExperimentSpec& spec, ExperimentResult& result) {
  const auto methods = methods_or(spec, {"soc", "pamal"});
  const double threshold = 1e-5;

  struct Cell {
    ThreeClusterVariant variant;
    std::string method;
    std::uint64_t seed;
    bool ok = false;
    int count = 0;
  };
  std::vector<Cell> cells;
  for (auto v : spec.variants)
    for (const auto& m : methods)
      for (int s = 0; s < spec.seeds; ++s) cells.push_back({v, m, spec.base_seed + s, false, 0});

  parallel_for(static_cast<int>(cells.size()), spec.threads, [&](int i) {
    Cell& c = cells[i];
    const DirectedGraph g = gen_three_cluster(c.variant);
    MethodRun run = run_method(c.method, g, spec, c.seed, BasisInit::RandomOrthonormal);
    if (!run.ok) return;
    for (Eigen::Index k = 0; k < run.basis.cols(); ++k)
      if (gdv(g, run.basis.col(k)) < threshold) ++c.count;
    c.ok = true;
  });

  const fs::path path = spec.out_dir / "zero_gdv_counts.csv";
  std::ofstream out(path, std::ios::binary);
  out << "variant,method,seed,status,zero_gdv_columns\n";
  for (const Cell& c : cells) {
    const char variant_name = c.variant == ThreeClusterVariant::A   ? 'A'
                              : c.variant == ThreeClusterVariant::B ? 'B'
                                                                    : 'C';
    out << variant_name << ',' << c.method << ',' << c.seed << ','
        << (c.ok ? "ok" : "failed") << ',';
    if (c.ok)
      out << c.count;
    else
      result.failures += 1;
    out << '\n';
  }
  result.files.push_back(path);
}

void run_timing(const ExperimentSpec& spec, ExperimentResult& result) {
  const auto methods = methods_or(spec, {"soc", "pamal"});

  // Matches the reference setup: geometric graphs, a quarter of the links
  // directed, beta = rho1 = 20.
  ExperimentSpec timed = spec;
  timed.soc.beta = 20.0;
  timed.pamal.rho1 = 20.0;

  const fs::path path = spec.out_dir / "timing.csv";
  std::ofstream out(path, std::ios::binary);
  out << "nodes,method,status,seconds\n";
  for (int n : spec.timing_nodes) {
    const double radius = std::sqrt(4.0 / (3.14159265358979323846 * n));
    const DirectedGraph g = gen_random_geometric(n, radius, 0.25, spec.base_seed);
    for (const auto& m : methods) {
      MethodRun run = run_method(m, g, timed, spec.base_seed, BasisInit::IdentityCompletion);
      out << n << ',' << m << ',' << (run.ok ? "ok" : "failed") << ',';
      if (run.ok)
        out << format_double(run.seconds);
      else
        result.failures += 1;
      out << '\n';
    }
  }
  result.files.push_back(path);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);

  ExperimentResult result;
  std::vector<std::string> notes;
  switch (spec.id) {
    case ExperimentId::ConvergenceSpread:
      run_convergence_spread(spec, result);
      break;
    case ExperimentId::GavVsMinDegree:
      run_gav_vs_mindegree(spec, result);
      break;
    case ExperimentId::GqvInvariance:
      run_gqv_invariance(spec, result);
      break;
    case ExperimentId::ZeroGdvCounts:
      run_zero_gdv_counts(spec, result);
      break;
    case ExperimentId::Timing:
      run_timing(spec, result);
      notes.push_back("timing.csv carries wall-clock seconds and is not reproducible bit-for-bit");
      break;
  }
  write_manifest(spec, result.files, notes, result);

  result.all_ok = result.failures == 0;
  std::ostringstream os;
  os << experiment_id_to_string(spec.id) << ": " << result.files.size() << " files, "
     << result.failures << " failed runs";
  result.summary = os.str();
  return result;
}

}  // namespace digft
