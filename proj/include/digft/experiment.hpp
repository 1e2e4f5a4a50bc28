#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "digft/balanced.hpp"
#include "digft/graph.hpp"
#include "digft/pamal.hpp"
#include "digft/soc.hpp"

namespace digft {

enum class ExperimentId {
  ConvergenceSpread,
  GavVsMinDegree,
  GqvInvariance,
  ZeroGdvCounts,
  Timing,
};

ExperimentId experiment_id_from_string(const std::string& name);
std::string experiment_id_to_string(ExperimentId id);

struct ExperimentSpec {
  ExperimentId id = ExperimentId::ConvergenceSpread;
  int nodes = 20;
  int seeds = 20;  // desk-scale default; raise towards the reference scale by flag
  std::uint64_t base_seed = 1;
  std::vector<int> d_min_values = {2, 3, 4};
  std::vector<ThreeClusterVariant> variants = {ThreeClusterVariant::A, ThreeClusterVariant::B,
                                               ThreeClusterVariant::C};
  std::vector<std::string> methods;  // empty = per-experiment defaults
  std::vector<int> timing_nodes = {10, 15, 20, 25, 30};
  std::filesystem::path out_dir;
  int threads = 0;  // 0 = hardware, capped by env DIGFT_THREADS

  SocConfig soc;
  PamalConfig pamal;
  BalancedConfig balanced;

  void validate() const;
  std::string canonical_text() const;
};

struct ExperimentResult {
  std::vector<std::filesystem::path> files;
  bool all_ok = true;
  int failures = 0;
  std::string summary;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Bounded worker pool; results are aggregated by index so the output order
// is independent of scheduling. Returns per-task error messages (empty =
// success).
std::vector<std::string> parallel_for(int count, int threads,
                                      const std::function<void(int)>& body);

int resolve_thread_count(int requested, int task_count);

}  // namespace digft
