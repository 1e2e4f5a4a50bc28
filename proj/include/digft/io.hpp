#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>

#include "digft/balanced.hpp"
#include "digft/basis.hpp"
#include "digft/graph.hpp"

namespace digft {

// Doubles are printed with 17 significant digits everywhere, so every file
// round-trips bit-exactly.
std::string format_double(double v);

void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

struct BasisMetrics {
  double total_gdv = 0.0;
  double total_gav = 0.0;
  double total_gqv = 0.0;
  double total_tv_l = 0.0;
};

// Basis CSV plus a JSON sidecar (method, per-column variation, totals,
// convergence flag, config digest, artifact version).
void save_basis(const FourierBasis& basis, const std::filesystem::path& csv_path,
                const std::filesystem::path& sidecar_path, const std::string& config_digest,
                const BasisMetrics* metrics = nullptr);
FourierBasis load_basis(const std::filesystem::path& csv_path,
                        const std::filesystem::path& sidecar_path);
// Matrix only; variation entries are left empty.
FourierBasis load_basis_matrix(const std::filesystem::path& csv_path);

void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path,
                     bool pamal_columns);
void write_balanced_trace_csv(const BalancedTrace& trace, const std::filesystem::path& path);

// One value per line, `#` comments.
Eigen::VectorXd read_signal(const std::filesystem::path& path);
void write_signal(const Eigen::VectorXd& s, const std::filesystem::path& path);

// FNV-1a 64-bit over a canonical key=value dump, as a 16-hex-digit string.
std::string config_digest(const std::string& canonical_text);

}  // namespace digft
