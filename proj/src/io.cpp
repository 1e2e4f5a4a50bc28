#include "digft/io.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "digft/errors.hpp"

namespace digft {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("expected a real number, got '" + field + "'", line_no);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("inconsistent column count", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix file " + path.string());
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void save_basis(const FourierBasis& basis, const std::filesystem::path& csv_path,
                const std::filesystem::path& sidecar_path, const std::string& digest,
                const BasisMetrics* metrics) {
  write_matrix_csv(basis.vectors, csv_path);

  nlohmann::ordered_json j;
  j["artifact_version"] = kVersion;
  j["method"] = basis.method;
  j["n"] = basis.size();
  j["converged"] = basis.converged;
  j["config_digest"] = digest;
  std::vector<std::string> variation;
  for (Eigen::Index k = 0; k < basis.column_variation.size(); ++k)
    variation.push_back(format_double(basis.column_variation(k)));
  j["column_variation"] = variation;
  if (metrics != nullptr) {
    nlohmann::ordered_json m;
    m["total_gdv"] = format_double(metrics->total_gdv);
    m["total_gav"] = format_double(metrics->total_gav);
    m["total_gqv"] = format_double(metrics->total_gqv);
    m["total_tv_l"] = format_double(metrics->total_tv_l);
    j["metrics"] = m;
  }

  std::ofstream out(sidecar_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + sidecar_path.string());
  out << j.dump(2) << '\n';
}

FourierBasis load_basis_matrix(const std::filesystem::path& csv_path) {
  FourierBasis basis;
  basis.vectors = read_matrix_csv(csv_path);
  if (basis.vectors.rows() != basis.vectors.cols())
    throw ParseError("basis matrix must be square: " + csv_path.string());
  basis.column_variation = Eigen::VectorXd::Zero(basis.vectors.cols());
  basis.method = "unknown";
  return basis;
}

FourierBasis load_basis(const std::filesystem::path& csv_path,
                        const std::filesystem::path& sidecar_path) {
  FourierBasis basis = load_basis_matrix(csv_path);
  std::ifstream in(sidecar_path);
  if (!in) throw std::runtime_error("cannot open " + sidecar_path.string());
  nlohmann::json j;
  in >> j;
  basis.method = j.value("method", "unknown");
  basis.converged = j.value("converged", true);
  if (j.contains("column_variation")) {
    const auto& arr = j["column_variation"];
    if (static_cast<Eigen::Index>(arr.size()) == basis.column_variation.size())
      for (std::size_t k = 0; k < arr.size(); ++k)
        basis.column_variation(k) = std::stod(arr[k].get<std::string>());
  }
  return basis;
}

void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path,
                     bool pamal_columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << (pamal_columns ? "iteration,gdv_x,gdv_p,infeasibility,theta_inf,rho\n"
                        : "iteration,gdv_x,gdv_p,infeasibility\n");
  for (const TraceRecord& r : trace.records) {
    out << r.iteration << ',' << format_double(r.objective) << ','
        << format_double(r.objective_feasible) << ',' << format_double(r.infeasibility);
    if (pamal_columns)
      out << ',' << format_double(r.theta_inf) << ',' << format_double(r.rho);
    out << '\n';
  }
}

void write_balanced_trace_csv(const BalancedTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "column,iteration,e,b,f\n";
  for (const BalancedTraceRow& r : trace.rows)
    out << r.column << ',' << r.iteration << ',' << format_double(r.e) << ','
        << format_double(r.b) << ',' << format_double(r.f) << '\n';
  out << "# column,iterations,retries,e_emitted,e_centered\n";
  for (const BalancedVectorSummary& s : trace.vectors)
    out << "# " << s.column << ',' << s.iterations << ',' << s.retries << ','
        << format_double(s.e_emitted) << ',' << format_double(s.e_centered) << '\n';
}

Eigen::VectorXd read_signal(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string field = line.substr(b, e - b + 1);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError("expected a real number, got '" + field + "'", line_no);
    }
  }
  Eigen::VectorXd s(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) s(i) = values[i];
  return s;
}

void write_signal(const Eigen::VectorXd& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Eigen::Index i = 0; i < s.size(); ++i) out << format_double(s(i)) << '\n';
}

std::string config_digest(const std::string& canonical_text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : canonical_text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace digft
