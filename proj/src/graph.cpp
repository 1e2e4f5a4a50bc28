#include "digft/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "digft/errors.hpp"
#include "digft/rng.hpp"

namespace digft {

DirectedGraph::DirectedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ <= 0) throw std::invalid_argument("node count must be positive");
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.src < 0 || e.src >= n_ || e.dst < 0 || e.dst >= n_)
      throw std::invalid_argument("edge index out of range");
    if (e.src == e.dst) throw std::invalid_argument("self-loops are not allowed");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw std::invalid_argument("edge weights must be strictly positive");
    if (i > 0 && edges_[i - 1].src == e.src && edges_[i - 1].dst == e.dst)
      throw std::invalid_argument("duplicate edge " + std::to_string(e.src) + "->" +
                                  std::to_string(e.dst));
  }
}

Eigen::MatrixXd DirectedGraph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const Edge& e : edges_) a(e.dst, e.src) = e.weight;
  return a;
}

Eigen::VectorXd DirectedGraph::in_degrees() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
  for (const Edge& e : edges_) d(e.dst) += e.weight;
  return d;
}

Eigen::MatrixXd DirectedGraph::laplacian() const {
  Eigen::MatrixXd l = -adjacency();
  l.diagonal() += in_degrees();
  return l;
}

bool DirectedGraph::is_symmetric() const {
  for (const Edge& e : edges_) {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{e.dst, e.src, 0.0},
                               [](const Edge& a, const Edge& b) {
                                 return a.src != b.src ? a.src < b.src : a.dst < b.dst;
                               });
    if (it == edges_.end() || it->src != e.dst || it->dst != e.src || it->weight != e.weight)
      return false;
  }
  return true;
}

bool DirectedGraph::has_edge(int src, int dst) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{src, dst, 0.0},
                             [](const Edge& a, const Edge& b) {
                               return a.src != b.src ? a.src < b.src : a.dst < b.dst;
                             });
  return it != edges_.end() && it->src == src && it->dst == dst;
}

DirectedGraph symmetrize(const DirectedGraph& g) {
  std::map<std::pair<int, int>, double> pair_weight;
  for (const Edge& e : g.edges()) {
    const auto key = std::minmax(e.src, e.dst);
    pair_weight[{key.first, key.second}] += e.weight / 2.0;
  }
  std::vector<Edge> out;
  out.reserve(2 * pair_weight.size());
  for (const auto& [key, w] : pair_weight) {
    out.push_back({key.first, key.second, w});
    out.push_back({key.second, key.first, w});
  }
  return DirectedGraph(g.node_count(), std::move(out));
}

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_index(const std::string& field, int line_no) {
  int value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError("expected an integer node index, got '" + field + "'", line_no);
  return value;
}

double parse_weight(const std::string& field, int line_no) {
  try {
    std::size_t consumed = 0;
    const double w = std::stod(field, &consumed);
    if (consumed != field.size()) throw std::invalid_argument("");
    return w;
  } catch (const std::exception&) {
    throw ParseError("expected a real weight, got '" + field + "'", line_no);
  }
}

}  // namespace

DirectedGraph from_edge_list(const std::string& text) {
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> seen;
  int header_n = -1;
  int max_index = -1;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.rfind("n=", 0) == 0) {
      header_n = parse_index(trim(line.substr(2)), line_no);
      if (header_n <= 0) throw ParseError("header node count must be positive", line_no);
      continue;
    }

    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(trim(line.substr(start, tab - start)));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3)
      throw ParseError("expected `src<TAB>dst<TAB>weight`", line_no);

    const int src = parse_index(fields[0], line_no);
    const int dst = parse_index(fields[1], line_no);
    const double w = parse_weight(fields[2], line_no);
    if (src < 0 || dst < 0) throw ParseError("node indices must be nonnegative", line_no);
    if (src == dst) throw ParseError("self-loop on node " + std::to_string(src), line_no);
    if (!(w > 0.0) || !std::isfinite(w)) throw ParseError("weight must be strictly positive", line_no);
    if (!seen.insert({src, dst}).second)
      throw ParseError("duplicate edge " + std::to_string(src) + "->" + std::to_string(dst),
                       line_no);
    if (header_n >= 0 && (src >= header_n || dst >= header_n))
      throw ParseError("node index exceeds declared n=" + std::to_string(header_n), line_no);
    max_index = std::max({max_index, src, dst});
    edges.push_back({src, dst, w});
  }

  const int n = header_n >= 0 ? header_n : max_index + 1;
  if (n <= 0) throw ParseError("empty edge list without an n=<int> header");
  return DirectedGraph(n, std::move(edges));
}

std::string to_edge_list(const DirectedGraph& g) {
  std::string out = "n=" + std::to_string(g.node_count()) + "\n";
  char buf[64];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof(buf), "%d\t%d\t%.17g\n", e.src, e.dst, e.weight);
    out += buf;
  }
  return out;
}

DirectedGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_edge_list(buf.str());
}

void save_edge_list(const DirectedGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_edge_list(g);
}

DirectedGraph gen_scale_free(int n, int d_min, std::uint64_t seed) {
  if (d_min < 1 || n <= d_min)
    throw std::invalid_argument("need n > d_min >= 1 for the scale-free generator");

  Rng rng(seed);
  std::set<std::pair<int, int>> pairs;
  // One pool entry per edge endpoint, so a uniform draw is degree-weighted.
  std::vector<int> endpoint_pool;

  auto connect = [&](int u, int v) {
    pairs.insert(std::minmax(u, v));
    endpoint_pool.push_back(u);
    endpoint_pool.push_back(v);
  };

  const int seed_size = d_min + 1;
  for (int i = 0; i < seed_size && i < n; ++i)
    for (int j = i + 1; j < seed_size && j < n; ++j) connect(i, j);

  for (int v = seed_size; v < n; ++v) {
    std::set<int> targets;
    while (static_cast<int>(targets.size()) < d_min) {
      const int pick =
          endpoint_pool[static_cast<std::size_t>(rng.uniform_int(0, endpoint_pool.size() - 1))];
      if (pick != v) targets.insert(pick);
    }
    for (int t : targets) connect(v, t);
  }

  std::vector<Edge> edges;
  edges.reserve(2 * pairs.size());
  for (const auto& [u, v] : pairs) {
    edges.push_back({u, v, 1.0});
    edges.push_back({v, u, 1.0});
  }
  return DirectedGraph(n, std::move(edges));
}

DirectedGraph gen_random_geometric(int n, double radius, double directed_fraction,
                                   std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("node count must be positive");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (directed_fraction < 0.0 || directed_fraction > 1.0)
    throw std::invalid_argument("directed fraction must lie in [0, 1]");

  Rng rng(seed);
  std::vector<double> px(n), py(n);
  for (int i = 0; i < n; ++i) {
    px[i] = rng.uniform01();
    py[i] = rng.uniform01();
  }

  std::vector<Edge> edges;
  const double r2 = radius * radius;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = px[i] - px[j];
      const double dy = py[i] - py[j];
      if (dx * dx + dy * dy > r2) continue;
      if (rng.uniform01() < directed_fraction) {
        if (rng.uniform01() < 0.5)
          edges.push_back({i, j, 1.0});
        else
          edges.push_back({j, i, 1.0});
      } else {
        edges.push_back({i, j, 1.0});
        edges.push_back({j, i, 1.0});
      }
    }
  }
  return DirectedGraph(n, std::move(edges));
}

DirectedGraph gen_three_cluster(ThreeClusterVariant variant) {
  std::vector<Edge> edges;
  for (int c = 0; c < 3; ++c) {
    const int base = 5 * c;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        edges.push_back({base + i, base + j, 1.0});
        edges.push_back({base + j, base + i, 1.0});
      }
    }
  }
  switch (variant) {
    case ThreeClusterVariant::A:
      edges.push_back({0, 10, 1.0});
      edges.push_back({5, 10, 1.0});
      break;
    case ThreeClusterVariant::B:
      edges.push_back({0, 10, 1.0});
      edges.push_back({5, 10, 1.0});
      edges.push_back({6, 4, 1.0});
      break;
    case ThreeClusterVariant::C:
      edges.push_back({0, 10, 1.0});
      edges.push_back({10, 5, 1.0});
      edges.push_back({5, 0, 1.0});
      break;
  }
  return DirectedGraph(15, std::move(edges));
}

}  // namespace digft
