#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace digft {

// Directed edge src -> dst. With the adjacency convention used throughout,
// a link j -> i of weight w stores A(i, j) = w.
struct Edge {
  int src;
  int dst;
  double weight;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.src == b.src && a.dst == b.dst && a.weight == b.weight;
  }
};

// Immutable weighted directed graph. Weights strictly positive, no
// self-loops, at most one edge per ordered pair. Undirected graphs are
// represented by symmetric pairs of directed edges.
class DirectedGraph {
public:
  DirectedGraph(int n, std::vector<Edge> edges);

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  // Canonical order: sorted by (src, dst).
  const std::vector<Edge>& edges() const { return edges_; }

  Eigen::MatrixXd adjacency() const;
  // In-degrees d_i = sum_j A(i, j).
  Eigen::VectorXd in_degrees() const;
  // L = D - A; rows sum to zero.
  Eigen::MatrixXd laplacian() const;

  bool is_symmetric() const;
  bool has_edge(int src, int dst) const;

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

private:
  int n_;
  std::vector<Edge> edges_;
};

// Weight on each unordered pair becomes (a_ij + a_ji) / 2, stored in both
// directions. Idempotent; the result's Laplacian equals (L + L^T) / 2.
DirectedGraph symmetrize(const DirectedGraph& g);

// Edge-list text format: `src<TAB>dst<TAB>weight` per line, 0-based indices,
// `#` starts a comment, optional `n=<int>` header overrides the node count.
DirectedGraph from_edge_list(const std::string& text);
std::string to_edge_list(const DirectedGraph& g);
DirectedGraph load_edge_list(const std::filesystem::path& path);
void save_edge_list(const DirectedGraph& g, const std::filesystem::path& path);

// Preferential attachment: seed clique of d_min+1 nodes, each arriving node
// attaches d_min undirected unit-weight links. Every node ends with degree
// >= d_min. Deterministic per seed.
DirectedGraph gen_scale_free(int n, int d_min, std::uint64_t seed);

// Nodes at uniform points in the unit square; pairs within `radius` are
// connected. A `directed_fraction` share of connected pairs keeps a single
// direction (chosen by seeded draw), the rest keep both.
DirectedGraph gen_random_geometric(int n, double radius, double directed_fraction,
                                   std::uint64_t seed);

enum class ThreeClusterVariant { A, B, C };

// 15 nodes, three 5-node unit-weight cliques {0-4}, {5-9}, {10-14}.
// A: directed links 0->10 and 5->10. B: A plus 6->4. C: directed cycle
// 0->10, 10->5, 5->0.
DirectedGraph gen_three_cluster(ThreeClusterVariant variant);

}  // namespace digft
