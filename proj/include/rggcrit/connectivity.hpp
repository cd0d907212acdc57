#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "rggcrit/rgg.hpp"

namespace rggcrit::connectivity {

using rgg::Graph;
using rgg::Vertex;

/// Vertex-split network for Menger's theorem: every vertex v becomes
/// v_in -> v_out with capacity 1, and every undirected edge {u, v} becomes
/// u_out -> v_in and v_out -> u_in with unbounded capacity. A flow from s_out
/// to t_in counts internally vertex-disjoint s-t paths.
class FlowNetwork {
 public:
  explicit FlowNetwork(const Graph& graph);

  /// Forward arcs: n internal arcs plus two per undirected edge.
  [[nodiscard]] std::size_t arc_count() const noexcept { return head_.size() / 2; }
  [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }

  /// Maximum number of internally disjoint s-t paths, stopping as soon as
  /// `limit` paths are found. Residual state is kept for min_cut().
  int max_flow(Vertex s, Vertex t, int limit = std::numeric_limits<int>::max());

  /// After a max_flow call that stopped below its limit: the vertices whose
  /// internal arc is saturated across the residual cut.
  [[nodiscard]] std::vector<Vertex> min_cut() const;

 private:
  bool augment(std::size_t source, std::size_t sink);

  std::size_t n_;
  std::vector<std::size_t> first_;  // CSR offsets per node
  std::vector<std::size_t> head_;   // arc target
  std::vector<std::size_t> pair_;   // reverse arc
  std::vector<int> capacity_;
  std::vector<int> residual_;
  std::vector<std::size_t> parent_arc_;
  std::vector<std::uint32_t> seen_;
  std::vector<std::size_t> queue_;
  std::uint32_t stamp_ = 0;
  std::size_t last_source_ = 0;
};

/// Largest number of internally vertex-disjoint s-t paths (= smallest s-t
/// vertex separator), optionally capped at `limit`. Throws DomainError if
/// s == t or s and t are adjacent, where no separator exists.
int local_vertex_connectivity(const Graph& graph, Vertex s, Vertex t,
                              int limit = std::numeric_limits<int>::max());

enum class Strategy {
  /// Linear-time checks for K <= 3 (search, articulation points, articulation
  /// points of every G - v), flows above.
  Auto,
  /// Flows from K fixed sources to every non-adjacent vertex, each capped at K.
  Flow,
  /// Flows from K fixed sources, each run to completion.
  FlowUncapped,
};

bool is_connected(const Graph& graph);

/// Connected, at least three vertices, and no articulation point.
bool is_biconnected(const Graph& graph);

/// n >= K + 1 and no set of K - 1 vertices disconnects the graph.
bool is_k_connected(const Graph& graph, int K, Strategy strategy = Strategy::Auto);

struct ConnectivityResult {
  int kappa = 0;
  /// A separator of size kappa; empty for complete or disconnected graphs.
  std::vector<Vertex> witness_cut;
};

/// Exact vertex connectivity; kappa(K_n) = n - 1. Throws DomainError on n < 2.
ConnectivityResult vertex_connectivity(const Graph& graph);

/// Smallest pairwise distance r with build_graph(cloud, r) K-connected.
///
/// Starts from min_degree_radius(cloud, K), which is a lower bound and is the
/// answer whenever the graph there is already K-connected. Otherwise the
/// radius grows geometrically until K-connected and the answer is found by
/// bisection over the pairwise distances in between.
double connectivity_radius(const rgg::PointCloud& cloud, int K, Strategy strategy = Strategy::Auto);

}  // namespace rggcrit::connectivity
