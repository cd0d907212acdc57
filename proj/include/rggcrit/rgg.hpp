#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "rggcrit/geometry.hpp"

namespace rggcrit::rgg {

using Vertex = std::uint32_t;

/// n points in a region, stored row-major. Regenerating from (region, n,
/// seed) reproduces the coordinates bit for bit.
class PointCloud {
 public:
  PointCloud(geometry::Region region, std::vector<double> coords, std::uint64_t seed = 0);

  [[nodiscard]] const geometry::Region& region() const noexcept { return region_; }
  [[nodiscard]] int dimension() const noexcept { return region_.dimension(); }
  [[nodiscard]] std::size_t size() const noexcept { return coords_.size() / dim(); }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim(), dim()};
  }
  [[nodiscard]] const std::vector<double>& coords() const noexcept { return coords_; }

 private:
  [[nodiscard]] std::size_t dim() const noexcept {
    return static_cast<std::size_t>(region_.dimension());
  }

  geometry::Region region_;
  std::vector<double> coords_;
  std::uint64_t seed_;
};

/// Euclidean distance as the correctly rounded sqrt of the coordinate-wise
/// sum of squares. Every radius in this module is compared through this
/// function, so a radius equal to a pairwise distance admits that edge.
double distance(std::span<const double> a, std::span<const double> b);

/// Simple undirected graph in compressed adjacency form with sorted
/// neighbour lists.
class Graph {
 public:
  Graph() = default;
  /// Builds from an edge list; duplicates and self loops are rejected.
  Graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges);

  [[nodiscard]] std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  [[nodiscard]] std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  [[nodiscard]] bool adjacent(Vertex u, Vertex v) const;
  [[nodiscard]] std::size_t min_degree() const;
  [[nodiscard]] std::vector<std::pair<Vertex, Vertex>> edges() const;

  /// Subgraph induced by the vertices with keep[v] true, relabelled in order.
  [[nodiscard]] Graph induced(const std::vector<bool>& keep) const;

  static Graph complete(std::size_t n);

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbors_;
};

/// G(cloud, radius): i ~ j iff distance(i, j) <= radius.
struct GeometricGraph {
  double radius = 0.0;
  Graph graph;
};

/// Uniform cloud of n points drawn in index order from Rng(seed).
PointCloud generate(const geometry::Region& region, std::size_t n, std::uint64_t seed);

/// Grid-indexed construction with cell size = radius, scanning the 3^d
/// neighbouring cells of each point.
GeometricGraph build_graph(const PointCloud& cloud, double radius);

/// All pairs (i < j) with lo < distance(i, j) <= hi, via a grid of cell size
/// hi. Sorted by (distance, i, j).
struct PairDistance {
  double dist;
  Vertex i, j;
};
std::vector<PairDistance> pairs_within(const PointCloud& cloud, double lo, double hi);

/// Largest pairwise distance strictly below `radius`; 0 when none exists.
double previous_pair_distance(const PointCloud& cloud, double radius);

/// Distance from every point to its m-th nearest other point (1 <= m <= n-1),
/// exact, ties broken by (distance, index).
std::vector<double> knn_radii(const PointCloud& cloud, std::size_t m);

/// Smallest radius at which every vertex has at least `min_degree` neighbours:
/// the maximum over vertices of the min_degree-th neighbour distance.
double min_degree_radius(const PointCloud& cloud, std::size_t min_degree);

/// Number of vertices of degree exactly k.
std::size_t degree_count(const Graph& graph, std::size_t k);

/// CSV with header x1,...,xd and one row per point, 17 significant digits.
void write_cloud_csv(std::ostream& os, const PointCloud& cloud);

/// Edge-list CSV with header i,j,dist.
void write_edges_csv(std::ostream& os, const PointCloud& cloud, const Graph& graph);

}  // namespace rggcrit::rgg
