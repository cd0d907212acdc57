#include "rggcrit/rgg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <ostream>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>

#include "rggcrit/errors.hpp"
#include "rggcrit/random.hpp"

namespace rggcrit::rgg {

namespace {

/// Sparse uniform grid. Cells are keyed by a 64-bit hash of their integer
/// coordinates; a hash collision only merges candidate buckets, and every
/// lookup filters by exact cell coordinates.
class Grid {
 public:
  Grid(const PointCloud& cloud, double cell) : cloud_(cloud), dim_(cloud.dimension()), cell_(cell) {
    const std::size_t n = cloud.size();
    origin_ = cloud.region().lower();
    const auto upper = cloud.region().upper();
    span_ = 0;
    for (int a = 0; a < dim_; ++a) {
      const double extent = upper[a] - origin_[a];
      span_ = std::max<std::int64_t>(span_, static_cast<std::int64_t>(std::floor(extent / cell_)) + 1);
    }
    cells_.resize(n * static_cast<std::size_t>(dim_));
    std::vector<std::pair<std::uint64_t, Vertex>> keyed(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = cloud.point(i);
      for (int a = 0; a < dim_; ++a)
        cells_[i * dim_ + a] = static_cast<std::int32_t>(std::floor((p[a] - origin_[a]) / cell_));
      keyed[i] = {hash(cell_of(static_cast<Vertex>(i))), static_cast<Vertex>(i)};
    }
    std::sort(keyed.begin(), keyed.end());
    order_.resize(n);
    buckets_.reserve(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && keyed[j].first == keyed[i].first) {
        order_[j] = keyed[j].second;
        ++j;
      }
      buckets_.emplace(keyed[i].first, std::make_pair(static_cast<std::uint32_t>(i),
                                                       static_cast<std::uint32_t>(j)));
      i = j;
    }
  }

  [[nodiscard]] std::span<const std::int32_t> cell_of(Vertex v) const {
    return {cells_.data() + static_cast<std::size_t>(v) * dim_, static_cast<std::size_t>(dim_)};
  }

  /// Calls f(j) for every point whose cell is exactly `cell`.
  template <typename F>
  void for_each_in(std::span<const std::int32_t> cell, F&& f) const {
    const auto it = buckets_.find(hash(cell));
    if (it == buckets_.end()) return;
    for (std::uint32_t q = it->second.first; q < it->second.second; ++q) {
      const Vertex j = order_[q];
      if (std::equal(cell.begin(), cell.end(), cell_of(j).begin())) f(j);
    }
  }

  /// Visits every cell at Chebyshev distance exactly `ring` from `home`.
  template <typename F>
  void for_each_ring_cell(std::span<const std::int32_t> home, std::int64_t ring, F&& f) const {
    std::vector<std::int32_t> offset(static_cast<std::size_t>(dim_), static_cast<std::int32_t>(-ring));
    std::vector<std::int32_t> cell(static_cast<std::size_t>(dim_));
    for (;;) {
      bool on_ring = ring == 0;
      for (int a = 0; a < dim_; ++a) {
        cell[a] = home[a] + offset[a];
        if (std::abs(offset[a]) == ring) on_ring = true;
      }
      if (on_ring) f(std::span<const std::int32_t>(cell));
      int a = 0;
      while (a < dim_ && offset[a] == ring) offset[a++] = static_cast<std::int32_t>(-ring);
      if (a == dim_) break;
      ++offset[a];
    }
  }

  [[nodiscard]] double cell_size() const noexcept { return cell_; }
  [[nodiscard]] std::int64_t span() const noexcept { return span_; }

 private:
  static std::uint64_t hash(std::span<const std::int32_t> cell) {
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (std::int32_t c : cell) h = splitmix64(h ^ static_cast<std::uint32_t>(c));
    return h;
  }

  const PointCloud& cloud_;
  int dim_;
  double cell_;
  std::int64_t span_;
  std::vector<double> origin_;
  std::vector<std::int32_t> cells_;
  std::vector<Vertex> order_;
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> buckets_;
};

/// Cell size for neighbour queries at `radius`; guards against cells so small
/// that integer cell coordinates would overflow.
double grid_cell(const PointCloud& cloud, double radius) {
  const double extent = cloud.region().diameter();
  return std::max(radius, extent * 1e-7);
}

}  // namespace

PointCloud::PointCloud(geometry::Region region, std::vector<double> coords, std::uint64_t seed)
    : region_(std::move(region)), coords_(std::move(coords)), seed_(seed) {
  if (coords_.size() % static_cast<std::size_t>(region_.dimension()) != 0)
    throw DomainError("PointCloud: coordinate count is not a multiple of the dimension");
}

double distance(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

Graph::Graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
  offsets_.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw DomainError("Graph: vertex out of range");
    if (u == v) throw DomainError("Graph: self loop");
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  neighbors_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    neighbors_[fill[u]++] = v;
    neighbors_[fill[v]++] = u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    const auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) throw DomainError("Graph: duplicate edge");
  }
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::min_degree() const {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t v = 0; v < size(); ++v) best = std::min(best, degree(static_cast<Vertex>(v)));
  return size() == 0 ? 0 : best;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edge_count());
  for (std::size_t u = 0; u < size(); ++u)
    for (Vertex v : neighbors(static_cast<Vertex>(u)))
      if (u < v) out.emplace_back(static_cast<Vertex>(u), v);
  return out;
}

Graph Graph::induced(const std::vector<bool>& keep) const {
  std::vector<Vertex> label(size(), std::numeric_limits<Vertex>::max());
  Vertex next = 0;
  for (std::size_t v = 0; v < size(); ++v)
    if (keep[v]) label[v] = next++;
  std::vector<std::pair<Vertex, Vertex>> kept;
  for (const auto& [u, v] : edges())
    if (keep[u] && keep[v]) kept.emplace_back(label[u], label[v]);
  return Graph(next, kept);
}

Graph Graph::complete(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, e);
}

PointCloud generate(const geometry::Region& region, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("generate: n must be >= 1");
  Rng rng(seed);
  const auto d = static_cast<std::size_t>(region.dimension());
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i)
    geometry::sample_uniform(region, rng, std::span<double>(coords.data() + i * d, d));
  return PointCloud(region, std::move(coords), seed);
}

GeometricGraph build_graph(const PointCloud& cloud, double radius) {
  if (!(radius > 0.0)) throw DomainError("build_graph: radius must be positive");
  const std::size_t n = cloud.size();
  const Grid grid(cloud, grid_cell(cloud, radius));
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const auto vi = static_cast<Vertex>(i);
    const auto home = grid.cell_of(vi);
    const auto p = cloud.point(i);
    // The 3^d block around the home cell is the union of rings 0 and 1.
    for (std::int64_t ring = 0; ring <= 1; ++ring) {
      grid.for_each_ring_cell(home, ring, [&](std::span<const std::int32_t> cell) {
        grid.for_each_in(cell, [&](Vertex j) {
          if (j > vi && distance(p, cloud.point(j)) <= radius) edges.emplace_back(vi, j);
        });
      });
    }
  }
  return {radius, Graph(n, edges)};
}

std::vector<PairDistance> pairs_within(const PointCloud& cloud, double lo, double hi) {
  if (!(hi > 0.0)) throw DomainError("pairs_within: hi must be positive");
  const std::size_t n = cloud.size();
  const Grid grid(cloud, grid_cell(cloud, hi));
  std::vector<PairDistance> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto vi = static_cast<Vertex>(i);
    const auto p = cloud.point(i);
    for (std::int64_t ring = 0; ring <= 1; ++ring) {
      grid.for_each_ring_cell(grid.cell_of(vi), ring, [&](std::span<const std::int32_t> cell) {
        grid.for_each_in(cell, [&](Vertex j) {
          if (j <= vi) return;
          const double dist = distance(p, cloud.point(j));
          if (dist > lo && dist <= hi) out.push_back({dist, vi, j});
        });
      });
    }
  }
  std::sort(out.begin(), out.end(), [](const PairDistance& a, const PairDistance& b) {
    return std::tie(a.dist, a.i, a.j) < std::tie(b.dist, b.i, b.j);
  });
  return out;
}

double previous_pair_distance(const PointCloud& cloud, double radius) {
  const std::size_t n = cloud.size();
  if (n < 2 || !(radius > 0.0)) return 0.0;
  const Grid grid(cloud, grid_cell(cloud, radius));
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto vi = static_cast<Vertex>(i);
    const auto p = cloud.point(i);
    for (std::int64_t ring = 0; ring <= 1; ++ring) {
      grid.for_each_ring_cell(grid.cell_of(vi), ring, [&](std::span<const std::int32_t> cell) {
        grid.for_each_in(cell, [&](Vertex j) {
          if (j <= vi) return;
          const double dist = distance(p, cloud.point(j));
          if (dist < radius) best = std::max(best, dist);
        });
      });
    }
  }
  return best;
}

std::vector<double> knn_radii(const PointCloud& cloud, std::size_t m) {
  const std::size_t n = cloud.size();
  if (m < 1 || m >= n) throw DomainError("knn_radii: requires 1 <= m <= n - 1");
  const int d = cloud.dimension();
  // Roughly m + 1 points per cell of the bounding box.
  const auto lo = cloud.region().lower();
  const auto hi = cloud.region().upper();
  double box = 1.0;
  for (int a = 0; a < d; ++a) box *= hi[a] - lo[a];
  const double cell = std::pow(box * static_cast<double>(m + 1) / static_cast<double>(n), 1.0 / d);
  const Grid grid(cloud, grid_cell(cloud, cell));

  using Entry = std::pair<double, Vertex>;
  std::vector<double> out(n);
  std::vector<Entry> heap;
  heap.reserve(m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto vi = static_cast<Vertex>(i);
    const auto p = cloud.point(i);
    heap.clear();
    for (std::int64_t ring = 0;; ++ring) {
      grid.for_each_ring_cell(grid.cell_of(vi), ring, [&](std::span<const std::int32_t> c) {
        grid.for_each_in(c, [&](Vertex j) {
          if (j == vi) return;
          const Entry e{distance(p, cloud.point(j)), j};
          if (heap.size() < m) {
            heap.push_back(e);
            std::push_heap(heap.begin(), heap.end());
          } else if (e < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = e;
            std::push_heap(heap.begin(), heap.end());
          }
        });
      });
      // Anything outside rings 0..ring is at least ring * cell away.
      if (heap.size() == m && heap.front().first <= static_cast<double>(ring) * grid.cell_size())
        break;
      if (ring > grid.span()) break;
    }
    out[i] = heap.front().first;
  }
  return out;
}

double min_degree_radius(const PointCloud& cloud, std::size_t min_degree) {
  if (min_degree >= cloud.size())
    throw DegenerateInstance("min_degree_radius: need min_degree <= n - 1 (n = " +
                             std::to_string(cloud.size()) + ")");
  if (min_degree == 0) return 0.0;
  const auto radii = knn_radii(cloud, min_degree);
  return *std::max_element(radii.begin(), radii.end());
}

std::size_t degree_count(const Graph& graph, std::size_t k) {
  std::size_t count = 0;
  for (std::size_t v = 0; v < graph.size(); ++v)
    if (graph.degree(static_cast<Vertex>(v)) == k) ++count;
  return count;
}

void write_cloud_csv(std::ostream& os, const PointCloud& cloud) {
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  for (int a = 0; a < cloud.dimension(); ++a) os << (a ? "," : "") << 'x' << (a + 1);
  os << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t a = 0; a < p.size(); ++a) os << (a ? "," : "") << p[a];
    os << '\n';
  }
}

void write_edges_csv(std::ostream& os, const PointCloud& cloud, const Graph& graph) {
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << "i,j,dist\n";
  for (const auto& [u, v] : graph.edges())
    os << u << ',' << v << ',' << distance(cloud.point(u), cloud.point(v)) << '\n';
}

}  // namespace rggcrit::rgg
