#include "rggcrit/connectivity.hpp"

#include <algorithm>
#include <string>

#include "rggcrit/errors.hpp"

namespace rggcrit::connectivity {

namespace {

constexpr int kUnbounded = std::numeric_limits<int>::max() / 2;

std::size_t in_node(Vertex v) { return 2 * static_cast<std::size_t>(v); }
std::size_t out_node(Vertex v) { return 2 * static_cast<std::size_t>(v) + 1; }

/// Articulation-point search on G - skip (skip = n for none). Returns true when
/// the remaining graph is connected, has >= 3 vertices and no cut vertex.
/// Iterative lowpoint DFS.
bool biconnected_without(const Graph& g, std::size_t skip) {
  const std::size_t n = g.size();
  const std::size_t remaining = n - (skip < n ? 1 : 0);
  if (remaining < 3) return false;
  const std::size_t none = n;
  std::vector<std::size_t> disc(n, 0), low(n, 0), parent(n, none), cursor(n, 0);
  std::size_t root = skip == 0 ? 1 : 0;
  std::size_t timer = 1, visited = 1, root_children = 0;
  std::vector<std::size_t> stack{root};
  disc[root] = low[root] = timer++;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    const auto nb = g.neighbors(static_cast<Vertex>(v));
    if (cursor[v] < nb.size()) {
      const std::size_t w = nb[cursor[v]++];
      if (w == skip) continue;
      if (disc[w] == 0) {
        parent[w] = v;
        disc[w] = low[w] = timer++;
        ++visited;
        if (v == root) ++root_children;
        stack.push_back(w);
      } else if (w != parent[v]) {
        low[v] = std::min(low[v], disc[w]);
      }
    } else {
      stack.pop_back();
      const std::size_t p = parent[v];
      if (p != none) {
        low[p] = std::min(low[p], low[v]);
        if (p != root && low[v] >= disc[p]) return false;
      }
    }
  }
  return visited == remaining && root_children == 1;
}

/// K fixed sources v_0..v_{K-1}, each against every non-adjacent target.
/// Exact: a separator S with |S| < K misses some source s, and any vertex in a
/// component of G - S other than s's is non-adjacent to s with κ(s, t) <= |S|.
bool flow_strategy(const Graph& g, int K, bool capped) {
  FlowNetwork net(g);
  const std::size_t n = g.size();
  // Low-degree sources give the cheapest flows.
  std::vector<Vertex> order(n);
  for (std::size_t v = 0; v < n; ++v) order[v] = static_cast<Vertex>(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return g.degree(a) < g.degree(b); });
  for (int i = 0; i < K; ++i) {
    const Vertex s = order[static_cast<std::size_t>(i)];
    for (std::size_t t = 0; t < n; ++t) {
      const auto tv = static_cast<Vertex>(t);
      if (tv == s || g.adjacent(s, tv)) continue;
      if (net.max_flow(s, tv, capped ? K : kUnbounded) < K) return false;
    }
  }
  return true;
}

}  // namespace

FlowNetwork::FlowNetwork(const Graph& graph) : n_(graph.size()) {
  const std::size_t nodes = 2 * n_;
  std::vector<std::size_t> out_degree(nodes, 0);
  for (std::size_t v = 0; v < n_; ++v) {
    ++out_degree[in_node(static_cast<Vertex>(v))];   // internal forward
    ++out_degree[out_node(static_cast<Vertex>(v))];  // internal reverse
    const std::size_t deg = graph.degree(static_cast<Vertex>(v));
    out_degree[out_node(static_cast<Vertex>(v))] += deg;  // v_out -> w_in
    out_degree[in_node(static_cast<Vertex>(v))] += deg;   // reverse of w_out -> v_in
  }
  first_.assign(nodes + 1, 0);
  for (std::size_t u = 0; u < nodes; ++u) first_[u + 1] = first_[u] + out_degree[u];
  const std::size_t arcs = first_[nodes];
  head_.resize(arcs);
  pair_.resize(arcs);
  capacity_.resize(arcs);
  std::vector<std::size_t> fill(first_.begin(), first_.end() - 1);
  auto link = [&](std::size_t from, std::size_t to, int cap) {
    const std::size_t a = fill[from]++, b = fill[to]++;
    head_[a] = to;
    head_[b] = from;
    capacity_[a] = cap;
    capacity_[b] = 0;
    pair_[a] = b;
    pair_[b] = a;
  };
  for (std::size_t v = 0; v < n_; ++v) {
    const auto vv = static_cast<Vertex>(v);
    link(in_node(vv), out_node(vv), 1);
    for (const Vertex w : graph.neighbors(vv)) link(out_node(vv), in_node(w), kUnbounded);
  }
  residual_ = capacity_;
  parent_arc_.assign(nodes, 0);
  seen_.assign(nodes, 0);
  queue_.reserve(nodes);
}

bool FlowNetwork::augment(std::size_t source, std::size_t sink) {
  if (++stamp_ == 0) {
    std::fill(seen_.begin(), seen_.end(), 0);
    stamp_ = 1;
  }
  queue_.clear();
  queue_.push_back(source);
  seen_[source] = stamp_;
  for (std::size_t q = 0; q < queue_.size(); ++q) {
    const std::size_t u = queue_[q];
    for (std::size_t a = first_[u]; a < first_[u + 1]; ++a) {
      const std::size_t w = head_[a];
      if (residual_[a] <= 0 || seen_[w] == stamp_) continue;
      seen_[w] = stamp_;
      parent_arc_[w] = a;
      if (w == sink) {
        for (std::size_t x = sink; x != source;) {
          const std::size_t arc = parent_arc_[x];
          --residual_[arc];
          ++residual_[pair_[arc]];
          x = head_[pair_[arc]];
        }
        return true;
      }
      queue_.push_back(w);
    }
  }
  return false;
}

int FlowNetwork::max_flow(Vertex s, Vertex t, int limit) {
  if (s >= n_ || t >= n_) throw DomainError("max_flow: vertex out of range");
  residual_ = capacity_;
  last_source_ = out_node(s);
  int flow = 0;
  while (flow < limit && augment(out_node(s), in_node(t))) ++flow;
  return flow;
}

std::vector<Vertex> FlowNetwork::min_cut() const {
  // Residual reachability from the source of the last flow.
  std::vector<char> reach(2 * n_, 0);
  std::vector<std::size_t> queue{last_source_};
  reach[last_source_] = 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::size_t u = queue[q];
    for (std::size_t a = first_[u]; a < first_[u + 1]; ++a)
      if (residual_[a] > 0 && !reach[head_[a]]) {
        reach[head_[a]] = 1;
        queue.push_back(head_[a]);
      }
  }
  std::vector<Vertex> cut;
  for (std::size_t v = 0; v < n_; ++v)
    if (reach[in_node(static_cast<Vertex>(v))] && !reach[out_node(static_cast<Vertex>(v))])
      cut.push_back(static_cast<Vertex>(v));
  return cut;
}

int local_vertex_connectivity(const Graph& graph, Vertex s, Vertex t, int limit) {
  if (s >= graph.size() || t >= graph.size())
    throw DomainError("local_vertex_connectivity: vertex out of range");
  if (s == t) throw DomainError("local_vertex_connectivity: s == t has no separator");
  if (graph.adjacent(s, t))
    throw DomainError("local_vertex_connectivity: adjacent s, t have no vertex separator");
  FlowNetwork net(graph);
  return net.max_flow(s, t, limit);
}

bool is_connected(const Graph& graph) {
  const std::size_t n = graph.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const Vertex w : graph.neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

bool is_biconnected(const Graph& graph) { return biconnected_without(graph, graph.size()); }

bool is_k_connected(const Graph& graph, int K, Strategy strategy) {
  if (K < 1) throw DomainError("is_k_connected: K must be >= 1");
  const std::size_t n = graph.size();
  if (n < static_cast<std::size_t>(K) + 1) return false;
  if (graph.min_degree() < static_cast<std::size_t>(K)) return false;
  if (strategy == Strategy::Auto) {
    if (K == 1) return is_connected(graph);
    if (K == 2) return is_biconnected(graph);
    if (K == 3) {
      // 3-connected iff every G - v is 2-connected (n >= 4 holds here).
      for (std::size_t v = 0; v < n; ++v)
        if (!biconnected_without(graph, v)) return false;
      return true;
    }
  }
  return flow_strategy(graph, K, strategy != Strategy::FlowUncapped);
}

ConnectivityResult vertex_connectivity(const Graph& graph) {
  const std::size_t n = graph.size();
  if (n < 2) throw DomainError("vertex_connectivity: need n >= 2");
  if (!is_connected(graph)) return {0, {}};
  if (graph.edge_count() == n * (n - 1) / 2) return {static_cast<int>(n - 1), {}};

  // Upper bound δ with the neighbourhood of a min-degree vertex as witness
  // (a separator because the graph is not complete).
  Vertex arg = 0;
  for (std::size_t v = 1; v < n; ++v)
    if (graph.degree(static_cast<Vertex>(v)) < graph.degree(arg)) arg = static_cast<Vertex>(v);
  ConnectivityResult best;
  best.kappa = static_cast<int>(graph.degree(arg));
  const auto nb = graph.neighbors(arg);
  best.witness_cut.assign(nb.begin(), nb.end());
  if (best.kappa == static_cast<int>(n - 1)) best.witness_cut.clear();

  // Even: sources v_0..v_κ. Some source avoids a minimum separator, and
  // that source is separated from a non-adjacent vertex by it.
  FlowNetwork net(graph);
  for (std::size_t i = 0; static_cast<int>(i) <= best.kappa && i < n; ++i) {
    const auto s = static_cast<Vertex>(i);
    for (std::size_t t = 0; t < n; ++t) {
      const auto tv = static_cast<Vertex>(t);
      if (tv == s || graph.adjacent(s, tv)) continue;
      const int f = net.max_flow(s, tv, best.kappa);
      if (f < best.kappa) {
        best.kappa = f;
        best.witness_cut = net.min_cut();
      }
    }
  }
  std::sort(best.witness_cut.begin(), best.witness_cut.end());
  return best;
}

double connectivity_radius(const rgg::PointCloud& cloud, int K, Strategy strategy) {
  const std::size_t n = cloud.size();
  if (K < 1) throw DomainError("connectivity_radius: K must be >= 1");
  if (static_cast<std::size_t>(K) >= n)
    throw DegenerateInstance("connectivity_radius: need K <= n - 1 (n = " + std::to_string(n) + ")");
  auto holds = [&](double r) {
    return is_k_connected(rgg::build_graph(cloud, r).graph, K, strategy);
  };

  // κ <= δ, so nothing below the min-degree radius can work, and the
  // min-degree radius is itself a pairwise distance.
  const double lo = rgg::min_degree_radius(cloud, static_cast<std::size_t>(K));
  if (holds(lo)) return lo;

  // Geometric growth; the diameter always works (complete graph, n >= K+1).
  const double diameter = cloud.region().diameter();
  double below = lo, above = lo;
  for (double step = 1.125;; step *= step) {
    above = below > 0.0 ? std::min(below * step, diameter) : diameter;
    if (above >= diameter || holds(above)) break;
    below = above;
  }

  // Bisect over the candidate distances in (below, above]: pred(cands[hi]) is
  // true because no pair lies in (cands.back(), above].
  const auto cands = rgg::pairs_within(cloud, below, above);
  if (cands.empty()) throw DomainError("connectivity_radius: no candidate radius (internal)");
  std::ptrdiff_t lo_idx = -1, hi_idx = static_cast<std::ptrdiff_t>(cands.size()) - 1;
  while (hi_idx - lo_idx > 1) {
    const std::ptrdiff_t mid = lo_idx + (hi_idx - lo_idx) / 2;
    if (holds(cands[static_cast<std::size_t>(mid)].dist))
      hi_idx = mid;
    else
      lo_idx = mid;
  }
  return cands[static_cast<std::size_t>(hi_idx)].dist;
}

}  // namespace rggcrit::connectivity
