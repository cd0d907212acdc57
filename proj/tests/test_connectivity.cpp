#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rggcrit/connectivity.hpp"
#include "rggcrit/errors.hpp"

using namespace rggcrit;
using namespace rggcrit::connectivity;
using rgg::PointCloud;
using geometry::Region;

namespace {

Graph to_graph(const oracle::AdjMatrix& a) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i][j]) e.emplace_back(i, j);
  return Graph(a.size(), e);
}

Graph from_edges(std::size_t n, std::vector<std::pair<Vertex, Vertex>> e) { return Graph(n, e); }

Graph path(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

Graph cycle(std::size_t n) {
  auto e = path(n).edges();
  e.emplace_back(0, static_cast<Vertex>(n - 1));
  return Graph(n, e);
}

constexpr Strategy kAll[] = {Strategy::Auto, Strategy::Flow, Strategy::FlowUncapped};

}  // namespace

TEST_CASE("small named graphs") {
  const Graph p4 = path(4), c5 = cycle(5), k4 = Graph::complete(4);
  const Graph star = from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const Graph split = from_edges(4, {{0, 1}, {2, 3}});
  CHECK(vertex_connectivity(p4).kappa == 1);
  CHECK(vertex_connectivity(c5).kappa == 2);
  CHECK(vertex_connectivity(k4).kappa == 3);
  CHECK(vertex_connectivity(k4).witness_cut.empty());
  CHECK(vertex_connectivity(star).kappa == 1);
  CHECK(vertex_connectivity(star).witness_cut == std::vector<Vertex>{0});
  CHECK(vertex_connectivity(split).kappa == 0);
  CHECK(vertex_connectivity(split).witness_cut.empty());
  CHECK_THROWS_AS(vertex_connectivity(Graph(1, {})), DomainError);

  CHECK(is_connected(p4));
  CHECK_FALSE(is_connected(split));
  CHECK_FALSE(is_biconnected(p4));
  CHECK(is_biconnected(c5));
  CHECK_FALSE(is_biconnected(Graph::complete(2)));
  for (Strategy s : kAll) {
    CHECK(is_k_connected(k4, 3, s));
    CHECK_FALSE(is_k_connected(k4, 4, s));  // needs five vertices
    CHECK(is_k_connected(c5, 2, s));
    CHECK_FALSE(is_k_connected(c5, 3, s));
    CHECK_FALSE(is_k_connected(star, 2, s));
  }
  CHECK_THROWS_AS(is_k_connected(k4, 0), DomainError);
}

TEST_CASE("flow network size") {
  const Graph g = cycle(6);
  const FlowNetwork net(g);
  CHECK(net.vertex_count() == 6);
  CHECK(net.arc_count() == 6 + 2 * 6);
  CHECK(FlowNetwork(Graph::complete(5)).arc_count() == 5 + 2 * 10);
}

TEST_CASE("local connectivity equals the number of disjoint paths") {
  std::mt19937_64 gen(101);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + static_cast<int>(gen() % 8);
    const auto a = oracle::random_graph(n, 0.25 + 0.5 * (gen() % 100) / 100.0, gen);
    const Graph g = to_graph(a);
    for (int s = 0; s < n; ++s)
      for (int t = s + 1; t < n; ++t) {
        if (a[s][t]) {
          CHECK_THROWS_AS(local_vertex_connectivity(g, s, t), DomainError);
          continue;
        }
        const int expect = oracle::disjoint_paths(a, s, t);
        REQUIRE(local_vertex_connectivity(g, s, t) == expect);
        CHECK(local_vertex_connectivity(g, t, s) == expect);
        CHECK(local_vertex_connectivity(g, s, t, 1) == std::min(expect, 1));
        ++checked;
      }
  }
  CHECK(checked > 1000);
  CHECK_THROWS_AS(local_vertex_connectivity(path(3), 1, 1), DomainError);
  CHECK_THROWS_AS(local_vertex_connectivity(path(3), 0, 9), DomainError);
}

TEST_CASE("k-connectivity tests agree with exhaustive removal") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 11);
    const auto a = oracle::random_graph(n, 0.3 + 0.6 * (gen() % 100) / 100.0, gen);
    const Graph g = to_graph(a);
    const int kappa = oracle::connectivity(a);
    const auto res = vertex_connectivity(g);
    REQUIRE(res.kappa == kappa);
    CHECK(static_cast<std::size_t>(res.kappa) <= (n > 1 ? g.min_degree() : 0));
    if (!res.witness_cut.empty()) {
      CHECK(static_cast<int>(res.witness_cut.size()) == kappa);
      CHECK(std::is_sorted(res.witness_cut.begin(), res.witness_cut.end()));
      std::uint64_t mask = 0;
      for (Vertex v : res.witness_cut) mask |= std::uint64_t{1} << v;
      CHECK_FALSE(oracle::connected_without(a, mask));
    }
    for (int K = 1; K <= 5; ++K)
      for (Strategy s : kAll) REQUIRE(is_k_connected(g, K, s) == oracle::k_connected(a, K));
  }
}

TEST_CASE("connectivity radius equals the linear scan") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Region reg = trial % 2 ? Region::cube(2) : Region::cube(3);
    const std::size_t n = 6 + gen() % 30;
    const auto cloud = rgg::generate(reg, n, gen());
    for (int K = 1; K <= 3; ++K) {
      if (static_cast<std::size_t>(K) >= n) continue;
      const double expect = oracle::linear_scan_radius(cloud.coords(), reg.dimension(), K);
      const double got = connectivity_radius(cloud, K);
      REQUIRE(got == expect);
      CHECK(got >= rgg::min_degree_radius(cloud, K));
      if (K > 1) CHECK(got >= connectivity_radius(cloud, K - 1));
      CHECK(connectivity_radius(cloud, K, Strategy::Flow) == got);
    }
  }
  PointCloud two(Region::cube(2), {0.1, 0.1, 0.4, 0.5});
  CHECK(connectivity_radius(two, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(connectivity_radius(two, 2), DegenerateInstance);
}
