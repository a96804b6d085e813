#include <gtest/gtest.h>

#include <queue>
#include <set>

#include "walkabout/crawlers.hpp"
#include "walkabout/error.hpp"
#include "walkabout/generators.hpp"

using namespace walkabout;

namespace {

CrawlOptions opts(std::size_t budget, std::size_t D = 0) {
  CrawlOptions o;
  o.budget = budget;
  o.max_degree_bound = D;
  return o;
}

std::vector<std::size_t> bfs_distance(const Graph& g, VertexId s) {
  std::vector<std::size_t> dist(g.num_vertices(), SIZE_MAX);
  std::queue<VertexId> q;
  dist[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const VertexId v = q.front();
    q.pop();
    for (VertexId u : g.neighbors(v)) {
      if (dist[u] == SIZE_MAX) {
        dist[u] = dist[v] + 1;
        q.push(u);
      }
    }
  }
  return dist;
}

}  // namespace

TEST(Crawlers, NamesRoundTrip) {
  for (CrawlerKind k : all_crawlers()) EXPECT_EQ(crawler_from_string(to_string(k)), k);
  EXPECT_EQ(all_crawlers().size(), 6u);
  EXPECT_THROW(crawler_from_string("teleport"), Error);
}

TEST(Crawlers, EveryStrategyRespectsBudget) {
  Rng gr(1);
  const Graph g = gen_erdos_renyi(500, 0.02, gr);
  const std::size_t D = degree_stats(g).d_max;
  for (CrawlerKind k : all_crawlers()) {
    for (std::size_t budget : {0u, 1u, 7u, 60u}) {
      ExplorationOracle o(g, 0, {.budget = budget});
      Rng rng(3);
      const auto r = crawl(o, k, opts(budget, D), rng);
      EXPECT_LE(r.queries, budget) << to_string(k);
      EXPECT_EQ(r.queries, o.query_count());
      EXPECT_EQ(r.visited.size(), r.queries);
      std::set<VertexRef> distinct(r.visited.begin(), r.visited.end());
      EXPECT_EQ(distinct.size(), r.visited.size());
      if (budget == 60) EXPECT_EQ(r.queries, 60u) << to_string(k);
    }
  }
}

TEST(Crawlers, FrontierStrategiesExhaustSmallGraph) {
  const Graph g = cycle_graph(15);
  for (CrawlerKind k : {CrawlerKind::BFS, CrawlerKind::DFS, CrawlerKind::DegreeGreedy,
                        CrawlerKind::RandomFrontier}) {
    ExplorationOracle o(g, 0);
    Rng rng(1);
    const auto r = crawl(o, k, opts(100), rng);
    EXPECT_TRUE(r.exhausted) << to_string(k);
    EXPECT_EQ(r.queries, 15u);
  }
}

TEST(Crawlers, BfsVisitsInDistanceOrder) {
  Rng gr(2);
  const Graph g = gen_erdos_renyi(300, 0.02, gr);
  ExplorationOracle o(g, 5);
  Rng rng(1);
  const auto r = crawl(o, CrawlerKind::BFS, opts(120), rng);
  const auto dist = bfs_distance(g, 5);
  std::size_t last = 0;
  for (VertexRef v : r.visited) {
    const std::size_t d = dist[OracleAudit::hidden_id(o, v)];
    EXPECT_GE(d, last);
    last = d;
  }
}

TEST(Crawlers, DfsGoesDeepOnPath) {
  const Graph g = path_graph(30);
  ExplorationOracle o(g, 0);
  Rng rng(1);
  const auto r = crawl(o, CrawlerKind::DFS, opts(10), rng);
  for (std::size_t i = 0; i < r.visited.size(); ++i) {
    EXPECT_EQ(OracleAudit::hidden_id(o, r.visited[i]), i);
  }
}

TEST(Crawlers, DegreeGreedyPrefersHighDegreeRevealers) {
  // Seed 0 sees hub 1 (degree 20) and leaf 2; hub's neighbours should come first.
  std::vector<Edge> edges{{0, 1}, {0, 2}, {2, 3}};
  for (VertexId v = 4; v < 23; ++v) edges.push_back({1, v});
  const Graph g = build_graph(edges);
  ExplorationOracle o(g, 0);
  Rng rng(1);
  const auto r = crawl(o, CrawlerKind::DegreeGreedy, opts(6), rng);
  ASSERT_EQ(r.visited.size(), 6u);
  std::size_t hub_neighbours = 0;
  for (std::size_t i = 2; i < 6; ++i) hub_neighbours += OracleAudit::hidden_id(o, r.visited[i]) >= 4;
  EXPECT_GE(hub_neighbours, 3u);
}

TEST(Crawlers, WalkMovesFollowEdges) {
  Rng gr(4);
  const Graph g = gen_erdos_renyi(200, 0.04, gr);
  for (CrawlerKind k : {CrawlerKind::LazyWalk, CrawlerKind::MaxDegreeWalk}) {
    ExplorationOracle o(g, 0);
    Rng rng(2);
    CrawlOptions c = opts(40, degree_stats(g).d_max);
    c.record_moves = true;
    const auto r = crawl(o, k, c, rng);
    EXPECT_EQ(r.queries, 40u);
    ASSERT_FALSE(r.moves.empty());
    for (const auto& [a, b] : r.moves) {
      EXPECT_NE(a, b);
      EXPECT_TRUE(g.has_edge(OracleAudit::hidden_id(o, a), OracleAudit::hidden_id(o, b)));
    }
  }
}

TEST(Crawlers, WalkStepCapStopsEarly) {
  const Graph g = path_graph(1000);
  ExplorationOracle o(g, 0);
  Rng rng(1);
  CrawlOptions c = opts(500);
  c.max_walk_steps = 20;
  const auto r = crawl(o, CrawlerKind::LazyWalk, c, rng);
  EXPECT_EQ(r.steps, 20u);
  EXPECT_LE(r.queries, 21u);
}

TEST(Crawlers, MaxDegreeWalkNeedsBound) {
  const Graph g = path_graph(4);
  ExplorationOracle o(g, 0);
  Rng rng(1);
  try {
    crawl(o, CrawlerKind::MaxDegreeWalk, opts(3), rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
  }
}

TEST(Crawlers, SameSeedSameVisits) {
  Rng gr(7);
  const Graph g = gen_erdos_renyi(400, 0.02, gr);
  for (CrawlerKind k : all_crawlers()) {
    ExplorationOracle a(g, 1), b(g, 1);
    Rng ra(5), rb(5);
    const auto c = opts(50, degree_stats(g).d_max);
    EXPECT_EQ(crawl(a, k, c, ra).visited, crawl(b, k, c, rb).visited) << to_string(k);
  }
}
