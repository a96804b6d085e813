#include <gtest/gtest.h>

#include <set>

#include "walkabout/error.hpp"
#include "walkabout/generators.hpp"
#include "walkabout/oracle.hpp"

using namespace walkabout;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(Oracle, FreshAuditIsEmpty) {
  const Graph g = path_graph(5);
  ExplorationOracle o(g, 2);
  const auto r = audit(o);
  EXPECT_EQ(r.queried_count, 0u);
  EXPECT_EQ(r.observed_count, 0u);
  EXPECT_EQ(r.star_centers_queried_count, 0u);
  EXPECT_EQ(r.queried_pair_edges, 0u);
  EXPECT_EQ(o.query_count(), 0u);
  EXPECT_EQ(o.revealed_count(), 1u);  // just the seed
}

TEST(Oracle, InvalidSeed) {
  const Graph g = path_graph(3);
  EXPECT_EQ(code_of([&] { ExplorationOracle(g, 3); }), ErrorCode::InvalidSeed);
}

TEST(Oracle, SeedQueryDisclosesNeighbors) {
  const Graph g = path_graph(3);
  ExplorationOracle o(g, 1);
  const auto& r = o.query(o.seed());
  EXPECT_EQ(r.degree, 2u);
  ASSERT_EQ(r.neighbors.size(), 2u);
  EXPECT_TRUE(std::is_sorted(r.neighbors.begin(), r.neighbors.end()));
  for (VertexRef n : r.neighbors) EXPECT_TRUE(o.is_revealed(n));
  EXPECT_EQ(o.revealed_count(), 3u);
}

TEST(Oracle, UnrevealedRefIsRejected) {
  const Graph g = path_graph(4);
  ExplorationOracle o(g, 0);
  EXPECT_EQ(code_of([&] { o.query(VertexRef{12345}); }), ErrorCode::NotRevealed);
  // Vertex 2 exists but has not been disclosed yet.
  const auto& r = o.query(o.seed());
  const VertexRef one = r.neighbors[0];
  EXPECT_FALSE(o.is_queried(one));
  const auto& r1 = o.query(one);
  for (VertexRef n : r1.neighbors) EXPECT_TRUE(o.is_revealed(n));
}

TEST(Oracle, RepeatQueryIsFree) {
  const Graph g = complete_graph(4);
  ExplorationOracle o(g, 0);
  const auto& a = o.query(o.seed());
  const auto copy = a.neighbors;
  EXPECT_EQ(o.query_count(), 1u);
  const auto& b = o.query(o.seed());
  EXPECT_EQ(&a, &b);
  EXPECT_EQ(b.neighbors, copy);
  EXPECT_EQ(o.query_count(), 1u);
}

TEST(Oracle, BudgetOfOne) {
  const Graph g = path_graph(3);
  ExplorationOracle o(g, 1, {.budget = 1});
  const auto nb = o.query(o.seed()).neighbors;
  EXPECT_TRUE(o.can_query(o.seed()));
  EXPECT_FALSE(o.can_query(nb[0]));
  EXPECT_EQ(code_of([&] { o.query(nb[0]); }), ErrorCode::BudgetExhausted);
  EXPECT_NO_THROW(o.query(o.seed()));
}

TEST(Oracle, RefsHideIdsAndDependOnKey) {
  const Graph g = path_graph(3);
  ExplorationOracle a(g, 0, {.id_seed = 1});
  ExplorationOracle b(g, 0, {.id_seed = 2});
  ExplorationOracle c(g, 0, {.id_seed = 1});
  EXPECT_NE(a.seed(), b.seed());
  EXPECT_EQ(a.seed(), c.seed());
  EXPECT_NE(a.seed().value, 0u);
}

TEST(Oracle, DistinctIdsGetDistinctRefs) {
  const std::uint64_t key = ref_key(77);
  std::set<std::uint64_t> seen;
  for (VertexId v = 0; v < 100000; ++v) seen.insert(scramble_id(v, key).value);
  EXPECT_EQ(seen.size(), 100000u);
}

TEST(Oracle, DegreeDisclosureIsOptIn) {
  const Graph g = star_graph(4);
  ExplorationOracle closed(g, 1);
  const VertexRef center = closed.query(closed.seed()).neighbors[0];
  EXPECT_FALSE(closed.peek_degree(center).has_value());
  ExplorationOracle open(g, 1, {.degree_on_reveal = true});
  const VertexRef c2 = open.query(open.seed()).neighbors[0];
  EXPECT_EQ(open.peek_degree(c2), 4u);
}

TEST(Oracle, StarCenterReportsDegreeC1T) {
  Rng rng(3);
  const Graph h = gen_erdos_renyi(100, 0.1, rng);
  const Graph g = decorate(h, {.t = 5, .c1 = 2}, rng);
  VertexId marked = 0;
  while (g.label(marked).role != Role::Marked) ++marked;
  ExplorationOracle o(g, marked);
  std::size_t centers = 0, marks = 1;
  for (VertexRef n : o.query(o.seed()).neighbors) {
    const auto& r = o.query(n);
    const Role role = g.label(OracleAudit::hidden_id(o, n)).role;
    if (role == Role::StarCenter) {
      EXPECT_EQ(r.degree, 10u);
      ++centers;
    }
    marks += role == Role::Marked;
  }
  EXPECT_EQ(centers, 1u);
  EXPECT_EQ(audit(o).star_centers_queried_count, 1u);
  EXPECT_EQ(audit(o).marked_queried_count, marks);
}

TEST(Audit, ObservedAfterTwoCommonNeighbors) {
  // 0 - 1 - 2 - 3 - 0 cycle: querying 1 and 3 observes 0 and 2.
  const Graph g = cycle_graph(4);
  ExplorationOracle o(g, 0);
  const auto nb = o.query(o.seed()).neighbors;
  o.query(nb[0]);
  o.query(nb[1]);
  const auto ids = OracleAudit::queried_ids(o);
  ASSERT_EQ(ids.size(), 3u);
  const std::vector<VertexId> two{1, 3};
  const auto r = audit_vertices(g, two);
  EXPECT_EQ(r.observed_count, 2u);
  EXPECT_EQ(r.queried_pair_edges, 0u);
  const auto full = audit(o);
  EXPECT_EQ(full.observed_count, 1u);  // vertex 2 seen from 1 and 3
  EXPECT_EQ(full.queried_pair_edges, 2u);
  EXPECT_EQ(full.revealed_count, 4u);
}

TEST(Audit, SingleQueryObservesNothing) {
  Rng rng(1);
  const Graph g = gen_erdos_renyi(200, 0.1, rng);
  ExplorationOracle o(g, 5);
  o.query(o.seed());
  EXPECT_EQ(audit(o).observed_count, 0u);
}
