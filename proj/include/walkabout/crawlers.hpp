#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "walkabout/oracle.hpp"
#include "walkabout/rng.hpp"

namespace walkabout {

enum class CrawlerKind { BFS, DFS, LazyWalk, MaxDegreeWalk, DegreeGreedy, RandomFrontier };

std::string to_string(CrawlerKind k);
CrawlerKind crawler_from_string(const std::string& name);
const std::vector<CrawlerKind>& all_crawlers();

struct CrawlOptions {
  std::size_t budget = 0;             // distinct queries, including the seed
  std::size_t max_walk_steps = 0;     // walks only; 0 = 100 * budget + 1000
  std::size_t max_degree_bound = 0;   // D for MaxDegreeWalk
  bool record_moves = false;
};

struct CrawlResult {
  std::size_t queries = 0;
  std::size_t steps = 0;
  bool exhausted = false;  // every reachable vertex was queried
  std::vector<VertexRef> visited;  // newly queried vertices, in query order
  // Walk moves (from, to) between distinct vertices, in order.
  std::vector<std::pair<VertexRef, VertexRef>> moves;
};

// Queries vertices until the budget is spent or nothing new is reachable.
// Frontier strategies query each revealed vertex at most once; walks pay only on
// first visits and stop when the next vertex would exceed the budget.
CrawlResult crawl(NeighborOracle& o, CrawlerKind kind, const CrawlOptions& options, Rng& rng);

}  // namespace walkabout
