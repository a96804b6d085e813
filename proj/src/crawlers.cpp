#include "walkabout/crawlers.hpp"

#include <deque>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "walkabout/error.hpp"
#include "walkabout/estimators.hpp"

namespace walkabout {

std::string to_string(CrawlerKind k) {
  switch (k) {
    case CrawlerKind::BFS: return "bfs";
    case CrawlerKind::DFS: return "dfs";
    case CrawlerKind::LazyWalk: return "lazy_walk";
    case CrawlerKind::MaxDegreeWalk: return "maxdeg_walk";
    case CrawlerKind::DegreeGreedy: return "degree_greedy";
    case CrawlerKind::RandomFrontier: return "random_frontier";
  }
  return "bfs";
}

CrawlerKind crawler_from_string(const std::string& name) {
  for (CrawlerKind k : all_crawlers()) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorCode::InvalidArgument, "unknown crawler '" + name + "'");
}

const std::vector<CrawlerKind>& all_crawlers() {
  static const std::vector<CrawlerKind> kinds = {
      CrawlerKind::BFS,         CrawlerKind::DFS,          CrawlerKind::LazyWalk,
      CrawlerKind::MaxDegreeWalk, CrawlerKind::DegreeGreedy, CrawlerKind::RandomFrontier};
  return kinds;
}

namespace {

CrawlResult crawl_walk(NeighborOracle& o, ChainKernel kernel, const CrawlOptions& opt, Rng& rng) {
  CrawlResult r;
  const std::size_t start = o.query_count();
  if (opt.budget == 0) return r;
  const std::size_t cap = opt.max_walk_steps ? opt.max_walk_steps : 100 * opt.budget + 1000;
  const std::size_t limit = start + opt.budget;
  OracleWalk walk(o, kernel);
  if (o.query_count() > start) r.visited.push_back(walk.current().vertex);
  while (r.steps < cap) {
    if (o.query_count() >= limit) {
      // Spent: keep walking only while every neighbor is already paid for.
      const auto& nb = walk.current().neighbors;
      bool all_known = true;
      for (VertexRef u : nb) all_known = all_known && o.is_queried(u);
      if (!all_known) break;
    }
    const VertexRef from = walk.current().vertex;
    bool moved = false;
    try {
      moved = walk.step(rng);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExhausted) throw;
      break;
    }
    ++r.steps;
    if (moved && o.query_count() > start + r.visited.size()) {
      r.visited.push_back(walk.current().vertex);
    }
    if (o.query_count() > limit) fail(ErrorCode::BudgetExhausted, "walk crawler overspent");
    if (moved && opt.record_moves) r.moves.emplace_back(from, walk.current().vertex);
  }
  r.queries = o.query_count() - start;
  return r;
}

}  // namespace

CrawlResult crawl(NeighborOracle& o, CrawlerKind kind, const CrawlOptions& opt, Rng& rng) {
  switch (kind) {
    case CrawlerKind::LazyWalk: return crawl_walk(o, ChainKernel::lazy_simple(), opt, rng);
    case CrawlerKind::MaxDegreeWalk:
      if (opt.max_degree_bound == 0) {
        fail(ErrorCode::ConfigInvalid, "maxdeg_walk needs a degree bound");
      }
      return crawl_walk(o, ChainKernel::max_degree(opt.max_degree_bound), opt, rng);
    default: break;
  }

  CrawlResult r;
  const std::size_t start = o.query_count();
  std::unordered_set<VertexRef, VertexRefHash> seen{o.seed()};

  // Frontier containers; only the one matching `kind` is used.
  std::deque<VertexRef> fifo{o.seed()};
  std::vector<VertexRef> pool{o.seed()};
  // (priority, -discovery order, ref); entries whose priority was since raised are stale
  using Entry = std::tuple<std::size_t, std::size_t, VertexRef>;
  std::priority_queue<Entry> heap;
  std::unordered_map<VertexRef, std::size_t, VertexRefHash> best_prio, order;
  heap.emplace(0, static_cast<std::size_t>(-1), o.seed());
  order[o.seed()] = 0;

  auto pop = [&](VertexRef& out) -> bool {
    switch (kind) {
      case CrawlerKind::BFS:
        if (fifo.empty()) return false;
        out = fifo.front();
        fifo.pop_front();
        return true;
      case CrawlerKind::DFS:
        if (fifo.empty()) return false;
        out = fifo.back();
        fifo.pop_back();
        return true;
      case CrawlerKind::RandomFrontier: {
        if (pool.empty()) return false;
        const std::size_t i = rng.below(pool.size());
        out = pool[i];
        pool[i] = pool.back();
        pool.pop_back();
        return true;
      }
      default:
        // Lazy deletion: skip stale entries whose hit count has since grown.
        while (!heap.empty()) {
          auto [prio, neg_order, ref] = heap.top();
          heap.pop();
          if (o.is_queried(ref) || prio != best_prio[ref]) continue;
          out = ref;
          return true;
        }
        return false;
    }
  };

  VertexRef next;
  while (o.query_count() - start < opt.budget) {
    if (!pop(next)) {
      r.exhausted = true;
      break;
    }
    if (o.is_queried(next)) continue;
    const QueryResult& q = o.query(next);
    ++r.steps;
    r.visited.push_back(next);
    for (VertexRef u : q.neighbors) {
      if (o.is_queried(u)) continue;
      const bool fresh = seen.insert(u).second;
      switch (kind) {
        case CrawlerKind::BFS:
          if (fresh) fifo.push_back(u);
          break;
        case CrawlerKind::DFS:
          fifo.push_back(u);  // revisits resurface the vertex, as in recursive DFS
          break;
        case CrawlerKind::RandomFrontier:
          if (fresh) pool.push_back(u);
          break;
        default: {
          // Priority: largest degree among the queried vertices that revealed u, or
          // u's own degree when the oracle discloses it.
          if (fresh) order[u] = order.size();
          const std::size_t prio = o.peek_degree(u).value_or(q.degree);
          std::size_t& best = best_prio[u];
          if (fresh || prio > best) {
            best = prio;
            heap.emplace(prio, static_cast<std::size_t>(-1) - order[u], u);
          }
          break;
        }
      }
    }
  }
  if (!r.exhausted && kind == CrawlerKind::BFS && fifo.empty()) r.exhausted = true;
  r.queries = o.query_count() - start;
  return r;
}

}  // namespace walkabout
