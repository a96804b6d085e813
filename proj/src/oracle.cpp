#include "walkabout/oracle.hpp"

#include <algorithm>
#include <unordered_set>

#include "walkabout/error.hpp"
#include "walkabout/rng.hpp"

namespace walkabout {

ExplorationOracle::ExplorationOracle(const Graph& g, VertexId seed, OracleOptions options)
    : graph_(&g), options_(options), key_(ref_key(options.id_seed)) {
  if (seed >= g.num_vertices()) {
    fail(ErrorCode::InvalidSeed, "seed " + std::to_string(seed) + " not in a graph of " +
                                     std::to_string(g.num_vertices()) + " vertices");
  }
  seed_ = ref_of(seed);
  revealed_.emplace(seed_, seed);
}

std::uint64_t ref_key(std::uint64_t id_seed) { return Rng::mix(id_seed ^ 0x6f7261636c65ULL); }

VertexRef scramble_id(VertexId id, std::uint64_t key) {
  return VertexRef{Rng::mix(static_cast<std::uint64_t>(id) ^ key)};
}

VertexRef ExplorationOracle::ref_of(VertexId id) const { return scramble_id(id, key_); }

const QueryResult& ExplorationOracle::query(VertexRef v) {
  if (auto hit = queried_.find(v); hit != queried_.end()) return hit->second;
  auto it = revealed_.find(v);
  if (it == revealed_.end()) fail(ErrorCode::NotRevealed, "vertex ref not revealed");
  if (options_.budget && queried_.size() >= *options_.budget) {
    fail(ErrorCode::BudgetExhausted,
         "query budget of " + std::to_string(*options_.budget) + " exhausted");
  }
  const VertexId id = it->second;
  QueryResult result;
  result.vertex = v;
  result.f_value = graph_->label(id).f_value;
  auto nb = graph_->neighbors(id);
  result.degree = nb.size();
  result.neighbors.reserve(nb.size());
  for (VertexId u : nb) {
    const VertexRef r = ref_of(u);
    result.neighbors.push_back(r);
    revealed_.emplace(r, u);
  }
  std::sort(result.neighbors.begin(), result.neighbors.end());
  query_order_.push_back(id);
  return queried_.emplace(v, std::move(result)).first->second;
}

std::optional<std::size_t> ExplorationOracle::peek_degree(VertexRef v) const {
  if (!options_.degree_on_reveal) return std::nullopt;
  auto it = revealed_.find(v);
  if (it == revealed_.end()) return std::nullopt;
  return graph_->degree(it->second);
}

VertexId OracleAudit::hidden_id(const ExplorationOracle& o, VertexRef v) {
  auto it = o.revealed_.find(v);
  if (it == o.revealed_.end()) fail(ErrorCode::NotRevealed, "vertex ref not revealed");
  return it->second;
}

AuditReport OracleAudit::audit(const ExplorationOracle& o) {
  AuditReport r = audit_vertices(*o.graph_, o.query_order_);
  r.revealed_count = o.revealed_.size();
  return r;
}

AuditReport audit_vertices(const Graph& g, std::span<const VertexId> queried_ids) {
  AuditReport r;
  r.queried_count = queried_ids.size();
  std::unordered_set<VertexId> queried(queried_ids.begin(), queried_ids.end());
  std::unordered_map<VertexId, std::size_t> hits;
  for (VertexId v : queried_ids) {
    const Role role = g.label(v).role;
    if (is_starred(role)) ++r.starred_queried_count;
    if (role == Role::StarCenter) ++r.star_centers_queried_count;
    if (role == Role::Marked) ++r.marked_queried_count;
    for (VertexId u : g.neighbors(v)) {
      if (queried.count(u)) {
        if (v < u) ++r.queried_pair_edges;
      } else {
        ++hits[u];
      }
    }
  }
  r.revealed_count = queried.size() + hits.size();
  for (const auto& [u, count] : hits) {
    if (count >= 2) ++r.observed_count;
  }
  return r;
}

}  // namespace walkabout
