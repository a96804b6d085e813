#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "walkabout/graph.hpp"

namespace walkabout {

// Opaque handle for a vertex as seen through an oracle. Carries no id or role information.
struct VertexRef {
  std::uint64_t value = 0;

  friend bool operator==(const VertexRef&, const VertexRef&) = default;
  friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

struct VertexRefHash {
  std::size_t operator()(const VertexRef& r) const noexcept {
    return std::hash<std::uint64_t>{}(r.value);
  }
};

// Keyed id -> ref scrambling shared by local and remote oracles. mix is a bijection on
// 64-bit words, so distinct ids always get distinct refs.
std::uint64_t ref_key(std::uint64_t id_seed);
VertexRef scramble_id(VertexId id, std::uint64_t key);

struct QueryResult {
  VertexRef vertex;
  std::vector<VertexRef> neighbors;  // ascending by ref value
  std::size_t degree = 0;
  double f_value = 0.0;
};

// Neighbor-query access to a hidden graph. Estimators and crawlers see nothing else.
class NeighborOracle {
 public:
  virtual ~NeighborOracle() = default;

  virtual VertexRef seed() const = 0;

  // First query of a vertex costs one unit of budget; later queries return the cached result.
  // The returned reference stays valid for the oracle's lifetime.
  virtual const QueryResult& query(VertexRef v) = 0;

  virtual std::size_t query_count() const = 0;
  virtual std::optional<std::size_t> budget() const = 0;
  virtual bool is_revealed(VertexRef v) const = 0;
  virtual bool is_queried(VertexRef v) const = 0;
  // Size of seed + union of queried neighbor lists.
  virtual std::size_t revealed_count() const = 0;

  // Degree of a revealed vertex before it is queried, when the oracle discloses it.
  virtual std::optional<std::size_t> peek_degree(VertexRef) const { return std::nullopt; }

  bool can_query(VertexRef v) const {
    return is_queried(v) || !budget() || query_count() < *budget();
  }
};

struct OracleOptions {
  std::optional<std::size_t> budget;
  std::uint64_t id_seed = 0;  // keys the id -> ref scrambling
  bool degree_on_reveal = false;
};

class ExplorationOracle final : public NeighborOracle {
 public:
  // Throws InvalidSeed when seed is not a vertex of g. g must outlive the oracle.
  ExplorationOracle(const Graph& g, VertexId seed, OracleOptions options = {});

  VertexRef seed() const override { return seed_; }
  const QueryResult& query(VertexRef v) override;
  std::size_t query_count() const override { return queried_.size(); }
  std::optional<std::size_t> budget() const override { return options_.budget; }
  bool is_revealed(VertexRef v) const override { return revealed_.count(v) != 0; }
  bool is_queried(VertexRef v) const override { return queried_.count(v) != 0; }
  std::size_t revealed_count() const override { return revealed_.size(); }
  std::optional<std::size_t> peek_degree(VertexRef v) const override;

  // Experiment-side introspection. Never handed to estimators.
  friend class OracleAudit;

 private:
  VertexRef ref_of(VertexId id) const;

  const Graph* graph_;
  OracleOptions options_;
  std::uint64_t key_;
  VertexRef seed_;
  std::unordered_map<VertexRef, VertexId, VertexRefHash> revealed_;
  std::unordered_map<VertexRef, QueryResult, VertexRefHash> queried_;
  std::vector<VertexId> query_order_;
};

struct AuditReport {
  std::size_t queried_count = 0;
  std::size_t revealed_count = 0;
  // Non-queried vertices with at least two queried neighbors.
  std::size_t observed_count = 0;
  std::size_t starred_queried_count = 0;
  std::size_t star_centers_queried_count = 0;
  std::size_t marked_queried_count = 0;
  // Edges of the hidden graph with both endpoints queried.
  std::size_t queried_pair_edges = 0;
};

class OracleAudit {
 public:
  static AuditReport audit(const ExplorationOracle& o);
  static VertexId hidden_id(const ExplorationOracle& o, VertexRef v);
  // Hidden ids of queried vertices in query order.
  static const std::vector<VertexId>& queried_ids(const ExplorationOracle& o) {
    return o.query_order_;
  }
  static const Graph& graph(const ExplorationOracle& o) { return *o.graph_; }
};

inline AuditReport audit(const ExplorationOracle& o) { return OracleAudit::audit(o); }

// Audit counts for an explicit queried set (hidden ids), e.g. a prefix of a crawl.
AuditReport audit_vertices(const Graph& g, std::span<const VertexId> queried);

}  // namespace walkabout
