#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "walkabout/graph.hpp"
#include "walkabout/oracle.hpp"

namespace walkabout::net {

struct CrawlServerConfig {
  std::string host = "127.0.0.1";
  int port = 0;                         // 0 picks a free port
  double rate_limit = 1000.0;           // queries per second per session token
  double burst = 0.0;                   // bucket capacity; 0 = max(1, rate_limit)
  std::optional<std::size_t> daily_cap; // distinct queries per session
  int latency_ms = 0;
  std::chrono::seconds session_ttl{3600};
};

// Serves neighbor queries over HTTP/JSON:
//   POST /v1/session {graph_id, seed_hint?, ref_seed?} -> {token, seed_ref}
//   GET  /v1/vertex/{ref}   (X-Session: token) -> {ref, neighbors, f}
//        403 not revealed, 429 rate limited (Retry-After), 402 daily cap, 401 expired
//   GET  /v1/session/stats  (X-Session: token) -> {queries_used}
class CrawlServer {
 public:
  explicit CrawlServer(CrawlServerConfig config = {});
  ~CrawlServer();
  CrawlServer(const CrawlServer&) = delete;
  CrawlServer& operator=(const CrawlServer&) = delete;

  // Graphs must be added before start().
  void add_graph(const std::string& graph_id, Graph g);

  // Binds and serves on a background thread. Throws BindFailure.
  void start();
  void stop();
  // Blocks the calling thread until stop() is called from elsewhere.
  void wait();

  int port() const;
  std::string address() const;

  // Test hooks: map a session's ref back to the hidden vertex id, and read counters.
  std::optional<VertexId> resolve(const std::string& token, const std::string& ref) const;
  std::optional<std::size_t> queries_used(const std::string& token) const;
  std::size_t rate_limited_responses() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RemoteOptions {
  std::optional<std::size_t> budget;      // client-side cap on top of the server's
  std::optional<VertexId> seed_hint;      // ask the server for this seed vertex
  std::optional<std::uint64_t> ref_seed;  // fix the server's ref scrambling key
  std::size_t max_retries = 1000;         // 429 retries per request
  std::chrono::milliseconds timeout{10000};
};

// NeighborOracle backed by a CrawlServer session. Re-queries are served from a local
// cache and never reach the server.
class RemoteOracle final : public NeighborOracle {
 public:
  // Throws ConnectFailure when the server is unreachable or rejects the session.
  RemoteOracle(const std::string& address, const std::string& graph_id,
               RemoteOptions options = {});
  ~RemoteOracle() override;
  RemoteOracle(const RemoteOracle&) = delete;
  RemoteOracle& operator=(const RemoteOracle&) = delete;

  VertexRef seed() const override { return seed_; }
  const QueryResult& query(VertexRef v) override;
  std::size_t query_count() const override { return cache_.size(); }
  std::optional<std::size_t> budget() const override { return options_.budget; }
  bool is_revealed(VertexRef v) const override { return revealed_.count(v.value) != 0; }
  bool is_queried(VertexRef v) const override { return cache_.count(v) != 0; }
  std::size_t revealed_count() const override { return revealed_.size(); }

  const std::string& token() const { return token_; }
  std::size_t server_queries_used();
  // Throws Protocol when the local and server query counts disagree.
  void reconcile();
  std::size_t backoffs() const { return backoffs_; }

  static std::string format_ref(VertexRef r);
  static VertexRef parse_ref(const std::string& s);

 private:
  struct Client;
  std::unique_ptr<Client> client_;
  RemoteOptions options_;
  std::string token_;
  VertexRef seed_;
  std::unordered_map<std::uint64_t, char> revealed_;
  std::unordered_map<VertexRef, QueryResult, VertexRefHash> cache_;
  std::size_t backoffs_ = 0;
};

}  // namespace walkabout::net
