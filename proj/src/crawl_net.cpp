#include "walkabout/crawl_net.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>

#include "walkabout/error.hpp"

namespace walkabout::net {

using nlohmann::json;
using SteadyClock = std::chrono::steady_clock;

std::string RemoteOracle::format_ref(VertexRef r) {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + 16, r.value, 16);
  std::string hex(buf, end);
  return std::string(16 - hex.size(), '0') + hex;
}

VertexRef RemoteOracle::parse_ref(const std::string& s) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value, 16);
  if (ec != std::errc() || end != s.data() + s.size() || s.size() != 16) {
    fail(ErrorCode::Protocol, "malformed vertex ref '" + s + "'");
  }
  return VertexRef{value};
}

// ------------------------------------------------------------------ server

namespace {

struct Session {
  std::mutex mutex;
  std::shared_ptr<const Graph> graph;
  std::uint64_t key = 0;
  std::unordered_map<std::uint64_t, VertexId> revealed;
  std::unordered_set<std::uint64_t> queried;
  double tokens = 0.0;
  SteadyClock::time_point refill;
  SteadyClock::time_point last_seen;
};

void send_error(httplib::Response& res, int status, const std::string& name,
                const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", name}, {"message", message}}.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, ErrorCode code, const std::string& message) {
  send_error(res, status, std::string(to_string(code)), message);
}

std::string random_token() {
  static std::mutex m;
  static std::random_device rd;
  static std::mt19937_64 gen(rd() ^ (static_cast<std::uint64_t>(rd()) << 32));
  std::lock_guard lock(m);
  return RemoteOracle::format_ref(VertexRef{gen()}) + RemoteOracle::format_ref(VertexRef{gen()});
}

std::uint64_t random_word() {
  static std::mutex m;
  static std::random_device rd;
  static std::mt19937_64 gen(rd());
  std::lock_guard lock(m);
  return gen();
}

}  // namespace

struct CrawlServer::Impl {
  CrawlServerConfig config;
  httplib::Server server;
  std::thread thread;
  int port = -1;
  std::unordered_map<std::string, std::shared_ptr<const Graph>> graphs;
  mutable std::mutex sessions_mutex;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions;
  std::atomic<std::size_t> rate_limited{0};

  double capacity() const {
    return config.burst > 0.0 ? config.burst : std::max(1.0, config.rate_limit);
  }

  std::shared_ptr<Session> session_for(const httplib::Request& req, httplib::Response& res) {
    const std::string token = req.get_header_value("X-Session");
    std::lock_guard lock(sessions_mutex);
    auto it = sessions.find(token);
    if (it == sessions.end()) {
      send_error(res, 401, ErrorCode::SessionExpired, "unknown or expired session");
      return nullptr;
    }
    if (SteadyClock::now() - it->second->last_seen > config.session_ttl) {
      sessions.erase(it);
      send_error(res, 401, ErrorCode::SessionExpired, "session expired");
      return nullptr;
    }
    return it->second;
  }

  void create_session(const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception& e) {
      return send_error(res, 400, ErrorCode::Parse, e.what());
    }
    const std::string graph_id = body.value("graph_id", std::string{});
    auto g = graphs.find(graph_id);
    if (g == graphs.end()) {
      return send_error(res, 404, ErrorCode::InvalidArgument, "unknown graph '" + graph_id + "'");
    }
    auto s = std::make_shared<Session>();
    s->graph = g->second;
    s->key = ref_key(body.contains("ref_seed") ? body["ref_seed"].get<std::uint64_t>()
                                               : random_word());
    const std::size_t n = s->graph->num_vertices();
    VertexId seed = static_cast<VertexId>(random_word() % n);
    if (body.contains("seed_hint") && !body["seed_hint"].is_null()) {
      const auto hint = body["seed_hint"].get<std::uint64_t>();
      if (hint >= n) return send_error(res, 400, ErrorCode::InvalidSeed, "seed hint out of range");
      seed = static_cast<VertexId>(hint);
    }
    const VertexRef seed_ref = scramble_id(seed, s->key);
    s->revealed.emplace(seed_ref.value, seed);
    s->tokens = capacity();
    s->refill = s->last_seen = SteadyClock::now();
    const std::string token = random_token();
    {
      std::lock_guard lock(sessions_mutex);
      sessions.emplace(token, s);
    }
    res.set_content(json{{"token", token}, {"seed_ref", RemoteOracle::format_ref(seed_ref)}}.dump(),
                    "application/json");
  }

  void vertex(const httplib::Request& req, httplib::Response& res) {
    if (config.latency_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(config.latency_ms));
    }
    auto s = session_for(req, res);
    if (!s) return;
    std::lock_guard lock(s->mutex);
    const auto now = SteadyClock::now();
    s->last_seen = now;
    s->tokens = std::min(capacity(), s->tokens + config.rate_limit *
                                                     std::chrono::duration<double>(now - s->refill).count());
    s->refill = now;
    if (s->tokens < 1.0) {
      ++rate_limited;
      const double wait = (1.0 - s->tokens) / config.rate_limit;
      res.set_header("Retry-After", std::to_string(static_cast<long>(std::ceil(wait))));
      res.set_header("X-Retry-After-Ms", std::to_string(static_cast<long>(std::ceil(wait * 1000.0))));
      return send_error(res, 429, "RateLimited", "rate limited");
    }
    VertexRef ref;
    try {
      ref = RemoteOracle::parse_ref(req.matches[1]);
    } catch (const Error& e) {
      return send_error(res, 400, ErrorCode::Protocol, e.what());
    }
    auto it = s->revealed.find(ref.value);
    if (it == s->revealed.end()) {
      return send_error(res, 403, ErrorCode::NotRevealed, "vertex not revealed in this session");
    }
    const bool first = !s->queried.count(ref.value);
    if (first && config.daily_cap && s->queried.size() >= *config.daily_cap) {
      return send_error(res, 402, ErrorCode::BudgetExhausted,
                        "daily cap of " + std::to_string(*config.daily_cap) + " reached");
    }
    s->tokens -= 1.0;
    const Graph& g = *s->graph;
    std::vector<std::uint64_t> nb;
    for (VertexId u : g.neighbors(it->second)) {
      const VertexRef r = scramble_id(u, s->key);
      nb.push_back(r.value);
      s->revealed.emplace(r.value, u);
    }
    std::sort(nb.begin(), nb.end());
    json neighbors = json::array();
    for (std::uint64_t r : nb) neighbors.push_back(RemoteOracle::format_ref(VertexRef{r}));
    s->queried.insert(ref.value);
    res.set_content(json{{"ref", req.matches[1].str()},
                         {"neighbors", std::move(neighbors)},
                         {"f", g.label(it->second).f_value}}
                        .dump(),
                    "application/json");
  }

  void stats(const httplib::Request& req, httplib::Response& res) {
    auto s = session_for(req, res);
    if (!s) return;
    std::lock_guard lock(s->mutex);
    res.set_content(json{{"queries_used", s->queried.size()}}.dump(), "application/json");
  }
};

CrawlServer::CrawlServer(CrawlServerConfig config) : impl_(std::make_unique<Impl>()) {
  if (!(config.rate_limit > 0.0)) fail(ErrorCode::ConfigInvalid, "rate_limit must be positive");
  impl_->config = std::move(config);
  auto* impl = impl_.get();
  impl->server.Post("/v1/session", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->create_session(req, res);
  });
  impl->server.Get(R"(/v1/vertex/([0-9a-fA-F]+))",
                   [impl](const httplib::Request& req, httplib::Response& res) {
                     impl->vertex(req, res);
                   });
  impl->server.Get("/v1/session/stats", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->stats(req, res);
  });
}

CrawlServer::~CrawlServer() { stop(); }

void CrawlServer::add_graph(const std::string& graph_id, Graph g) {
  impl_->graphs[graph_id] = std::make_shared<const Graph>(std::move(g));
}

void CrawlServer::start() {
  auto& cfg = impl_->config;
  // httplib's default also sets SO_REUSEPORT, which would let a second server share the port.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  impl_->server.set_tcp_nodelay(true);
  impl_->server.set_keep_alive_max_count(1000000);
  if (cfg.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(cfg.host);
  } else {
    impl_->port = impl_->server.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1;
  }
  if (impl_->port < 0) {
    fail(ErrorCode::BindFailure, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void CrawlServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void CrawlServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

int CrawlServer::port() const { return impl_->port; }

std::string CrawlServer::address() const {
  return "http://" + impl_->config.host + ":" + std::to_string(impl_->port);
}

std::optional<VertexId> CrawlServer::resolve(const std::string& token, const std::string& ref) const {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(impl_->sessions_mutex);
    auto it = impl_->sessions.find(token);
    if (it == impl_->sessions.end()) return std::nullopt;
    s = it->second;
  }
  std::lock_guard lock(s->mutex);
  auto it = s->revealed.find(RemoteOracle::parse_ref(ref).value);
  if (it == s->revealed.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> CrawlServer::queries_used(const std::string& token) const {
  std::lock_guard lock(impl_->sessions_mutex);
  auto it = impl_->sessions.find(token);
  if (it == impl_->sessions.end()) return std::nullopt;
  std::lock_guard session_lock(it->second->mutex);
  return it->second->queried.size();
}

std::size_t CrawlServer::rate_limited_responses() const { return impl_->rate_limited.load(); }

// ------------------------------------------------------------------ client

struct RemoteOracle::Client {
  httplib::Client http;
  explicit Client(const std::string& address) : http(address) {}
};

RemoteOracle::RemoteOracle(const std::string& address, const std::string& graph_id,
                           RemoteOptions options)
    : options_(options) {
  try {
    client_ = std::make_unique<Client>(address);
  } catch (const std::exception& e) {
    fail(ErrorCode::ConnectFailure, "bad server address '" + address + "': " + e.what());
  }
  if (!client_->http.is_valid()) fail(ErrorCode::ConnectFailure, "bad server address '" + address + "'");
  auto& http = client_->http;
  http.set_connection_timeout(options_.timeout);
  http.set_read_timeout(options_.timeout);
  http.set_keep_alive(true);
  http.set_tcp_nodelay(true);

  json body = {{"graph_id", graph_id}};
  if (options_.seed_hint) body["seed_hint"] = *options_.seed_hint;
  if (options_.ref_seed) body["ref_seed"] = *options_.ref_seed;
  auto res = http.Post("/v1/session", body.dump(), "application/json");
  if (!res) {
    fail(ErrorCode::ConnectFailure, "cannot reach " + address + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    fail(ErrorCode::ConnectFailure, "session refused with status " + std::to_string(res->status) +
                                        ": " + res->body);
  }
  try {
    const json reply = json::parse(res->body);
    token_ = reply.at("token").get<std::string>();
    seed_ = parse_ref(reply.at("seed_ref").get<std::string>());
  } catch (const json::exception& e) {
    fail(ErrorCode::Protocol, std::string("bad session reply: ") + e.what());
  }
  revealed_.emplace(seed_.value, 1);
}

RemoteOracle::~RemoteOracle() = default;

const QueryResult& RemoteOracle::query(VertexRef v) {
  if (auto hit = cache_.find(v); hit != cache_.end()) return hit->second;
  if (!revealed_.count(v.value)) fail(ErrorCode::NotRevealed, "vertex ref not revealed");
  if (options_.budget && cache_.size() >= *options_.budget) {
    fail(ErrorCode::BudgetExhausted,
         "query budget of " + std::to_string(*options_.budget) + " exhausted");
  }
  const httplib::Headers headers = {{"X-Session", token_}};
  const std::string path = "/v1/vertex/" + format_ref(v);
  for (std::size_t attempt = 0;; ++attempt) {
    auto res = client_->http.Get(path, headers);
    if (!res) fail(ErrorCode::ConnectFailure, "query failed: " + httplib::to_string(res.error()));
    switch (res->status) {
      case 200: break;
      case 429: {
        if (attempt >= options_.max_retries) {
          fail(ErrorCode::ConnectFailure, "still rate limited after " +
                                              std::to_string(attempt) + " retries");
        }
        ++backoffs_;
        long ms = 0;
        if (res->has_header("X-Retry-After-Ms")) {
          ms = std::stol(res->get_header_value("X-Retry-After-Ms"));
        } else if (res->has_header("Retry-After")) {
          ms = 1000 * std::stol(res->get_header_value("Retry-After"));
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(std::max(1L, ms)));
        continue;
      }
      case 401: fail(ErrorCode::SessionExpired, res->body);
      case 402: fail(ErrorCode::BudgetExhausted, "server daily cap reached");
      case 403: fail(ErrorCode::NotRevealed, res->body);
      default:
        fail(ErrorCode::Protocol, "unexpected status " + std::to_string(res->status) + ": " + res->body);
    }
    QueryResult result;
    try {
      const json reply = json::parse(res->body);
      result.vertex = v;
      result.f_value = reply.at("f").get<double>();
      for (const auto& r : reply.at("neighbors")) {
        const VertexRef ref = parse_ref(r.get<std::string>());
        result.neighbors.push_back(ref);
        revealed_.emplace(ref.value, 1);
      }
    } catch (const json::exception& e) {
      fail(ErrorCode::Protocol, std::string("bad vertex reply: ") + e.what());
    }
    std::sort(result.neighbors.begin(), result.neighbors.end());
    result.degree = result.neighbors.size();
    return cache_.emplace(v, std::move(result)).first->second;
  }
}

std::size_t RemoteOracle::server_queries_used() {
  auto res = client_->http.Get("/v1/session/stats", httplib::Headers{{"X-Session", token_}});
  if (!res) fail(ErrorCode::ConnectFailure, "stats failed: " + httplib::to_string(res.error()));
  if (res->status == 401) fail(ErrorCode::SessionExpired, res->body);
  if (res->status != 200) fail(ErrorCode::Protocol, "stats status " + std::to_string(res->status));
  try {
    return json::parse(res->body).at("queries_used").get<std::size_t>();
  } catch (const json::exception& e) {
    fail(ErrorCode::Protocol, std::string("bad stats reply: ") + e.what());
  }
}

void RemoteOracle::reconcile() {
  const std::size_t server = server_queries_used();
  if (server != query_count()) {
    fail(ErrorCode::Protocol, "client counted " + std::to_string(query_count()) +
                                  " queries, server counted " + std::to_string(server));
  }
}

}  // namespace walkabout::net
