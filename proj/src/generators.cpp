#include "walkabout/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "walkabout/error.hpp"

namespace walkabout {

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) edges.push_back({u, v});
  return build_graph(n, edges);
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (VertexId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return build_graph(n, edges);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (VertexId v = 0; v < n; ++v) edges.push_back({v, static_cast<VertexId>((v + 1) % n)});
  return build_graph(n, edges);
}

Graph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (VertexId v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return build_graph(leaves + 1, edges);
}

std::vector<Edge> sample_gnp_edges(std::size_t n, double p, Rng& rng, VertexId offset) {
  std::vector<Edge> edges;
  if (n < 2 || p <= 0.0) return edges;
  if (p >= 1.0) {
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = u + 1; v < n; ++v) edges.push_back({offset + u, offset + v});
    return edges;
  }
  edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * (n - 1) / 2.0 * 1.1) + 16);
  // Batagelj & Brandes skipping over the lower triangle.
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = rng.uniform();
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) {
      edges.push_back({offset + static_cast<VertexId>(w), offset + static_cast<VertexId>(v)});
    }
  }
  return edges;
}

Component largest_component(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<VertexId> parent(n);
  std::iota(parent.begin(), parent.end(), VertexId{0});
  auto find = [&](VertexId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const Edge& e : edges) {
    VertexId a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> size(n, 0);
  for (VertexId v = 0; v < n; ++v) ++size[find(v)];
  VertexId best = 0;
  for (VertexId v = 0; v < n; ++v)
    if (size[v] > size[best]) best = v;

  Component c;
  c.old_to_new.assign(n, std::numeric_limits<VertexId>::max());
  for (VertexId v = 0; v < n; ++v)
    if (find(v) == best) c.old_to_new[v] = static_cast<VertexId>(c.n++);
  for (const Edge& e : edges) {
    if (c.old_to_new[e.u] != std::numeric_limits<VertexId>::max() &&
        c.old_to_new[e.v] != std::numeric_limits<VertexId>::max()) {
      c.edges.push_back({c.old_to_new[e.u], c.old_to_new[e.v]});
    }
  }
  return c;
}

Graph gen_erdos_renyi(std::size_t n, double p, Rng& rng, GenOptions options) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "G(n,p) needs n >= 2");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidArgument, "p must lie in [0, 1]");
  if (p == 0.0) fail(ErrorCode::NotConnected, "G(" + std::to_string(n) + ", 0) has no edges");

  if (options.policy == ConnectivityPolicy::GiantComponent) {
    Component c = largest_component(n, sample_gnp_edges(n, p, rng));
    return build_graph(c.n, c.edges);
  }
  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    auto edges = sample_gnp_edges(n, p, rng);
    Graph g = build_graph(n, edges, {}, {.deduplicate = false, .require_connected = false});
    if (is_connected(g)) return g;
  }
  fail(ErrorCode::NotConnected, "G(" + std::to_string(n) + ", " + std::to_string(p) +
                                    ") disconnected after " +
                                    std::to_string(options.max_retries) + " attempts");
}

double clamp_psi(double psi) {
  if (!(psi > 0.0)) fail(ErrorCode::InvalidArgument, "psi must be positive");
  if (psi < 1.0) return psi;
  return psi / (std::floor(psi) + 1.0);
}

BridgedPair gen_bridged_pair(std::size_t n, double d, double psi, Rng& rng, GenOptions options) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "bridged pair needs n >= 2");
  if (!(d > 0.0) || d >= static_cast<double>(n)) {
    fail(ErrorCode::InvalidArgument, "need 0 < d < n, got d = " + std::to_string(d));
  }
  psi = clamp_psi(psi);
  const auto k = static_cast<std::size_t>(std::floor(psi * static_cast<double>(n)));
  if (k == 0) fail(ErrorCode::InvalidArgument, "floor(psi * n) is zero");
  const double p = d / static_cast<double>(n);

  auto sample = [&]() {
    BridgedPair out;
    out.psi = psi;
    std::vector<Edge> edges = sample_gnp_edges(n, p, rng, 0);
    std::vector<Edge> right = sample_gnp_edges(n, p, rng, static_cast<VertexId>(n));
    edges.insert(edges.end(), right.begin(), right.end());

    std::vector<VertexId> left_ids(n), right_ids(n);
    std::iota(left_ids.begin(), left_ids.end(), VertexId{0});
    std::iota(right_ids.begin(), right_ids.end(), static_cast<VertexId>(n));
    // Partial Fisher-Yates picks k distinct endpoints on each side; the second
    // shuffle supplies the random matching.
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(left_ids[i], left_ids[i + rng.below(n - i)]);
    }
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(right_ids[i], right_ids[i + rng.below(n - i)]);
    }
    std::span<VertexId> chosen(right_ids.data(), k);
    rng.shuffle(chosen);
    for (std::size_t i = 0; i < k; ++i) {
      out.bridges.push_back({left_ids[i], right_ids[i]});
      edges.push_back({left_ids[i], right_ids[i]});
    }
    return std::pair{std::move(out), std::move(edges)};
  };

  if (options.policy == ConnectivityPolicy::GiantComponent) {
    auto [out, edges] = sample();
    Component c = largest_component(2 * n, edges);
    out.graph = build_graph(c.n, c.edges);
    out.side.assign(c.n, 0);
    for (VertexId v = 0; v < 2 * n; ++v) {
      if (c.old_to_new[v] != std::numeric_limits<VertexId>::max()) {
        out.side[c.old_to_new[v]] = v >= n ? 1 : 0;
      }
    }
    std::vector<Edge> kept;
    for (const Edge& b : out.bridges) {
      if (c.old_to_new[b.u] != std::numeric_limits<VertexId>::max() &&
          c.old_to_new[b.v] != std::numeric_limits<VertexId>::max()) {
        kept.push_back({c.old_to_new[b.u], c.old_to_new[b.v]});
      }
    }
    out.bridges = std::move(kept);
    return out;
  }

  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    auto [out, edges] = sample();
    Graph g = build_graph(2 * n, edges, {}, {.deduplicate = false, .require_connected = false});
    if (!is_connected(g)) continue;
    out.graph = std::move(g);
    out.side.assign(2 * n, 0);
    std::fill(out.side.begin() + static_cast<std::ptrdiff_t>(n), out.side.end(), 1);
    return out;
  }
  fail(ErrorCode::NotConnected, "bridged pair (n=" + std::to_string(n) + ", d=" +
                                    std::to_string(d) + ") disconnected after " +
                                    std::to_string(options.max_retries) + " attempts");
}

Graph decorate(const Graph& h, DecorationParams params, Rng& rng) {
  if (params.t < 1 || params.c1 < 1) fail(ErrorCode::InvalidArgument, "need t >= 1 and c1 >= 1");
  for (const VertexLabel& l : h.labels()) {
    if (l.role != Role::Base) fail(ErrorCode::InvalidArgument, "graph is already decorated");
  }
  const std::size_t n = h.num_vertices();
  const std::size_t star_size = params.c1 * params.t;  // center plus c1*t - 1 leaves
  const double mark_p = 1.0 / static_cast<double>(params.t);

  std::vector<VertexId> marked;
  for (VertexId v = 0; v < n; ++v) {
    if (rng.bernoulli(mark_p)) marked.push_back(v);
  }

  std::vector<Edge> edges = h.edges();
  const std::size_t total = n + marked.size() * star_size;
  edges.reserve(edges.size() + marked.size() * star_size);
  std::vector<VertexLabel> labels(h.labels().begin(), h.labels().end());
  labels.resize(total);

  auto next = static_cast<VertexId>(n);
  for (VertexId v : marked) {
    labels[v].role = Role::Marked;
    const VertexId center = next++;
    labels[center] = {0.0, Role::StarCenter};
    edges.push_back({v, center});
    for (std::size_t i = 1; i < star_size; ++i) {
      const VertexId leaf = next++;
      labels[leaf] = {0.0, Role::StarLeaf};
      edges.push_back({center, leaf});
    }
  }
  Graph g = build_graph(total, edges);
  return g.with_labels(std::move(labels));
}

Graph gen_random_regular(std::size_t n, std::size_t d, Rng& rng, GenOptions options) {
  if (d >= n || (n * d) % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "no simple " + std::to_string(d) + "-regular graph on " +
                                         std::to_string(n) + " vertices");
  }
  auto key = [](VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    std::vector<VertexId> points;
    points.reserve(n * d);
    for (VertexId v = 0; v < n; ++v)
      for (std::size_t i = 0; i < d; ++i) points.push_back(v);
    std::unordered_set<std::uint64_t> present;
    std::vector<Edge> edges;
    bool stuck = false;
    while (!points.empty() && !stuck) {
      stuck = true;
      for (int tries = 0; tries < 1000; ++tries) {
        std::size_t i = rng.below(points.size());
        std::size_t j = rng.below(points.size());
        VertexId a = points[i], b = points[j];
        if (i == j || a == b || present.count(key(a, b))) continue;
        present.insert(key(a, b));
        edges.push_back({a, b});
        if (i < j) std::swap(i, j);
        std::swap(points[i], points.back());
        points.pop_back();
        std::swap(points[j], points.back());
        points.pop_back();
        stuck = false;
        break;
      }
    }
    if (stuck) continue;
    Graph g = build_graph(n, edges, {}, {.deduplicate = false, .require_connected = false});
    if (is_connected(g)) return g;
  }
  fail(ErrorCode::NotConnected, "random regular generation failed after retries");
}

}  // namespace walkabout
