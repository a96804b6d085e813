#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "walkabout/graph.hpp"
#include "walkabout/rng.hpp"

namespace walkabout {

enum class ConnectivityPolicy {
  // Regenerate until connected, failing with NotConnected after max_retries attempts.
  Retry,
  // Keep the largest connected component (relabelled densely). Vertex count is
  // then approximately, not exactly, the requested one.
  GiantComponent,
};

struct GenOptions {
  int max_retries = 100;
  ConnectivityPolicy policy = ConnectivityPolicy::Retry;
};

// Small deterministic families used as fixtures.
Graph complete_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph star_graph(std::size_t leaves);

// Raw G(n, p) edge sample on ids [offset, offset + n), O(n + |E|) by geometric skipping.
std::vector<Edge> sample_gnp_edges(std::size_t n, double p, Rng& rng, VertexId offset = 0);

Graph gen_erdos_renyi(std::size_t n, double p, Rng& rng, GenOptions options = {});

struct BridgedPair {
  Graph graph;
  std::vector<Edge> bridges;   // in graph ids, u on side 0
  std::vector<std::uint8_t> side;  // 0 or 1 per vertex
  double psi = 0.0;            // after clamping
};

// Brings psi >= 1 below one by dividing by the smallest integer that does so.
double clamp_psi(double psi);

// Two independent G(n, d/n) halves joined by floor(psi * n) matching edges.
BridgedPair gen_bridged_pair(std::size_t n, double d, double psi, Rng& rng, GenOptions options = {});

struct DecorationParams {
  std::size_t t = 1;   // marking scale: each vertex marked with probability 1/t
  std::size_t c1 = 1;  // star centers get degree c1 * t
};

// Marks each base vertex with probability 1/t and hangs a star with center
// degree c1*t off every marked vertex. New vertices get ids after the base ids
// and f value 0.
Graph decorate(const Graph& h, DecorationParams params, Rng& rng);

// Uniform-ish random d-regular simple graph by sequential pairing with restarts.
Graph gen_random_regular(std::size_t n, std::size_t d, Rng& rng, GenOptions options = {});

// Largest connected component of (n, edges), relabelled in increasing id order.
// old_to_new maps dropped vertices to UINT32_MAX.
struct Component {
  std::size_t n = 0;
  std::vector<Edge> edges;
  std::vector<VertexId> old_to_new;
};
Component largest_component(std::size_t n, const std::vector<Edge>& edges);

}  // namespace walkabout
