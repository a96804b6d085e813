#include "walkabout/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "walkabout/error.hpp"

namespace walkabout {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Base: return "base";
    case Role::Marked: return "marked";
    case Role::StarCenter: return "star_center";
    case Role::StarLeaf: return "star_leaf";
  }
  return "base";
}

Role role_from_string(std::string_view name) {
  if (name == "base") return Role::Base;
  if (name == "marked") return Role::Marked;
  if (name == "star_center") return Role::StarCenter;
  if (name == "star_leaf") return Role::StarLeaf;
  fail(ErrorCode::Parse, "unknown role '" + std::string(name) + "'");
}

namespace {

void check_value(double f, std::size_t v) {
  if (!(f >= 0.0 && f <= 1.0)) {
    fail(ErrorCode::ValueOutOfRange,
         "f(" + std::to_string(v) + ") = " + std::to_string(f) + " is outside [0, 1]");
  }
}

}  // namespace

bool Graph::has_edge(VertexId u, VertexId v) const {
  if (u >= num_vertices() || v >= num_vertices()) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (VertexId u = 0; u < num_vertices(); ++u) {
    for (VertexId v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

Graph Graph::with_labels(std::vector<VertexLabel> labels) const {
  if (labels.size() != num_vertices()) {
    fail(ErrorCode::DimensionMismatch, "label count " + std::to_string(labels.size()) +
                                           " != vertex count " + std::to_string(num_vertices()));
  }
  for (std::size_t v = 0; v < labels.size(); ++v) check_value(labels[v].f_value, v);
  Graph out = *this;
  out.labels_ = std::move(labels);
  validate_roles(out);
  return out;
}

Graph Graph::with_values(std::span<const double> f) const {
  if (f.size() != num_vertices()) {
    fail(ErrorCode::DimensionMismatch, "value count " + std::to_string(f.size()) +
                                           " != vertex count " + std::to_string(num_vertices()));
  }
  std::vector<VertexLabel> labels(labels_.begin(), labels_.end());
  for (std::size_t v = 0; v < f.size(); ++v) labels[v].f_value = f[v];
  return with_labels(std::move(labels));
}

Graph build_graph(std::size_t n, std::span<const Edge> edges, std::span<const double> f,
                  BuildOptions options) {
  if (!f.empty() && f.size() != n) {
    fail(ErrorCode::DimensionMismatch,
         "expected " + std::to_string(n) + " f values, got " + std::to_string(f.size()));
  }
  Graph g;
  g.labels_.assign(n, VertexLabel{});
  for (std::size_t v = 0; v < f.size(); ++v) {
    check_value(f[v], v);
    g.labels_[v].f_value = f[v];
  }

  std::vector<std::size_t> counts(n + 1, 0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      fail(ErrorCode::InvalidArgument, "edge (" + std::to_string(e.u) + "," +
                                           std::to_string(e.v) + ") outside [0, " +
                                           std::to_string(n) + ")");
    }
    if (e.u == e.v) fail(ErrorCode::SelfLoop, "self-loop at vertex " + std::to_string(e.u));
    ++counts[e.u + 1];
    ++counts[e.v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) counts[v + 1] += counts[v];

  std::vector<VertexId> adjacency(counts[n]);
  std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
  for (const Edge& e : edges) {
    adjacency[cursor[e.u]++] = e.v;
    adjacency[cursor[e.v]++] = e.u;
  }

  // Sort each list, then detect or drop repeats in one compaction pass.
  std::vector<std::size_t> offsets(n + 1, 0);
  std::size_t write = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto first = adjacency.begin() + static_cast<std::ptrdiff_t>(counts[v]);
    auto last = adjacency.begin() + static_cast<std::ptrdiff_t>(counts[v + 1]);
    std::sort(first, last);
    offsets[v] = write;
    for (auto it = first; it != last; ++it) {
      if (it != first && *it == *(it - 1)) {
        if (!options.deduplicate) {
          fail(ErrorCode::DuplicateEdge,
               "duplicate edge (" + std::to_string(v) + "," + std::to_string(*it) + ")");
        }
        continue;
      }
      adjacency[write++] = *it;
    }
  }
  offsets[n] = write;
  adjacency.resize(write);
  adjacency.shrink_to_fit();

  g.offsets_ = std::move(offsets);
  g.adjacency_ = std::move(adjacency);

  if (options.require_connected && !is_connected(g)) {
    fail(ErrorCode::NotConnected, "graph on " + std::to_string(n) + " vertices is not connected");
  }
  return g;
}

Graph build_graph(std::span<const Edge> edges, std::span<const double> f, BuildOptions options) {
  std::size_t n = f.size();
  for (const Edge& e : edges) n = std::max<std::size_t>(n, std::max(e.u, e.v) + std::size_t{1});
  return build_graph(n, edges, f, options);
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId u : g.neighbors(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

void validate_roles(const Graph& g) {
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.label(v).role != Role::StarCenter) continue;
    std::size_t marked = 0;
    for (VertexId u : g.neighbors(v)) {
      Role r = g.label(u).role;
      if (r == Role::Marked) {
        ++marked;
      } else if (r != Role::StarLeaf) {
        fail(ErrorCode::InvalidArgument, "star center " + std::to_string(v) +
                                             " has a neighbor with role " +
                                             std::string(to_string(r)));
      }
    }
    if (marked != 1) {
      fail(ErrorCode::InvalidArgument, "star center " + std::to_string(v) + " has " +
                                           std::to_string(marked) + " marked neighbors");
    }
  }
}

DegreeStats degree_stats(const Graph& g) {
  DegreeStats s;
  s.num_vertices = g.num_vertices();
  s.num_edges = g.num_edges();
  if (s.num_vertices == 0) return s;
  s.d_min = g.degree(0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    s.d_min = std::min(s.d_min, g.degree(v));
    s.d_max = std::max(s.d_max, g.degree(v));
  }
  s.d_avg = 2.0 * static_cast<double>(s.num_edges) / static_cast<double>(s.num_vertices);
  return s;
}

RoleCounts count_roles(const Graph& g) {
  RoleCounts c;
  for (const VertexLabel& l : g.labels()) {
    switch (l.role) {
      case Role::Base: ++c.base; break;
      case Role::Marked: ++c.marked; break;
      case Role::StarCenter: ++c.star_centers; break;
      case Role::StarLeaf: ++c.star_leaves; break;
    }
  }
  return c;
}

double f_average(const Graph& g) {
  if (g.num_vertices() == 0) return 0.0;
  double sum = 0.0;
  for (const VertexLabel& l : g.labels()) sum += l.f_value;
  return sum / static_cast<double>(g.num_vertices());
}

}  // namespace walkabout
