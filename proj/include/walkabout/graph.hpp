#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace walkabout {

using VertexId = std::uint32_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Role of a vertex with respect to the star decoration. Undecorated graphs are all Base.
enum class Role : std::uint8_t { Base, Marked, StarCenter, StarLeaf };

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);

inline bool is_starred(Role role) { return role == Role::StarCenter || role == Role::StarLeaf; }

struct VertexLabel {
  double f_value = 0.0;
  Role role = Role::Base;

  friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
};

struct BuildOptions {
  // Collapse repeated edges instead of rejecting them.
  bool deduplicate = false;
  bool require_connected = true;
};

// Immutable undirected simple graph in compressed adjacency form. Neighbor
// lists are sorted. Safe to share read-only across threads.
class Graph {
 public:
  Graph() = default;

  std::size_t num_vertices() const { return labels_.size(); }
  std::size_t num_edges() const { return adjacency_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  const VertexLabel& label(VertexId v) const { return labels_[v]; }
  std::span<const VertexLabel> labels() const { return labels_; }

  bool has_edge(VertexId u, VertexId v) const;

  // Each edge once with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  // Same topology with new labels. Validates value range and role structure.
  Graph with_labels(std::vector<VertexLabel> labels) const;

  Graph with_values(std::span<const double> f) const;

 private:
  friend Graph build_graph(std::size_t, std::span<const Edge>, std::span<const double>,
                           BuildOptions);

  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
  std::vector<VertexLabel> labels_;
};

// Builds a graph on vertices [0, n). f may be empty (all zero) or hold n values in [0, 1].
Graph build_graph(std::size_t n, std::span<const Edge> edges, std::span<const double> f = {},
                  BuildOptions options = {});

// Vertex count inferred as max id + 1.
Graph build_graph(std::span<const Edge> edges, std::span<const double> f = {},
                  BuildOptions options = {});

bool is_connected(const Graph& g);

// Throws InvalidArgument unless every StarCenter has exactly one Marked neighbor
// and only StarLeaf neighbors otherwise.
void validate_roles(const Graph& g);

struct DegreeStats {
  double d_avg = 0.0;  // 2|E| / n
  std::size_t d_min = 0;
  std::size_t d_max = 0;
  std::size_t num_vertices = 0;
  std::size_t num_edges = 0;

  // |E| / n, the other averaging convention, kept alongside for reports.
  double edges_per_vertex() const {
    return num_vertices == 0 ? 0.0 : static_cast<double>(num_edges) / num_vertices;
  }
};

DegreeStats degree_stats(const Graph& g);

struct RoleCounts {
  std::size_t base = 0;
  std::size_t marked = 0;
  std::size_t star_centers = 0;
  std::size_t star_leaves = 0;

  std::size_t starred() const { return star_centers + star_leaves; }
};

RoleCounts count_roles(const Graph& g);

// Average of the f labels over all vertices.
double f_average(const Graph& g);

}  // namespace walkabout
