#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "walkabout/graph.hpp"

namespace walkabout {

// Edge-list text: optional "# n=<int>" header, then one "u v" pair per line.
// Other lines starting with '#' are comments.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in, BuildOptions options = {});

// Label sidecar: {"format", "n", "labels": {id: {f, role}}, "edge_tags": {"B": [[u, v], ...]}, "meta"}.
nlohmann::json label_sidecar(const Graph& g, std::span<const Edge> bridges = {},
                             const nlohmann::json& meta = nlohmann::json::object());

struct LoadedGraph {
  Graph graph;
  std::vector<Edge> bridges;
  nlohmann::json meta = nlohmann::json::object();
};

LoadedGraph apply_sidecar(const Graph& g, const nlohmann::json& sidecar);

void save_graph(const std::string& edges_path, const std::string& labels_path, const Graph& g,
                std::span<const Edge> bridges = {},
                const nlohmann::json& meta = nlohmann::json::object());

// labels_path may be empty; then all labels are the defaults.
LoadedGraph load_graph(const std::string& edges_path, const std::string& labels_path = {});

}  // namespace walkabout
