#include "walkabout/graph_io.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "walkabout/error.hpp"

namespace walkabout {

constexpr const char* kSidecarFormat = "walkabout-labels/1";

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# n=" << g.num_vertices() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph read_edge_list(std::istream& in, BuildOptions options) {
  std::optional<std::size_t> declared;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      auto pos = line.find("n=", first);
      if (pos != std::string::npos && !declared) {
        try {
          declared = std::stoull(line.substr(pos + 2));
        } catch (const std::exception&) {
          fail(ErrorCode::Parse, "bad header on line " + std::to_string(line_no));
        }
      }
      continue;
    }
    std::istringstream fields(line);
    long long u = -1, v = -1;
    if (!(fields >> u >> v) || u < 0 || v < 0) {
      fail(ErrorCode::Parse, "expected 'u v' on line " + std::to_string(line_no));
    }
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
  }
  if (declared) return build_graph(*declared, edges, {}, options);
  return build_graph(edges, {}, options);
}

nlohmann::json label_sidecar(const Graph& g, std::span<const Edge> bridges,
                             const nlohmann::json& meta) {
  nlohmann::json labels = nlohmann::json::object();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    labels[std::to_string(v)] = {{"f", g.label(v).f_value},
                                 {"role", std::string(to_string(g.label(v).role))}};
  }
  nlohmann::json tagged = nlohmann::json::array();
  for (const Edge& e : bridges) tagged.push_back({e.u, e.v});
  return {{"format", kSidecarFormat},
          {"n", g.num_vertices()},
          {"labels", std::move(labels)},
          {"edge_tags", {{"B", std::move(tagged)}}},
          {"meta", meta}};
}

LoadedGraph apply_sidecar(const Graph& g, const nlohmann::json& sidecar) {
  LoadedGraph out;
  try {
    if (sidecar.value("format", std::string{}) != kSidecarFormat) {
      fail(ErrorCode::Parse, "unrecognised sidecar format");
    }
    std::vector<VertexLabel> labels(g.labels().begin(), g.labels().end());
    for (const auto& [key, entry] : sidecar.at("labels").items()) {
      const std::size_t v = std::stoull(key);
      if (v >= labels.size()) fail(ErrorCode::Parse, "label for unknown vertex " + key);
      labels[v].f_value = entry.value("f", 0.0);
      labels[v].role = role_from_string(entry.value("role", std::string{"base"}));
    }
    out.graph = g.with_labels(std::move(labels));
    if (sidecar.contains("edge_tags") && sidecar["edge_tags"].contains("B")) {
      for (const auto& pair : sidecar["edge_tags"]["B"]) {
        out.bridges.push_back({pair.at(0).get<VertexId>(), pair.at(1).get<VertexId>()});
      }
    }
    if (sidecar.contains("meta")) out.meta = sidecar["meta"];
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("label sidecar: ") + e.what());
  }
  return out;
}

void save_graph(const std::string& edges_path, const std::string& labels_path, const Graph& g,
                std::span<const Edge> bridges, const nlohmann::json& meta) {
  std::ofstream edges(edges_path);
  if (!edges) fail(ErrorCode::Io, "cannot write " + edges_path);
  write_edge_list(edges, g);
  std::ofstream labels(labels_path);
  if (!labels) fail(ErrorCode::Io, "cannot write " + labels_path);
  labels << label_sidecar(g, bridges, meta).dump(1) << '\n';
}

LoadedGraph load_graph(const std::string& edges_path, const std::string& labels_path) {
  std::ifstream edges(edges_path);
  if (!edges) fail(ErrorCode::Io, "cannot read " + edges_path);
  Graph g = read_edge_list(edges);
  if (labels_path.empty()) return LoadedGraph{std::move(g), {}, nlohmann::json::object()};
  std::ifstream labels(labels_path);
  if (!labels) fail(ErrorCode::Io, "cannot read " + labels_path);
  nlohmann::json sidecar;
  try {
    labels >> sidecar;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("label sidecar: ") + e.what());
  }
  return apply_sidecar(g, sidecar);
}

}  // namespace walkabout
