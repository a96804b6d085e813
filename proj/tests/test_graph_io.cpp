#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "walkabout/error.hpp"
#include "walkabout/generators.hpp"
#include "walkabout/graph_io.hpp"

using namespace walkabout;

TEST(EdgeList, RoundTrip) {
  Rng rng(6);
  const Graph g = gen_erdos_renyi(150, 0.05, rng);
  std::stringstream ss;
  write_edge_list(ss, g);
  const Graph back = read_edge_list(ss);
  EXPECT_EQ(back.num_vertices(), g.num_vertices());
  EXPECT_EQ(back.edges(), g.edges());
}

TEST(EdgeList, CommentsAndHeader) {
  std::istringstream in("# n=4\n# a comment\n0 1\n1 2\n\n2 3\n");
  const Graph g = read_edge_list(in);
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.num_edges(), 3u);
}

TEST(EdgeList, MalformedLineIsParseError) {
  std::istringstream in("0 1\n1 x\n");
  try {
    read_edge_list(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
  }
}

TEST(Sidecar, LabelsRolesAndBridgesSurvive) {
  Rng rng(12);
  auto bp = gen_bridged_pair(60, 8, 0.5, rng);
  const Graph g = decorate(bp.graph, {.t = 5, .c1 = 1}, rng);
  std::vector<double> f(g.num_vertices());
  for (std::size_t v = 0; v < f.size(); ++v) f[v] = (v % 7) / 7.0;
  std::vector<VertexLabel> labels(g.labels().begin(), g.labels().end());
  for (std::size_t v = 0; v < f.size(); ++v) labels[v].f_value = f[v];
  const Graph labelled = g.with_labels(labels);

  const auto json = label_sidecar(labelled, bp.bridges, {{"kind", "test"}});
  const LoadedGraph back = apply_sidecar(labelled.with_labels(std::vector<VertexLabel>(f.size())), json);
  for (VertexId v = 0; v < labelled.num_vertices(); ++v) {
    EXPECT_EQ(back.graph.label(v), labelled.label(v));
  }
  EXPECT_EQ(back.bridges, bp.bridges);
  EXPECT_EQ(back.meta.at("kind"), "test");
}

TEST(Sidecar, FilesRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "walkabout_io_test";
  std::filesystem::create_directories(dir);
  const Graph g = path_graph(4).with_values(std::vector<double>{0, 0.25, 0.5, 1});
  save_graph((dir / "p.edges").string(), (dir / "p.labels.json").string(), g);
  const LoadedGraph back = load_graph((dir / "p.edges").string(), (dir / "p.labels.json").string());
  EXPECT_EQ(back.graph.edges(), g.edges());
  EXPECT_DOUBLE_EQ(back.graph.label(1).f_value, 0.25);

  const LoadedGraph bare = load_graph((dir / "p.edges").string());
  EXPECT_DOUBLE_EQ(bare.graph.label(3).f_value, 0.0);
  std::filesystem::remove_all(dir);
}

TEST(Sidecar, UnknownFormatRejected) {
  nlohmann::json bad = {{"format", "other"}, {"labels", nlohmann::json::object()}};
  EXPECT_THROW(apply_sidecar(path_graph(3), bad), Error);
}

TEST(Io, MissingFile) {
  try {
    load_graph("/nonexistent/x.edges");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}
