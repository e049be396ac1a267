#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pgsw/errors.hpp"
#include "pgsw/io.hpp"
#include "pgsw/smallworld.hpp"

namespace pgsw {
namespace {

const std::string kGolden = std::string(PGSW_TEST_DATA_DIR) + "/three_vertex.swg";

std::string golden_text() { return read_text_file(kGolden); }

std::size_t error_line(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::string replace_line(const std::string& text, std::size_t index, const std::string& line) {
  std::istringstream in(text);
  std::string out;
  std::string row;
  for (std::size_t i = 1; std::getline(in, row); ++i) out += (i == index ? line : row) + "\n";
  return out;
}

TEST(GraphFile, GoldenFileParses) {
  const GraphFile file = parse_graph(golden_text());
  EXPECT_EQ(file.vertex_count(), 3u);
  EXPECT_EQ(file.edge_count(EdgeTag::short_edge), 1u);
  EXPECT_EQ(file.edge_count(EdgeTag::long_edge), 1u);
  EXPECT_EQ(file.n, 10);
  EXPECT_EQ(file.coords[4], 4.0);
  EXPECT_EQ(serialize_graph(file), golden_text());
  const Graph g = file.graph();
  EXPECT_TRUE(g.has_edge(0, 2));
  EXPECT_EQ(g.degree(0, EdgeTag::long_edge), 1u);
}

TEST(GraphFile, RoundTripsGeneratedGraphs) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Instance inst = generate_instance({20, 2, 1.0, 0.1, 0.45, 2.0, 1.5, seed});
    for (bool with_long : {true, false}) {
      const GraphFile file = to_graph_file(inst.graph, with_long);
      const std::string text = serialize_graph(file);
      const GraphFile back = parse_graph(text);
      EXPECT_EQ(back, file);
      EXPECT_EQ(serialize_graph(back), text);
      EXPECT_EQ(back.graph().edges(), with_long ? inst.graph.analysis_graph().edges()
                                                : to_graph(inst.graph.base).edges());
    }
    const AugmentedGraph aug = attach_minor_clusters(inst.labeling, inst.points, inst.graph);
    const GraphFile file = to_graph_file(aug);
    EXPECT_EQ(parse_graph(serialize_graph(file)), file);
    EXPECT_EQ(file.edge_count(EdgeTag::bridge), aug.bridges.size());
  }
}

TEST(GraphFile, EmptyLongEdgeSet) {
  const std::string text = replace_line(golden_text(), 1,
      "gsw-graph v1 d=2 n=10 r=1 alpha=0.1 beta=0.45 sigma=1 chi=1 seed=0 |V|=3 |E_short|=1 |E_long|=0");
  const GraphFile file = parse_graph(text.substr(0, text.rfind("0 2 L")));
  EXPECT_EQ(file.edge_count(EdgeTag::long_edge), 0u);
}

TEST(GraphFile, RejectsTruncation) {
  const std::string text = golden_text();
  EXPECT_THROW(parse_graph(text.substr(0, text.find("0 1 S"))), ParseError);
  EXPECT_THROW(parse_graph(std::string("gsw-graph v1 d=2 n=10\n")), ParseError);
  EXPECT_THROW(parse_graph(std::string("")), ParseError);
  EXPECT_EQ(error_line(text + "junk\n"), 7u);
}

TEST(GraphFile, RejectsGeometricViolations) {
  const std::string text = golden_text();
  EXPECT_EQ(error_line(replace_line(text, 4, "2 5 0.25")), 6u);
  EXPECT_EQ(error_line(replace_line(text, 3, "1 2.5 0")), 5u);
  EXPECT_EQ(error_line(replace_line(text, 4, "2 10 0.25")), 4u);
  EXPECT_EQ(error_line(replace_line(text, 3, "2 1.5 0")), 3u);
  EXPECT_EQ(error_line(replace_line(text, 6, "0 1 L")), 6u);
  EXPECT_EQ(error_line(replace_line(text, 5, "1 0 S")), 5u);
}

TEST(GraphFile, RejectsMissingShortEdge) {
  const std::string text = replace_line(golden_text(), 4, "2 2 0.25");
  EXPECT_THROW(parse_graph(text), ParseError);
}

TEST(PointFile, RoundTrip) {
  const TorusDomain domain{8, 2, Boundary::periodic};
  Stream stream(3, "points");
  const IndexedPointSet points = sample_poisson_points(domain, 1.0, stream, 1.0);
  std::stringstream buffer;
  write_points(points, 3, buffer);
  const PointFile file = read_points(buffer);
  EXPECT_EQ(file.seed, 3u);
  EXPECT_EQ(file.domain.n, 8);
  EXPECT_EQ(file.coords, points.coords());
}

TEST(Digest, KnownValuesAndFiles) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(file_digest(kGolden), "fnv1a64:" + fnv1a_hex(golden_text()));
}

TEST(Manifest, RendersKeyValueLinesWithTimestampLast) {
  RunManifest manifest;
  manifest.subcommand = "gen";
  manifest.params = {{"n", "24"}};
  manifest.seed = 7;
  manifest.streams = {"points/0"};
  manifest.inputs = {kGolden};
  const std::string text = manifest.render();
  EXPECT_NE(text.find("subcommand=gen\n"), std::string::npos);
  EXPECT_NE(text.find("seed=7\n"), std::string::npos);
  EXPECT_NE(text.find(file_digest(kGolden)), std::string::npos);
  const std::size_t last = text.rfind('\n', text.size() - 2);
  EXPECT_EQ(text.compare(last + 1, 10, "timestamp="), 0);
}

}  // namespace
}  // namespace pgsw
