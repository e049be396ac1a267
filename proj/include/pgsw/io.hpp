#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pgsw/geometry.hpp"
#include "pgsw/graph.hpp"
#include "pgsw/smallworld.hpp"

namespace pgsw {

inline constexpr const char* kToolVersion = "1.0.0";

/// Contents of a `gsw-graph v1` file: model parameters, vertex coordinates, and tagged edges.
struct GraphFile {
  int d = 2;
  double n = 1;
  double r = 1;
  double alpha = 0.1;
  double beta = 0.45;
  double sigma = 1;
  double chi = 1;
  std::uint64_t seed = 0;
  std::vector<double> coords;  // vertex-major, d per vertex
  std::vector<Edge> edges;     // u < v, sorted by (u, v, tag)

  std::size_t vertex_count() const { return d > 0 ? coords.size() / static_cast<std::size_t>(d) : 0; }
  std::size_t edge_count(EdgeTag tag) const;
  TorusDomain domain() const { return {n, d, Boundary::periodic}; }
  Graph graph() const { return Graph::from_edges(vertex_count(), edges); }

  friend bool operator==(const GraphFile&, const GraphFile&) = default;
};

/// G_n (long edges omitted when include_long is false) or the small world graph.
GraphFile to_graph_file(const SmallWorldGraph& graph, bool include_long = true);
/// Augmented graph: minor-cluster edges are tagged S, bridges B.
GraphFile to_graph_file(const AugmentedGraph& graph);

void serialize_graph(const GraphFile& file, std::ostream& out);
std::string serialize_graph(const GraphFile& file);

/// Parses and re-validates: coordinates in [0, n), vertex ids in order, edges sorted without
/// duplicates, S edges within 2r and every pair within 2r present as an S edge, L edges in
/// the annulus, header counts. Throws ParseError carrying the offending line.
GraphFile parse_graph(std::istream& in);
GraphFile parse_graph(const std::string& text);

struct PointFile {
  TorusDomain domain;
  std::uint64_t seed = 0;
  std::vector<double> coords;
};

/// `poisson-points v1 d=<d> n=<n> seed=<u64> count=<k>` then one coordinate row per point.
void write_points(const IndexedPointSet& points, std::uint64_t seed, std::ostream& out);
PointFile read_points(std::istream& in);

/// 64-bit FNV-1a digest of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string file_digest(const std::filesystem::path& path);

/// Reproduction record written next to every output.
struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  std::vector<std::string> streams;  // derived stream labels used by the run
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;

  /// key=value text; the timestamp line is the only run-dependent content.
  std::string render() const;
};

/// Writes text to a file, throwing Error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace pgsw
