#include "pgsw/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pgsw/errors.hpp"
#include "pgsw/format.hpp"

namespace pgsw {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Value of a `key=value` token, checking the key.
std::string header_value(const std::vector<std::string>& toks, std::size_t i,
                         const std::string& key, std::size_t line) {
  if (i >= toks.size()) throw ParseError("header is missing '" + key + "='", line);
  const std::string& tok = toks[i];
  if (tok.rfind(key + "=", 0) != 0) {
    throw ParseError("header field " + std::to_string(i + 1) + ": expected '" + key + "=', got '" +
                         tok + "'",
                     line);
  }
  return tok.substr(key.size() + 1);
}

double header_double(const std::vector<std::string>& toks, std::size_t i, const std::string& key,
                     std::size_t line) {
  const std::string text = header_value(toks, i, key, line);
  const auto value = parse_double(text);
  if (!value || !std::isfinite(*value)) throw ParseError("bad number for " + key + ": '" + text + "'", line);
  return *value;
}

std::uint64_t header_u64(const std::vector<std::string>& toks, std::size_t i,
                         const std::string& key, std::size_t line) {
  const std::string text = header_value(toks, i, key, line);
  const auto value = parse_u64(text);
  if (!value) throw ParseError("bad integer for " + key + ": '" + text + "'", line);
  return *value;
}

bool next_line(std::istream& in, std::string& line, std::size_t& number) {
  if (!std::getline(in, line)) return false;
  ++number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void validate_coords(std::span<const double> x, double n, std::size_t line) {
  for (double c : x) {
    if (!std::isfinite(c) || c < 0 || c >= n) {
      throw ParseError("coordinate " + format_double(c) + " outside [0, n)", line);
    }
  }
}

bool edge_less(const Edge& a, const Edge& b) {
  if (a.u != b.u) return a.u < b.u;
  if (a.v != b.v) return a.v < b.v;
  return a.tag < b.tag;
}

std::string edge_name(const Edge& e) {
  return "edge " + std::to_string(e.u) + " " + std::to_string(e.v) + " " + tag_letter(e.tag);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::size_t GraphFile::edge_count(EdgeTag tag) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.tag == tag; }));
}

GraphFile to_graph_file(const SmallWorldGraph& graph, bool include_long) {
  const TorusDomain& domain = graph.base.domain();
  GraphFile file;
  file.d = domain.d;
  file.n = domain.n;
  file.r = graph.base.r;
  file.alpha = graph.params.alpha;
  file.beta = graph.params.beta;
  file.sigma = graph.params.sigma;
  file.chi = graph.params.chi;
  file.seed = graph.seed;
  file.coords = graph.base.vertices.coords();
  for (VertexId u = 0; u < graph.vertex_count(); ++u) {
    for (VertexId v : graph.base.adjacency[u]) {
      if (u < v) file.edges.push_back({u, v, EdgeTag::short_edge});
    }
  }
  if (include_long) {
    for (const auto& [u, v] : graph.long_edges) file.edges.push_back({u, v, EdgeTag::long_edge});
  }
  std::sort(file.edges.begin(), file.edges.end(), edge_less);
  return file;
}

GraphFile to_graph_file(const AugmentedGraph& graph) {
  GraphFile file = to_graph_file(graph.core);
  file.coords.insert(file.coords.end(), graph.extra_coords.begin(), graph.extra_coords.end());
  for (const auto& [u, v] : graph.minor_edges) file.edges.push_back({u, v, EdgeTag::short_edge});
  for (const auto& [core, minor] : graph.bridges) {
    file.edges.push_back({std::min(core, minor), std::max(core, minor), EdgeTag::bridge});
  }
  std::sort(file.edges.begin(), file.edges.end(), edge_less);
  return file;
}

void serialize_graph(const GraphFile& file, std::ostream& out) {
  const std::size_t bridges = file.edge_count(EdgeTag::bridge);
  out << "gsw-graph v1 d=" << file.d << " n=" << format_double(file.n)
      << " r=" << format_double(file.r) << " alpha=" << format_double(file.alpha)
      << " beta=" << format_double(file.beta) << " sigma=" << format_double(file.sigma)
      << " chi=" << format_double(file.chi) << " seed=" << file.seed
      << " |V|=" << file.vertex_count() << " |E_short|=" << file.edge_count(EdgeTag::short_edge)
      << " |E_long|=" << file.edge_count(EdgeTag::long_edge);
  if (bridges > 0) out << " |E_bridge|=" << bridges;
  out << '\n';
  const auto d = static_cast<std::size_t>(file.d);
  for (std::size_t v = 0; v < file.vertex_count(); ++v) {
    out << v;
    for (std::size_t s = 0; s < d; ++s) out << ' ' << format_double(file.coords[v * d + s]);
    out << '\n';
  }
  for (const Edge& e : file.edges) out << e.u << ' ' << e.v << ' ' << tag_letter(e.tag) << '\n';
  if (!out) throw Error("failed to write graph output");
}

std::string serialize_graph(const GraphFile& file) {
  std::ostringstream out;
  serialize_graph(file, out);
  return out.str();
}

GraphFile parse_graph(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) throw ParseError("empty input: missing gsw-graph header", 1);
  const std::vector<std::string> head = tokens(line);
  if (head.size() < 2 || head[0] != "gsw-graph" || head[1] != "v1") {
    throw ParseError("expected header 'gsw-graph v1 ...'", number);
  }
  if (head.size() != 13 && head.size() != 14) {
    throw ParseError("header has " + std::to_string(head.size()) + " fields, expected 13 or 14",
                     number);
  }
  GraphFile file;
  const std::uint64_t d = header_u64(head, 2, "d", number);
  if (d < 1 || d > 16) throw ParseError("d must lie in 1..16", number);
  file.d = static_cast<int>(d);
  file.n = header_double(head, 3, "n", number);
  file.r = header_double(head, 4, "r", number);
  file.alpha = header_double(head, 5, "alpha", number);
  file.beta = header_double(head, 6, "beta", number);
  file.sigma = header_double(head, 7, "sigma", number);
  file.chi = header_double(head, 8, "chi", number);
  file.seed = header_u64(head, 9, "seed", number);
  const std::uint64_t vertex_count = header_u64(head, 10, "|V|", number);
  const std::uint64_t short_count = header_u64(head, 11, "|E_short|", number);
  const std::uint64_t long_count = header_u64(head, 12, "|E_long|", number);
  const std::uint64_t bridge_count = head.size() == 14 ? header_u64(head, 13, "|E_bridge|", number) : 0;
  if (!(file.n > 0) || !(file.r > 0)) throw ParseError("n and r must be positive", 1);
  if (!(file.alpha > 0 && file.alpha < file.beta && file.beta < 0.5)) {
    throw ParseError("need 0 < alpha < beta < 1/2", 1);
  }
  if (vertex_count > (std::uint64_t{1} << 31)) throw ParseError("|V| too large", 1);
  const std::size_t header_line = number;

  file.coords.reserve(vertex_count * d);
  for (std::uint64_t v = 0; v < vertex_count; ++v) {
    if (!next_line(in, line, number)) {
      throw ParseError("truncated: expected " + std::to_string(vertex_count) +
                           " vertex rows, found " + std::to_string(v),
                       number + 1);
    }
    const std::vector<std::string> row = tokens(line);
    if (row.size() != d + 1) {
      throw ParseError("vertex row needs an id and " + std::to_string(d) + " coordinates", number);
    }
    const auto id = parse_u64(row[0]);
    if (!id || *id != v) throw ParseError("expected vertex id " + std::to_string(v), number);
    for (std::size_t s = 0; s < d; ++s) {
      const auto c = parse_double(row[s + 1]);
      if (!c) throw ParseError("bad coordinate '" + row[s + 1] + "'", number);
      file.coords.push_back(*c);
    }
    validate_coords({file.coords.data() + v * d, d}, file.n, number);
  }

  const std::uint64_t edge_total = short_count + long_count + bridge_count;
  const TorusDomain domain = file.domain();
  std::vector<std::size_t> edge_lines;
  for (std::uint64_t i = 0; i < edge_total; ++i) {
    if (!next_line(in, line, number)) {
      throw ParseError("truncated: expected " + std::to_string(edge_total) + " edge rows, found " +
                           std::to_string(i),
                       number + 1);
    }
    const std::vector<std::string> row = tokens(line);
    if (row.size() != 3 || row[2].size() != 1) throw ParseError("edge row must be 'u v S|L|B'", number);
    const auto u = parse_u64(row[0]);
    const auto v = parse_u64(row[1]);
    const auto tag = tag_from_letter(row[2][0]);
    if (!u || !v || !tag) throw ParseError("edge row must be 'u v S|L|B'", number);
    const Edge e{static_cast<VertexId>(*u), static_cast<VertexId>(*v), *tag};
    if (*u >= vertex_count || *v >= vertex_count) throw ParseError(edge_name(e) + ": vertex out of range", number);
    if (!(e.u < e.v)) throw ParseError(edge_name(e) + ": endpoints must satisfy u < v", number);
    if (!file.edges.empty()) {
      const Edge& prev = file.edges.back();
      if (prev.u == e.u && prev.v == e.v) throw ParseError(edge_name(e) + ": duplicate pair", number);
      if (!edge_less(prev, e)) throw ParseError(edge_name(e) + ": edges out of order", number);
    }
    const auto x = std::span<const double>(file.coords).subspan(e.u * d, d);
    const auto y = std::span<const double>(file.coords).subspan(e.v * d, d);
    if (e.tag == EdgeTag::short_edge && !(torus_dist_euclid(x, y, domain) <= 2 * file.r)) {
      throw ParseError(edge_name(e) + ": endpoints farther apart than 2r", number);
    }
    if (e.tag == EdgeTag::long_edge && !in_annulus(x, y, domain, file.alpha, file.beta)) {
      throw ParseError(edge_name(e) + ": fails the annulus test", number);
    }
    file.edges.push_back(e);
    edge_lines.push_back(number);
  }
  while (next_line(in, line, number)) {
    if (!tokens(line).empty()) throw ParseError("unexpected content after the last edge row", number);
  }
  if (file.edge_count(EdgeTag::short_edge) != short_count ||
      file.edge_count(EdgeTag::long_edge) != long_count ||
      file.edge_count(EdgeTag::bridge) != bridge_count) {
    throw ParseError("edge counts by tag do not match the header", header_line);
  }

  // Every pair within 2r must be present as an S edge.
  const IndexedPointSet index(domain, file.coords, 2 * file.r);
  std::size_t next = 0;
  for (VertexId u = 0; u < vertex_count; ++u) {
    for (PointId v : index.neighbors_within(index.point(u), 2 * file.r)) {
      if (v <= u) continue;
      while (next < file.edges.size() && edge_less(file.edges[next], Edge{u, v, EdgeTag::short_edge})) {
        ++next;
      }
      const bool present = next < file.edges.size() && file.edges[next].u == u &&
                           file.edges[next].v == v && file.edges[next].tag == EdgeTag::short_edge;
      if (!present) {
        throw ParseError("vertices " + std::to_string(u) + " and " + std::to_string(v) +
                             " lie within 2r but have no S edge",
                         next < edge_lines.size() ? edge_lines[next] : number);
      }
    }
  }
  return file;
}

GraphFile parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

void write_points(const IndexedPointSet& points, std::uint64_t seed, std::ostream& out) {
  const TorusDomain& domain = points.domain();
  out << "poisson-points v1 d=" << domain.d << " n=" << format_double(domain.n) << " seed=" << seed
      << " count=" << points.size() << '\n';
  for (PointId id = 0; id < points.size(); ++id) {
    const auto x = points.point(id);
    for (std::size_t s = 0; s < x.size(); ++s) out << (s ? " " : "") << format_double(x[s]);
    out << '\n';
  }
  if (!out) throw Error("failed to write point output");
}

PointFile read_points(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) throw ParseError("empty input: missing poisson-points header", 1);
  const std::vector<std::string> head = tokens(line);
  if (head.size() != 6 || head[0] != "poisson-points" || head[1] != "v1") {
    throw ParseError("expected header 'poisson-points v1 d= n= seed= count='", number);
  }
  PointFile file;
  const std::uint64_t d = header_u64(head, 2, "d", number);
  if (d < 1 || d > 16) throw ParseError("d must lie in 1..16", number);
  file.domain = {header_double(head, 3, "n", number), static_cast<int>(d), Boundary::periodic};
  if (!(file.domain.n > 0)) throw ParseError("n must be positive", number);
  file.seed = header_u64(head, 4, "seed", number);
  const std::uint64_t count = header_u64(head, 5, "count", number);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!next_line(in, line, number)) {
      throw ParseError("truncated: expected " + std::to_string(count) + " point rows", number + 1);
    }
    const std::vector<std::string> row = tokens(line);
    if (row.size() != d) throw ParseError("point row needs " + std::to_string(d) + " coordinates", number);
    for (const std::string& tok : row) {
      const auto c = parse_double(tok);
      if (!c) throw ParseError("bad coordinate '" + tok + "'", number);
      file.coords.push_back(*c);
    }
    validate_coords({file.coords.data() + i * d, d}, file.domain.n, number);
  }
  return file;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  return "fnv1a64:" + fnv1a_hex(read_text_file(path));
}

std::string RunManifest::render() const {
  std::ostringstream out;
  out << "tool=pgsw\nversion=" << kToolVersion << "\nsubcommand=" << subcommand << "\n";
  for (const auto& [key, value] : params) out << "param." << key << "=" << value << "\n";
  out << "seed=" << seed << "\n";
  out << "stream_rule=key = mix(mix(mix(seed) ^ fnv1a(label)) ^ mix(unit + c))\n";
  for (const std::string& label : streams) out << "stream=" << label << "\n";
  for (const auto& path : inputs) {
    out << "input=" << path.string() << " " << file_digest(path) << "\n";
  }
  for (const auto& path : outputs) {
    out << "output=" << path.string() << " " << file_digest(path) << "\n";
  }
  out << "timestamp=" << timestamp() << "\n";
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace pgsw
