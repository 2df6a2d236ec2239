#include "bcnm/graph.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "bcnm/errors.hpp"

namespace bcnm {
namespace {

// Community ids go up to 2n-2, so n must leave room in 32 bits.
constexpr std::uint64_t kMaxNodes = std::uint64_t{1} << 31;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t b = 0;
  while (b < rest.size() && is_space(rest[b])) ++b;
  std::size_t e = b;
  while (e < rest.size() && !is_space(rest[e])) ++e;
  std::string_view tok = rest.substr(b, e - b);
  rest.remove_prefix(e);
  return tok;
}

std::uint64_t parse_id(std::string_view tok, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw InputError("line " + std::to_string(line_no) + ": '" + std::string(tok) +
                     "' is not a non-negative integer node id");
  return value;
}

std::string inflate_gzip(const std::filesystem::path& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw InputError("cannot open " + path.string());
  std::string out;
  char buf[1 << 16];
  int got = 0;
  while ((got = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(got));
  int err = 0;
  const char* msg = gzerror(f, &err);
  std::string detail = msg ? msg : "";
  gzclose(f);
  if (got < 0 || (err != Z_OK && err != Z_STREAM_END))
    throw InputError("gzip error in " + path.string() + ": " + detail);
  return out;
}

}  // namespace

Graph Graph::from_edges(NodeId n, std::span<const Edge> edges,
                        std::vector<std::uint64_t> labels) {
  if (labels.empty()) {
    labels.resize(n);
    for (NodeId v = 0; v < n; ++v) labels[v] = v;
  }
  if (labels.size() != n) throw InputError("label count does not match node count");

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InputError("edge endpoint out of range");
    if (u == v) continue;
    ++counts[u + 1];
    ++counts[v + 1];
  }
  for (NodeId v = 0; v < n; ++v) counts[v + 1] += counts[v];

  std::vector<NodeId> raw(counts[n]);
  std::vector<std::uint64_t> fill(counts.begin(), counts.end() - 1);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    raw[fill[u]++] = v;
    raw[fill[v]++] = u;
  }

  Graph g;
  g.labels_ = std::move(labels);
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  g.targets_.reserve(raw.size());
  for (NodeId v = 0; v < n; ++v) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(counts[v]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(counts[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    g.targets_.insert(g.targets_.end(), first, last);
    g.offsets_[v + 1] = g.targets_.size();
  }
  return g;
}

Graph load_edge_list(std::istream& in, const LoadOptions& options) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = line;
    std::string_view first = next_token(rest);
    if (first.empty() || first.front() == '#') continue;
    std::string_view second = next_token(rest);
    if (second.empty())
      throw InputError("line " + std::to_string(line_no) + ": expected two node ids");
    if (!next_token(rest).empty())
      throw InputError("line " + std::to_string(line_no) + ": trailing tokens after edge");
    raw.emplace_back(parse_id(first, line_no), parse_id(second, line_no));
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::vector<std::uint64_t> labels;
  NodeId n = 0;
  if (options.renumber) {
    std::unordered_map<std::uint64_t, NodeId> ids;
    auto intern = [&](std::uint64_t x) {
      auto [it, fresh] = ids.try_emplace(x, static_cast<NodeId>(labels.size()));
      if (fresh) {
        if (labels.size() >= kMaxNodes) throw InputError("too many nodes");
        labels.push_back(x);
      }
      return it->second;
    };
    for (auto [a, b] : raw) {
      NodeId u = intern(a);
      NodeId v = intern(b);
      edges.emplace_back(u, v);
    }
    n = static_cast<NodeId>(labels.size());
  } else {
    std::uint64_t max_id = 0;
    for (auto [a, b] : raw) max_id = std::max({max_id, a, b});
    if (!raw.empty() && max_id >= kMaxNodes - 1)
      throw InputError("node id " + std::to_string(max_id) + " too large; load with renumbering");
    n = raw.empty() ? 0 : static_cast<NodeId>(max_id + 1);
    for (auto [a, b] : raw) edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }

  Graph g = Graph::from_edges(n, edges, std::move(labels));
  if (g.num_edges() == 0) throw InputError("graph has no edges; modularity is undefined");
  return g;
}

Graph load_edge_list_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw InputError("cannot open " + path.string());
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  bool gz = probe.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
  probe.close();
  if (gz) {
    std::istringstream in(inflate_gzip(path));
    return load_edge_list(in, options);
  }
  std::ifstream in(path);
  return load_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  g.for_each_edge([&](NodeId u, NodeId v) { out << g.label(u) << ' ' << g.label(v) << '\n'; });
}

GraphStats graph_stats(const Graph& g) {
  GraphStats s;
  s.n = g.num_nodes();
  s.m = g.num_edges();
  if (s.n == 0) return s;
  s.degree_min = std::numeric_limits<std::uint64_t>::max();
  for (NodeId v = 0; v < s.n; ++v) {
    s.degree_min = std::min(s.degree_min, g.degree(v));
    s.degree_max = std::max(s.degree_max, g.degree(v));
  }
  s.degree_mean = 2.0 * static_cast<double>(s.m) / static_cast<double>(s.n);
  return s;
}

}  // namespace bcnm
