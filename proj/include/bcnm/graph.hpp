#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace bcnm {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable simple undirected graph in CSR form.
///
/// Nodes are dense ids 0..n-1. Every node keeps the label it had in the
/// source file so results can be reported in the caller's id space.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph over `n` nodes. Self-loops are dropped and parallel
  /// edges collapse. `labels` may be empty, in which case node v is labeled v.
  static Graph from_edges(NodeId n, std::span<const Edge> edges,
                          std::vector<std::uint64_t> labels = {});

  NodeId num_nodes() const { return static_cast<NodeId>(labels_.size()); }
  std::uint64_t num_edges() const { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::uint64_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::uint64_t label(NodeId v) const { return labels_[v]; }
  std::span<const std::uint64_t> labels() const { return labels_; }

  /// Calls f(u, v) once per edge with u < v, in ascending (u, v) order.
  template <class F>
  void for_each_edge(F&& f) const {
    for (NodeId u = 0; u < num_nodes(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) f(u, v);
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::uint64_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<std::uint64_t> labels_;
};

struct LoadOptions {
  // Compact ids to 0..n-1 in first-appearance order. Without it n = max id + 1.
  bool renumber = false;
};

/// Parses a whitespace-separated edge list; '#' starts a comment line.
/// Throws InputError on malformed lines (with line number) and on m = 0.
Graph load_edge_list(std::istream& in, const LoadOptions& options = {});

/// Same as load_edge_list, reading from a file. Gzip input is detected by
/// its magic bytes and inflated transparently.
Graph load_edge_list_file(const std::filesystem::path& path,
                          const LoadOptions& options = {});

/// Writes one "u v" line per edge using node labels.
void write_edge_list(std::ostream& out, const Graph& g);

struct GraphStats {
  NodeId n = 0;
  std::uint64_t m = 0;
  std::uint64_t degree_min = 0;
  std::uint64_t degree_max = 0;
  double degree_mean = 0.0;
};

GraphStats graph_stats(const Graph& g);

}  // namespace bcnm
