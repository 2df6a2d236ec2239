#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bcnm/graph.hpp"
#include "bcnm/modularity.hpp"

namespace bcnm {

/// One merge as seen by the diagnostics. Sizes use the run's size measure
/// (links for plain/he/he-prime, members for hn); members are always kept.
struct MergeRecord {
  std::uint64_t step = 0;
  CommunityId lo = 0;
  CommunityId hi = 0;
  std::uint64_t size_lo = 0;
  std::uint64_t size_hi = 0;
  std::uint64_t members_lo = 0;
  std::uint64_t members_hi = 0;
  double ratio = 0.0;
  ScaledQ dq_scaled = 0;
  ScaledQ q_scaled_after = 0;
  std::uint64_t elapsed_ns = 0;

  friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

using MergeLog = std::vector<MergeRecord>;

/// Binary merge history. Leaves are node ids 0..n-1; the merge at step s
/// creates community n + s - 1.
struct DendrogramStep {
  std::uint64_t step = 0;
  CommunityId left = 0;
  CommunityId right = 0;
  CommunityId merged = 0;
  ScaledQ dq_scaled = 0;
  ScaledQ q_scaled = 0;
  std::uint64_t elapsed_ns = 0;

  friend bool operator==(const DendrogramStep&, const DendrogramStep&) = default;
};

struct Dendrogram {
  NodeId leaves = 0;
  std::vector<DendrogramStep> merges;

  /// parent[c] for every id ever created; roots map to themselves.
  std::vector<CommunityId> parents() const;

  /// Community of every leaf after the first `steps` merges.
  Partition partition_after(std::uint64_t steps) const;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

// CSV serialization. Headers are fixed; readers throw InputError on any
// column or value mismatch. Writers are deterministic and round-trip exactly.
void write_merge_log(std::ostream& out, const MergeLog& log);
MergeLog read_merge_log(std::istream& in);

void write_dendrogram(std::ostream& out, const Dendrogram& d);
Dendrogram read_dendrogram(std::istream& in, NodeId leaves = 0);

/// node_id,community_id with node ids taken from the graph's labels.
void write_partition(std::ostream& out, const Graph& g, std::span<const CommunityId> p);

struct LabeledPartition {
  std::vector<std::uint64_t> nodes;
  std::vector<std::uint64_t> communities;
};
LabeledPartition read_partition(std::istream& in);

}  // namespace bcnm
