#include "bcnm/modularity.hpp"

#include <string>
#include <unordered_map>

#include "bcnm/errors.hpp"

namespace bcnm {

void check_supported(const Graph& g) {
  if (g.num_edges() == 0) throw InputError("graph has no edges; modularity is undefined");
  if (g.num_edges() > kMaxSupportedEdges)
    throw InputError("graph has " + std::to_string(g.num_edges()) +
                     " edges; exact arithmetic supports at most " +
                     std::to_string(kMaxSupportedEdges));
}

ScaledQ q_scaled_scratch(const Graph& g, std::span<const CommunityId> partition) {
  check_supported(g);
  if (partition.size() < g.num_nodes())
    throw InputError("partition covers " + std::to_string(partition.size()) + " of " +
                     std::to_string(g.num_nodes()) + " nodes");

  struct Totals {
    std::uint64_t internal = 0;
    std::uint64_t degree_sum = 0;
  };
  std::unordered_map<CommunityId, Totals> totals;
  for (NodeId v = 0; v < g.num_nodes(); ++v) totals[partition[v]].degree_sum += g.degree(v);
  g.for_each_edge([&](NodeId u, NodeId v) {
    if (partition[u] == partition[v]) ++totals[partition[u]].internal;
  });

  const auto m = static_cast<ScaledQ>(g.num_edges());
  ScaledQ q = 0;
  for (const auto& [label, t] : totals) {
    auto d = static_cast<ScaledQ>(t.degree_sum);
    q += 4 * m * static_cast<ScaledQ>(t.internal) - d * d;
  }
  return q;
}

}  // namespace bcnm
