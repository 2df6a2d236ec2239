#include "bcnm/generators.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "bcnm/errors.hpp"

namespace bcnm {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Reject the top partial block of the 2^64 range.
  const std::uint64_t limit = bound * (std::numeric_limits<std::uint64_t>::max() / bound);
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

Graph generate_ba(NodeId n, std::uint32_t m_attach, std::uint64_t seed) {
  if (m_attach < 1) throw InputError("ba: m_attach must be at least 1");
  if (n <= m_attach) throw InputError("ba: n must exceed m_attach");
  if (n >= (NodeId{1} << 31)) throw InputError("ba: n too large");

  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  // Every edge contributes both endpoints, so a uniform draw from this array
  // picks a node with probability proportional to its degree.
  std::vector<NodeId> endpoints;
  const NodeId core = m_attach + 1;
  for (NodeId u = 0; u < core; ++u)
    for (NodeId v = u + 1; v < core; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }

  std::vector<NodeId> targets;
  targets.reserve(m_attach);
  for (NodeId v = core; v < n; ++v) {
    targets.clear();
    while (targets.size() < m_attach) {
      NodeId t = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph::from_edges(n, edges);
}

Graph generate_er(NodeId n, std::uint64_t m, std::uint64_t seed) {
  if (n < 2) throw InputError("er: n must be at least 2");
  if (n >= (NodeId{1} << 31)) throw InputError("er: n too large");
  const std::uint64_t all = std::uint64_t{n} * (n - 1) / 2;
  if (m < 1) throw InputError("er: m must be at least 1");
  if (m > all) throw InputError("er: m = " + std::to_string(m) + " exceeds " + std::to_string(all));

  std::mt19937_64 rng(seed);
  auto draw = [&]() -> Edge {
    for (;;) {
      auto u = static_cast<NodeId>(uniform_below(rng, n));
      auto v = static_cast<NodeId>(uniform_below(rng, n));
      if (u != v) return {std::min(u, v), std::max(u, v)};
    }
  };
  auto key = [n](Edge e) { return std::uint64_t{e.first} * n + e.second; };

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> chosen;
  if (2 * m <= all) {
    edges.reserve(m);
    while (edges.size() < m) {
      Edge e = draw();
      if (chosen.insert(key(e)).second) edges.push_back(e);
    }
  } else {
    // Dense case: draw the complement instead.
    while (chosen.size() < all - m) chosen.insert(key(draw()));
    edges.reserve(m);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (!chosen.count(key({u, v}))) edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

Graph generate(const GenSpec& spec) {
  switch (spec.model) {
    case GraphModel::ba:
      return generate_ba(spec.n, spec.m_attach, spec.seed);
    case GraphModel::er:
      return generate_er(spec.n, spec.edges, spec.seed);
  }
  throw InputError("unknown graph model");
}

}  // namespace bcnm
