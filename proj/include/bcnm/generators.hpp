#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "bcnm/graph.hpp"

namespace bcnm {

/// All generators draw from std::mt19937_64, whose output sequence is fixed
/// by the C++ standard. Bounded draws use rejection on raw 64-bit output, so
/// graphs are identical across standard libraries for the same seed.
inline constexpr std::string_view kPrngName = "mt19937_64";

enum class GraphModel { ba, er };

struct GenSpec {
  GraphModel model = GraphModel::ba;
  NodeId n = 0;
  std::uint32_t m_attach = 0;  // ba: edges per arriving node
  std::uint64_t edges = 0;     // er: exact edge count
  std::uint64_t seed = 0;
};

/// Preferential attachment seeded by a clique on m_attach + 1 nodes.
Graph generate_ba(NodeId n, std::uint32_t m_attach, std::uint64_t seed);

/// m distinct edges drawn uniformly from all node pairs.
Graph generate_er(NodeId n, std::uint64_t m, std::uint64_t seed);

Graph generate(const GenSpec& spec);

/// Uniform integer in [0, bound) without modulo bias.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace bcnm
