#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcnm/graph.hpp"

namespace bcnm {

/// Modularity scaled by 4m^2. At this scale e_ij and a_i^2 terms are all
/// integers, so Q and every merge gain are exact.
using ScaledQ = std::int64_t;

using CommunityId = std::uint32_t;

/// Node -> community label. Label values are arbitrary.
using Partition = std::vector<CommunityId>;

/// Largest edge count for which 4m^2 (and hence every D_i^2 and 4m*L term)
/// fits in a signed 64-bit integer.
inline constexpr std::uint64_t kMaxSupportedEdges = std::uint64_t{1} << 30;

/// Throws InputError if the graph is empty or exceeds kMaxSupportedEdges.
void check_supported(const Graph& g);

/// Q * 4m^2 = sum_i (4m * L_ii - D_i^2), computed from scratch.
/// L_ii counts intra-community edges, D_i sums member degrees.
ScaledQ q_scaled_scratch(const Graph& g, std::span<const CommunityId> partition);

/// Gain of merging two adjacent singletons.
constexpr ScaledQ dq_scaled_init(std::uint64_t k_u, std::uint64_t k_v, std::uint64_t m) {
  return static_cast<ScaledQ>(4 * m) - 2 * static_cast<ScaledQ>(k_u * k_v);
}

/// Gain of merging communities i and j joined by `links` edges.
constexpr ScaledQ dq_scaled_pair(std::uint64_t links, std::uint64_t d_i, std::uint64_t d_j,
                                 std::uint64_t m) {
  return 2 * (static_cast<ScaledQ>(2 * m * links) - static_cast<ScaledQ>(d_i * d_j));
}

enum class NeighborCase { common, only_i, only_j };

/// New gain between neighbor k and the union of i and j, from the old gains.
/// Degree sums are the values before the merge. For only_i, dq_jk is ignored;
/// for only_j, dq_ik is ignored.
constexpr ScaledQ dq_update_after_merge(NeighborCase c, ScaledQ dq_ik, ScaledQ dq_jk,
                                        std::uint64_t d_i, std::uint64_t d_j,
                                        std::uint64_t d_k) {
  switch (c) {
    case NeighborCase::common:
      return dq_ik + dq_jk;
    case NeighborCase::only_i:
      return dq_ik - 2 * static_cast<ScaledQ>(d_j * d_k);
    case NeighborCase::only_j:
      return dq_jk - 2 * static_cast<ScaledQ>(d_i * d_k);
  }
  return 0;
}

/// Q as a decimal, for reporting only.
inline double q_decimal(ScaledQ q, std::uint64_t m) {
  double denom = 4.0 * static_cast<double>(m) * static_cast<double>(m);
  return static_cast<double>(q) / denom;
}

}  // namespace bcnm
