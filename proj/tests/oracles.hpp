#pragma once

// Reference computations for tests. Everything here is written directly from
// the definitions and shares no code path with the engine beyond the Graph
// type and the exact Score comparison.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bcnm/engine.hpp"
#include "bcnm/graph.hpp"
#include "bcnm/heuristics.hpp"

namespace bcnm::testing {

/// Q * 4m^2 from the adjacency double sum: sum_i (2m * sum_{v,w in c_i} A_vw - D_i^2).
ScaledQ q_by_adjacency(const Graph& g, const Partition& p);

/// q(join(a, b)) - q(current) computed from scratch.
ScaledQ dq_by_rejoin(const Graph& g, const Partition& p, CommunityId a, CommunityId b);

/// Naive agglomeration that recomputes every pair, size and nomination from
/// the partition at every step. Uses the same id scheme and tie-break as the
/// engine: fresh ids n, n+1, ...; equal ranks prefer the smaller (lo, hi).
class NaiveAgglomerator {
 public:
  NaiveAgglomerator(const Graph& g, Heuristic h);

  struct Candidate {
    CommunityId lo = 0;
    CommunityId hi = 0;
    ScaledQ dq = 0;
    std::uint64_t links = 0;
  };

  /// All connected community pairs with their gains.
  std::vector<Candidate> pairs() const;
  /// Each community's best pair under the nominate-stage score.
  std::vector<std::pair<CommunityId, Candidate>> nominations() const;
  /// Global choice: best nomination under the select-stage score.
  std::optional<Candidate> select() const;
  /// Best pair over all pairs under the select-stage score.
  std::optional<Candidate> select_over_all_pairs() const;

  void merge(CommunityId lo, CommunityId hi);
  const Partition& partition() const { return partition_; }
  CommunitySizes sizes(CommunityId c) const;
  std::vector<std::pair<CommunityId, CommunityId>> history() const { return history_; }

 private:
  Score score(const Candidate& c, Stage s) const;
  Rank rank(const Candidate& c, Stage s) const { return {score(c, s), c.lo, c.hi}; }

  const Graph& g_;
  Heuristic h_;
  Partition partition_;
  CommunityId next_id_;
  std::vector<std::pair<CommunityId, CommunityId>> history_;
};

/// Canonical form of a partition: labels renumbered by first appearance.
Partition canonical(const Partition& p);

/// Best and worst Q over every partition of a small graph (n <= 10).
struct Exhaustive {
  ScaledQ best = 0;
  std::vector<Partition> argmax;
};
Exhaustive exhaustive_best_partition(const Graph& g);

// Small fixed graphs used across suites.
Graph triangle();
Graph single_edge();
Graph bridged_triangles();  // {0,1,2}, {3,4,5}, bridge 2-3
Graph star(NodeId leaves);
Graph path(NodeId n);

}  // namespace bcnm::testing
