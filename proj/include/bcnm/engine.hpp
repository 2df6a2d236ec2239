#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "bcnm/graph.hpp"
#include "bcnm/heuristics.hpp"
#include "bcnm/indexed_heap.hpp"
#include "bcnm/merge_log.hpp"
#include "bcnm/modularity.hpp"

namespace bcnm {

/// Read-only snapshot of a live community pair.
struct PairView {
  CommunityId lo = 0;
  CommunityId hi = 0;
  ScaledQ dq = 0;
  std::uint64_t links = 0;

  friend bool operator==(const PairView&, const PairView&) = default;
};

/// A score together with the pair it belongs to. Higher score ranks first;
/// equal scores rank the lexicographically smaller (lo, hi) first.
struct Rank {
  Score score;
  CommunityId lo = 0;
  CommunityId hi = 0;

  bool outranks(const Rank& other) const {
    auto c = compare(score, other.score);
    if (c != 0) return c > 0;
    return lo != other.lo ? lo < other.lo : hi < other.hi;
  }
  friend bool operator==(const Rank& a, const Rank& b) {
    return a.score == b.score && a.lo == b.lo && a.hi == b.hi;
  }
};

struct RankBelow {
  bool operator()(const Rank& a, const Rank& b) const { return b.outranks(a); }
};

enum class MaxLinkAction { keep, take, rescan };

/// Decides how a community's "max" link reacts when one of its pairs, p,
/// changes score. `p_was_max` says whether p held the link; `max_rank` is
/// the rank the link held before the change.
///   p not max, new rank not above the max -> keep
///   p not max, new rank above the max     -> take p
///   p was max, new rank not below before  -> take p (still the max)
///   p was max, new rank below before      -> rescan the whole list
MaxLinkAction update_max_link(bool p_was_max, const Rank& max_rank, const Rank& p_new_rank);

/// Greedy agglomeration state: communities with id-sorted pair vectors, per-community best-pair links and a global heap of nominations.
///
/// Node v starts as community v; the merge at step s creates community
/// n + s - 1. Dead communities keep their id so the dendrogram stays valid.
class Engine {
 public:
  Engine(const Graph& g, Heuristic h);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Heuristic heuristic() const { return heuristic_; }
  NodeId num_nodes() const { return nodes_; }
  std::uint64_t num_edges() const { return m_; }
  ScaledQ q_scaled() const { return q_scaled_; }
  std::uint64_t step() const { return dendrogram_.merges.size(); }
  /// One past the largest community id issued so far.
  CommunityId id_end() const { return static_cast<CommunityId>(nodes_ + step()); }

  bool alive(CommunityId c) const { return c < id_end() && comms_[c].alive; }
  std::vector<CommunityId> live_communities() const;
  CommunitySizes sizes(CommunityId c) const { return {comms_[c].links, comms_[c].members}; }
  std::uint64_t degree_sum(CommunityId c) const { return comms_[c].degree_sum; }
  std::uint64_t live_pair_count() const { return live_pairs_; }

  /// Pairs of c in list order (ascending neighbour id).
  std::vector<PairView> pairs_of(CommunityId c) const;
  std::optional<PairView> max_pair(CommunityId c) const;

  Score nominate_score(const PairView& p) const;
  Score select_score(const PairView& p) const;
  Rank nominate_rank(const PairView& p) const { return {nominate_score(p), p.lo, p.hi}; }
  Rank select_rank(const PairView& p) const { return {select_score(p), p.lo, p.hi}; }

  /// Best nomination under the select-stage score, or none if no pairs remain.
  std::optional<PairView> select_global_pair() const;

  /// Merges the two communities of a live pair. Returns the new id.
  /// Throws InvariantViolation if the pair is stale.
  CommunityId merge_pair(const PairView& p);

  /// Sets the elapsed time of the most recent merge.
  void stamp_elapsed(std::uint64_t ns);

  const Dendrogram& dendrogram() const { return dendrogram_; }
  const MergeLog& merge_log() const { return log_; }

  /// Current community of every node.
  Partition partition() const { return dendrogram_.partition_after(step()); }

  /// Full structural check: list order, pair sharing, link counts, gains,
  /// max links and heap contents. Throws InvariantViolation on failure.
  void audit() const;

 private:
  // One side of a pair, stored in the owner's vector. Both endpoints hold a
  // copy. Removed entries keep their id (so the vector stays sorted) and get
  // links = 0 until the next compaction.
  struct Entry {
    CommunityId other = 0;
    std::uint32_t links = 0;
    ScaledQ dq = 0;
  };

  struct Comm {
    Rank max_rank;  // valid when has_max
    Rank best_touch;
    std::uint64_t links = 0;  // live entries
    std::uint64_t members = 0;
    std::uint64_t degree_sum = 0;
    std::uint32_t dead = 0;  // tombstones in `list`
    std::uint32_t stamp = 0;
    bool has_max = false;
    bool has_touch = false;
    bool max_touched = false;
    bool alive = false;
    std::vector<Entry> list;
  };

  static bool same_pair(const Rank& a, const Rank& b) { return a.lo == b.lo && a.hi == b.hi; }

  Score score(Stage s, ScaledQ dq, CommunityId a, CommunityId b) const {
    switch (size_measure(heuristic_, s)) {
      case SizeMeasure::none:
        return {dq, 1, 1};
      case SizeMeasure::links:
        return Score::of(dq, ratio(comms_[a].links, comms_[b].links));
      case SizeMeasure::members:
        return Score::of(dq, ratio(comms_[a].members, comms_[b].members));
    }
    return {dq, 1, 1};
  }
  Rank rank_of(CommunityId owner, const Entry& e, Stage s) const {
    const CommunityId lo = std::min(owner, e.other);
    const CommunityId hi = std::max(owner, e.other);
    return {score(s, e.dq, lo, hi), lo, hi};
  }

  const Entry* find(CommunityId c, CommunityId k) const;
  void detach(CommunityId k, CommunityId gone);

  void touch(CommunityId x, const Rank* r);
  void rescan_max(CommunityId c);
  void set_max(CommunityId c, const Rank* r);
  void rekey(CommunityId c);
  bool scan_argmax(CommunityId c, Rank& best) const;

  const Heuristic heuristic_;
  const NodeId nodes_;
  const std::uint64_t m_;
  ScaledQ q_scaled_ = 0;
  std::uint64_t live_pairs_ = 0;

  std::vector<Comm> comms_;
  IndexedMaxHeap<Rank, RankBelow> heap_;

  std::vector<CommunityId> touched_;
  std::vector<CommunityId> rekey_;
  std::vector<CommunityId> common_;

  Dendrogram dendrogram_;
  MergeLog log_;
};

enum class StopPolicy {
  negative_dq,  // stop when the selected pair would lower Q
  complete,     // merge until no pairs remain
};

struct RunResult {
  Heuristic heuristic = Heuristic::plain;
  std::uint64_t m = 0;
  Dendrogram dendrogram;
  MergeLog log;
  Partition final_partition;
  Partition best_partition;
  std::uint64_t best_step = 0;  // earliest step at which Q peaked
  ScaledQ best_q = 0;
  ScaledQ final_q = 0;
  std::uint64_t elapsed_ns = 0;
};

/// Called after every merge with the engine in its post-merge state.
using MergeObserver = std::function<void(const Engine&)>;

RunResult run(const Graph& g, Heuristic h, StopPolicy stop, const MergeObserver& observer = {});

}  // namespace bcnm
