#include "bcnm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>

#include "bcnm/errors.hpp"

namespace bcnm {
namespace {

[[noreturn]] void violation(const std::string& what) { throw InvariantViolation(what); }

std::string pair_name(CommunityId lo, CommunityId hi) {
  return "(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
}

}  // namespace

MaxLinkAction update_max_link(bool p_was_max, const Rank& max_rank, const Rank& p_new_rank) {
  if (p_was_max) {
    if (max_rank.outranks(p_new_rank)) return MaxLinkAction::rescan;
    return MaxLinkAction::take;
  }
  if (p_new_rank.outranks(max_rank)) return MaxLinkAction::take;
  return MaxLinkAction::keep;
}

Engine::Engine(const Graph& g, Heuristic h)
    : heuristic_(h),
      nodes_(g.num_nodes()),
      m_(g.num_edges()),
      comms_(nodes_ > 0 ? 2 * static_cast<std::size_t>(nodes_) - 1 : 0),
      heap_(static_cast<std::uint32_t>(comms_.size())) {
  check_supported(g);
  dendrogram_.leaves = nodes_;
  dendrogram_.merges.reserve(nodes_);
  log_.reserve(nodes_);

  for (NodeId v = 0; v < nodes_; ++v) {
    Comm& c = comms_[v];
    c.members = 1;
    c.degree_sum = g.degree(v);
    c.alive = true;
    c.list.reserve(g.degree(v));
    q_scaled_ -= static_cast<ScaledQ>(c.degree_sum * c.degree_sum);
  }
  // Edges arrive in ascending (u, v) order, so every vector is built sorted.
  g.for_each_edge([&](NodeId u, NodeId v) {
    const ScaledQ dq = dq_scaled_init(g.degree(u), g.degree(v), m_);
    comms_[u].list.push_back({v, 1, dq});
    comms_[v].list.push_back({u, 1, dq});
    ++comms_[u].links;
    ++comms_[v].links;
    ++live_pairs_;
  });
  for (NodeId v = 0; v < nodes_; ++v) {
    rescan_max(v);
    rekey(v);
  }
}

std::vector<CommunityId> Engine::live_communities() const {
  std::vector<CommunityId> out;
  for (CommunityId c = 0; c < id_end(); ++c)
    if (comms_[c].alive) out.push_back(c);
  return out;
}

std::vector<PairView> Engine::pairs_of(CommunityId c) const {
  std::vector<PairView> out;
  out.reserve(comms_[c].links);
  for (const Entry& e : comms_[c].list)
    if (e.links != 0)
      out.push_back({std::min(c, e.other), std::max(c, e.other), e.dq, e.links});
  return out;
}

std::optional<PairView> Engine::max_pair(CommunityId c) const {
  const Comm& cc = comms_[c];
  if (!cc.has_max) return std::nullopt;
  const CommunityId k = cc.max_rank.lo == c ? cc.max_rank.hi : cc.max_rank.lo;
  const Entry* e = find(c, k);
  return PairView{cc.max_rank.lo, cc.max_rank.hi, e->dq, e->links};
}

Score Engine::nominate_score(const PairView& p) const {
  return stage_score(heuristic_, Stage::nominate, p.dq, sizes(p.lo), sizes(p.hi));
}

Score Engine::select_score(const PairView& p) const {
  return stage_score(heuristic_, Stage::select, p.dq, sizes(p.lo), sizes(p.hi));
}

std::optional<PairView> Engine::select_global_pair() const {
  if (heap_.empty()) return std::nullopt;
  return max_pair(heap_.top());
}

const Engine::Entry* Engine::find(CommunityId c, CommunityId k) const {
  const std::vector<Entry>& list = comms_[c].list;
  auto it = std::lower_bound(list.begin(), list.end(), k,
                             [](const Entry& e, CommunityId id) { return e.other < id; });
  if (it == list.end() || it->other != k || it->links == 0) return nullptr;
  return &*it;
}

void Engine::detach(CommunityId k, CommunityId gone) {
  Comm& kc = comms_[k];
  auto it = std::lower_bound(kc.list.begin(), kc.list.end(), gone,
                             [](const Entry& e, CommunityId id) { return e.other < id; });
  it->links = 0;
  --kc.links;
  ++kc.dead;
  if (kc.has_max && (kc.max_rank.lo == gone || kc.max_rank.hi == gone)) {
    touch(k, nullptr);
    kc.has_max = false;
    kc.max_touched = true;
  }
  if (kc.dead > 8 && kc.dead > kc.links) {
    std::erase_if(kc.list, [](const Entry& e) { return e.links == 0; });
    kc.dead = 0;
  }
}

bool Engine::scan_argmax(CommunityId c, Rank& best) const {
  bool found = false;
  for (const Entry& e : comms_[c].list) {
    if (e.links == 0) continue;
    Rank r = rank_of(c, e, Stage::nominate);
    if (!found || r.outranks(best)) {
      best = r;
      found = true;
    }
  }
  return found;
}

void Engine::set_max(CommunityId c, const Rank* r) {
  comms_[c].has_max = r != nullptr;
  if (r) comms_[c].max_rank = *r;
}

void Engine::rescan_max(CommunityId c) {
  Rank best;
  set_max(c, scan_argmax(c, best) ? &best : nullptr);
}

void Engine::rekey(CommunityId c) {
  const Comm& cc = comms_[c];
  if (!cc.has_max) {
    heap_.erase(c);
    return;
  }
  const Rank& m = cc.max_rank;
  Rank r{score(Stage::select, m.score.dq, m.lo, m.hi), m.lo, m.hi};
  if (heap_.contains(c) && heap_.key(c) == r) return;
  heap_.set(c, r);
}

void Engine::touch(CommunityId x, const Rank* r) {
  Comm& xc = comms_[x];
  // A changed pair that is not the max and does not beat the max's previous
  // rank can never become the max: either the max survives or x is rescanned.
  if (r && xc.has_max && !same_pair(*r, xc.max_rank) && !r->outranks(xc.max_rank)) return;
  const auto stamp = static_cast<std::uint32_t>(step());
  if (xc.stamp != stamp) {
    xc.stamp = stamp;
    xc.has_touch = false;
    xc.max_touched = false;
    touched_.push_back(x);
  }
  if (!r) return;
  if (xc.has_max && same_pair(*r, xc.max_rank)) xc.max_touched = true;
  if (!xc.has_touch || r->outranks(xc.best_touch)) {
    xc.best_touch = *r;
    xc.has_touch = true;
  }
}

CommunityId Engine::merge_pair(const PairView& p) {
  const Entry* held = p.lo < p.hi && alive(p.lo) && alive(p.hi) ? find(p.lo, p.hi) : nullptr;
  if (!held || held->dq != p.dq || held->links != p.links)
    violation("merge of stale pair " + pair_name(p.lo, p.hi));

  const CommunityId i = p.lo;
  const CommunityId j = p.hi;
  const CommunityId c = id_end();
  const ScaledQ dq = held->dq;
  const SizeMeasure logged = logged_size_measure(heuristic_);
  const CommunitySizes size_i = sizes(i);
  const CommunitySizes size_j = sizes(j);
  const std::uint64_t d_i = comms_[i].degree_sum;
  const std::uint64_t d_j = comms_[j].degree_sum;

  // Recorded first so that step() already names this merge below.
  dendrogram_.merges.push_back({step() + 1, i, j, c, dq, q_scaled_ + dq, 0});

  heap_.erase(i);
  heap_.erase(j);
  Comm& ci = comms_[i];
  Comm& cj = comms_[j];
  Comm& merged = comms_[c];
  merged.members = size_i.members + size_j.members;
  merged.degree_sum = d_i + d_j;
  merged.alive = true;
  merged.list.reserve(size_i.links + size_j.links);
  --live_pairs_;

  // Linear merge of the two id-sorted vectors, skipping the pair being merged.
  const std::vector<Entry>& li = ci.list;
  const std::vector<Entry>& lj = cj.list;
  std::size_t a = 0;
  std::size_t b = 0;
  for (;;) {
    while (a < li.size() && (li[a].links == 0 || li[a].other == j)) ++a;
    while (b < lj.size() && (lj[b].links == 0 || lj[b].other == i)) ++b;
    if (a == li.size() && b == lj.size()) break;
    constexpr CommunityId kEnd = std::numeric_limits<CommunityId>::max();
    const CommunityId ka = a < li.size() ? li[a].other : kEnd;
    const CommunityId kb = b < lj.size() ? lj[b].other : kEnd;
    const CommunityId k = std::min(ka, kb);
    const std::uint64_t d_k = comms_[k].degree_sum;
    Entry fresh{k, 0, 0};
    if (ka < kb) {
      fresh.dq = dq_update_after_merge(NeighborCase::only_i, li[a].dq, 0, d_i, d_j, d_k);
      fresh.links = li[a].links;
      detach(k, i);
      ++a;
    } else if (kb < ka) {
      fresh.dq = dq_update_after_merge(NeighborCase::only_j, 0, lj[b].dq, d_i, d_j, d_k);
      fresh.links = lj[b].links;
      detach(k, j);
      ++b;
    } else {
      fresh.dq = dq_update_after_merge(NeighborCase::common, li[a].dq, lj[b].dq, d_i, d_j, d_k);
      fresh.links = li[a].links + lj[b].links;
      detach(k, i);
      detach(k, j);
      --live_pairs_;
      common_.push_back(k);
      ++a;
      ++b;
    }
    // c is the largest id issued, so appending keeps both vectors sorted.
    merged.list.push_back(fresh);
    comms_[k].list.push_back({c, fresh.links, fresh.dq});
    ++comms_[k].links;
  }
  merged.links = merged.list.size();

  for (Comm* d : {&ci, &cj}) {
    d->alive = false;
    d->has_max = false;
    d->links = 0;
    d->dead = 0;
    std::vector<Entry>().swap(d->list);
  }
  q_scaled_ += dq;

  // All sizes are final from here on; scores can be compared.
  Rank best_fresh;
  bool have_fresh = false;
  for (const Entry& e : merged.list) {
    const Rank r = rank_of(c, e, Stage::nominate);
    if (!have_fresh || r.outranks(best_fresh)) {
      best_fresh = r;
      have_fresh = true;
    }
    touch(e.other, &r);
  }
  if (heuristic_ == Heuristic::he) {
    // Common neighbours lost a link, which moves every score on their lists.
    for (CommunityId z : common_) {
      Rank best;
      bool found = false;
      for (const Entry& e : comms_[z].list) {
        if (e.links == 0) continue;
        const Rank r = rank_of(z, e, Stage::nominate);
        if (!found || r.outranks(best)) {
          best = r;
          found = true;
        }
        if (e.other != c) touch(e.other, &r);
      }
      // The walk above was a full scan of z.
      touch(z, nullptr);
      Comm& zc = comms_[z];
      set_max(z, found ? &best : nullptr);
      zc.max_touched = false;
      zc.best_touch = best;
      zc.has_touch = found;
    }
  } else if (heuristic_ == Heuristic::he_prime) {
    // Nominations are unaffected, but select keys that involve z are not.
    for (CommunityId z : common_) {
      rekey_.push_back(z);
      for (const Entry& e : comms_[z].list) {
        if (e.links == 0 || e.other == c) continue;
        const Comm& xc = comms_[e.other];
        if (xc.has_max && (xc.max_rank.lo == z || xc.max_rank.hi == z)) rekey_.push_back(e.other);
      }
    }
  }

  for (CommunityId x : touched_) {
    Comm& xc = comms_[x];
    if (!xc.has_touch) {
      rescan_max(x);
    } else {
      switch (update_max_link(xc.max_touched, xc.max_rank, xc.best_touch)) {
        case MaxLinkAction::keep:
          break;
        case MaxLinkAction::take:
          set_max(x, &xc.best_touch);
          break;
        case MaxLinkAction::rescan:
          rescan_max(x);
          break;
      }
    }
    rekey(x);
  }
  set_max(c, have_fresh ? &best_fresh : nullptr);
  rekey(c);
  for (CommunityId x : rekey_) rekey(x);
  touched_.clear();
  rekey_.clear();
  common_.clear();

  MergeRecord rec;
  rec.step = step();
  rec.lo = i;
  rec.hi = j;
  rec.size_lo = size_i.under(logged);
  rec.size_hi = size_j.under(logged);
  rec.members_lo = size_i.members;
  rec.members_hi = size_j.members;
  rec.ratio = ratio(rec.size_lo, rec.size_hi).value();
  rec.dq_scaled = dq;
  rec.q_scaled_after = q_scaled_;
  log_.push_back(rec);
  return c;
}

void Engine::stamp_elapsed(std::uint64_t ns) {
  if (log_.empty()) return;
  log_.back().elapsed_ns = ns;
  dendrogram_.merges.back().elapsed_ns = ns;
}

void Engine::audit() const {
  std::uint64_t members = 0;
  std::uint64_t nonempty = 0;
  std::uint64_t entries = 0;
  for (CommunityId c = 0; c < id_end(); ++c) {
    const Comm& cc = comms_[c];
    if (!cc.alive) {
      if (!cc.list.empty() || cc.links != 0 || cc.has_max || heap_.contains(c))
        violation("dead community " + std::to_string(c) + " still holds pairs");
      continue;
    }
    members += cc.members;
    std::uint64_t count = 0;
    std::uint64_t dead = 0;
    bool have_last = false;
    CommunityId last = 0;
    for (const Entry& e : cc.list) {
      if (have_last && e.other <= last)
        violation("pair list of " + std::to_string(c) + " not strictly sorted");
      last = e.other;
      have_last = true;
      if (e.links == 0) {
        ++dead;
        continue;
      }
      const CommunityId k = e.other;
      const CommunityId lo = std::min(c, k);
      const CommunityId hi = std::max(c, k);
      if (k == c) violation("self pair on " + std::to_string(c));
      if (!alive(k)) violation("pair to dead community " + std::to_string(k));
      const Entry* mirror = find(k, c);
      if (!mirror || mirror->dq != e.dq || mirror->links != e.links)
        violation("pair " + pair_name(lo, hi) + " is not mirrored");
      ScaledQ expect = dq_scaled_pair(e.links, comms_[lo].degree_sum, comms_[hi].degree_sum, m_);
      if (e.dq != expect)
        violation("pair " + pair_name(lo, hi) + " dq " + std::to_string(e.dq) + " != " +
                  std::to_string(expect));
      ++count;
    }
    if (count != cc.links) violation("link count of " + std::to_string(c) + " is stale");
    if (dead != cc.dead) violation("tombstone count of " + std::to_string(c) + " is stale");
    entries += count;

    Rank best;
    const bool found = scan_argmax(c, best);
    if (found != cc.has_max || (found && !(best == cc.max_rank)))
      violation("max link of " + std::to_string(c) + " is not the full-scan argmax");
    if (found) {
      ++nonempty;
      if (!heap_.contains(c)) violation("community " + std::to_string(c) + " missing from heap");
      const Rank want{score(Stage::select, best.score.dq, best.lo, best.hi), best.lo, best.hi};
      if (!(heap_.key(c) == want)) violation("heap key of " + std::to_string(c) + " is stale");
    } else if (heap_.contains(c)) {
      violation("pairless community " + std::to_string(c) + " in heap");
    }
  }
  if (entries != 2 * live_pairs_) violation("live pair count is stale");
  if (members != nodes_) violation("member counts do not cover all nodes");
  if (heap_.size() != nonempty) violation("heap size does not match nominating communities");
  if (!heap_.valid()) violation("heap order broken");
}

RunResult run(const Graph& g, Heuristic h, StopPolicy stop, const MergeObserver& observer) {
  using Clock = std::chrono::steady_clock;
  auto ns_between = [](Clock::time_point a, Clock::time_point b) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
  };

  const auto start = Clock::now();
  Engine engine(g, h);
  RunResult result;
  result.heuristic = h;
  result.m = g.num_edges();
  result.best_q = engine.q_scaled();
  result.best_step = 0;

  for (;;) {
    const auto t0 = Clock::now();
    std::optional<PairView> p = engine.select_global_pair();
    if (!p) break;
    if (stop == StopPolicy::negative_dq && p->dq < 0) break;
    engine.merge_pair(*p);
    engine.stamp_elapsed(ns_between(t0, Clock::now()));
    if (engine.q_scaled() > result.best_q) {
      result.best_q = engine.q_scaled();
      result.best_step = engine.step();
    }
    if (observer) observer(engine);
  }

  result.elapsed_ns = ns_between(start, Clock::now());
  result.final_q = engine.q_scaled();
  result.dendrogram = engine.dendrogram();
  result.log = engine.merge_log();
  result.final_partition = engine.partition();
  result.best_partition = result.dendrogram.partition_after(result.best_step);
  return result;
}

}  // namespace bcnm
