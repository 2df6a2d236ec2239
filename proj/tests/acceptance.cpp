// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   acceptance --group exact     criteria 1-5, 10, 11 (seconds)
//   acceptance --group trends    criteria 6-9 (minutes)
//   acceptance --discover FILE   search for a graph separating he from he-prime

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bcnm/cli.hpp"
#include "bcnm/engine.hpp"
#include "bcnm/errors.hpp"
#include "bcnm/generators.hpp"
#include "bcnm/metrics.hpp"
#include "bcnm/modularity.hpp"
#include "oracles.hpp"

namespace {

using namespace bcnm;
namespace fs = std::filesystem;
namespace oracle = bcnm::testing;

constexpr Heuristic kAll[] = {Heuristic::plain, Heuristic::he, Heuristic::he_prime, Heuristic::hn};

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Verdict& v) {
  std::printf("criterion %2d %s: %s (%s)\n", id, v.pass ? "PASS" : "FAIL", title, v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

template <class F>
Verdict guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Suite of (1): 25 ER and 25 BA graphs with 20 <= n <= 300.
std::vector<Graph> random_suite(std::uint64_t seed, int count, NodeId max_n) {
  std::mt19937_64 rng(seed);
  std::vector<Graph> out;
  for (int i = 0; i < count; ++i) {
    NodeId n = static_cast<NodeId>(20 + uniform_below(rng, max_n - 19));
    if (i % 2 == 0) {
      std::uint64_t cap = std::uint64_t{n} * (n - 1) / 2;
      std::uint64_t m = std::min<std::uint64_t>(cap, n + uniform_below(rng, 3 * n));
      out.push_back(generate_er(n, m, rng()));
    } else {
      auto attach = static_cast<std::uint32_t>(1 + uniform_below(rng, 4));
      out.push_back(generate_ba(n, attach, rng()));
    }
  }
  return out;
}

// Steps every engine of the suite to completion, calling `check` before the
// first merge and after each one.
void drive(const std::vector<Graph>& suite, const std::function<void(const Graph&, const Engine&)>& check) {
  for (const Graph& g : suite) {
    for (Heuristic h : kAll) {
      Engine e(g, h);
      check(g, e);
      while (auto p = e.select_global_pair()) {
        e.merge_pair(*p);
        check(g, e);
      }
    }
  }
}

[[noreturn]] void fail(const Graph& g, const Engine& e, const std::string& what) {
  throw std::runtime_error(std::string(to_string(e.heuristic())) + ", n=" + std::to_string(g.num_nodes()) +
                           ", step " + std::to_string(e.step()) + ": " + what);
}

// ------------------------------------------------------------ exact group

Verdict exact_q(const std::vector<Graph>& suite) {
  std::uint64_t steps = 0;
  drive(suite, [&](const Graph& g, const Engine& e) {
    Partition p = e.partition();
    ScaledQ scratch = q_scaled_scratch(g, p);
    if (e.q_scaled() != scratch) fail(g, e, "q_scaled differs from scratch");
    if (oracle::q_by_adjacency(g, p) != scratch) fail(g, e, "scratch differs from adjacency sum");
    ++steps;
  });
  return {true, std::to_string(suite.size()) + " graphs x 4 heuristics, " + std::to_string(steps) +
                    " states, zero error"};
}

Verdict exact_dq() {
  auto suite = random_suite(0xd9, 24, 50);
  std::uint64_t pairs = 0;
  drive(suite, [&](const Graph& g, const Engine& e) {
    Partition p = e.partition();
    const ScaledQ base = q_scaled_scratch(g, p);
    for (CommunityId c : e.live_communities()) {
      for (const PairView& v : e.pairs_of(c)) {
        if (v.lo != c) continue;
        Partition joined = p;
        for (auto& x : joined)
          if (x == v.hi) x = v.lo;
        if (v.dq != q_scaled_scratch(g, joined) - base)
          fail(g, e, "dq of (" + std::to_string(v.lo) + "," + std::to_string(v.hi) + ") differs");
        ++pairs;
      }
    }
  });
  return {true, std::to_string(suite.size()) + " graphs x 4 heuristics, " + std::to_string(pairs) +
                    " pair gains checked by rejoin"};
}

Verdict max_links_and_heap(const std::vector<Graph>& suite) {
  std::uint64_t communities = 0, selections = 0;
  drive(suite, [&](const Graph& g, const Engine& e) {
    std::optional<PairView> brute_all, brute_nominated;
    for (CommunityId c : e.live_communities()) {
      auto list = e.pairs_of(c);
      std::optional<PairView> best;
      for (const auto& v : list) {
        if (!best || e.nominate_rank(v).outranks(e.nominate_rank(*best))) best = v;
        if (v.lo == c && (!brute_all || e.select_rank(v).outranks(e.select_rank(*brute_all))))
          brute_all = v;
      }
      auto held = e.max_pair(c);
      if (best.has_value() != held.has_value() || (best && !(*best == *held)))
        fail(g, e, "max link of " + std::to_string(c) + " is not the full-scan argmax");
      if (best && (!brute_nominated || e.select_rank(*best).outranks(e.select_rank(*brute_nominated))))
        brute_nominated = best;
      ++communities;
    }
    // The global choice is the best nomination. For every heuristic whose
    // two stages share a score that is also the best pair overall.
    auto chosen = e.select_global_pair();
    auto expect = e.heuristic() == Heuristic::he_prime ? brute_nominated : brute_all;
    if (chosen.has_value() != expect.has_value() || (chosen && !(*chosen == *expect)))
      fail(g, e, "select_global_pair differs from brute force");
    ++selections;
  });
  return {true, std::to_string(communities) + " max links, " + std::to_string(selections) +
                    " global selections"};
}

Verdict structural(const std::vector<Graph>& suite) {
  std::uint64_t audits = 0;
  drive(suite, [&](const Graph& g, const Engine& e) {
    e.audit();
    std::uint64_t ends = 0;
    for (CommunityId c : e.live_communities()) {
      auto list = e.pairs_of(c);
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& v = list[i];
        if (v.lo == v.hi) fail(g, e, "self pair");
        if (v.lo != c && v.hi != c) fail(g, e, "foreign pair in list");
        CommunityId k = v.lo == c ? v.hi : v.lo;
        if (i > 0) {
          const auto& u = list[i - 1];
          if ((u.lo == c ? u.hi : u.lo) >= k) fail(g, e, "list not strictly sorted");
        }
        auto mirror = e.pairs_of(k);
        if (std::count(mirror.begin(), mirror.end(), v) != 1) fail(g, e, "pair not mirrored exactly once");
      }
      ends += list.size();
    }
    if (ends != 2 * e.live_pair_count()) fail(g, e, "pair count mismatch");
    ++audits;
  });
  return {true, std::to_string(audits) + " states audited"};
}

Verdict known_value() {
  Graph g = oracle::bridged_triangles();
  RunResult r = run(g, Heuristic::plain, StopPolicy::negative_dq);
  Partition expect{0, 0, 0, 1, 1, 1};
  auto best = oracle::exhaustive_best_partition(g);
  bool reachable = std::find(best.argmax.begin(), best.argmax.end(), expect) != best.argmax.end();
  bool pass = oracle::canonical(r.final_partition) == expect && r.final_q == 70 &&
              4 * g.num_edges() * g.num_edges() == 196 && best.best == 70 && reachable;
  return {pass, "final Q " + std::to_string(r.final_q) + "/196 after " + std::to_string(r.log.size()) +
                    " merges, exhaustive optimum " + std::to_string(best.best) + "/196"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Drops the trailing elapsed_ns column of every row.
std::string without_elapsed(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

Verdict determinism() {
  fs::path root = fs::temp_directory_path() / "bcnm_acceptance_determinism";
  fs::remove_all(root);
  std::ostringstream sink;
  int runs = 0;
  auto detect = [&](const std::vector<std::string>& source, const std::string& h, const fs::path& dir) {
    std::vector<std::string> args{"detect", "--heuristic", h, "--out", dir.string()};
    args.insert(args.end(), source.begin(), source.end());
    if (run_cli(args, sink, sink) != 0) throw std::runtime_error("detect failed: " + sink.str());
    ++runs;
  };
  const std::vector<std::vector<std::string>> sources{
      {"--model", "ba", "--n", "4000", "--m-attach", "3", "--seed", "11"},
      {"--model", "er", "--n", "3000", "--edges", "9000", "--seed", "12"},
      {"--input", BCNM_TEST_DATA "/bridged_triangles.txt"},
  };
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (Heuristic h : kAll) {
      fs::path a = root / (std::to_string(s) + std::string(to_string(h)) + "_a");
      fs::path b = root / (std::to_string(s) + std::string(to_string(h)) + "_b");
      detect(sources[s], std::string(to_string(h)), a);
      detect(sources[s], std::string(to_string(h)), b);
      for (const char* file : {"partition.csv", "partition_final.csv"})
        if (slurp(a / file) != slurp(b / file)) return {false, std::string(file) + " differs"};
      for (const char* file : {"dendrogram.csv", "mergelog.csv"})
        if (without_elapsed(slurp(a / file)) != without_elapsed(slurp(b / file)))
          return {false, std::string(file) + " differs"};
    }
  }
  fs::remove_all(root);
  return {true, std::to_string(runs) + " CLI runs in identical pairs, outputs byte-identical"};
}

std::optional<std::pair<PairView, PairView>> first_choices(const Graph& g) {
  Engine he(g, Heuristic::he);
  Engine he_prime(g, Heuristic::he_prime);
  auto a = he.select_global_pair();
  auto b = he_prime.select_global_pair();
  if (!a || !b) return std::nullopt;
  return std::make_pair(*a, *b);
}

Verdict distinctness() {
  std::ifstream in(BCNM_TEST_DATA "/he_vs_heprime.txt");
  if (!in) return {false, "tests/data/he_vs_heprime.txt is missing"};
  Graph g = load_edge_list(in);
  auto c = first_choices(g);
  if (!c) return {false, "graph has no pairs"};
  auto [a, b] = *c;
  bool differ = a.lo != b.lo || a.hi != b.hi;
  return {differ && g.num_nodes() <= 20,
          "n=" + std::to_string(g.num_nodes()) + ", he merges (" + std::to_string(a.lo) + "," +
              std::to_string(a.hi) + "), he-prime merges (" + std::to_string(b.lo) + "," +
              std::to_string(b.hi) + ")"};
}

int discover(const std::string& path) {
  std::mt19937_64 rng(2024);
  for (int attempt = 1; attempt <= 100000; ++attempt) {
    NodeId n = static_cast<NodeId>(4 + uniform_below(rng, 17));
    std::uint64_t cap = std::uint64_t{n} * (n - 1) / 2;
    std::uint64_t m = std::min<std::uint64_t>(cap, n - 1 + uniform_below(rng, 2 * n));
    Graph g = generate_er(n, m, rng());
    // Keep only graphs without isolated nodes so the file round-trips.
    bool isolated = false;
    for (NodeId v = 0; v < n; ++v) isolated |= g.degree(v) == 0;
    if (isolated) continue;
    auto c = first_choices(g);
    if (c && (c->first.lo != c->second.lo || c->first.hi != c->second.hi)) {
      std::ofstream out(path);
      out << "# he and he-prime pick different first merges on this graph\n";
      write_edge_list(out, g);
      std::printf("found after %d attempts: n=%u m=%llu\n", attempt, n,
                  static_cast<unsigned long long>(g.num_edges()));
      return 0;
    }
  }
  std::printf("no separating graph found\n");
  return 1;
}

// ----------------------------------------------------------- trend group

struct Timed {
  RunResult result;
  double seconds = 0;
};

Timed timed_run(const Graph& g, Heuristic h) {
  auto t0 = std::chrono::steady_clock::now();
  Timed t{run(g, h, StopPolicy::negative_dq), 0};
  t.seconds = seconds_since(t0);
  return t;
}

double median_ratio_first_half(const MergeLog& log) {
  std::vector<double> r;
  for (std::size_t i = 0; i < log.size() / 2; ++i) r.push_back(log[i].ratio);
  if (r.empty()) return 0;
  std::nth_element(r.begin(), r.begin() + r.size() / 2, r.end());
  return r[r.size() / 2];
}

Verdict unbalanced_merges() {
  int wins = 0;
  std::string detail;
  const std::uint64_t seeds[] = {1, 2, 3};
  for (std::uint64_t seed : seeds) {
    Graph g = generate_ba(20000, 5, seed);
    RunResult plain = run(g, Heuristic::plain, StopPolicy::negative_dq);
    RunResult hn = run(g, Heuristic::hn, StopPolicy::negative_dq);
    auto hp = dendrogram_height(plain.dendrogram);
    auto hh = dendrogram_height(hn.dendrogram);
    double rp = median_ratio_first_half(plain.log);
    double rh = median_ratio_first_half(hn.log);
    bool ok = hp >= 2 * hh && rp < rh;
    wins += ok;
    detail += (detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(seed) + ": height " +
              std::to_string(hp) + " vs " + std::to_string(hh) + ", median ratio " + fmt(rp) + " vs " +
              fmt(rh);
  }
  return {2 * wins > static_cast<int>(std::size(seeds)), detail};
}

Verdict speedup() {
  Graph g = generate_ba(100000, 5, 1);
  Timed hn = timed_run(g, Heuristic::hn);
  Timed he = timed_run(g, Heuristic::he);
  Timed plain = timed_run(g, Heuristic::plain);
  bool pass = hn.seconds < he.seconds && he.seconds < plain.seconds && hn.seconds < 60;
  return {pass, "hn " + fmt(hn.seconds) + " s, he " + fmt(he.seconds) + " s, plain " + fmt(plain.seconds) +
                    " s"};
}

Verdict scaling() {
  const NodeId ladder[] = {10000, 20000, 40000, 80000};
  const std::uint64_t seeds[] = {1, 2, 3};
  std::vector<std::pair<double, double>> plain_pts, hn_pts;
  for (NodeId n : ladder) {
    for (std::uint64_t seed : seeds) {
      Graph g = generate_ba(n, 5, seed);
      plain_pts.emplace_back(n, timed_run(g, Heuristic::plain).seconds);
      hn_pts.emplace_back(n, timed_run(g, Heuristic::hn).seconds);
    }
  }
  PowerLawFit plain = scaling_fit(plain_pts);
  PowerLawFit hn = scaling_fit(hn_pts);
  return {plain.exponent > hn.exponent && hn.exponent <= 1.5,
          "alpha(plain) " + fmt(plain.exponent) + ", alpha(hn) " + fmt(hn.exponent) + " over " +
              std::to_string(hn_pts.size()) + " runs each"};
}

Verdict he_prime_quality() {
  int wins = 0;
  std::string detail;
  const std::uint64_t seeds[] = {1, 2, 3, 4, 5};
  for (std::uint64_t seed : seeds) {
    Graph g = generate_ba(50000, 5, seed);
    RunResult plain = run(g, Heuristic::plain, StopPolicy::negative_dq);
    RunResult prime = run(g, Heuristic::he_prime, StopPolicy::negative_dq);
    wins += prime.best_q >= plain.best_q;
    detail += (detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(seed) + ": " +
              fmt(q_decimal(prime.best_q, plain.m)) + " vs " + fmt(q_decimal(plain.best_q, plain.m));
  }
  return {2 * wins > static_cast<int>(std::size(seeds)), detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::string group = "all";
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--group" && i + 1 < argc) {
      group = argv[++i];
    } else if (a == "--discover" && i + 1 < argc) {
      return discover(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--group exact|trends|all] [--discover FILE]\n");
      return 1;
    }
  }
  const bool exact = group == "exact" || group == "all";
  const bool trends = group == "trends" || group == "all";

  if (exact) {
    auto suite = random_suite(0x5eed, 50, 300);
    report(1, "exact Q oracle", guarded([&] { return exact_q(suite); }));
    report(2, "exact dq oracle", guarded(exact_dq));
    report(3, "max-link and heap integrity", guarded([&] { return max_links_and_heap(suite); }));
    report(4, "structural audit", guarded([&] { return structural(suite); }));
    report(5, "bridged triangles reach Q = 70/196", guarded(known_value));
    report(10, "determinism", guarded(determinism));
    report(11, "he / he-prime distinctness", guarded(distinctness));
  }
  if (trends) {
    report(6, "unbalanced merges under plain", guarded(unbalanced_merges));
    report(7, "speed-up hn < he < plain", guarded(speedup));
    report(8, "scaling exponents", guarded(scaling));
    report(9, "he-prime peak Q vs plain", guarded(he_prime_quality));
  }
  return failures == 0 ? 0 : 1;
}
