#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bcnm/modularity.hpp"

namespace bcnm {

enum class Heuristic { plain, he, he_prime, hn };

/// Accepts plain, he, he-prime, hn and the alias ne. Case-sensitive.
std::optional<Heuristic> parse_heuristic(std::string_view name);
std::string_view to_string(Heuristic h);

/// What |c| means when a score is formed.
enum class SizeMeasure {
  none,     // ratio fixed at 1
  links,    // number of neighbouring communities (pair-list length)
  members,  // number of member nodes
};

enum class Stage { nominate, select };

/// Stage 1 (nominate) picks each community's best pair; stage 2 (select)
/// picks the global best among nominations.
constexpr SizeMeasure size_measure(Heuristic h, Stage s) {
  switch (h) {
    case Heuristic::plain:
      return SizeMeasure::none;
    case Heuristic::he:
      return SizeMeasure::links;
    case Heuristic::he_prime:
      return s == Stage::nominate ? SizeMeasure::none : SizeMeasure::links;
    case Heuristic::hn:
      return SizeMeasure::members;
  }
  return SizeMeasure::none;
}

/// Size measure recorded in merge logs: members for hn, links otherwise.
constexpr SizeMeasure logged_size_measure(Heuristic h) {
  return h == Heuristic::hn ? SizeMeasure::members : SizeMeasure::links;
}

/// Consolidation ratio min(a/b, b/a) kept as an exact fraction num/den.
struct Ratio {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Throws std::invalid_argument when either size is zero.
inline Ratio ratio(std::uint64_t size_i, std::uint64_t size_j) {
  if (size_i == 0 || size_j == 0) throw std::invalid_argument("community size must be positive");
  return size_i < size_j ? Ratio{size_i, size_j} : Ratio{size_j, size_i};
}

/// dq * num / den, compared exactly.
struct Score {
  ScaledQ dq = 0;
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  static Score of(ScaledQ dq, Ratio r) { return {dq, r.num, r.den}; }
};

inline std::strong_ordering compare(const Score& a, const Score& b) {
  if (a.num == a.den && b.num == b.den) return a.dq <=> b.dq;
  const int sa = (a.dq > 0) - (a.dq < 0);
  const int sb = (b.dq > 0) - (b.dq < 0);
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;

  // |dq| < 2^63, num and den < 2^32: each product stays below 2^127.
  using u128 = unsigned __int128;
  auto mag = [](ScaledQ x) { return x < 0 ? u128(-(x + 1)) + 1 : u128(x); };
  const u128 lhs = mag(a.dq) * a.num * b.den;
  const u128 rhs = mag(b.dq) * b.num * a.den;
  return sa > 0 ? lhs <=> rhs : rhs <=> lhs;
}

// Exact comparison on the rational value; ties are left to the caller.
inline std::strong_ordering operator<=>(const Score& a, const Score& b) { return compare(a, b); }
inline bool operator==(const Score& a, const Score& b) { return std::is_eq(compare(a, b)); }

/// Score of a pair given the two communities' sizes under `measure`.
inline Score score_pair(SizeMeasure measure, ScaledQ dq, std::uint64_t size_i, std::uint64_t size_j) {
  if (measure == SizeMeasure::none) return {dq, 1, 1};
  return Score::of(dq, ratio(size_i, size_j));
}

/// Both size measures of one side of a pair.
struct CommunitySizes {
  std::uint64_t links = 0;
  std::uint64_t members = 0;

  std::uint64_t under(SizeMeasure measure) const {
    return measure == SizeMeasure::members ? members : links;
  }
};

inline Score stage_score(Heuristic h, Stage s, ScaledQ dq, const CommunitySizes& a,
                         const CommunitySizes& b) {
  SizeMeasure measure = size_measure(h, s);
  return score_pair(measure, dq, a.under(measure), b.under(measure));
}

inline Score stage1_score(Heuristic h, ScaledQ dq, const CommunitySizes& a,
                          const CommunitySizes& b) {
  return stage_score(h, Stage::nominate, dq, a, b);
}

inline Score stage2_score(Heuristic h, ScaledQ dq, const CommunitySizes& a,
                          const CommunitySizes& b) {
  return stage_score(h, Stage::select, dq, a, b);
}

}  // namespace bcnm
