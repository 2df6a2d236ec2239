#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bcnm/merge_log.hpp"

namespace bcnm {

struct RatioPoint {
  std::uint64_t step = 0;
  double ratio = 0.0;
};

/// Consolidation ratio of every merge. Throws InputError on an empty log.
std::vector<RatioPoint> ratio_series(const MergeLog& log);

struct TimeBucket {
  std::uint64_t index = 0;
  std::uint64_t merges = 0;
  std::uint64_t elapsed_ns = 0;
  double seconds() const { return static_cast<double>(elapsed_ns) * 1e-9; }
};

/// Elapsed time per run of `bucket` consecutive merges; the last bucket may
/// be partial.
std::vector<TimeBucket> time_buckets(const MergeLog& log, std::uint64_t bucket = 10000);

struct ProgressPoint {
  std::uint64_t step = 0;
  double x = 0.0;  // step, or elapsed fraction in [0, 1] when normalized
  double q = 0.0;
};

/// Q after every merge. With `normalize`, x is the cumulative share of total
/// merge time (falling back to the share of steps if no time was recorded).
std::vector<ProgressPoint> q_progress(const MergeLog& log, std::uint64_t m, bool normalize);

struct SizeBin {
  std::uint64_t lower = 0;  // inclusive
  std::uint64_t upper = 0;  // exclusive
  std::uint64_t count = 0;
};

/// Number of communities per logarithmic size bin [base^b, base^(b+1)).
/// Bins run from size 1 up to the largest community, empty ones included.
std::vector<SizeBin> size_histogram(std::span<const CommunityId> partition, std::uint64_t base = 10);

/// Longest leaf-to-root path in the merge forest; a lone leaf has height 0.
std::uint64_t dendrogram_height(const Dendrogram& d);

struct PowerLawFit {
  double exponent = 0.0;
  double coefficient = 0.0;
};

/// Least-squares fit of log T = a log n + log c over (n, seconds) points.
/// Needs at least three points with positive values and two distinct n.
PowerLawFit scaling_fit(std::span<const std::pair<double, double>> points);

/// Plot-ready table with typed cells; rendering is deterministic.
struct Table {
  using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

Table to_table(std::span<const RatioPoint> rows);
Table to_table(std::span<const TimeBucket> rows);
Table to_table(std::span<const ProgressPoint> rows, bool normalized);
Table to_table(std::span<const SizeBin> rows);

void write_csv(std::ostream& out, const Table& t);
/// JSON array with one object per row.
void write_json(std::ostream& out, const Table& t);

}  // namespace bcnm
