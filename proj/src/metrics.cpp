#include "bcnm/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

#include "bcnm/errors.hpp"

namespace bcnm {
namespace {

std::string render(const Table::Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          char buf[64];
          auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
          return std::string(buf, ptr);
        }
      },
      cell);
}

}  // namespace

std::vector<RatioPoint> ratio_series(const MergeLog& log) {
  if (log.empty()) throw InputError("merge log is empty");
  std::vector<RatioPoint> out;
  out.reserve(log.size());
  for (const auto& r : log) out.push_back({r.step, r.ratio});
  return out;
}

std::vector<TimeBucket> time_buckets(const MergeLog& log, std::uint64_t bucket) {
  if (log.empty()) throw InputError("merge log is empty");
  if (bucket == 0) throw InputError("bucket size must be positive");
  std::vector<TimeBucket> out((log.size() + bucket - 1) / bucket);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
  for (std::size_t i = 0; i < log.size(); ++i) {
    TimeBucket& b = out[i / bucket];
    ++b.merges;
    b.elapsed_ns += log[i].elapsed_ns;
  }
  return out;
}

std::vector<ProgressPoint> q_progress(const MergeLog& log, std::uint64_t m, bool normalize) {
  if (log.empty()) throw InputError("merge log is empty");
  if (m == 0) throw InputError("edge count must be positive");
  std::uint64_t total = 0;
  for (const auto& r : log) total += r.elapsed_ns;
  const bool by_time = total > 0;

  std::vector<ProgressPoint> out;
  out.reserve(log.size());
  std::uint64_t cumulative = 0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    cumulative += log[i].elapsed_ns;
    ProgressPoint p;
    p.step = log[i].step;
    p.q = q_decimal(log[i].q_scaled_after, m);
    if (!normalize)
      p.x = static_cast<double>(log[i].step);
    else if (by_time)
      p.x = static_cast<double>(cumulative) / static_cast<double>(total);
    else
      p.x = static_cast<double>(i + 1) / static_cast<double>(log.size());
    out.push_back(p);
  }
  return out;
}

std::vector<SizeBin> size_histogram(std::span<const CommunityId> partition, std::uint64_t base) {
  if (base < 2) throw InputError("histogram base must be at least 2");
  std::unordered_map<CommunityId, std::uint64_t> sizes;
  for (CommunityId c : partition) ++sizes[c];
  std::uint64_t largest = 0;
  for (const auto& [c, s] : sizes) largest = std::max(largest, s);

  std::vector<SizeBin> bins;
  for (std::uint64_t lower = 1; lower <= largest; lower *= base) {
    bins.push_back({lower, lower * base, 0});
    if (lower > largest / base) break;
  }
  for (const auto& [c, s] : sizes) {
    std::size_t b = 0;
    while (s >= bins[b].upper) ++b;
    ++bins[b].count;
  }
  return bins;
}

std::uint64_t dendrogram_height(const Dendrogram& d) {
  std::unordered_map<CommunityId, std::uint64_t> height;
  std::uint64_t best = 0;
  auto of = [&](CommunityId c) {
    auto it = height.find(c);
    return it == height.end() ? std::uint64_t{0} : it->second;
  };
  for (const auto& s : d.merges) {
    std::uint64_t h = 1 + std::max(of(s.left), of(s.right));
    height[s.merged] = h;
    best = std::max(best, h);
  }
  return best;
}

PowerLawFit scaling_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw InputError("scaling fit needs at least three points");
  double sx = 0, sy = 0;
  for (auto [n, t] : points) {
    if (!(n > 0) || !(t > 0)) throw InputError("scaling fit needs positive n and time");
    sx += std::log(n);
    sy += std::log(t);
  }
  const double k = static_cast<double>(points.size());
  const double mx = sx / k;
  const double my = sy / k;
  double sxx = 0, sxy = 0;
  for (auto [n, t] : points) {
    double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(t) - my);
  }
  if (sxx <= 0) throw InputError("scaling fit needs at least two distinct sizes");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.coefficient = std::exp(my - fit.exponent * mx);
  return fit;
}

Table to_table(std::span<const RatioPoint> rows) {
  Table t{{"step", "ratio"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.step, r.ratio});
  return t;
}

Table to_table(std::span<const TimeBucket> rows) {
  Table t{{"bucket", "merges", "elapsed_ns", "seconds"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.index, r.merges, r.elapsed_ns, r.seconds()});
  return t;
}

Table to_table(std::span<const ProgressPoint> rows, bool normalized) {
  Table t{{"step", normalized ? "elapsed_fraction" : "x", "q"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.step, r.x, r.q});
  return t;
}

Table to_table(std::span<const SizeBin> rows) {
  Table t{{"size_lower", "size_upper", "communities"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.lower, r.upper, r.count});
  return t;
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { obj[t.columns[i]] = v; }, row[i]);
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

}  // namespace bcnm
