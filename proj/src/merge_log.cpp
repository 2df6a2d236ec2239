#include "bcnm/merge_log.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "bcnm/errors.hpp"

namespace bcnm {
namespace {

constexpr std::string_view kMergeLogHeader =
    "step,lo,hi,size_lo,size_hi,members_lo,members_hi,ratio,dq_scaled,q_scaled_after,elapsed_ns";
constexpr std::string_view kDendrogramHeader = "step,left,right,new,dq_scaled,q_scaled,elapsed_ns";
constexpr std::string_view kPartitionHeader = "node_id,community_id";

// Splits one CSV row of plain numeric fields and parses them in order.
class Row {
 public:
  Row(std::string_view line, std::size_t line_no) : rest_(line), line_no_(line_no) {
    if (!rest_.empty() && rest_.back() == '\r') rest_.remove_suffix(1);
  }

  template <class T>
  T next() {
    if (done_) fail("too few columns");
    std::size_t comma = rest_.find(',');
    std::string_view field = rest_.substr(0, comma);
    if (comma == std::string_view::npos) {
      done_ = true;
      rest_ = {};
    } else {
      rest_.remove_prefix(comma + 1);
    }
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      fail("bad value '" + std::string(field) + "'");
    return value;
  }

  void finish() const {
    if (!done_) fail("too many columns");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("line " + std::to_string(line_no_) + ": " + what);
  }

  std::string_view rest_;
  std::size_t line_no_;
  bool done_ = false;
};

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("missing header '" + std::string(header) + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header)
    throw InputError("unexpected header '" + line + "', want '" + std::string(header) + "'");
}

template <class F>
void for_each_row(std::istream& in, F&& f) {
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    Row row(line, line_no);
    f(row);
    row.finish();
  }
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<CommunityId> Dendrogram::parents() const {
  std::vector<CommunityId> parent(static_cast<std::size_t>(leaves) + merges.size());
  for (std::size_t c = 0; c < parent.size(); ++c) parent[c] = static_cast<CommunityId>(c);
  for (const auto& s : merges) {
    if (s.left >= parent.size() || s.right >= parent.size() || s.merged >= parent.size())
      throw InputError("dendrogram references unknown community");
    parent[s.left] = s.merged;
    parent[s.right] = s.merged;
  }
  return parent;
}

Partition Dendrogram::partition_after(std::uint64_t steps) const {
  if (steps > merges.size()) throw std::out_of_range("dendrogram has fewer merges than requested");
  // Ids created by the first `steps` merges are exactly those below leaves + steps.
  const std::uint64_t limit = leaves + steps;
  std::vector<CommunityId> parent = parents();
  std::vector<CommunityId> root(parent.size());
  for (std::size_t c = parent.size(); c-- > 0;) {
    CommunityId p = parent[c];
    root[c] = (p != c && p < limit) ? root[p] : static_cast<CommunityId>(c);
  }
  return Partition(root.begin(), root.begin() + leaves);
}

void write_merge_log(std::ostream& out, const MergeLog& log) {
  out << kMergeLogHeader << '\n';
  for (const auto& r : log) {
    out << r.step << ',' << r.lo << ',' << r.hi << ',' << r.size_lo << ',' << r.size_hi << ','
        << r.members_lo << ',' << r.members_hi << ',' << format_double(r.ratio) << ','
        << r.dq_scaled << ',' << r.q_scaled_after << ',' << r.elapsed_ns << '\n';
  }
}

MergeLog read_merge_log(std::istream& in) {
  expect_header(in, kMergeLogHeader);
  MergeLog log;
  for_each_row(in, [&](Row& row) {
    MergeRecord r;
    r.step = row.next<std::uint64_t>();
    r.lo = row.next<CommunityId>();
    r.hi = row.next<CommunityId>();
    r.size_lo = row.next<std::uint64_t>();
    r.size_hi = row.next<std::uint64_t>();
    r.members_lo = row.next<std::uint64_t>();
    r.members_hi = row.next<std::uint64_t>();
    r.ratio = row.next<double>();
    r.dq_scaled = row.next<ScaledQ>();
    r.q_scaled_after = row.next<ScaledQ>();
    r.elapsed_ns = row.next<std::uint64_t>();
    log.push_back(r);
  });
  return log;
}

void write_dendrogram(std::ostream& out, const Dendrogram& d) {
  out << kDendrogramHeader << '\n';
  for (const auto& s : d.merges) {
    out << s.step << ',' << s.left << ',' << s.right << ',' << s.merged << ',' << s.dq_scaled << ','
        << s.q_scaled << ',' << s.elapsed_ns << '\n';
  }
}

Dendrogram read_dendrogram(std::istream& in, NodeId leaves) {
  expect_header(in, kDendrogramHeader);
  Dendrogram d;
  for_each_row(in, [&](Row& row) {
    DendrogramStep s;
    s.step = row.next<std::uint64_t>();
    s.left = row.next<CommunityId>();
    s.right = row.next<CommunityId>();
    s.merged = row.next<CommunityId>();
    s.dq_scaled = row.next<ScaledQ>();
    s.q_scaled = row.next<ScaledQ>();
    s.elapsed_ns = row.next<std::uint64_t>();
    d.merges.push_back(s);
  });
  if (leaves == 0 && !d.merges.empty()) {
    const auto& first = d.merges.front();
    if (first.merged + 1 < first.step) throw InputError("dendrogram ids are inconsistent");
    leaves = static_cast<NodeId>(first.merged + 1 - first.step);
  }
  d.leaves = leaves;
  return d;
}

void write_partition(std::ostream& out, const Graph& g, std::span<const CommunityId> p) {
  out << kPartitionHeader << '\n';
  for (NodeId v = 0; v < g.num_nodes(); ++v) out << g.label(v) << ',' << p[v] << '\n';
}

LabeledPartition read_partition(std::istream& in) {
  expect_header(in, kPartitionHeader);
  LabeledPartition p;
  for_each_row(in, [&](Row& row) {
    p.nodes.push_back(row.next<std::uint64_t>());
    p.communities.push_back(row.next<std::uint64_t>());
  });
  return p;
}

}  // namespace bcnm
