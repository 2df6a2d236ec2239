#include "bcnm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "bcnm/engine.hpp"
#include "bcnm/errors.hpp"
#include "bcnm/generators.hpp"
#include "bcnm/graph.hpp"
#include "bcnm/metrics.hpp"

namespace bcnm {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct SourceFlags {
  std::string input;
  bool renumber = false;
  std::string model;
  NodeId n = 0;
  std::uint32_t m_attach = 5;
  std::uint64_t edges = 0;
  std::uint64_t seed = 1;
};

void add_source_flags(CLI::App& cmd, SourceFlags& f) {
  auto* input = cmd.add_option("--input", f.input, "Edge-list file (plain or gzip)");
  cmd.add_flag("--renumber", f.renumber, "Compact node ids in first-appearance order");
  auto* model = cmd.add_option("--model", f.model, "Generate the input instead: ba or er")
                    ->check(CLI::IsMember({"ba", "er"}));
  input->excludes(model);
  cmd.add_option("--n", f.n, "Generated node count");
  cmd.add_option("--m-attach", f.m_attach, "BA edges per new node");
  cmd.add_option("--edges", f.edges, "ER edge count");
  cmd.add_option("--seed", f.seed, "PRNG seed");
}

GenSpec gen_spec(const SourceFlags& f) {
  GenSpec spec;
  spec.model = f.model == "er" ? GraphModel::er : GraphModel::ba;
  spec.n = f.n;
  spec.m_attach = f.m_attach;
  spec.edges = f.edges;
  spec.seed = f.seed;
  return spec;
}

Json gen_metadata(const GenSpec& spec) {
  Json j;
  j["model"] = spec.model == GraphModel::ba ? "ba" : "er";
  j["n"] = spec.n;
  if (spec.model == GraphModel::ba)
    j["m_attach"] = spec.m_attach;
  else
    j["edges"] = spec.edges;
  j["seed"] = spec.seed;
  j["prng"] = std::string(kPrngName);
  return j;
}

struct LoadedInput {
  Graph graph;
  Json source;
};

LoadedInput load_source(const SourceFlags& f) {
  LoadedInput in;
  if (!f.input.empty()) {
    in.graph = load_edge_list_file(f.input, {.renumber = f.renumber});
    in.source["input"] = f.input;
    in.source["renumber"] = f.renumber;
  } else if (!f.model.empty()) {
    GenSpec spec = gen_spec(f);
    in.graph = generate(spec);
    in.source["generator"] = gen_metadata(spec);
  } else {
    throw CLI::ValidationError("input", "one of --input or --model is required");
  }
  check_supported(in.graph);
  return in;
}

Heuristic heuristic_of(const std::string& name) {
  auto h = parse_heuristic(name);
  if (!h) throw CLI::ValidationError("--heuristic", "unknown heuristic '" + name + "'");
  return *h;
}

const CLI::Validator& heuristic_check() {
  static const CLI::Validator check(
      [](std::string& s) -> std::string {
        return parse_heuristic(s) ? "" : "unknown heuristic '" + s + "' (plain|he|he-prime|hn|ne)";
      },
      "HEURISTIC");
  return check;
}

StopPolicy stop_of(const std::string& s) {
  return s == "complete" ? StopPolicy::complete : StopPolicy::negative_dq;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open " + p.string());
  return in;
}

std::uint64_t community_count(const Partition& p) {
  Partition sorted = p;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::uint64_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

Json summarize(const Graph& g, const RunResult& r, StopPolicy stop) {
  Json j;
  j["n"] = g.num_nodes();
  j["m"] = g.num_edges();
  j["heuristic"] = std::string(to_string(r.heuristic));
  j["stop"] = stop == StopPolicy::complete ? "complete" : "negative-dq";
  j["merges"] = r.log.size();
  j["peak_step"] = r.best_step;
  j["peak_q_scaled"] = r.best_q;
  j["peak_q"] = q_decimal(r.best_q, r.m);
  j["final_q_scaled"] = r.final_q;
  j["final_q"] = q_decimal(r.final_q, r.m);
  j["communities_peak"] = community_count(r.best_partition);
  j["communities_final"] = community_count(r.final_partition);
  j["dendrogram_height"] = dendrogram_height(r.dendrogram);
  j["elapsed_ns"] = r.elapsed_ns;
  j["elapsed_seconds"] = static_cast<double>(r.elapsed_ns) * 1e-9;
  return j;
}

void write_table(std::ostream& out, const Table& t, const std::string& format) {
  if (format == "json")
    write_json(out, t);
  else
    write_csv(out, t);
}

Json read_json(const fs::path& p) {
  std::ifstream in = open_in(p);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

template <class T>
T json_field(const Json& j, const char* key, const fs::path& where) {
  if (!j.contains(key)) throw InputError(where.string() + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(where.string() + ": field '" + key + "' has the wrong type");
  }
}

// ---------------------------------------------------------------- detect

struct DetectFlags {
  SourceFlags source;
  std::string heuristic = "plain";
  std::string stop = "negative-dq";
  std::string out_dir = ".";
  std::vector<std::string> emit{"partition", "dendrogram", "mergelog"};
  bool audit = false;
  std::uint64_t bucket = 10000;
  std::string format = "csv";
};

int cmd_detect(const DetectFlags& f, std::ostream& out) {
  LoadedInput in = load_source(f.source);
  const Heuristic h = heuristic_of(f.heuristic);
  const StopPolicy stop = stop_of(f.stop);

  MergeObserver observer;
  if (f.audit) observer = [](const Engine& e) { e.audit(); };
  RunResult r = run(in.graph, h, stop, observer);

  fs::path dir(f.out_dir);
  fs::create_directories(dir);
  auto wants = [&](const char* what) {
    return std::find(f.emit.begin(), f.emit.end(), what) != f.emit.end();
  };
  if (wants("partition")) {
    auto best = open_out(dir / "partition.csv");
    write_partition(best, in.graph, r.best_partition);
    auto last = open_out(dir / "partition_final.csv");
    write_partition(last, in.graph, r.final_partition);
  }
  if (wants("dendrogram")) {
    auto o = open_out(dir / "dendrogram.csv");
    write_dendrogram(o, r.dendrogram);
  }
  if (wants("mergelog")) {
    auto o = open_out(dir / "mergelog.csv");
    write_merge_log(o, r.log);
  }
  if (wants("reports") && !r.log.empty()) {
    const std::string ext = f.format == "json" ? ".json" : ".csv";
    auto ratio_out = open_out(dir / ("ratio" + ext));
    write_table(ratio_out, to_table(std::span<const RatioPoint>(ratio_series(r.log))), f.format);
    auto bucket_out = open_out(dir / ("buckets" + ext));
    write_table(bucket_out, to_table(std::span<const TimeBucket>(time_buckets(r.log, f.bucket))),
                f.format);
    auto progress_out = open_out(dir / ("progress" + ext));
    write_table(progress_out,
                to_table(std::span<const ProgressPoint>(q_progress(r.log, r.m, true)), true),
                f.format);
    auto hist_out = open_out(dir / ("hist" + ext));
    write_table(hist_out, to_table(std::span<const SizeBin>(size_histogram(r.best_partition))),
                f.format);
  }

  Json summary = in.source;
  summary.update(summarize(in.graph, r, stop));
  auto s = open_out(dir / "summary.json");
  s << summary.dump(2) << '\n';

  out << "merges " << r.log.size() << ", peak Q " << q_decimal(r.best_q, r.m) << " at step "
      << r.best_step << ", final Q " << q_decimal(r.final_q, r.m) << '\n';
  return kExitOk;
}

// -------------------------------------------------------------- generate

struct GenerateFlags {
  SourceFlags source;
  std::string out_path;
};

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  if (f.source.model.empty()) throw CLI::ValidationError("--model", "is required");
  GenSpec spec = gen_spec(f.source);
  Graph g = generate(spec);
  fs::path path(f.out_path);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  {
    auto o = open_out(path);
    write_edge_list(o, g);
  }
  Json meta = gen_metadata(spec);
  meta["nodes"] = g.num_nodes();
  meta["edge_count"] = g.num_edges();
  auto m = open_out(fs::path(path.string() + ".json"));
  m << meta.dump(2) << '\n';
  out << "wrote " << g.num_nodes() << " nodes, " << g.num_edges() << " edges to " << path.string()
      << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportFlags {
  std::string which;
  std::string log_path;
  std::string dendrogram_path;
  std::string partition_path;
  std::vector<std::string> summaries;
  std::uint64_t edges = 0;
  std::uint64_t bucket = 10000;
  std::uint64_t base = 10;
  bool normalize = false;
  std::string format = "csv";
  std::string output;
};

MergeLog load_log(const ReportFlags& f) {
  if (f.log_path.empty()) throw CLI::ValidationError("--log", "is required for this report");
  auto in = open_in(f.log_path);
  return read_merge_log(in);
}

int cmd_report(const ReportFlags& f, std::ostream& stdout_stream) {
  Table table;
  if (f.which == "ratio") {
    auto rows = ratio_series(load_log(f));
    table = to_table(std::span<const RatioPoint>(rows));
  } else if (f.which == "buckets") {
    auto rows = time_buckets(load_log(f), f.bucket);
    table = to_table(std::span<const TimeBucket>(rows));
  } else if (f.which == "progress") {
    std::uint64_t m = f.edges;
    if (m == 0 && !f.summaries.empty())
      m = json_field<std::uint64_t>(read_json(f.summaries.front()), "m", f.summaries.front());
    if (m == 0) throw CLI::ValidationError("--edges", "progress needs --edges or --summary");
    auto rows = q_progress(load_log(f), m, f.normalize);
    table = to_table(std::span<const ProgressPoint>(rows), f.normalize);
  } else if (f.which == "hist") {
    if (f.partition_path.empty()) throw CLI::ValidationError("--partition", "is required");
    auto in = open_in(f.partition_path);
    LabeledPartition lp = read_partition(in);
    Partition p(lp.communities.begin(), lp.communities.end());
    auto rows = size_histogram(p, f.base);
    table = to_table(std::span<const SizeBin>(rows));
  } else if (f.which == "height") {
    if (f.dendrogram_path.empty()) throw CLI::ValidationError("--dendrogram", "is required");
    auto in = open_in(f.dendrogram_path);
    Dendrogram d = read_dendrogram(in);
    table.columns = {"height", "merges"};
    table.rows.push_back({dendrogram_height(d), static_cast<std::uint64_t>(d.merges.size())});
  } else if (f.which == "fit") {
    std::vector<std::pair<double, double>> points;
    for (const auto& s : f.summaries) {
      Json j = read_json(s);
      points.emplace_back(json_field<double>(j, "n", s), json_field<double>(j, "elapsed_seconds", s));
    }
    PowerLawFit fit = scaling_fit(points);
    table.columns = {"points", "exponent", "coefficient"};
    table.rows.push_back({static_cast<std::uint64_t>(points.size()), fit.exponent, fit.coefficient});
  }

  if (f.output.empty()) {
    write_table(stdout_stream, table, f.format);
  } else {
    auto o = open_out(f.output);
    write_table(o, table, f.format);
  }
  return kExitOk;
}

// --------------------------------------------------------------- compare

struct CompareFlags {
  SourceFlags source;
  std::vector<std::string> heuristics;
  std::string stop = "negative-dq";
  bool parallel = false;
  std::string format = "csv";
  std::string output;
};

int cmd_compare(const CompareFlags& f, std::ostream& stdout_stream) {
  if (f.heuristics.size() < 2)
    throw CLI::ValidationError("--heuristics", "compare needs at least two heuristics");
  LoadedInput in = load_source(f.source);
  const StopPolicy stop = stop_of(f.stop);

  std::vector<Heuristic> hs;
  for (const auto& name : f.heuristics) hs.push_back(heuristic_of(name));
  std::vector<RunResult> results(hs.size());
  if (f.parallel) {
    std::vector<std::exception_ptr> errors(hs.size());
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < hs.size(); ++i)
      workers.emplace_back([&, i] {
        try {
          results[i] = run(in.graph, hs[i], stop);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    for (auto& w : workers) w.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::size_t i = 0; i < hs.size(); ++i) results[i] = run(in.graph, hs[i], stop);
  }

  Table table;
  table.columns = {"heuristic", "elapsed_seconds", "peak_q", "peak_q_scaled", "merges",
                   "peak_step", "dendrogram_height"};
  for (const auto& r : results) {
    table.rows.push_back({std::string(to_string(r.heuristic)),
                          static_cast<double>(r.elapsed_ns) * 1e-9, q_decimal(r.best_q, r.m),
                          static_cast<std::int64_t>(r.best_q),
                          static_cast<std::uint64_t>(r.log.size()), r.best_step,
                          dendrogram_height(r.dendrogram)});
  }
  if (f.output.empty()) {
    write_table(stdout_stream, table, f.format);
  } else {
    auto o = open_out(f.output);
    write_table(o, table, f.format);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Greedy modularity community detection with consolidation-ratio heuristics",
               "bcnm"};
  app.require_subcommand(1);

  DetectFlags detect;
  auto* detect_cmd = app.add_subcommand("detect", "Run community detection on one graph");
  add_source_flags(*detect_cmd, detect.source);
  detect_cmd->add_option("--heuristic", detect.heuristic, "plain|he|he-prime|hn|ne")
      ->check(heuristic_check());
  detect_cmd->add_option("--stop", detect.stop, "negative-dq|complete")
      ->check(CLI::IsMember({"negative-dq", "complete"}));
  detect_cmd->add_option("--out", detect.out_dir, "Output directory");
  detect_cmd->add_option("--emit", detect.emit, "partition,dendrogram,mergelog,reports")
      ->delimiter(',')
      ->check(CLI::IsMember({"partition", "dendrogram", "mergelog", "reports"}));
  detect_cmd->add_flag("--audit", detect.audit, "Audit engine invariants after every merge");
  detect_cmd->add_option("--bucket", detect.bucket, "Merges per time bucket in reports");
  detect_cmd->add_option("--format", detect.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));

  GenerateFlags gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic graph as an edge list");
  add_source_flags(*gen_cmd, gen.source);
  gen_cmd->add_option("--out", gen.out_path, "Edge-list path; metadata goes to <path>.json")
      ->required();

  ReportFlags report;
  auto* report_cmd = app.add_subcommand("report", "Derive a table from run outputs");
  report_cmd->add_option("--which", report.which, "ratio|buckets|progress|hist|height|fit")
      ->required()
      ->check(CLI::IsMember({"ratio", "buckets", "progress", "hist", "height", "fit"}));
  report_cmd->add_option("--log", report.log_path, "mergelog.csv");
  report_cmd->add_option("--dendrogram", report.dendrogram_path, "dendrogram.csv");
  report_cmd->add_option("--partition", report.partition_path, "partition.csv");
  report_cmd->add_option("--summary", report.summaries, "summary.json (repeatable)");
  report_cmd->add_option("--edges", report.edges, "Edge count m for Q scaling");
  report_cmd->add_option("--bucket", report.bucket, "Merges per bucket");
  report_cmd->add_option("--base", report.base, "Histogram log base");
  report_cmd->add_flag("--normalize", report.normalize, "Normalize progress by elapsed time");
  report_cmd->add_option("--format", report.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  report_cmd->add_option("--out", report.output, "Output file (default stdout)");

  CompareFlags compare;
  auto* compare_cmd = app.add_subcommand("compare", "Run several heuristics on one graph");
  add_source_flags(*compare_cmd, compare.source);
  compare_cmd->add_option("--heuristics", compare.heuristics, "Comma-separated list")
      ->required()
      ->delimiter(',')
      ->check(heuristic_check());
  compare_cmd->add_option("--stop", compare.stop, "negative-dq|complete")
      ->check(CLI::IsMember({"negative-dq", "complete"}));
  compare_cmd->add_flag("--parallel", compare.parallel, "Run heuristics concurrently");
  compare_cmd->add_option("--format", compare.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  compare_cmd->add_option("--out", compare.output, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (*detect_cmd) return cmd_detect(detect, out);
    if (*gen_cmd) return cmd_generate(gen, out);
    if (*report_cmd) return cmd_report(report, out);
    if (*compare_cmd) return cmd_compare(compare, out);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace bcnm
