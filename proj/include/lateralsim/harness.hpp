#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "lateralsim/blue_spec.hpp"
#include "lateralsim/episode.hpp"

namespace lateralsim {

using PolicyFactory = std::function<PolicyPtr()>;

struct TrialConfig {
  std::string blue_spec;
  RedAgentKind red = RedAgentKind::BLine;
  std::uint64_t max_steps = 30;
  std::uint64_t episodes = 1000;
  std::uint64_t base_seed = 0;
  unsigned jobs = 1;
  bool keep_traces = false;
};

inline std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t episode) { return base_seed + episode; }

using ActionCounts = std::array<std::uint64_t, kBlueActionKindCount>;
using ActionPercentages = std::array<double, kBlueActionKindCount>;

struct TrialResult {
  TrialConfig config;
  std::vector<double> totals;  // per episode, in episode order
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  ActionCounts action_counts{};
  ActionPercentages action_percentages{};
  std::vector<EpisodeTrace> traces;  // only with keep_traces
};

// ---------------------------------------------------------------------------
// Statistics

namespace detail {

// Two-sided critical value of the standard normal for the given level.
inline double normal_critical_value(double level) {
  if (std::abs(level - 0.95) < 1e-12) return 1.959964;
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0, 1)");
  const double tail = (1.0 - level) / 2.0;
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(mid / std::sqrt(2.0)) > tail ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Normal-approximation interval: mean +/- z * s / sqrt(n), s with n-1 denominator.
inline std::pair<double, double> confidence_interval(std::span<const double> xs, double level = 0.95) {
  if (xs.empty()) throw std::invalid_argument("confidence interval of empty sample");
  const double mean = sample_mean(xs);
  if (xs.size() == 1) return {mean, mean};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double n = static_cast<double>(xs.size());
  const double half = detail::normal_critical_value(level) * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return {mean - half, mean + half};
}

// ---------------------------------------------------------------------------
// Action-type distribution

inline void count_actions(const EpisodeTrace& trace, ActionCounts& counts) {
  for (const auto& r : trace.records) ++counts[static_cast<std::size_t>(r.blue.kind)];
}

inline ActionPercentages percentages(const ActionCounts& counts) {
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  ActionPercentages out{};
  if (total == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = 100.0 * static_cast<double>(counts[i]) / total;
  return out;
}

inline ActionPercentages action_distribution(std::span<const EpisodeTrace> traces) {
  if (traces.empty()) throw std::invalid_argument("action_distribution: no traces");
  ActionCounts counts{};
  for (const auto& t : traces) count_actions(t, counts);
  return percentages(counts);
}

// Percentages in millionths of a percent, rounded by largest remainder so the
// six-decimal rendering of a row sums to exactly 100.
inline std::array<std::int64_t, kBlueActionKindCount> apportion_micro_percent(const ActionCounts& counts) {
  std::array<std::int64_t, kBlueActionKindCount> out{};
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) return out;
  constexpr std::int64_t kScale = 100'000'000;  // 100% in 1e-6 units
  std::array<std::pair<unsigned __int128, std::size_t>, kBlueActionKindCount> rem{};
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const unsigned __int128 num = static_cast<unsigned __int128>(counts[i]) * kScale;
    out[i] = static_cast<std::int64_t>(num / total);
    rem[i] = {num % total, i};
    assigned += out[i];
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < kScale; ++k, ++assigned) ++out[rem[k].second];
  return out;
}

inline std::string micro_percent_string(std::int64_t v) {
  const auto whole = v / 1'000'000;
  const auto frac = v % 1'000'000;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%lld.%06lld", static_cast<long long>(whole), static_cast<long long>(frac));
  return buf;
}

// ---------------------------------------------------------------------------
// Trials

// Episodes may run on any worker; each worker owns one policy instance and
// results are aggregated in episode order, so the outcome is independent of jobs.
inline TrialResult run_trial(const Network& net, const TrialConfig& cfg, const PolicyFactory& factory) {
  if (cfg.episodes < 1) throw std::invalid_argument("trial needs at least one episode");
  if (cfg.max_steps < 1) throw std::invalid_argument("trial needs at least one step");

  TrialResult result;
  result.config = cfg;
  result.totals.assign(cfg.episodes, 0.0);
  std::vector<ActionCounts> counts(cfg.episodes);
  if (cfg.keep_traces) result.traces.resize(cfg.episodes);

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::uint64_t first_error_episode = ~std::uint64_t{0};

  auto worker = [&] {
    PolicyPtr policy;
    for (;;) {
      const auto ep = next.fetch_add(1);
      if (ep >= cfg.episodes || failed.load()) return;
      try {
        if (!policy) policy = factory();
        EpisodeTrace trace =
            run_episode(net, *policy, {cfg.red, cfg.max_steps, episode_seed(cfg.base_seed, ep), ep});
        result.totals[ep] = trace.total_reward;
        count_actions(trace, counts[ep]);
        if (cfg.keep_traces) result.traces[ep] = std::move(trace);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (ep < first_error_episode) {
          first_error_episode = ep;
          first_error = std::current_exception();
        }
        failed = true;
        return;
      }
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.episodes)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const std::exception& e) {
      throw Error("trial " + cfg.blue_spec + " vs " + std::string(to_string(cfg.red)) + " (" +
                  std::to_string(cfg.max_steps) + " steps) failed in episode " +
                  std::to_string(first_error_episode) + ": " + e.what());
    }
  }

  result.mean = sample_mean(result.totals);
  std::tie(result.ci_low, result.ci_high) = confidence_interval(result.totals);
  for (const auto& c : counts) {
    for (std::size_t i = 0; i < c.size(); ++i) result.action_counts[i] += c[i];
  }
  result.action_percentages = percentages(result.action_counts);
  return result;
}

inline TrialResult run_trial(const Network& net, const TrialConfig& cfg) {
  const BlueSpec spec = parse_blue_spec(cfg.blue_spec);
  return run_trial(net, cfg, [&] { return make_policy(spec, net); });
}

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { Csv, Jsonl };

struct ReportOptions {
  ReportFormat format = ReportFormat::Csv;
  bool traces = false;
};

struct RadarRow {
  std::string blue;
  std::string slice;
  ActionCounts counts{};
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string json_str(const std::string& s) { return nlohmann::json(s).dump(); }

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace detail

inline std::string results_table(std::span<const TrialResult> results, ReportFormat format = ReportFormat::Csv) {
  std::string out;
  if (format == ReportFormat::Csv) out = "blue,red,steps,episodes,mean,ci_low,ci_high\n";
  for (const auto& r : results) {
    const auto& c = r.config;
    if (format == ReportFormat::Csv) {
      out += detail::csv_field(c.blue_spec) + "," + std::string(to_string(c.red)) + "," + std::to_string(c.max_steps) +
             "," + std::to_string(c.episodes) + "," + fixed6(r.mean) + "," + fixed6(r.ci_low) + "," +
             fixed6(r.ci_high) + "\n";
    } else {
      out += "{\"blue\":" + detail::json_str(c.blue_spec) + ",\"red\":\"" + std::string(to_string(c.red)) +
             "\",\"steps\":" + std::to_string(c.max_steps) + ",\"episodes\":" + std::to_string(c.episodes) +
             ",\"mean\":" + fixed6(r.mean) + ",\"ci_low\":" + fixed6(r.ci_low) + ",\"ci_high\":" + fixed6(r.ci_high) +
             "}\n";
    }
  }
  return out;
}

inline std::string radar_table(std::span<const RadarRow> rows, ReportFormat format = ReportFormat::Csv) {
  std::string out;
  if (format == ReportFormat::Csv) {
    out = "blue,slice";
    for (auto name : kBlueActionKindNames) out += "," + std::string(name);
    out += "\n";
  }
  for (const auto& row : rows) {
    const auto micro = apportion_micro_percent(row.counts);
    if (format == ReportFormat::Csv) {
      out += detail::csv_field(row.blue) + "," + detail::csv_field(row.slice);
      for (auto v : micro) out += "," + micro_percent_string(v);
      out += "\n";
    } else {
      out += "{\"blue\":" + detail::json_str(row.blue) + ",\"slice\":" + detail::json_str(row.slice);
      for (std::size_t i = 0; i < micro.size(); ++i) {
        out += ",\"" + std::string(kBlueActionKindNames[i]) + "\":" + micro_percent_string(micro[i]);
      }
      out += "}\n";
    }
  }
  return out;
}

// Slices over the evaluation grid: everything, per opponent, per duration,
// and per (opponent, duration) cell.
inline std::vector<RadarRow> radar_rows(std::span<const TrialResult> results) {
  std::vector<RadarRow> rows;
  auto add = [&](const std::string& blue, const std::string& slice, const ActionCounts& c) {
    for (auto& row : rows) {
      if (row.blue == blue && row.slice == slice) {
        for (std::size_t i = 0; i < c.size(); ++i) row.counts[i] += c[i];
        return;
      }
    }
    rows.push_back({blue, slice, c});
  };
  for (const auto& r : results) add(r.config.blue_spec, "all", r.action_counts);
  for (const auto& r : results) add(r.config.blue_spec, "red=" + std::string(to_string(r.config.red)), r.action_counts);
  for (const auto& r : results) add(r.config.blue_spec, "steps=" + std::to_string(r.config.max_steps), r.action_counts);
  for (const auto& r : results) {
    add(r.config.blue_spec,
        "red=" + std::string(to_string(r.config.red)) + "/steps=" + std::to_string(r.config.max_steps),
        r.action_counts);
  }
  return rows;
}

inline std::filesystem::path trace_file_path(const TrialConfig& c, std::uint64_t episode) {
  char name[48];
  std::snprintf(name, sizeof name, "episode_%06llu.jsonl", static_cast<unsigned long long>(episode));
  return std::filesystem::path(std::string(to_string(c.red))) / std::to_string(c.max_steps) / name;
}

// Writes results.<ext>, radar.<ext>, and (with traces) traces/manifest.jsonl
// plus one line-delimited file per episode.
inline std::vector<std::filesystem::path> export_report(const Network& net, std::span<const TrialResult> results,
                                                        const std::filesystem::path& out_dir,
                                                        const ReportOptions& opts = {}) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());
  const std::string ext = opts.format == ReportFormat::Csv ? ".csv" : ".jsonl";

  std::vector<fs::path> written;
  written.push_back(out_dir / ("results" + ext));
  detail::write_file(written.back(), results_table(results, opts.format));
  const auto rows = radar_rows(results);
  written.push_back(out_dir / ("radar" + ext));
  detail::write_file(written.back(), radar_table(rows, opts.format));

  if (opts.traces) {
    const auto dir = out_dir / "traces";
    std::string manifest;
    for (const auto& r : results) {
      if (r.traces.size() != r.config.episodes) throw Error("trace export requested but traces were not kept");
      for (const auto& t : r.traces) {
        const auto rel = trace_file_path(r.config, t.episode);
        fs::create_directories((dir / rel).parent_path(), ec);
        if (ec) throw Error("cannot create " + (dir / rel).parent_path().string() + ": " + ec.message());
        std::string body;
        for (const auto& rec : t.records) body += trace_record_line(net, rec) + "\n";
        detail::write_file(dir / rel, body);
        manifest += "{\"blue\":" + detail::json_str(r.config.blue_spec) + ",\"red\":\"" +
                    std::string(to_string(r.config.red)) + "\",\"steps\":" + std::to_string(r.config.max_steps) +
                    ",\"episode\":" + std::to_string(t.episode) + ",\"seed\":" + std::to_string(t.seed) +
                    ",\"file\":" + detail::json_str(rel.generic_string()) + ",\"total_reward\":" +
                    fixed6(t.total_reward) + "}\n";
      }
    }
    written.push_back(dir / "manifest.jsonl");
    detail::write_file(written.back(), manifest);
  }
  return written;
}

// ---------------------------------------------------------------------------
// Offline analysis of exported traces

struct TraceManifestEntry {
  std::string blue;
  std::string red;
  std::uint64_t steps = 0;
  std::uint64_t episode = 0;
  std::string file;
};

enum class RadarSlice { All, ByOpponent, ByDuration };

inline std::vector<RadarRow> analyze_traces(const std::filesystem::path& traces_dir, RadarSlice slice) {
  namespace fs = std::filesystem;
  std::ifstream manifest(traces_dir / "manifest.jsonl");
  if (!manifest) throw Error("missing " + (traces_dir / "manifest.jsonl").string());
  std::vector<RadarRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (line.empty()) continue;
    TraceManifestEntry e;
    try {
      const auto j = nlohmann::json::parse(line);
      e.blue = j.at("blue").get<std::string>();
      e.red = j.at("red").get<std::string>();
      e.steps = j.at("steps").get<std::uint64_t>();
      e.episode = j.at("episode").get<std::uint64_t>();
      e.file = j.at("file").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
      throw Error("corrupt manifest line " + std::to_string(line_no) + ": " + ex.what());
    }
    std::string key = "all";
    if (slice == RadarSlice::ByOpponent) key = "red=" + e.red;
    if (slice == RadarSlice::ByDuration) key = "steps=" + std::to_string(e.steps);
    auto it = std::find_if(rows.begin(), rows.end(), [&](const RadarRow& r) { return r.blue == e.blue && r.slice == key; });
    if (it == rows.end()) {
      rows.push_back({e.blue, key, {}});
      it = rows.end() - 1;
    }
    std::ifstream trace(traces_dir / e.file);
    if (!trace) throw Error("missing trace file " + (traces_dir / e.file).string());
    std::string rec;
    std::uint64_t n = 0;
    while (std::getline(trace, rec)) {
      if (rec.empty()) continue;
      const auto parsed = parse_trace_line(rec);
      ++it->counts[static_cast<std::size_t>(*parse_blue_action_kind(parsed.blue_kind))];
      ++n;
    }
    if (n != e.steps) {
      throw Error("trace " + e.file + " has " + std::to_string(n) + " records, expected " + std::to_string(e.steps));
    }
  }
  if (rows.empty()) throw Error("no traces listed in " + (traces_dir / "manifest.jsonl").string());
  return rows;
}

}  // namespace lateralsim
