// lateralsim: evaluate, play, analyze and validate-scenario front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lateralsim/lateralsim.hpp"

namespace ls = lateralsim;

namespace {

// Usage problems (bad flags, bad spec strings) exit 2; runtime failures exit 1.
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ls::Scenario load_scenario(const std::string& path) {
  if (path.empty()) return ls::default_scenario();
  return ls::parse_scenario(read_file(path));
}

ls::RedAgentKind red_kind(const std::string& s) {
  auto k = ls::parse_red_agent_kind(s);
  if (!k) throw UsageError("unknown red agent '" + s + "' (expected bline, meander or sleep)");
  return *k;
}

ls::ReportFormat report_format(const std::string& s) {
  return s == "jsonl" ? ls::ReportFormat::Jsonl : ls::ReportFormat::Csv;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string scenario;
  std::string blue;
  std::vector<std::string> red{"bline", "meander", "sleep"};
  std::vector<std::uint64_t> steps{30, 50, 100};
  std::uint64_t episodes = 1000;
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool traces = false;
  std::string format = "csv";
};

int cmd_evaluate(const EvaluateArgs& a) {
  if (a.traces && a.out.empty()) throw UsageError("--traces requires --out");
  const ls::Network net(load_scenario(a.scenario));
  const ls::BlueSpec spec = ls::parse_blue_spec(a.blue);
  std::vector<ls::RedAgentKind> reds;
  for (const auto& r : a.red) reds.push_back(red_kind(r));

  std::vector<ls::TrialResult> results;
  for (auto red : reds) {
    for (auto steps : a.steps) {
      ls::TrialConfig cfg;
      cfg.blue_spec = a.blue;
      cfg.red = red;
      cfg.max_steps = steps;
      cfg.episodes = a.episodes;
      cfg.base_seed = a.seed;
      cfg.jobs = a.jobs;
      cfg.keep_traces = a.traces;
      results.push_back(ls::run_trial(net, cfg, [&] { return ls::make_policy(spec, net); }));
    }
  }
  std::cout << ls::results_table(results, report_format(a.format));
  if (!a.out.empty()) {
    ls::export_report(net, results, a.out, {report_format(a.format), a.traces});
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct PlayArgs {
  std::string scenario;
  std::string blue = "passive";
  std::string red = "bline";
  std::uint64_t steps = 30;
  std::uint64_t seed = 0;
  bool truth = false;
};

int cmd_play(const PlayArgs& a) {
  const ls::Network net(load_scenario(a.scenario));
  const auto red = red_kind(a.red);
  auto policy = ls::make_policy(a.blue, net);
  auto hook = [&](const ls::StepRecord& r, const ls::TrueState&) {
    std::string line = "step " + std::to_string(r.step);
    line += " | blue " + ls::describe(net, r.blue) + (r.blue_success ? " ok" : " failed");
    line += " | red " + ls::describe(net, r.red) + (r.red_success ? " ok" : " failed");
    if (r.impact) line += " IMPACT";
    line += " | alerts ";
    if (r.alerts.empty()) line += "-";
    for (std::size_t i = 0; i < r.alerts.size(); ++i) line += (i ? "," : "") + net.host_name(r.alerts[i]);
    line += " | reward " + ls::fixed6(r.reward);
    if (a.truth) {
      line += " | truth";
      for (ls::HostIndex h = 0; h < r.truth_access.size(); ++h) {
        if (r.truth_access[h] != ls::Access::None) {
          line += " " + net.host_name(h) + "=" + std::string(ls::to_string(r.truth_access[h]));
        }
      }
    }
    std::cout << line << '\n';
  };
  const auto trace = ls::run_episode(net, *policy, {red, a.steps, a.seed, 0}, hook);
  std::cout.flush();
  std::cerr << "total reward " << ls::fixed6(trace.total_reward) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string traces;
  bool by_opponent = false;
  bool by_duration = false;
  std::string out;
  std::string format = "csv";
};

int cmd_analyze(const AnalyzeArgs& a) {
  const auto fmt = report_format(a.format);
  const std::string ext = fmt == ls::ReportFormat::Csv ? ".csv" : ".jsonl";
  std::vector<std::pair<std::string, ls::RadarSlice>> slices{{"radar_all", ls::RadarSlice::All}};
  if (a.by_opponent) slices.emplace_back("radar_by_opponent", ls::RadarSlice::ByOpponent);
  if (a.by_duration) slices.emplace_back("radar_by_duration", ls::RadarSlice::ByDuration);

  if (!a.out.empty()) std::filesystem::create_directories(a.out);
  for (const auto& [name, slice] : slices) {
    const auto table = ls::radar_table(ls::analyze_traces(a.traces, slice), fmt);
    std::cout << table;
    if (!a.out.empty()) ls::detail::write_file(std::filesystem::path(a.out) / (name + ext), table);
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, bool print) {
  ls::Scenario s;
  try {
    s = load_scenario(path);
  } catch (const ls::ScenarioError& e) {
    std::cout << "error parse: " << e.what() << '\n';
    return kExitRuntime;
  }
  const auto violations = ls::validate_scenario(s);
  for (const auto& v : violations) std::cout << ls::to_string(v) << '\n';
  if (violations.empty()) {
    std::cerr << "scenario '" << s.name << "' ok: " << s.hosts.size() << " hosts, " << s.subnets.size()
              << " subnets\n";
  }
  if (print) std::cout << ls::serialize_scenario(s);
  return violations.empty() ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic lateral-movement cyber defence simulator"};
  app.require_subcommand(1);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Run the blue agent against every red agent and duration");
  evaluate->add_option("--scenario", ev.scenario, "Scenario JSON file (default: built-in)");
  evaluate->add_option("--blue", ev.blue, "Blue agent spec")->required();
  evaluate->add_option("--red", ev.red, "Red agents")->delimiter(',')->capture_default_str();
  evaluate->add_option("--steps", ev.steps, "Episode lengths")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  evaluate->add_option("--episodes", ev.episodes, "Episodes per trial")->check(CLI::PositiveNumber)->capture_default_str();
  evaluate->add_option("--seed", ev.seed, "Base seed")->envname("LATERALSIM_SEED")->capture_default_str();
  evaluate->add_option("--out", ev.out, "Report directory");
  evaluate->add_option("--jobs", ev.jobs, "Concurrent episodes")->check(CLI::PositiveNumber);
  evaluate->add_flag("--traces", ev.traces, "Also write per-episode traces (needs --out)");
  evaluate->add_option("--format", ev.format, "Report format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();

  PlayArgs pl;
  auto* play = app.add_subcommand("play", "Run one episode and print every step");
  play->add_option("--scenario", pl.scenario, "Scenario JSON file (default: built-in)");
  play->add_option("--blue", pl.blue, "Blue agent spec")->capture_default_str();
  play->add_option("--red", pl.red, "Red agent")->capture_default_str();
  play->add_option("--steps", pl.steps, "Episode length")->check(CLI::PositiveNumber)->capture_default_str();
  play->add_option("--seed", pl.seed, "Episode seed")->envname("LATERALSIM_SEED")->capture_default_str();
  play->add_flag("--truth", pl.truth, "Show ground-truth access");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Action-type distributions from exported traces");
  analyze->add_option("--traces", an.traces, "Trace directory (containing manifest.jsonl)")->required();
  analyze->add_flag("--by-opponent", an.by_opponent, "One row per red agent");
  analyze->add_flag("--by-duration", an.by_duration, "One row per episode length");
  analyze->add_option("--out", an.out, "Directory for radar files");
  analyze->add_option("--format", an.format, "Output format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();

  std::string vs_path;
  bool vs_print = false;
  auto* validate = app.add_subcommand("validate-scenario", "Check a scenario document");
  validate->add_option("--scenario", vs_path, "Scenario JSON file (default: built-in)");
  validate->add_flag("--print", vs_print, "Print the canonical form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*evaluate) return cmd_evaluate(ev);
    if (*play) return cmd_play(pl);
    if (*analyze) return cmd_analyze(an);
    if (*validate) return cmd_validate(vs_path, vs_print);
  } catch (const UsageError& e) {
    std::cerr << "lateralsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ls::SpecError& e) {
    std::cerr << "lateralsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "lateralsim: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
