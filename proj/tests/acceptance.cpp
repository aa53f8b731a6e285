// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "lateralsim/lateralsim.hpp"
#include "support/oracles.hpp"

using namespace lateralsim;
namespace fs = std::filesystem;

namespace {

// Measured at base seed 0; the loose floor for decoy_wall is -15.
constexpr double kPinnedDecoyWallVsBLine = -7.977;
constexpr double kPinnedBLineSelectorAccuracy = 1.0;
constexpr double kPinnedMeanderSelectorAccuracy = 1.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s  %-34s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int first_impact(const EpisodeTrace& t) {
  for (const auto& r : t.records) {
    if (r.impact) return static_cast<int>(r.step);
  }
  return 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every regular file under dir, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
  }
  return out;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  const Network net(default_scenario());
  const auto H = [&](const char* name) { return net.find_host(name).value(); };

  criterion("zero-vs-sleep", [&] {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    for (std::uint64_t steps : {30, 50, 100}) {
      TrialConfig c;
      c.blue_spec = "heuristic:analyse_remove";
      c.red = RedAgentKind::Sleep;
      c.max_steps = steps;
      c.episodes = 1000;
      const auto r = run_trial(net, c);
      ok = ok && r.mean == 0.0 && r.ci_low == 0.0 && r.ci_high == 0.0 && fixed6(r.mean) == "0.000000";
      detail += std::to_string(steps) + ":" + fixed6(r.mean) + " (" + fixed6(r.ci_low) + "," + fixed6(r.ci_high) + ") ";
    }
    const double t = seconds_since(start);
    return Outcome{ok && t < 60, detail + "in " + num(t) + "s"};
  });

  criterion("theoretical-maximum", [&] {
    const auto start = std::chrono::steady_clock::now();
    RandomStream pick(123456789);
    double lo = 0, hi = -100;
    std::uint64_t steps = 0;
    bool foothold_ok = true;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      TrueState st = init_state(net, seed);
      RedAgent meander(RedAgentKind::Meander, net, seed);
      BlueObservation obs = initial_observation(net);
      for (int t = 0; t < 1000; ++t) {
        const BlueAction& blue = net.action(pick.below(net.action_count()));
        RedAction red = meander.next(st.red);
        if (pick.below(2)) {  // half the time a uniformly random (often illegal) red move
          red.kind = static_cast<RedActionKind>(pick.below(kRedActionKindCount));
          red.target.reset();
          if (red.kind != RedActionKind::Sleep) red.target = pick.below(red.targets_subnet() ? 3 : 13);
        }
        auto out = step(net, st, blue, red, obs);
        lo = std::min(lo, out.reward);
        hi = std::max(hi, out.reward);
        foothold_ok = foothold_ok && st.access[net.foothold()] == Access::Privileged;
        obs = std::move(out.observation);
        ++steps;
      }
    }
    const double t = seconds_since(start);
    const bool ok = steps == 100'000 && hi <= 0.0 && lo >= -15.8 - 1e-12 && foothold_ok && t < 30;
    return Outcome{ok, std::to_string(steps) + " steps, reward range [" + num(lo) + ", " + num(hi) +
                           "], foothold " + (foothold_ok ? "held" : "LOST") + ", " + num(t) + "s"};
  });

  criterion("reward-oracle", [&] {
    RandomStream rng(99);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      TrueState st = init_state(net, 0);
      std::map<std::string, bool> priv;
      for (HostIndex h = 0; h < net.host_count(); ++h) {
        if (h != net.foothold()) st.access[h] = static_cast<Access>(rng.below(3));
        priv[net.host_name(h)] = st.access[h] == Access::Privileged;
      }
      const BlueAction& blue = net.action(rng.below(net.action_count()));
      StepEvents ev;
      ev.impact = rng.below(2) == 1;
      const double got = compute_reward(net, st, blue, ev);
      const double want = oracles::reward(priv, blue.kind == BlueActionKind::Restore, ev.impact);
      worst = std::max(worst, std::abs(got - want));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "1000 cases, max |diff| %.3g", worst);
    return Outcome{worst <= 1e-12, buf};
  });

  criterion("bline-kill-chain", [&] {
    const auto start = std::chrono::steady_clock::now();
    auto passive = make_policy("passive", net);
    int at7 = 0;
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto t = run_episode(net, *passive, {RedAgentKind::BLine, 30, seed, seed});
      const auto o = oracles::replay_bline_passive(seed, 30);
      if (first_impact(t) == 7 && o.first_impact == 7) ++at7;
      worst = std::max(worst, std::abs(t.total_reward - o.total));
    }
    const double t = seconds_since(start);
    char buf[128];
    std::snprintf(buf, sizeof buf, "first Impact at step 7 in %d/100, max |total - oracle| %.3g, %.2fs", at7, worst, t);
    return Outcome{at7 == 100 && worst <= 1e-9 && t < 10, buf};
  });

  criterion("decoy-stall", [&] {
    // Top-priority decoy Enterprise0 accepts.
    const auto& allowed = net.host(H("Enterprise0")).allowed_decoys;
    const DecoyType top = *std::max_element(allowed.begin(), allowed.end(), [](DecoyType a, DecoyType b) {
      return decoy_info(a).exploit_priority < decoy_info(b).exploit_priority;
    });
    ScriptedPolicy decoy({net.index_of({deploy_kind(top), H("Enterprise0")})});
    auto passive = make_policy("passive", net);
    int stalled = 0, min_delay = 1000;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const int base = first_impact(run_episode(net, *passive, {RedAgentKind::BLine, 30, seed, seed}));
      const int with = first_impact(run_episode(net, decoy, {RedAgentKind::BLine, 30, seed, seed}));
      const int delay = (with ? with : 31) - base;
      min_delay = std::min(min_delay, delay);
      if (base && delay >= 2) ++stalled;
    }
    return Outcome{stalled == 100, std::string(to_string(top)) + " on Enterprise0: delay >= 2 in " +
                                       std::to_string(stalled) + "/100, minimum delay " + std::to_string(min_delay)};
  });

  criterion("restorative-semantics", [&] {
    // Base states: clean, and a mid-attack world with sessions, beliefs and decoys.
    std::vector<TrueState> bases;
    bases.push_back(init_state(net, 1));
    {
      TrueState st = init_state(net, 2);
      RedAgent red(RedAgentKind::Meander, net, 2);
      BlueObservation obs = initial_observation(net);
      for (int t = 0; t < 35; ++t) {
        const BlueAction blue = t % 5 == 0 ? BlueAction{BlueActionKind::DecoyTomcat, static_cast<HostIndex>(t % 13)}
                                           : BlueAction{BlueActionKind::Monitor, std::nullopt};
        obs = step(net, st, blue, red.next(st.red), obs).observation;
      }
      bases.push_back(st);
    }
    std::size_t combos = 0, violations = 0;
    std::string first_violation;
    auto violate = [&](const std::string& what) {
      if (!violations++) first_violation = what;
    };
    for (const auto& base : bases) {
      for (HostIndex h = 0; h < net.host_count(); ++h) {
        for (Access level : {Access::None, Access::User, Access::Privileged}) {
          if (h == net.foothold() && level != Access::Privileged) continue;  // unreachable state
          for (ActionIndex ai = 0; ai < net.action_count(); ++ai) {
            ++combos;
            TrueState st = base;
            st.access[h] = level;
            const TrueState before = st;
            const BlueAction& a = net.action(ai);
            const bool ok = resolve_blue_action(net, st, a);
            const std::string tag = describe(net, a) + " with " + net.host_name(h) + "=" + std::string(to_string(level));
            if (st.access[net.foothold()] != Access::Privileged) violate("foothold lost: " + tag);
            if (a.kind == BlueActionKind::Remove && a.target == h && level == Access::Privileged &&
                (ok || !(st == before))) {
              violate("Remove changed a Privileged host: " + tag);
            }
            if (a.kind == BlueActionKind::Remove && a.target == h && level == Access::User &&
                (!ok || st.access[h] != Access::None)) {
              violate("Remove left a User session: " + tag);
            }
            if (a.kind == BlueActionKind::Restore && *a.target != net.foothold() &&
                (!ok || st.access[*a.target] != Access::None || !st.decoys[*a.target].empty())) {
              violate("Restore did not clear: " + tag);
            }
            if (a.kind != BlueActionKind::Remove && a.kind != BlueActionKind::Restore && st.access != before.access) {
              violate("non-restorative action changed access: " + tag);
            }
            // Red cannot dislodge the foothold either.
            for (std::size_t k = 0; k < kRedActionKindCount; ++k) {
              TrueState s2 = st;
              RedAction r{static_cast<RedActionKind>(k), std::nullopt};
              if (r.kind != RedActionKind::Sleep) r.target = r.targets_subnet() ? h % 3 : h;
              resolve_red_action(net, s2, r);
              if (s2.access[net.foothold()] != Access::Privileged) violate("foothold lost to red: " + tag);
            }
          }
        }
      }
    }
    return Outcome{violations == 0, std::to_string(combos) + " (state, host, level, action) combinations, " +
                                        std::to_string(violations) + " violations" +
                                        (violations ? " first: " + first_violation : "")};
  });

  criterion("meander-ordering", [&] {
    auto passive = make_policy("passive", net);
    std::size_t checked = 0, violations = 0, belief_violations = 0, episodes_reaching_last = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      std::vector<std::vector<Access>> beliefs_before;
      std::vector<Access> belief = init_state(net, seed).red.believed_sessions;
      const auto trace = run_episode(net, *passive, {RedAgentKind::Meander, 100, seed, seed},
                                     [&](const StepRecord&, const TrueState& st) {
                                       beliefs_before.push_back(belief);
                                       belief = st.red.believed_sessions;
                                     });
      // Replay from the serialized trace.
      std::vector<std::string> truth_prev(net.host_count(), "None");
      truth_prev[net.foothold()] = "Privileged";
      std::size_t frontier = 0;
      for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto line = parse_trace_line(trace_record_line(net, trace.records[i]));
        if (line.red_target && line.red_kind != "Impact") {
          const std::size_t s = line.red_kind == "DiscoverRemoteSystems" ? *net.find_subnet(*line.red_target)
                                                                           : net.subnet_of(*net.find_host(*line.red_target));
          ++checked;
          if (s < frontier) ++violations;  // never goes back either
          while (s > frontier) {
            for (HostIndex h : net.hosts_in(frontier)) {
              if (truth_prev[h] != "Privileged") ++violations;
              if (beliefs_before[i][h] != Access::Privileged) ++belief_violations;
            }
            ++frontier;
          }
        }
        for (const auto& [host, level] : line.truth_access) truth_prev[*net.find_host(host)] = level;
      }
      if (frontier == net.subnet_count() - 1) ++episodes_reaching_last;
    }
    return Outcome{violations == 0 && belief_violations == 0 && episodes_reaching_last == 200,
                   std::to_string(checked) + " targeted actions over 200 episodes, " + std::to_string(violations) +
                       " trace violations, " + std::to_string(belief_violations) + " belief violations, " +
                       std::to_string(episodes_reaching_last) + " episodes reached the last subnet"};
  });

  criterion("ensemble-laws", [&] {
    std::size_t lists = 0, mismatches = 0;
    std::vector<ActionIndex> v;
    std::function<void(std::size_t)> enumerate = [&](std::size_t len) {
      if (v.size() == len) {
        ++lists;
        if (majority_vote(v) != oracles::counting_mode(v)) ++mismatches;
        return;
      }
      for (ActionIndex a = 0; a < 6; ++a) {
        v.push_back(a);
        enumerate(len);
        v.pop_back();
      }
    };
    for (std::size_t len = 1; len <= 4; ++len) enumerate(len);

    std::size_t episodes = 0, diverged = 0;
    const std::pair<const char*, const char*> pairs[] = {
        {"heuristic:decoy_wall", "ensemble:[heuristic:decoy_wall,heuristic:decoy_wall,heuristic:decoy_wall]"},
        {"heuristic:analyse_remove",
         "ensembles:[[heuristic:analyse_remove,heuristic:analyse_remove],[heuristic:analyse_remove]]"}};
    for (const auto& [single, ensemble] : pairs) {
      auto a = make_policy(single, net);
      auto b = make_policy(ensemble, net);
      for (std::uint64_t ep = 0; ep < 50; ++ep) {
        const EpisodeParams p{ep % 2 ? RedAgentKind::Meander : RedAgentKind::BLine, 50, 500 + ep, ep};
        ++episodes;
        if (!(run_episode(net, *a, p) == run_episode(net, *b, p))) ++diverged;
      }
    }
    return Outcome{lists == 1554 && mismatches == 0 && diverged == 0,
                   std::to_string(lists) + " vote lists, " + std::to_string(mismatches) + " mismatches; " +
                       std::to_string(episodes) + " identical-member episodes, " + std::to_string(diverged) +
                       " diverged"};
  });

  criterion("selector-accuracy", [&] {
    std::map<RedAgentKind, int> hits;
    for (auto red : {RedAgentKind::Sleep, RedAgentKind::BLine, RedAgentKind::Meander}) {
      const std::size_t by = red == RedAgentKind::Sleep ? 4 : 6;
      for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        std::vector<BlueObservation> history{initial_observation(net)};
        TrueState st = init_state(net, seed);
        RedAgent agent(red, net, seed);
        for (std::size_t t = 0; t < by; ++t) history.push_back(step(net, st, net.action(1), agent.next(st.red), history.back()).observation);
        if (fingerprint_red(history, net).argmax() == red) ++hits[red];
      }
    }
    const double sleep = hits[RedAgentKind::Sleep] / 1000.0;
    const double bline = hits[RedAgentKind::BLine] / 1000.0;
    const double meander = hits[RedAgentKind::Meander] / 1000.0;
    const bool ok = sleep == 1.0 && bline >= 0.9 && meander >= 0.9 &&
                    std::abs(bline - kPinnedBLineSelectorAccuracy) < 1e-12 &&
                    std::abs(meander - kPinnedMeanderSelectorAccuracy) < 1e-12;
    return Outcome{ok, "sleep " + num(sleep) + " by step 4, bline " + num(bline) + " and meander " + num(meander) +
                           " by step 6"};
  });

  criterion("confidence-interval", [&] {
    const auto [l0, h0] = confidence_interval(std::vector<double>{0.0, 2.0});
    const auto [lc, hc] = confidence_interval(std::vector<double>{-4.5, -4.5, -4.5});
    const auto [l4, h4] = confidence_interval(std::vector<double>{1, 2, 3, 4});
    const double half4 = 1.959964 * std::sqrt(5.0 / 3.0) / 2.0;
    std::mt19937_64 gen(2718);
    std::normal_distribution<double> n01;
    std::vector<double> xs(10'000);
    for (auto& x : xs) x = n01(gen);
    const auto [ln, hn] = confidence_interval(xs);
    const double width = hn - ln;
    const bool ok = std::abs(l0 + 0.96) <= 1e-4 && std::abs(h0 - 2.96) <= 1e-4 && lc == -4.5 && hc == -4.5 &&
                    std::abs(l4 - (2.5 - half4)) < 1e-12 && std::abs(h4 - (2.5 + half4)) < 1e-12 &&
                    std::abs(width - 0.0392) <= 0.1 * 0.0392;
    return Outcome{ok, "{0,2} -> (" + num(l0) + ", " + num(h0) + "), 1e4 N(0,1) width " + num(width)};
  });

  criterion("cli-determinism", [&] {
    const fs::path root = fs::temp_directory_path() / ("lateralsim_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::string base = std::string(LATERALSIM_CLI) +
                             " evaluate --blue heuristic:decoy_wall --episodes 200 --seed 11 --traces --out ";
    std::map<std::string, std::map<std::string, std::string>> snaps;
    for (const char* jobs : {"1", "8"}) {
      for (const char* run : {"a", "b"}) {
        const auto dir = root / (std::string(jobs) + run);
        if (shell(base + dir.string() + " --jobs " + jobs + " > " + (root.string() + "_stdout_" + jobs + run)) != 0) {
          fs::remove_all(root);
          return Outcome{false, "evaluate exited nonzero"};
        }
        snaps[std::string(jobs) + run] = snapshot(dir);
      }
    }
    const bool same = snaps["1a"] == snaps["1b"] && snaps["8a"] == snaps["8b"] && snaps["1a"] == snaps["8a"];
    const std::size_t files = snaps["1a"].size();
    fs::remove_all(root);
    for (const char* s : {"1a", "1b", "8a", "8b"}) fs::remove(root.string() + "_stdout_" + s);
    return Outcome{same && files > 3, std::to_string(files) + " report files per run, runs " +
                                          (same ? "byte-identical" : "DIFFER") + " across --jobs 1/8"};
  });

  criterion("decoy-wall-regression", [&] {
    TrialConfig c;
    c.blue_spec = "heuristic:decoy_wall";
    c.red = RedAgentKind::BLine;
    c.max_steps = 30;
    c.episodes = 1000;
    const auto r = run_trial(net, c);
    const bool ok = r.mean >= -15.0 && fixed6(r.mean) == fixed6(kPinnedDecoyWallVsBLine);
    return Outcome{ok, "mean " + fixed6(r.mean) + " CI (" + fixed6(r.ci_low) + ", " + fixed6(r.ci_high) +
                           "), pinned " + fixed6(kPinnedDecoyWallVsBLine) + ", floor -15"};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
