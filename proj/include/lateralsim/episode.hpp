#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lateralsim/blue_agents.hpp"
#include "lateralsim/engine.hpp"
#include "lateralsim/red_agents.hpp"

namespace lateralsim {

struct StepRecord {
  std::uint64_t step = 0;  // 1-based timestep
  BlueAction blue;
  RedAction red;
  bool blue_success = false;
  bool red_success = false;
  bool impact = false;
  double reward = 0.0;
  std::vector<HostIndex> alerts;
  std::vector<Access> truth_access;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct EpisodeTrace {
  std::uint64_t episode = 0;
  std::uint64_t seed = 0;
  std::vector<StepRecord> records;
  double total_reward = 0.0;

  friend bool operator==(const EpisodeTrace&, const EpisodeTrace&) = default;
};

struct EpisodeParams {
  RedAgentKind red = RedAgentKind::BLine;
  std::uint64_t max_steps = 30;
  std::uint64_t seed = 0;
  std::uint64_t episode = 0;
};

// Called after every resolved step with the record and the post-step world.
using StepHook = std::function<void(const StepRecord&, const TrueState&)>;

inline EpisodeTrace run_episode(const Network& net, BluePolicy& blue, const EpisodeParams& p,
                                const StepHook& hook = {}) {
  EpisodeTrace trace;
  trace.episode = p.episode;
  trace.seed = p.seed;
  trace.records.reserve(p.max_steps);

  TrueState st = init_state(net, p.seed);
  RedAgent red(p.red, net, p.seed);
  blue.reset({p.episode, p.max_steps, p.seed});

  BlueObservation obs = initial_observation(net);
  std::vector<double> encoded = encode_observation(obs);
  double last_reward = 0.0;

  for (std::uint64_t t = 0; t < p.max_steps; ++t) {
    const ActionIndex choice = blue.act({t, obs, encoded, last_reward, false});
    if (choice >= net.action_count()) {
      throw Error("episode " + std::to_string(p.episode) + " step " + std::to_string(t + 1) + ": policy " +
                  blue.name() + " chose out-of-range action " + std::to_string(choice));
    }
    const BlueAction& blue_action = net.action(choice);
    const RedAction red_action = red.next(st.red);
    StepOutcome out = step(net, st, blue_action, red_action, obs);

    StepRecord rec;
    rec.step = st.step;
    rec.blue = blue_action;
    rec.red = red_action;
    rec.blue_success = out.events.blue_success;
    rec.red_success = out.events.red_success;
    rec.impact = out.events.impact;
    rec.reward = out.reward;
    for (HostIndex h = 0; h < out.observation.hosts.size(); ++h) {
      if (out.observation.hosts[h].activity != Activity::None) rec.alerts.push_back(h);
    }
    rec.truth_access = st.access;
    if (hook) hook(rec, st);

    trace.total_reward += out.reward;
    trace.records.push_back(std::move(rec));
    obs = std::move(out.observation);
    encoded = encode_observation(obs);
    last_reward = out.reward;
  }
  blue.finish({p.max_steps, obs, encoded, last_reward, true}, trace.total_reward);
  return trace;
}

// ---------------------------------------------------------------------------
// Line-delimited trace records

inline std::string trace_record_line(const Network& net, const StepRecord& r) {
  auto str = [](const std::string& s) { return nlohmann::json(s).dump(); };
  auto target = [&](const std::optional<std::size_t>& t, bool subnet) {
    if (!t) return std::string("null");
    return str(subnet ? net.subnet_name(*t) : net.host_name(*t));
  };
  std::string out = "{\"step\":" + std::to_string(r.step);
  out += ",\"blue_action\":{\"kind\":" + str(std::string(to_string(r.blue.kind))) +
         ",\"target\":" + target(r.blue.target, false) + "}";
  out += ",\"red_action\":{\"kind\":" + str(std::string(to_string(r.red.kind))) +
         ",\"target\":" + target(r.red.target, r.red.targets_subnet()) + "}";
  out += std::string(",\"blue_success\":") + (r.blue_success ? "true" : "false");
  out += std::string(",\"red_success\":") + (r.red_success ? "true" : "false");
  out += std::string(",\"impact\":") + (r.impact ? "true" : "false");
  out += ",\"reward\":" + fixed6(r.reward);
  out += ",\"alerts\":[";
  for (std::size_t i = 0; i < r.alerts.size(); ++i) out += (i ? "," : "") + str(net.host_name(r.alerts[i]));
  out += "],\"truth_access\":{";
  for (HostIndex h = 0; h < r.truth_access.size(); ++h) {
    out += (h ? "," : "") + str(net.host_name(h)) + ":" + str(std::string(to_string(r.truth_access[h])));
  }
  out += "}}";
  return out;
}

// Scenario-independent view of one trace line.
struct TraceLine {
  std::uint64_t step = 0;
  std::string blue_kind;
  std::optional<std::string> blue_target;
  std::string red_kind;
  std::optional<std::string> red_target;
  bool blue_success = false;
  bool red_success = false;
  bool impact = false;
  double reward = 0.0;
  std::vector<std::string> alerts;
  std::vector<std::pair<std::string, std::string>> truth_access;
};

inline TraceLine parse_trace_line(std::string_view line) {
  using nlohmann::json;
  TraceLine out;
  try {
    const auto j = json::parse(line.begin(), line.end());
    auto opt_str = [](const json& v) -> std::optional<std::string> {
      if (v.is_null()) return std::nullopt;
      return v.get<std::string>();
    };
    out.step = j.at("step").get<std::uint64_t>();
    out.blue_kind = j.at("blue_action").at("kind").get<std::string>();
    out.blue_target = opt_str(j.at("blue_action").at("target"));
    out.red_kind = j.at("red_action").at("kind").get<std::string>();
    out.red_target = opt_str(j.at("red_action").at("target"));
    out.blue_success = j.at("blue_success").get<bool>();
    out.red_success = j.at("red_success").get<bool>();
    out.impact = j.at("impact").get<bool>();
    out.reward = j.at("reward").get<double>();
    out.alerts = j.at("alerts").get<std::vector<std::string>>();
    for (const auto& [host, level] : j.at("truth_access").items()) {
      out.truth_access.emplace_back(host, level.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw Error(std::string("corrupt trace record: ") + e.what());
  }
  if (!parse_blue_action_kind(out.blue_kind)) throw Error("corrupt trace record: unknown blue action '" + out.blue_kind + "'");
  return out;
}

}  // namespace lateralsim
