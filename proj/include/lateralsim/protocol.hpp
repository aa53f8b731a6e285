#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lateralsim/common.hpp"

// Line protocol spoken between the simulator (bridge) and an external agent.
// Every message is one JSON object on one line with a leading "type" field.
//
//   bridge -> agent: hello, episode_start, observation, episode_end, session_end
//   agent -> bridge: hello_ack, action, error
namespace lateralsim::protocol {

inline constexpr int kVersion = 1;

struct Hello {
  int version = kVersion;
  std::uint64_t action_space_size = 0;
  std::uint64_t obs_length = 0;
  friend bool operator==(const Hello&, const Hello&) = default;
};

struct HelloAck {
  std::string name;
  std::optional<int> version;  // optional; checked when present
  friend bool operator==(const HelloAck&, const HelloAck&) = default;
};

struct EpisodeStart {
  std::uint64_t episode = 0;
  std::uint64_t max_steps = 0;
  std::uint64_t seed_hint = 0;
  friend bool operator==(const EpisodeStart&, const EpisodeStart&) = default;
};

struct Observation {
  std::uint64_t step = 0;
  std::vector<double> obs;
  double reward = 0.0;
  bool done = false;
  friend bool operator==(const Observation&, const Observation&) = default;
};

struct Action {
  std::int64_t index = 0;
  friend bool operator==(const Action&, const Action&) = default;
};

struct EpisodeEnd {
  double total_reward = 0.0;
  friend bool operator==(const EpisodeEnd&, const EpisodeEnd&) = default;
};

struct SessionEnd {
  friend bool operator==(const SessionEnd&, const SessionEnd&) = default;
};

struct ErrorMsg {
  std::string code;
  std::string detail;
  friend bool operator==(const ErrorMsg&, const ErrorMsg&) = default;
};

using Message = std::variant<Hello, HelloAck, EpisodeStart, Observation, Action, EpisodeEnd, SessionEnd, ErrorMsg>;

inline std::string_view type_name(const Message& m) {
  static constexpr std::string_view names[] = {"hello",  "hello_ack",   "episode_start", "observation",
                                               "action", "episode_end", "session_end",   "error"};
  return names[m.index()];
}

inline std::string encode_message(const Message& m) {
  nlohmann::ordered_json j;
  j["type"] = std::string(type_name(m));
  std::visit(
      [&](const auto& msg) {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, Hello>) {
          j["version"] = msg.version;
          j["action_space_size"] = msg.action_space_size;
          j["obs_length"] = msg.obs_length;
        } else if constexpr (std::is_same_v<T, HelloAck>) {
          j["name"] = msg.name;
          if (msg.version) j["version"] = *msg.version;
        } else if constexpr (std::is_same_v<T, EpisodeStart>) {
          j["episode"] = msg.episode;
          j["max_steps"] = msg.max_steps;
          j["seed_hint"] = msg.seed_hint;
        } else if constexpr (std::is_same_v<T, Observation>) {
          j["step"] = msg.step;
          j["obs"] = msg.obs;
          j["reward"] = msg.reward;
          j["done"] = msg.done;
        } else if constexpr (std::is_same_v<T, Action>) {
          j["index"] = msg.index;
        } else if constexpr (std::is_same_v<T, EpisodeEnd>) {
          j["total_reward"] = msg.total_reward;
        } else if constexpr (std::is_same_v<T, ErrorMsg>) {
          j["code"] = msg.code;
          j["detail"] = msg.detail;
        }
      },
      m);
  // dump() escapes control characters, so the result never contains a newline.
  return j.dump();
}

namespace detail {

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ProtocolError(std::string("message missing field '") + key + "'");
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    if (!it->is_number_integer()) throw ProtocolError(std::string("field '") + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (it->is_number_integer() && !it->is_number_unsigned() && it->template get<std::int64_t>() < 0) {
        throw ProtocolError(std::string("field '") + key + "' must be nonnegative");
      }
    }
  }
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ProtocolError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace detail

inline Message decode_message(std::string_view line) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed line: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("malformed line: expected a JSON object");
  const auto type = detail::field<std::string>(j, "type");
  using detail::field;
  if (type == "hello") {
    return Hello{field<int>(j, "version"), field<std::uint64_t>(j, "action_space_size"),
                 field<std::uint64_t>(j, "obs_length")};
  }
  if (type == "hello_ack") {
    HelloAck m{field<std::string>(j, "name"), std::nullopt};
    if (j.contains("version")) m.version = field<int>(j, "version");
    return m;
  }
  if (type == "episode_start") {
    return EpisodeStart{field<std::uint64_t>(j, "episode"), field<std::uint64_t>(j, "max_steps"),
                        field<std::uint64_t>(j, "seed_hint")};
  }
  if (type == "observation") {
    return Observation{field<std::uint64_t>(j, "step"), field<std::vector<double>>(j, "obs"),
                       field<double>(j, "reward"), field<bool>(j, "done")};
  }
  if (type == "action") return Action{field<std::int64_t>(j, "index")};
  if (type == "episode_end") return EpisodeEnd{field<double>(j, "total_reward")};
  if (type == "session_end") return SessionEnd{};
  if (type == "error") return ErrorMsg{field<std::string>(j, "code"), field<std::string>(j, "detail")};
  throw ProtocolError("unknown message type '" + type + "'");
}

}  // namespace lateralsim::protocol
