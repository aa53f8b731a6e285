#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lateralsim/common.hpp"

namespace lateralsim {

enum class DecoyType : std::uint8_t {
  Apache,
  Femitter,
  HarakaSMPT,
  Smss,
  SSHD,
  Svchost,
  Tomcat,
  Vsftpd,
};

inline constexpr std::size_t kDecoyTypeCount = 8;

struct DecoyInfo {
  DecoyType type;
  std::string_view name;
  int port;
  int exploit_priority;
};

// Priorities sit above every real service so a scanned decoy is always the
// exploiter's first pick.
inline constexpr std::array<DecoyInfo, kDecoyTypeCount> kDecoyCatalogue{{
    {DecoyType::Apache, "DecoyApache", 80, 16},
    {DecoyType::Femitter, "DecoyFemitter", 21, 17},
    {DecoyType::HarakaSMPT, "DecoyHarakaSMPT", 25, 14},
    {DecoyType::Smss, "DecoySmss", 139, 10},
    {DecoyType::SSHD, "DecoySSHD", 22, 12},
    {DecoyType::Svchost, "DecoySvchost", 3389, 11},
    {DecoyType::Tomcat, "DecoyTomcat", 443, 15},
    {DecoyType::Vsftpd, "DecoyVsftpd", 990, 13},
}};

inline constexpr const DecoyInfo& decoy_info(DecoyType t) {
  return kDecoyCatalogue[static_cast<std::size_t>(t)];
}

inline std::string_view to_string(DecoyType t) { return decoy_info(t).name; }

// Accepts the canonical names plus the legacy spellings found in older
// challenge material.
inline std::optional<DecoyType> parse_decoy_type(std::string_view name) {
  for (const auto& info : kDecoyCatalogue) {
    if (info.name == name) return info.type;
  }
  if (name == "DecoyFermitter") return DecoyType::Femitter;
  if (name == "DecoyVsfvtp") return DecoyType::Vsftpd;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Blue actions

enum class BlueActionKind : std::uint8_t {
  Sleep,
  Monitor,
  Analyse,
  Remove,
  Restore,
  DecoyApache,
  DecoyFemitter,
  DecoyHarakaSMPT,
  DecoySmss,
  DecoySSHD,
  DecoySvchost,
  DecoyTomcat,
  DecoyVsftpd,
};

inline constexpr std::size_t kBlueActionKindCount = 13;
inline constexpr std::size_t kUntargetedBlueKinds = 2;
inline constexpr std::size_t kTargetedBlueKinds = 11;

inline constexpr std::array<std::string_view, kBlueActionKindCount> kBlueActionKindNames{
    "Sleep",      "Monitor",       "Analyse",         "Remove",    "Restore",
    "DecoyApache", "DecoyFemitter", "DecoyHarakaSMPT", "DecoySmss", "DecoySSHD",
    "DecoySvchost", "DecoyTomcat",  "DecoyVsftpd",
};

inline std::string_view to_string(BlueActionKind k) {
  return kBlueActionKindNames[static_cast<std::size_t>(k)];
}

inline std::optional<BlueActionKind> parse_blue_action_kind(std::string_view name) {
  for (std::size_t i = 0; i < kBlueActionKindCount; ++i) {
    if (kBlueActionKindNames[i] == name) return static_cast<BlueActionKind>(i);
  }
  if (auto decoy = parse_decoy_type(name)) {
    return static_cast<BlueActionKind>(static_cast<std::size_t>(BlueActionKind::DecoyApache) +
                                       static_cast<std::size_t>(*decoy));
  }
  return std::nullopt;
}

inline constexpr bool is_targeted(BlueActionKind k) {
  return k != BlueActionKind::Sleep && k != BlueActionKind::Monitor;
}

inline constexpr bool is_decoy(BlueActionKind k) { return k >= BlueActionKind::DecoyApache; }

inline constexpr DecoyType decoy_of(BlueActionKind k) {
  return static_cast<DecoyType>(static_cast<std::size_t>(k) -
                                static_cast<std::size_t>(BlueActionKind::DecoyApache));
}

inline constexpr BlueActionKind deploy_kind(DecoyType t) {
  return static_cast<BlueActionKind>(static_cast<std::size_t>(BlueActionKind::DecoyApache) +
                                     static_cast<std::size_t>(t));
}

struct BlueAction {
  BlueActionKind kind = BlueActionKind::Sleep;
  std::optional<HostIndex> target;

  friend bool operator==(const BlueAction&, const BlueAction&) = default;
};

// ---------------------------------------------------------------------------
// Red actions

enum class RedActionKind : std::uint8_t {
  Sleep,
  DiscoverRemoteSystems,
  DiscoverNetworkServices,
  ExploitRemoteServices,
  PrivilegeEscalate,
  Impact,
};

inline constexpr std::size_t kRedActionKindCount = 6;

inline constexpr std::array<std::string_view, kRedActionKindCount> kRedActionKindNames{
    "Sleep",          "DiscoverRemoteSystems", "DiscoverNetworkServices",
    "ExploitRemoteServices", "PrivilegeEscalate", "Impact",
};

inline std::string_view to_string(RedActionKind k) {
  return kRedActionKindNames[static_cast<std::size_t>(k)];
}

inline std::optional<RedActionKind> parse_red_action_kind(std::string_view name) {
  for (std::size_t i = 0; i < kRedActionKindCount; ++i) {
    if (kRedActionKindNames[i] == name) return static_cast<RedActionKind>(i);
  }
  if (name == "ExploitRemoveServer") return RedActionKind::ExploitRemoteServices;
  return std::nullopt;
}

// DiscoverRemoteSystems targets a subnet index; every other non-Sleep kind
// targets a host index.
struct RedAction {
  RedActionKind kind = RedActionKind::Sleep;
  std::optional<std::size_t> target;

  static RedAction sleep() { return {}; }
  static RedAction discover_subnet(SubnetIndex s) { return {RedActionKind::DiscoverRemoteSystems, s}; }
  static RedAction scan(HostIndex h) { return {RedActionKind::DiscoverNetworkServices, h}; }
  static RedAction exploit(HostIndex h) { return {RedActionKind::ExploitRemoteServices, h}; }
  static RedAction escalate(HostIndex h) { return {RedActionKind::PrivilegeEscalate, h}; }
  static RedAction impact(HostIndex h) { return {RedActionKind::Impact, h}; }

  bool targets_subnet() const { return kind == RedActionKind::DiscoverRemoteSystems; }
  bool targets_host() const {
    return kind != RedActionKind::Sleep && kind != RedActionKind::DiscoverRemoteSystems;
  }

  friend bool operator==(const RedAction&, const RedAction&) = default;
};

}  // namespace lateralsim
