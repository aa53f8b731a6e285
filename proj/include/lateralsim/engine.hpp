#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "lateralsim/actions.hpp"
#include "lateralsim/rng.hpp"
#include "lateralsim/scenario.hpp"

namespace lateralsim {

enum class Access : std::uint8_t { None, User, Privileged };

inline std::string_view to_string(Access a) {
  switch (a) {
    case Access::None: return "None";
    case Access::User: return "User";
    case Access::Privileged: return "Privileged";
  }
  return "?";
}

inline std::optional<Access> parse_access(std::string_view s) {
  if (s == "None") return Access::None;
  if (s == "User") return Access::User;
  if (s == "Privileged") return Access::Privileged;
  return std::nullopt;
}

struct Decoy {
  DecoyType type;
  int port;

  friend bool operator==(const Decoy&, const Decoy&) = default;
};

struct KnownPort {
  int port = 0;
  int priority = 0;
  bool stale = false;

  friend bool operator==(const KnownPort&, const KnownPort&) = default;
};

// What Red learned about one host from its last service scan.
struct HostIntel {
  bool scanned = false;
  std::vector<KnownPort> ports;
  std::optional<int> exploited_port;  // port behind the current believed session

  bool fresh() const {
    return scanned && std::none_of(ports.begin(), ports.end(), [](const KnownPort& p) { return p.stale; });
  }

  friend bool operator==(const HostIntel&, const HostIntel&) = default;
};

struct RedKnowledge {
  std::vector<bool> discovered_subnets;
  std::vector<HostIntel> known_services;
  std::vector<Access> believed_sessions;
  std::vector<std::set<int>> dead_ports;

  friend bool operator==(const RedKnowledge&, const RedKnowledge&) = default;
};

struct TrueState {
  std::uint64_t step = 0;
  std::vector<Access> access;
  std::vector<std::vector<Decoy>> decoys;
  RedKnowledge red;
  bool impact_active = false;
  RandomStream rng;

  friend bool operator==(const TrueState&, const TrueState&) = default;
};

struct ExploitEvent {
  HostIndex host;
  int port;
  bool was_decoy;

  friend bool operator==(const ExploitEvent&, const ExploitEvent&) = default;
};

struct StepEvents {
  std::vector<HostIndex> scan_events;
  std::vector<ExploitEvent> exploit_events;
  bool blue_success = false;
  bool red_success = false;
  bool impact = false;

  friend bool operator==(const StepEvents&, const StepEvents&) = default;
};

enum class Activity : std::uint8_t { None, Scan, Exploit };
enum class Compromise : std::uint8_t { No, Unknown, User, Privileged };

struct HostView {
  Activity activity = Activity::None;
  Compromise compromise = Compromise::No;

  friend bool operator==(const HostView&, const HostView&) = default;
};

struct BlueObservation {
  std::vector<HostView> hosts;
  bool last_action_success = false;

  bool any_alert() const {
    return std::any_of(hosts.begin(), hosts.end(), [](const HostView& v) { return v.activity != Activity::None; });
  }

  friend bool operator==(const BlueObservation&, const BlueObservation&) = default;
};

// ---------------------------------------------------------------------------

inline TrueState init_state(const Network& net, std::uint64_t seed) {
  const auto n = net.host_count();
  TrueState st;
  st.access.assign(n, Access::None);
  st.access[net.foothold()] = Access::Privileged;
  st.decoys.assign(n, {});
  st.red.discovered_subnets.assign(net.subnet_count(), false);
  st.red.discovered_subnets[net.subnet_of(net.foothold())] = true;
  st.red.known_services.assign(n, {});
  st.red.believed_sessions.assign(n, Access::None);
  st.red.believed_sessions[net.foothold()] = Access::Privileged;
  st.red.dead_ports.assign(n, {});
  st.rng = RandomStream(seed);
  return st;
}

inline BlueObservation initial_observation(const Network& net) {
  BlueObservation o;
  o.hosts.assign(net.host_count(), HostView{});
  return o;
}

namespace detail {

inline const Decoy* decoy_at(const TrueState& st, HostIndex h, int port) {
  for (const auto& d : st.decoys[h]) {
    if (d.port == port) return &d;
  }
  return nullptr;
}

inline const ServiceSpec* service_at(const Network& net, HostIndex h, int port) {
  for (const auto& svc : net.host(h).services) {
    if (svc.port == port) return &svc;
  }
  return nullptr;
}

// A real session (not a decoy illusion) whose subnet can address `target`.
inline bool has_pivot_to(const Network& net, const TrueState& st, SubnetIndex target) {
  for (HostIndex x = 0; x < net.host_count(); ++x) {
    if (st.red.believed_sessions[x] >= Access::User && st.access[x] >= Access::User &&
        net.reaches(net.subnet_of(x), target)) {
      return true;
    }
  }
  return false;
}

inline void invalidate_intel(HostIntel& intel) {
  for (auto& p : intel.ports) p.stale = true;
  if (intel.ports.empty()) intel.scanned = false;
  intel.exploited_port.reset();
}

}  // namespace detail

// Applies Blue's action to the world. Returns whether it succeeded.
inline bool resolve_blue_action(const Network& net, TrueState& st, const BlueAction& a) {
  check_blue_action(net, a);
  switch (a.kind) {
    case BlueActionKind::Sleep:
    case BlueActionKind::Monitor:
    case BlueActionKind::Analyse:
      return true;
    case BlueActionKind::Remove: {
      const auto h = *a.target;
      if (st.access[h] != Access::User) return false;
      st.access[h] = Access::None;
      st.red.believed_sessions[h] = Access::None;
      st.red.known_services[h].exploited_port.reset();
      return true;
    }
    case BlueActionKind::Restore: {
      const auto h = *a.target;
      st.decoys[h].clear();
      if (h == net.foothold()) return true;  // the foothold's root cannot be revoked
      st.access[h] = Access::None;
      st.red.believed_sessions[h] = Access::None;
      detail::invalidate_intel(st.red.known_services[h]);
      return true;
    }
    default:
      break;
  }
  // Decoy deployment
  const auto h = *a.target;
  const auto type = decoy_of(a.kind);
  const int port = decoy_info(type).port;
  if (!net.host(h).allowed_decoys.count(type)) return false;
  if (detail::decoy_at(st, h, port) || detail::service_at(net, h, port)) return false;
  st.decoys[h].push_back({type, port});
  return true;
}

// Applies Red's action. Precondition failures resolve as unsuccessful actions.
inline StepEvents resolve_red_action(const Network& net, TrueState& st, const RedAction& a) {
  StepEvents ev;
  st.impact_active = false;
  auto& red = st.red;

  if (a.kind == RedActionKind::Sleep) {
    ev.red_success = true;
    return ev;
  }
  if (!a.target) return ev;
  const auto t = *a.target;
  if (a.targets_subnet() ? t >= net.subnet_count() : t >= net.host_count()) return ev;

  switch (a.kind) {
    case RedActionKind::DiscoverRemoteSystems: {
      if (!detail::has_pivot_to(net, st, t)) return ev;
      red.discovered_subnets[t] = true;
      ev.scan_events = net.hosts_in(t);
      ev.red_success = true;
      return ev;
    }
    case RedActionKind::DiscoverNetworkServices: {
      if (!detail::has_pivot_to(net, st, net.subnet_of(t))) return ev;
      auto& intel = red.known_services[t];
      const auto& dead = red.dead_ports[t];
      intel.scanned = true;
      intel.ports.clear();
      for (const auto& svc : net.host(t).services) {
        if (!dead.count(svc.port)) intel.ports.push_back({svc.port, svc.exploit_priority, false});
      }
      for (const auto& d : st.decoys[t]) {
        if (!dead.count(d.port)) intel.ports.push_back({d.port, decoy_info(d.type).exploit_priority, false});
      }
      std::sort(intel.ports.begin(), intel.ports.end(),
                [](const KnownPort& x, const KnownPort& y) { return x.port < y.port; });
      ev.scan_events = {t};
      ev.red_success = true;
      return ev;
    }
    case RedActionKind::ExploitRemoteServices: {
      if (!detail::has_pivot_to(net, st, net.subnet_of(t))) return ev;
      auto& intel = red.known_services[t];
      const KnownPort* pick = nullptr;
      for (const auto& p : intel.ports) {
        if (red.dead_ports[t].count(p.port)) continue;
        if (!pick || p.priority > pick->priority || (p.priority == pick->priority && p.port < pick->port)) pick = &p;
      }
      if (!pick) return ev;
      const int port = pick->port;
      if (detail::decoy_at(st, t, port)) {
        red.believed_sessions[t] = std::max(red.believed_sessions[t], Access::User);
        intel.exploited_port = port;
        ev.exploit_events.push_back({t, port, true});
        ev.red_success = true;
      } else if (detail::service_at(net, t, port)) {
        red.believed_sessions[t] = std::max(red.believed_sessions[t], Access::User);
        intel.exploited_port = port;
        st.access[t] = std::max(st.access[t], Access::User);
        if (st.rng.chance(net.params().p_root_on_exploit)) st.access[t] = Access::Privileged;
        ev.exploit_events.push_back({t, port, false});
        ev.red_success = true;
      } else {
        // The port vanished with a restore.
        red.dead_ports[t].insert(port);
        std::erase_if(intel.ports, [port](const KnownPort& p) { return p.port == port; });
      }
      return ev;
    }
    case RedActionKind::PrivilegeEscalate: {
      if (red.believed_sessions[t] < Access::User) return ev;
      if (st.access[t] >= Access::User) {
        st.access[t] = Access::Privileged;
        red.believed_sessions[t] = Access::Privileged;
        ev.red_success = true;
        return ev;
      }
      // The session was a decoy illusion: Red learns the port is fake.
      auto& intel = red.known_services[t];
      if (intel.exploited_port) red.dead_ports[t].insert(*intel.exploited_port);
      red.believed_sessions[t] = Access::None;
      detail::invalidate_intel(intel);
      return ev;
    }
    case RedActionKind::Impact: {
      if (t == net.impact_target() && st.access[t] == Access::Privileged) {
        st.impact_active = true;
        ev.impact = true;
        ev.red_success = true;
      }
      return ev;
    }
    case RedActionKind::Sleep:
      break;
  }
  return ev;
}

// -host_weight*(H-1) - server_weight*S - restore_penalty*[Restore] - impact_penalty*[impact]
inline double compute_reward(const Network& net, const TrueState& st_after, const BlueAction& blue,
                             const StepEvents& events) {
  const auto& p = net.params();
  int hosts = 0;
  int servers = 0;
  for (HostIndex h = 0; h < net.host_count(); ++h) {
    if (st_after.access[h] != Access::Privileged) continue;
    (net.host(h).kind == HostKind::Host ? hosts : servers) += 1;
  }
  double r = -p.host_weight * (hosts - 1) - p.server_weight * servers;
  if (blue.kind == BlueActionKind::Restore) r -= p.restore_penalty;
  if (events.impact) r -= p.impact_penalty;
  return r;
}

// Consumes detection randomness from st.rng.
inline BlueObservation observe(const Network& net, TrueState& st, const BlueAction& blue, const StepEvents& events,
                               const BlueObservation& prev) {
  const auto& p = net.params();
  BlueObservation o;
  o.hosts.resize(net.host_count());
  for (HostIndex h = 0; h < net.host_count(); ++h) {
    o.hosts[h].compromise = h < prev.hosts.size() ? prev.hosts[h].compromise : Compromise::No;
  }

  if (events.blue_success && blue.target &&
      (blue.kind == BlueActionKind::Remove || blue.kind == BlueActionKind::Restore)) {
    o.hosts[*blue.target].compromise = *blue.target == net.foothold() ? Compromise::Unknown : Compromise::No;
  }

  for (HostIndex h : events.scan_events) {
    if (st.rng.chance(p.p_detect_scan)) o.hosts[h].activity = std::max(o.hosts[h].activity, Activity::Scan);
  }
  for (const auto& e : events.exploit_events) {
    if (st.rng.chance(e.was_decoy ? 1.0 : p.p_detect_exploit)) {
      o.hosts[e.host].activity = Activity::Exploit;
      o.hosts[e.host].compromise = std::max(o.hosts[e.host].compromise, Compromise::Unknown);
    }
  }
  for (auto& v : o.hosts) {
    if (st.rng.chance(p.p_false_positive)) v.activity = std::max(v.activity, Activity::Scan);
  }

  if (blue.kind == BlueActionKind::Analyse) {
    const auto h = *blue.target;
    switch (st.access[h]) {
      case Access::None: o.hosts[h].compromise = Compromise::No; break;
      case Access::User: o.hosts[h].compromise = Compromise::User; break;
      case Access::Privileged: o.hosts[h].compromise = Compromise::Privileged; break;
    }
  }
  o.last_action_success = events.blue_success;
  return o;
}

// Per host: activity (None=00, Scan=10, Exploit=11) then compromise
// (No=00, Unknown=10, User=01, Privileged=11).
inline std::vector<double> encode_observation(const BlueObservation& o) {
  std::vector<double> v;
  v.reserve(4 * o.hosts.size());
  for (const auto& h : o.hosts) {
    v.push_back(h.activity != Activity::None ? 1.0 : 0.0);
    v.push_back(h.activity == Activity::Exploit ? 1.0 : 0.0);
    v.push_back(h.compromise == Compromise::Unknown || h.compromise == Compromise::Privileged ? 1.0 : 0.0);
    v.push_back(h.compromise == Compromise::User || h.compromise == Compromise::Privileged ? 1.0 : 0.0);
  }
  return v;
}

// Inverse of encode_observation. last_action_success is not part of the
// vector and decodes as false.
inline BlueObservation decode_observation(std::span<const double> v) {
  if (v.size() % 4 != 0) throw std::invalid_argument("observation vector length must be a multiple of 4");
  BlueObservation o;
  o.hosts.resize(v.size() / 4);
  for (std::size_t h = 0; h < o.hosts.size(); ++h) {
    const bool a0 = v[4 * h] != 0.0, a1 = v[4 * h + 1] != 0.0;
    const bool c0 = v[4 * h + 2] != 0.0, c1 = v[4 * h + 3] != 0.0;
    if (a1 && !a0) throw std::invalid_argument("invalid activity code in observation vector");
    o.hosts[h].activity = !a0 ? Activity::None : (a1 ? Activity::Exploit : Activity::Scan);
    o.hosts[h].compromise = c0 ? (c1 ? Compromise::Privileged : Compromise::Unknown)
                               : (c1 ? Compromise::User : Compromise::No);
  }
  return o;
}

struct StepOutcome {
  double reward = 0.0;
  BlueObservation observation;
  StepEvents events;
};

// One joint timestep: Blue resolves first, then Red on the updated state.
inline StepOutcome step(const Network& net, TrueState& st, const BlueAction& blue, const RedAction& red,
                        const BlueObservation& prev) {
  StepOutcome out;
  const bool blue_success = resolve_blue_action(net, st, blue);
  out.events = resolve_red_action(net, st, red);
  out.events.blue_success = blue_success;
  ++st.step;
  out.reward = compute_reward(net, st, blue, out.events);
  out.observation = observe(net, st, blue, out.events, prev);
  return out;
}

}  // namespace lateralsim
