#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "lateralsim/engine.hpp"

namespace lateralsim {

enum class RedAgentKind : std::uint8_t { Sleep, BLine, Meander };

inline constexpr std::size_t kRedAgentKindCount = 3;

inline std::string_view to_string(RedAgentKind k) {
  switch (k) {
    case RedAgentKind::Sleep: return "sleep";
    case RedAgentKind::BLine: return "bline";
    case RedAgentKind::Meander: return "meander";
  }
  return "?";
}

inline std::optional<RedAgentKind> parse_red_agent_kind(std::string_view s) {
  if (s == "sleep") return RedAgentKind::Sleep;
  if (s == "bline" || s == "b-line") return RedAgentKind::BLine;
  if (s == "meander") return RedAgentKind::Meander;
  return std::nullopt;
}

inline RedAction sleep_policy() { return RedAction::sleep(); }

// ---------------------------------------------------------------------------
// B-line: fixed shortest script from the foothold to the impact target.

struct BLinePlan {
  // Hosts to own in order; the last one is the impact target.
  std::vector<HostIndex> hops;
  // Flattened script: scan/exploit/escalate per hop, then Impact.
  std::vector<RedAction> script;
};

// Pivot choice: the lowest-index server addressable from the foothold's
// subnet from which the target's subnet is addressable. No pivot when the
// target is directly reachable.
inline BLinePlan make_bline_plan(const Network& net) {
  BLinePlan plan;
  const auto home = net.subnet_of(net.foothold());
  const auto target = net.impact_target();
  const auto target_subnet = net.subnet_of(target);
  if (!net.reaches(home, target_subnet)) {
    for (HostIndex h = 0; h < net.host_count(); ++h) {
      if (h == target || net.host(h).kind != HostKind::Server) continue;
      if (net.reaches(home, net.subnet_of(h)) && net.reaches(net.subnet_of(h), target_subnet)) {
        plan.hops.push_back(h);
        break;
      }
    }
  }
  plan.hops.push_back(target);
  for (HostIndex h : plan.hops) {
    plan.script.push_back(RedAction::scan(h));
    plan.script.push_back(RedAction::exploit(h));
    plan.script.push_back(RedAction::escalate(h));
  }
  plan.script.push_back(RedAction::impact(target));
  return plan;
}

struct BLineMemory {
  std::size_t stage = 0;
  std::vector<std::uint32_t> attempts;  // per stage
};

namespace detail {

inline bool stage_done(const RedAction& a, const RedKnowledge& k) {
  const auto h = *a.target;
  switch (a.kind) {
    case RedActionKind::DiscoverNetworkServices: return k.known_services[h].fresh();
    case RedActionKind::ExploitRemoteServices: return k.believed_sessions[h] >= Access::User;
    case RedActionKind::PrivilegeEscalate: return k.believed_sessions[h] == Access::Privileged;
    default: return false;
  }
}

}  // namespace detail

inline RedAction bline_next_action(const BLinePlan& plan, BLineMemory& m, const RedKnowledge& k) {
  if (m.attempts.size() != plan.script.size()) m.attempts.assign(plan.script.size(), 0);
  const auto last = plan.script.size() - 1;
  // Fall back to the earliest stage whose effect no longer holds.
  for (std::size_t j = 0; j < m.stage; ++j) {
    if (!detail::stage_done(plan.script[j], k)) {
      m.stage = j;
      break;
    }
  }
  while (m.stage < last && detail::stage_done(plan.script[m.stage], k)) ++m.stage;
  ++m.attempts[m.stage];
  return plan.script[m.stage];
}

// ---------------------------------------------------------------------------
// Meander: sweep each subnet fully before moving to the next one.

enum class MeanderPhase : std::uint8_t { Discover, ScanHosts, ExploitHosts, EscalateHosts, Done };

struct MeanderMemory {
  SubnetIndex current_subnet = 0;  // 0-based here; subnet index - 1
  std::vector<MeanderPhase> phase;
  std::vector<std::vector<HostIndex>> order;  // per-subnet work order
};

struct MeanderOptions {
  bool shuffle_hosts = false;
};

inline RedAction meander_next_action(const Network& net, MeanderMemory& m, const RedKnowledge& k, RandomStream& rng,
                                     MeanderOptions opts = {}) {
  const auto subnets = net.subnet_count();
  if (m.phase.size() != subnets) {
    m.phase.assign(subnets, MeanderPhase::Discover);
    m.order.assign(subnets, {});
  }
  while (m.current_subnet < subnets) {
    const auto s = m.current_subnet;
    auto& phase = m.phase[s];
    if (phase == MeanderPhase::Discover || !k.discovered_subnets[s]) {
      phase = MeanderPhase::ScanHosts;
      return RedAction::discover_subnet(s);
    }
    auto& order = m.order[s];
    if (order.empty()) {
      order = net.hosts_in(s);
      if (opts.shuffle_hosts) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
      }
    }
    auto exploitable = [&](HostIndex h) {
      for (const auto& p : k.known_services[h].ports) {
        if (!k.dead_ports[h].count(p.port)) return true;
      }
      return false;
    };
    for (HostIndex h : order) {
      if (!k.known_services[h].fresh()) {
        phase = MeanderPhase::ScanHosts;
        return RedAction::scan(h);
      }
    }
    for (HostIndex h : order) {
      if (k.believed_sessions[h] == Access::None && exploitable(h)) {
        phase = MeanderPhase::ExploitHosts;
        return RedAction::exploit(h);
      }
    }
    for (HostIndex h : order) {
      if (k.believed_sessions[h] == Access::User) {
        phase = MeanderPhase::EscalateHosts;
        return RedAction::escalate(h);
      }
    }
    const bool all_owned = std::all_of(order.begin(), order.end(), [&](HostIndex h) {
      return k.believed_sessions[h] == Access::Privileged;
    });
    if (!all_owned) {
      // Only hosts with nothing exploitable remain; rescan for new services.
      for (HostIndex h : order) {
        if (k.believed_sessions[h] == Access::None) return RedAction::scan(h);
      }
    }
    phase = MeanderPhase::Done;
    ++m.current_subnet;
  }
  return RedAction::impact(net.impact_target());
}

// ---------------------------------------------------------------------------

class RedAgent {
 public:
  RedAgent(RedAgentKind kind, const Network& net, std::uint64_t seed = 0, MeanderOptions opts = {})
      : kind_(kind), net_(&net), opts_(opts), seed_(seed), rng_(seed ^ 0x5DEECE66DULL) {
    if (kind_ == RedAgentKind::BLine) plan_ = make_bline_plan(net);
  }

  RedAgentKind kind() const { return kind_; }

  void reset(std::uint64_t seed) {
    seed_ = seed;
    rng_ = RandomStream(seed ^ 0x5DEECE66DULL);
    bline_ = {};
    meander_ = {};
  }

  RedAction next(const RedKnowledge& k) {
    switch (kind_) {
      case RedAgentKind::Sleep: return sleep_policy();
      case RedAgentKind::BLine: return bline_next_action(plan_, bline_, k);
      case RedAgentKind::Meander: return meander_next_action(*net_, meander_, k, rng_, opts_);
    }
    return sleep_policy();
  }

  const BLineMemory& bline_memory() const { return bline_; }
  const MeanderMemory& meander_memory() const { return meander_; }

 private:
  RedAgentKind kind_;
  const Network* net_;
  MeanderOptions opts_;
  std::uint64_t seed_;
  RandomStream rng_;
  BLinePlan plan_;
  BLineMemory bline_;
  MeanderMemory meander_;
};

}  // namespace lateralsim
