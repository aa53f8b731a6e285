#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lateralsim/engine.hpp"
#include "lateralsim/red_agents.hpp"

namespace lateralsim {

struct EpisodeInfo {
  std::uint64_t episode = 0;
  std::uint64_t max_steps = 0;
  std::uint64_t seed = 0;
};

// What a defender sees when choosing the action for timestep `step + 1`.
struct PolicyInput {
  std::uint64_t step = 0;  // resolved timesteps so far
  const BlueObservation& observation;
  std::span<const double> encoded;
  double reward = 0.0;  // reward of the step that produced `observation`
  bool done = false;
};

class BluePolicy {
 public:
  virtual ~BluePolicy() = default;

  virtual std::string name() const = 0;
  virtual void reset(const EpisodeInfo&) {}
  virtual ActionIndex act(const PolicyInput& in) = 0;
  // Terminal observation and episode return; no action is expected.
  virtual void finish(const PolicyInput&, double /*total_reward*/) {}
};

using PolicyPtr = std::unique_ptr<BluePolicy>;

// ---------------------------------------------------------------------------
// Voting

enum class TieBreak : std::uint8_t { LowestIndex };

inline ActionIndex majority_vote(std::span<const ActionIndex> choices, TieBreak = TieBreak::LowestIndex) {
  if (choices.empty()) throw std::invalid_argument("majority_vote: no choices");
  std::map<ActionIndex, std::size_t> counts;
  for (auto c : choices) ++counts[c];
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

class EnsemblePolicy final : public BluePolicy {
 public:
  explicit EnsemblePolicy(std::vector<PolicyPtr> members, TieBreak tie = TieBreak::LowestIndex)
      : members_(std::move(members)), tie_(tie) {
    if (members_.empty()) throw std::invalid_argument("ensemble needs at least one member");
  }

  std::string name() const override { return "ensemble(" + std::to_string(members_.size()) + ")"; }

  void reset(const EpisodeInfo& info) override {
    for (auto& m : members_) m->reset(info);
  }

  ActionIndex act(const PolicyInput& in) override {
    choices_.clear();
    for (std::size_t i = 0; i < members_.size(); ++i) {
      try {
        choices_.push_back(members_[i]->act(in));
      } catch (const std::exception& e) {
        throw Error("ensemble member " + std::to_string(i) + " (" + members_[i]->name() + ") failed at step " +
                    std::to_string(in.step) + ": " + e.what());
      }
    }
    return majority_vote(choices_, tie_);
  }

  void finish(const PolicyInput& in, double total) override {
    for (auto& m : members_) m->finish(in, total);
  }

  const std::vector<ActionIndex>& last_choices() const { return choices_; }

 private:
  std::vector<PolicyPtr> members_;
  TieBreak tie_;
  std::vector<ActionIndex> choices_;
};

// Each inner ensemble casts one vote.
class EnsembleOfEnsemblesPolicy final : public BluePolicy {
 public:
  explicit EnsembleOfEnsemblesPolicy(std::vector<std::unique_ptr<EnsemblePolicy>> inner)
      : inner_(std::move(inner)) {
    if (inner_.empty()) throw std::invalid_argument("ensemble of ensembles needs at least one ensemble");
  }

  std::string name() const override { return "ensembles(" + std::to_string(inner_.size()) + ")"; }

  void reset(const EpisodeInfo& info) override {
    for (auto& e : inner_) e->reset(info);
  }

  ActionIndex act(const PolicyInput& in) override {
    std::vector<ActionIndex> votes;
    votes.reserve(inner_.size());
    for (auto& e : inner_) votes.push_back(e->act(in));
    return majority_vote(votes);
  }

  void finish(const PolicyInput& in, double total) override {
    for (auto& e : inner_) e->finish(in, total);
  }

 private:
  std::vector<std::unique_ptr<EnsemblePolicy>> inner_;
};

// ---------------------------------------------------------------------------
// Opponent identification

struct RedClassBelief {
  std::array<double, kRedAgentKindCount> scores{};  // indexed by RedAgentKind

  double operator[](RedAgentKind k) const { return scores[static_cast<std::size_t>(k)]; }

  // Ties resolve toward Meander, then B-line.
  RedAgentKind argmax() const {
    RedAgentKind best = RedAgentKind::Meander;
    for (auto k : {RedAgentKind::BLine, RedAgentKind::Sleep}) {
      if ((*this)[k] > (*this)[best]) best = k;
    }
    return best;
  }
};

// history[i] is the observation produced by timestep i (history[0] is the
// pre-episode observation). "Home" is the foothold's subnet.
inline RedClassBelief fingerprint_red(std::span<const BlueObservation> history, const Network& net) {
  if (history.empty()) throw std::invalid_argument("fingerprint_red: empty history");
  const auto home = net.subnet_of(net.foothold());
  bool early_alert = false;
  bool outside_early = false;
  bool outside_any = false;
  std::set<HostIndex> home_alerted;
  for (std::size_t t = 1; t < history.size(); ++t) {
    const auto& hosts = history[t].hosts;
    for (HostIndex h = 0; h < hosts.size(); ++h) {
      if (hosts[h].activity == Activity::None) continue;
      if (t <= 3) early_alert = true;
      if (net.subnet_of(h) == home) {
        home_alerted.insert(h);
      } else {
        outside_any = true;
        if (t <= 5) outside_early = true;
      }
    }
  }

  RedClassBelief b;
  auto set = [&](double sleep, double bline, double meander) {
    b.scores = {sleep, bline, meander};
  };
  if (!early_alert) {
    set(1.0, 0.0, 0.0);
  } else if (outside_early) {
    set(0.0, 0.8, 0.2);
  } else if (home_alerted.size() >= 2 && !outside_any) {
    set(0.0, 0.2, 0.8);
  } else {
    set(0.0, 0.5, 0.5);
  }
  return b;
}

using RedSelector = std::function<RedClassBelief(std::span<const BlueObservation>)>;

struct HierarchicalSpec {
  RedSelector selector;
  std::array<PolicyPtr, kRedAgentKindCount> specialists;  // indexed by RedAgentKind
  std::uint64_t decision_step = 4;
  RedAgentKind precommit = RedAgentKind::Meander;
};

class HierarchicalPolicy final : public BluePolicy {
 public:
  explicit HierarchicalPolicy(HierarchicalSpec spec) : spec_(std::move(spec)) {
    for (const auto& s : spec_.specialists) {
      if (!s) throw std::invalid_argument("hierarchical agent needs a specialist for every red agent");
    }
    if (!spec_.selector) throw std::invalid_argument("hierarchical agent needs a selector");
  }

  std::string name() const override { return "hier"; }

  void reset(const EpisodeInfo& info) override {
    history_.clear();
    committed_.reset();
    for (auto& s : spec_.specialists) s->reset(info);
  }

  ActionIndex act(const PolicyInput& in) override {
    history_.push_back(in.observation);
    if (!committed_) {
      if (in.step < spec_.decision_step) return specialist(spec_.precommit).act(in);
      committed_ = spec_.selector(history_).argmax();
    }
    return specialist(*committed_).act(in);
  }

  void finish(const PolicyInput& in, double total) override {
    for (auto& s : spec_.specialists) s->finish(in, total);
  }

  std::optional<RedAgentKind> committed() const { return committed_; }

 private:
  BluePolicy& specialist(RedAgentKind k) { return *spec_.specialists[static_cast<std::size_t>(k)]; }

  HierarchicalSpec spec_;
  std::vector<BlueObservation> history_;
  std::optional<RedAgentKind> committed_;
};

// ---------------------------------------------------------------------------
// Simple policies

class FixedPolicy final : public BluePolicy {
 public:
  FixedPolicy(const Network& net, ActionIndex index) : index_(index) {
    if (index >= net.action_count()) throw std::out_of_range("fixed policy action index out of range");
  }
  std::string name() const override { return index_ == 0 ? "passive" : "fixed:" + std::to_string(index_); }
  ActionIndex act(const PolicyInput&) override { return index_; }

 private:
  ActionIndex index_;
};

// Plays a fixed opening, then sleeps.
class ScriptedPolicy final : public BluePolicy {
 public:
  explicit ScriptedPolicy(std::vector<ActionIndex> script) : script_(std::move(script)) {}
  std::string name() const override { return "script"; }
  ActionIndex act(const PolicyInput& in) override { return in.step < script_.size() ? script_[in.step] : 0; }

 private:
  std::vector<ActionIndex> script_;
};

enum class HeuristicProfile : std::uint8_t { DecoyWall, AnalyseRemove, RestoreOnAlert };

inline std::string_view to_string(HeuristicProfile p) {
  switch (p) {
    case HeuristicProfile::DecoyWall: return "decoy_wall";
    case HeuristicProfile::AnalyseRemove: return "analyse_remove";
    case HeuristicProfile::RestoreOnAlert: return "restore_on_alert";
  }
  return "?";
}

inline std::optional<HeuristicProfile> parse_heuristic_profile(std::string_view s) {
  if (s == "decoy_wall") return HeuristicProfile::DecoyWall;
  if (s == "analyse_remove" || s == "analyze_remove") return HeuristicProfile::AnalyseRemove;
  if (s == "restore_on_alert") return HeuristicProfile::RestoreOnAlert;
  return std::nullopt;
}

// Rule-based defenders. None of them reads last_action_success, so they act
// identically on a decoded wire observation.
class HeuristicPolicy final : public BluePolicy {
 public:
  HeuristicPolicy(const Network& net, HeuristicProfile profile) : net_(&net), profile_(profile) {
    if (profile_ == HeuristicProfile::DecoyWall) build_schedule();
  }

  std::string name() const override { return "heuristic:" + std::string(to_string(profile_)); }

  void reset(const EpisodeInfo&) override {
    verify_.reset();
    deployed_.assign(schedule_.size(), false);
  }

  ActionIndex act(const PolicyInput& in) override {
    deployed_.resize(schedule_.size(), false);
    const auto& hosts = in.observation.hosts;
    switch (profile_) {
      case HeuristicProfile::RestoreOnAlert:
        for (HostIndex h = 0; h < hosts.size(); ++h) {
          if (h != net_->foothold() && hosts[h].activity == Activity::Exploit) return index(BlueActionKind::Restore, h);
        }
        return index(BlueActionKind::Monitor);

      case HeuristicProfile::AnalyseRemove: {
        if (auto a = respond_to_findings(hosts)) return *a;
        std::optional<HostIndex> pick;
        for (HostIndex h = 0; h < hosts.size(); ++h) {
          if (h == net_->foothold() || hosts[h].activity == Activity::None) continue;
          if (!pick || (hosts[h].activity == Activity::Exploit && hosts[*pick].activity != Activity::Exploit)) pick = h;
        }
        if (pick) return index(BlueActionKind::Analyse, *pick);
        return index(BlueActionKind::Monitor);
      }

      case HeuristicProfile::DecoyWall: {
        if (auto a = respond_to_findings(hosts)) return *a;
        for (HostIndex h = 0; h < hosts.size(); ++h) {
          if (h != net_->foothold() && hosts[h].activity == Activity::Exploit &&
              hosts[h].compromise == Compromise::Unknown) {
            return index(BlueActionKind::Analyse, h);
          }
        }
        for (std::size_t i = 0; i < schedule_.size(); ++i) {
          if (!deployed_[i]) {
            deployed_[i] = true;
            return net_->index_of(schedule_[i]);
          }
        }
        return index(BlueActionKind::Monitor);
      }
    }
    return 0;
  }

 private:
  ActionIndex index(BlueActionKind k, std::optional<HostIndex> h = std::nullopt) const {
    return net_->index_of({k, h});
  }

  // Re-check after a Remove, then clean up anything Analyse found.
  std::optional<ActionIndex> respond_to_findings(const std::vector<HostView>& hosts) {
    if (verify_) {
      const auto h = *verify_;
      verify_.reset();
      if (hosts[h].compromise == Compromise::User || hosts[h].compromise == Compromise::Privileged) {
        return index(BlueActionKind::Analyse, h);
      }
    }
    for (HostIndex h = 0; h < hosts.size(); ++h) {
      if (h == net_->foothold()) continue;
      if (hosts[h].compromise == Compromise::Privileged) {
        forget_decoys(h);
        return index(BlueActionKind::Restore, h);
      }
    }
    for (HostIndex h = 0; h < hosts.size(); ++h) {
      if (h != net_->foothold() && hosts[h].compromise == Compromise::User) {
        verify_ = h;
        return index(BlueActionKind::Remove, h);
      }
    }
    return std::nullopt;
  }

  // Alternate between the critical-path hosts, most attractive decoy first.
  void build_schedule() {
    const auto hops = make_bline_plan(*net_).hops;
    std::vector<std::vector<DecoyType>> per_host;
    for (HostIndex h : hops) {
      std::vector<DecoyType> ds(net_->host(h).allowed_decoys.begin(), net_->host(h).allowed_decoys.end());
      std::stable_sort(ds.begin(), ds.end(), [](DecoyType a, DecoyType b) {
        return decoy_info(a).exploit_priority > decoy_info(b).exploit_priority;
      });
      per_host.push_back(std::move(ds));
    }
    for (std::size_t round = 0;; ++round) {
      bool any = false;
      for (std::size_t i = 0; i < hops.size(); ++i) {
        if (round < per_host[i].size()) {
          schedule_.push_back({deploy_kind(per_host[i][round]), hops[i]});
          any = true;
        }
      }
      if (!any) break;
    }
    deployed_.assign(schedule_.size(), false);
  }

  // A restore wipes the host's decoys, so they go back on the schedule.
  void forget_decoys(HostIndex h) {
    for (std::size_t i = 0; i < schedule_.size(); ++i) {
      if (schedule_[i].target == h) deployed_[i] = false;
    }
  }

  const Network* net_;
  HeuristicProfile profile_;
  std::vector<BlueAction> schedule_;
  std::vector<bool> deployed_;
  std::optional<HostIndex> verify_;
};

}  // namespace lateralsim
