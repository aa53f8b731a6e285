// A hand-written defender plugged into the harness: restore any host that
// raised an exploit alert last step, otherwise keep monitoring.

#include <cstdio>

#include "lateralsim/lateralsim.hpp"

using namespace lateralsim;

class RestoreEverything final : public BluePolicy {
 public:
  explicit RestoreEverything(const Network& net) : net_(net) {}

  std::string name() const override { return "restore-everything"; }
  void reset(const EpisodeInfo&) override {}

  ActionIndex act(const PolicyInput& in) override {
    for (HostIndex h = 0; h < net_.host_count(); ++h) {
      if (h != net_.foothold() && in.observation.hosts[h].activity == Activity::Exploit) {
        return net_.index_of({BlueActionKind::Restore, h});
      }
    }
    return net_.index_of({BlueActionKind::Monitor, std::nullopt});
  }

 private:
  const Network& net_;
};

int main() {
  const Network net(default_scenario());
  for (auto red : {RedAgentKind::BLine, RedAgentKind::Meander, RedAgentKind::Sleep}) {
    TrialConfig cfg;
    cfg.blue_spec = "restore-everything";
    cfg.red = red;
    cfg.episodes = 100;
    const auto r = run_trial(net, cfg, [&] { return std::make_unique<RestoreEverything>(net); });
    std::printf("vs %-8s mean %s\n", std::string(to_string(red)).c_str(), fixed6(r.mean).c_str());
  }
}
