// Evaluate two built-in defenders against B-line for 30 steps.

#include <cstdio>

#include "lateralsim/lateralsim.hpp"

int main() {
  using namespace lateralsim;
  const Network net(default_scenario());

  for (const char* blue : {"heuristic:restore_on_alert", "heuristic:decoy_wall"}) {
    TrialConfig cfg;
    cfg.blue_spec = blue;
    cfg.red = RedAgentKind::BLine;
    cfg.max_steps = 30;
    cfg.episodes = 200;
    const TrialResult r = run_trial(net, cfg);
    std::printf("%-28s mean %s  95%% CI [%s, %s]\n", blue, fixed6(r.mean).c_str(), fixed6(r.ci_low).c_str(),
                fixed6(r.ci_high).c_str());
  }
}
