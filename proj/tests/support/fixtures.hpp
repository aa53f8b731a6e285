#pragma once

#include <string>

#include "lateralsim/lateralsim.hpp"

namespace fixtures {

inline const lateralsim::Network& cage2() {
  static const lateralsim::Network net(lateralsim::default_scenario());
  return net;
}

inline lateralsim::HostIndex host(const std::string& name) { return cage2().find_host(name).value(); }

inline lateralsim::ActionIndex idx(lateralsim::BlueActionKind k, const std::string& name) {
  return cage2().index_of({k, host(name)});
}

inline lateralsim::BlueAction act(lateralsim::BlueActionKind k, const std::string& name) { return {k, host(name)}; }

inline constexpr lateralsim::BlueAction kSleep{lateralsim::BlueActionKind::Sleep, std::nullopt};
inline constexpr lateralsim::BlueAction kMonitor{lateralsim::BlueActionKind::Monitor, std::nullopt};

}  // namespace fixtures
