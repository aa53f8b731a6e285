#pragma once

#include "lateralsim/common.hpp"
#include "lateralsim/rng.hpp"
#include "lateralsim/actions.hpp"
#include "lateralsim/scenario.hpp"
#include "lateralsim/engine.hpp"
#include "lateralsim/red_agents.hpp"
#include "lateralsim/blue_agents.hpp"
#include "lateralsim/episode.hpp"
#include "lateralsim/protocol.hpp"
#include "lateralsim/bridge.hpp"
#include "lateralsim/blue_spec.hpp"
#include "lateralsim/harness.hpp"
