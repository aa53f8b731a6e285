#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace lateralsim;
using fixtures::act;
using fixtures::cage2;
using fixtures::host;
using fixtures::kMonitor;
using fixtures::kSleep;

namespace {

// Red walks its way to User access on Enterprise0 via the real kill chain.
TrueState with_user_on_enterprise0(std::uint64_t seed = 3) {
  const auto& net = cage2();
  TrueState st = init_state(net, seed);
  resolve_red_action(net, st, RedAction::scan(host("Enterprise0")));
  resolve_red_action(net, st, RedAction::exploit(host("Enterprise0")));
  st.access[host("Enterprise0")] = Access::User;  // pin the root-chance outcome
  return st;
}

}  // namespace

TEST(InitState, Foothold) {
  const auto& net = cage2();
  const TrueState st = init_state(net, 11);
  for (HostIndex h = 0; h < net.host_count(); ++h) {
    EXPECT_EQ(st.access[h], h == host("User0") ? Access::Privileged : Access::None) << net.host_name(h);
    EXPECT_TRUE(st.decoys[h].empty());
  }
  EXPECT_EQ(init_state(net, 7), init_state(net, 7));
  EXPECT_EQ(st.red.believed_sessions[host("User0")], Access::Privileged);
  EXPECT_TRUE(st.red.discovered_subnets[0]);
  EXPECT_FALSE(st.red.discovered_subnets[1]);
}

TEST(BlueResolution, RemoveUserSession) {
  const auto& net = cage2();
  TrueState st = with_user_on_enterprise0();
  EXPECT_TRUE(resolve_blue_action(net, st, act(BlueActionKind::Remove, "Enterprise0")));
  EXPECT_EQ(st.access[host("Enterprise0")], Access::None);
  EXPECT_EQ(st.red.believed_sessions[host("Enterprise0")], Access::None);
}

TEST(BlueResolution, RemoveFailsOnPrivileged) {
  const auto& net = cage2();
  TrueState st = with_user_on_enterprise0();
  st.access[host("Enterprise0")] = Access::Privileged;
  const TrueState before = st;
  EXPECT_FALSE(resolve_blue_action(net, st, act(BlueActionKind::Remove, "Enterprise0")));
  EXPECT_EQ(st, before);
}

TEST(BlueResolution, RestoreFootholdKeepsRoot) {
  const auto& net = cage2();
  TrueState st = init_state(net, 1);
  EXPECT_TRUE(resolve_blue_action(net, st, act(BlueActionKind::Restore, "User0")));
  EXPECT_EQ(st.access[host("User0")], Access::Privileged);
  EXPECT_DOUBLE_EQ(compute_reward(net, st, act(BlueActionKind::Restore, "User0"), {}), -1.0);
}

TEST(BlueResolution, RestoreClearsHostAndDecoys) {
  const auto& net = cage2();
  TrueState st = with_user_on_enterprise0();
  ASSERT_TRUE(resolve_blue_action(net, st, act(BlueActionKind::DecoyApache, "Enterprise0")));
  st.access[host("Enterprise0")] = Access::Privileged;
  EXPECT_TRUE(resolve_blue_action(net, st, act(BlueActionKind::Restore, "Enterprise0")));
  EXPECT_EQ(st.access[host("Enterprise0")], Access::None);
  EXPECT_TRUE(st.decoys[host("Enterprise0")].empty());
  EXPECT_EQ(st.red.believed_sessions[host("Enterprise0")], Access::None);
  EXPECT_FALSE(st.red.known_services[host("Enterprise0")].fresh());
}

TEST(BlueResolution, DecoyRules) {
  const auto& net = cage2();
  TrueState st = init_state(net, 1);
  EXPECT_TRUE(resolve_blue_action(net, st, act(BlueActionKind::DecoyFemitter, "Enterprise0")));
  EXPECT_FALSE(resolve_blue_action(net, st, act(BlueActionKind::DecoyFemitter, "Enterprise0")));  // already there
  EXPECT_FALSE(resolve_blue_action(net, st, act(BlueActionKind::DecoySvchost, "Enterprise0")));   // not allowed
  EXPECT_FALSE(resolve_blue_action(net, st, act(BlueActionKind::DecoySSHD, "User0")));  // port 22 is real
  EXPECT_EQ(st.decoys[host("Enterprise0")], (std::vector<Decoy>{{DecoyType::Femitter, 21}}));
  for (HostIndex h = 0; h < net.host_count(); ++h) {
    for (const auto& d : st.decoys[h]) EXPECT_TRUE(net.host(h).allowed_decoys.count(d.type));
  }
}

TEST(RedResolution, EscalateIsDeterministic) {
  const auto& net = cage2();
  TrueState st = with_user_on_enterprise0();
  const auto ev = resolve_red_action(net, st, RedAction::escalate(host("Enterprise0")));
  EXPECT_TRUE(ev.red_success);
  EXPECT_EQ(st.access[host("Enterprise0")], Access::Privileged);
}

TEST(RedResolution, DecoyExploitIsFake) {
  const auto& net = cage2();
  TrueState st = init_state(net, 5);
  resolve_blue_action(net, st, act(BlueActionKind::DecoyFemitter, "Enterprise0"));
  resolve_red_action(net, st, RedAction::scan(host("Enterprise0")));
  const auto ev = resolve_red_action(net, st, RedAction::exploit(host("Enterprise0")));
  EXPECT_EQ(st.access[host("Enterprise0")], Access::None);
  EXPECT_EQ(st.red.believed_sessions[host("Enterprise0")], Access::User);
  ASSERT_EQ(ev.exploit_events.size(), 1u);
  EXPECT_TRUE(ev.exploit_events[0].was_decoy);
  EXPECT_EQ(ev.exploit_events[0].port, 21);

  const auto esc = resolve_red_action(net, st, RedAction::escalate(host("Enterprise0")));
  EXPECT_FALSE(esc.red_success);
  EXPECT_EQ(st.red.believed_sessions[host("Enterprise0")], Access::None);
  EXPECT_TRUE(st.red.dead_ports[host("Enterprise0")].count(21));
  // The next scan no longer offers the decoy.
  resolve_red_action(net, st, RedAction::scan(host("Enterprise0")));
  for (const auto& p : st.red.known_services[host("Enterprise0")].ports) EXPECT_NE(p.port, 21);
}

TEST(RedResolution, ExploitNeedsPivot) {
  const auto& net = cage2();
  TrueState st = init_state(net, 5);
  // Subnet3 is not addressable from Subnet1.
  EXPECT_FALSE(resolve_red_action(net, st, RedAction::scan(host("Op_Server0"))).red_success);
  EXPECT_FALSE(resolve_red_action(net, st, RedAction::discover_subnet(2)).red_success);
  EXPECT_TRUE(resolve_red_action(net, st, RedAction::discover_subnet(1)).red_success);
  EXPECT_FALSE(resolve_red_action(net, st, RedAction::exploit(host("Enterprise0"))).red_success);  // not scanned
}

TEST(RedResolution, Impact) {
  const auto& net = cage2();
  TrueState st = init_state(net, 5);
  st.access[host("Op_Server0")] = Access::User;
  EXPECT_FALSE(resolve_red_action(net, st, RedAction::impact(host("Op_Server0"))).impact);
  st.access[host("Op_Server0")] = Access::Privileged;
  EXPECT_TRUE(resolve_red_action(net, st, RedAction::impact(host("Op_Server0"))).impact);
  st.access[host("Enterprise0")] = Access::Privileged;
  EXPECT_FALSE(resolve_red_action(net, st, RedAction::impact(host("Enterprise0"))).impact);
}

TEST(Reward, WorkedExamples) {
  const auto& net = cage2();
  TrueState st = init_state(net, 0);
  EXPECT_DOUBLE_EQ(compute_reward(net, st, kMonitor, {}), 0.0);

  st.access[host("User1")] = Access::Privileged;
  st.access[host("Enterprise0")] = Access::Privileged;
  EXPECT_NEAR(compute_reward(net, st, act(BlueActionKind::Restore, "User2"), {}), -2.1, 1e-12);

  for (auto& a : st.access) a = Access::Privileged;
  StepEvents ev;
  ev.impact = true;
  EXPECT_NEAR(compute_reward(net, st, act(BlueActionKind::Restore, "User2"), ev), -15.8, 1e-12);
}

TEST(Reward, MatchesOracleOnRandomStates) {
  const auto& net = cage2();
  RandomStream rng(2024);
  for (int i = 0; i < 500; ++i) {
    TrueState st = init_state(net, 0);
    std::map<std::string, bool> priv;
    for (HostIndex h = 0; h < net.host_count(); ++h) {
      if (h != net.foothold()) st.access[h] = static_cast<Access>(rng.below(3));
      priv[net.host_name(h)] = st.access[h] == Access::Privileged;
    }
    const BlueAction& blue = net.action(rng.below(net.action_count()));
    StepEvents ev;
    ev.impact = rng.below(2) == 1;
    EXPECT_NEAR(compute_reward(net, st, blue, ev),
                oracles::reward(priv, blue.kind == BlueActionKind::Restore, ev.impact), 1e-12);
  }
}

TEST(Observe, ExploitAlertWithCertainDetection) {
  Scenario s = default_scenario();
  s.params.p_detect_exploit = 1.0;
  const Network net(s);
  TrueState st = init_state(net, 9);
  StepEvents ev;
  ev.exploit_events.push_back({host("Enterprise0"), 22, false});
  const auto o = observe(net, st, kSleep, ev, initial_observation(net));
  EXPECT_EQ(o.hosts[host("Enterprise0")].activity, Activity::Exploit);
  EXPECT_EQ(o.hosts[host("Enterprise0")].compromise, Compromise::Unknown);
}

TEST(Observe, AnalyseRevealsTruth) {
  const auto& net = cage2();
  TrueState st = init_state(net, 9);
  st.access[host("Op_Server0")] = Access::Privileged;
  const auto o = observe(net, st, act(BlueActionKind::Analyse, "Op_Server0"), {}, initial_observation(net));
  EXPECT_EQ(o.hosts[host("Op_Server0")].compromise, Compromise::Privileged);
}

TEST(Observe, QuietWithoutEvents) {
  const auto& net = cage2();
  TrueState st = init_state(net, 9);
  const auto o = observe(net, st, kMonitor, {}, initial_observation(net));
  EXPECT_FALSE(o.any_alert());
  EXPECT_EQ(st.rng.cursor(), 0u);
}

TEST(Observe, SuccessfulRemoveResetsCompromise) {
  const auto& net = cage2();
  TrueState st = init_state(net, 9);
  BlueObservation prev = initial_observation(net);
  prev.hosts[host("User1")].compromise = Compromise::User;
  prev.hosts[host("User0")].compromise = Compromise::Privileged;
  StepEvents ev;
  ev.blue_success = true;
  EXPECT_EQ(observe(net, st, act(BlueActionKind::Remove, "User1"), ev, prev).hosts[host("User1")].compromise,
            Compromise::No);
  EXPECT_EQ(observe(net, st, act(BlueActionKind::Restore, "User0"), ev, prev).hosts[host("User0")].compromise,
            Compromise::Unknown);
}

TEST(Encoding, Layout) {
  const auto& net = cage2();
  BlueObservation o = initial_observation(net);
  auto v = encode_observation(o);
  ASSERT_EQ(v.size(), 52u);
  EXPECT_TRUE(std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }));

  o.hosts[host("User1")].activity = Activity::Exploit;
  v = encode_observation(o);
  EXPECT_EQ(std::count(v.begin(), v.end(), 1.0), 2);
  EXPECT_EQ(v[4 * host("User1")], 1.0);
  EXPECT_EQ(v[4 * host("User1") + 1], 1.0);
}

TEST(Encoding, InjectiveAndInvertible) {
  const auto& net = cage2();
  std::set<std::vector<double>> seen;
  for (int a = 0; a < 3; ++a) {
    for (int c = 0; c < 4; ++c) {
      BlueObservation o = initial_observation(net);
      o.hosts[5] = {static_cast<Activity>(a), static_cast<Compromise>(c)};
      const auto v = encode_observation(o);
      EXPECT_TRUE(seen.insert(v).second);
      EXPECT_EQ(decode_observation(v), o);
    }
  }
  EXPECT_EQ(seen.size(), 12u);
  EXPECT_THROW(decode_observation(std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST(Step, SleepSleepOnlyAdvancesTime) {
  const auto& net = cage2();
  TrueState st = init_state(net, 4);
  TrueState expected = st;
  const auto out = step(net, st, kSleep, RedAction::sleep(), initial_observation(net));
  expected.step = 1;
  EXPECT_EQ(st, expected);
  EXPECT_DOUBLE_EQ(out.reward, 0.0);
}

TEST(Step, DecoyBeforeScanIsVisibleToRed) {
  const auto& net = cage2();
  TrueState st = init_state(net, 4);
  step(net, st, kSleep, RedAction::scan(host("User1")), initial_observation(net));
  step(net, st, act(BlueActionKind::DecoyTomcat, "User1"), RedAction::scan(host("User1")), initial_observation(net));
  const auto& ports = st.red.known_services[host("User1")].ports;
  EXPECT_TRUE(std::any_of(ports.begin(), ports.end(), [](const KnownPort& p) { return p.port == 443; }));
}

TEST(Step, Deterministic) {
  const auto& net = cage2();
  TrueState a = init_state(net, 99), b = init_state(net, 99);
  const auto blue = act(BlueActionKind::DecoyApache, "Enterprise0");
  const auto red = RedAction::scan(host("Enterprise0"));
  const auto oa = step(net, a, blue, red, initial_observation(net));
  const auto ob = step(net, b, blue, red, initial_observation(net));
  EXPECT_EQ(a, b);
  EXPECT_EQ(oa.observation, ob.observation);
  EXPECT_EQ(oa.events, ob.events);
  EXPECT_EQ(oa.reward, ob.reward);
}

TEST(Step, FootholdSurvivesRandomPlay) {
  const auto& net = cage2();
  RandomStream pick(77);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TrueState st = init_state(net, seed);
    BlueObservation obs = initial_observation(net);
    for (int t = 0; t < 200; ++t) {
      const BlueAction& blue = net.action(pick.below(net.action_count()));
      RedAction red;
      red.kind = static_cast<RedActionKind>(pick.below(kRedActionKindCount));
      if (red.kind != RedActionKind::Sleep) red.target = pick.below(red.targets_subnet() ? 3 : 13);
      auto out = step(net, st, blue, red, obs);
      ASSERT_EQ(st.access[net.foothold()], Access::Privileged);
      ASSERT_LE(out.reward, 0.0);
      ASSERT_GE(out.reward, -15.8 - 1e-12);
      obs = std::move(out.observation);
    }
  }
}

TEST(Step, PassiveVersusScriptMatchesReplayOracle) {
  const auto& net = cage2();
  const std::vector<RedAction> script{
      RedAction::scan(host("Enterprise0")), RedAction::exploit(host("Enterprise0")),
      RedAction::escalate(host("Enterprise0")), RedAction::scan(host("Op_Server0")),
      RedAction::exploit(host("Op_Server0")), RedAction::escalate(host("Op_Server0"))};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto oracle = oracles::replay_bline_passive(seed, 12);
    TrueState st = init_state(net, seed);
    BlueObservation obs = initial_observation(net);
    for (int t = 0; t < 12; ++t) {
      const RedAction red = t < 6 ? script[t] : RedAction::impact(host("Op_Server0"));
      auto out = step(net, st, kSleep, red, obs);
      EXPECT_NEAR(out.reward, oracle.rewards[t], 1e-12) << "seed " << seed << " step " << t + 1;
      obs = std::move(out.observation);
    }
  }
}
