#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lateralsim/actions.hpp"
#include "lateralsim/common.hpp"

namespace lateralsim {

enum class HostKind : std::uint8_t { Host, Server };

inline std::string_view to_string(HostKind k) { return k == HostKind::Host ? "host" : "server"; }

struct ServiceSpec {
  std::string name;
  int port = 0;
  int exploit_priority = 0;

  friend bool operator==(const ServiceSpec&, const ServiceSpec&) = default;
};

struct HostSpec {
  std::string name;
  std::string subnet;
  HostKind kind = HostKind::Host;
  std::vector<ServiceSpec> services;
  std::set<DecoyType> allowed_decoys;

  friend bool operator==(const HostSpec&, const HostSpec&) = default;
};

struct Subnet {
  std::string name;
  std::size_t index = 0;  // 1-based

  friend bool operator==(const Subnet&, const Subnet&) = default;
};

struct EngineParams {
  double p_root_on_exploit = 0.1;
  double p_detect_exploit = 0.95;
  double p_detect_scan = 1.0;
  double p_false_positive = 0.0;
  double impact_penalty = 10.0;
  double restore_penalty = 1.0;
  double host_weight = 0.1;
  double server_weight = 1.0;

  friend bool operator==(const EngineParams&, const EngineParams&) = default;
};

struct Scenario {
  std::string name;
  std::vector<Subnet> subnets;
  std::vector<HostSpec> hosts;
  // subnet name -> subnets a session there may target
  std::map<std::string, std::set<std::string>> connectivity;
  std::string foothold_host;
  std::string impact_target;
  EngineParams params;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Severity : std::uint8_t { Error, Warning };

struct Violation {
  std::string rule;
  std::string element;
  std::string message;
  Severity severity = Severity::Error;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string to_string(const Violation& v) {
  return std::string(v.severity == Severity::Error ? "error" : "warning") + " [" + v.rule + "] " +
         v.element + ": " + v.message;
}

// ---------------------------------------------------------------------------
// Built-in network

namespace detail {

inline HostSpec linux_host(std::string name, std::string subnet, HostKind kind,
                           std::set<DecoyType> decoys) {
  return {std::move(name), std::move(subnet), kind, {{"sshd", 22, 1}}, std::move(decoys)};
}

inline HostSpec windows_host(std::string name, std::string subnet, HostKind kind) {
  using D = DecoyType;
  return {std::move(name),
          std::move(subnet),
          kind,
          {{"rdp", 3389, 1}, {"smb", 445, 3}},
          {D::Apache, D::Femitter, D::HarakaSMPT, D::Smss, D::SSHD, D::Tomcat, D::Vsftpd}};
}

}  // namespace detail

inline Scenario default_scenario() {
  using D = DecoyType;
  using detail::linux_host;
  using detail::windows_host;
  const std::set<D> linux_full{D::Apache, D::Femitter, D::HarakaSMPT, D::Svchost, D::Tomcat, D::Vsftpd};
  const std::set<D> linux_ops{D::Apache, D::HarakaSMPT, D::Svchost, D::Tomcat};

  Scenario s;
  s.name = "cage2";
  s.subnets = {{"Subnet1", 1}, {"Subnet2", 2}, {"Subnet3", 3}};

  s.hosts.push_back(linux_host("User0", "Subnet1", HostKind::Host, linux_full));
  s.hosts.push_back(windows_host("User1", "Subnet1", HostKind::Host));
  s.hosts.push_back(windows_host("User2", "Subnet1", HostKind::Host));
  auto user3 = linux_host("User3", "Subnet1", HostKind::Host, linux_full);
  user3.services.push_back({"mysql", 3306, 2});
  s.hosts.push_back(user3);
  auto user4 = user3;
  user4.name = "User4";
  s.hosts.push_back(user4);

  s.hosts.push_back(linux_host("Enterprise0", "Subnet2", HostKind::Server,
                               {D::Apache, D::Femitter, D::HarakaSMPT, D::Tomcat, D::Vsftpd}));
  s.hosts.push_back(windows_host("Enterprise1", "Subnet2", HostKind::Server));
  s.hosts.push_back(windows_host("Enterprise2", "Subnet2", HostKind::Server));
  s.hosts.push_back(linux_host("Defender", "Subnet2", HostKind::Host,
                               {D::Apache, D::HarakaSMPT, D::Svchost, D::Tomcat, D::Vsftpd}));

  s.hosts.push_back(linux_host("Op_Host0", "Subnet3", HostKind::Host, linux_ops));
  s.hosts.push_back(linux_host("Op_Host1", "Subnet3", HostKind::Host, linux_ops));
  s.hosts.push_back(linux_host("Op_Host2", "Subnet3", HostKind::Host, linux_ops));
  s.hosts.push_back(linux_host("Op_Server0", "Subnet3", HostKind::Server,
                               {D::Apache, D::Femitter, D::HarakaSMPT, D::Tomcat, D::Vsftpd}));

  s.connectivity = {
      {"Subnet1", {"Subnet1", "Subnet2"}},
      {"Subnet2", {"Subnet1", "Subnet2", "Subnet3"}},
      {"Subnet3", {"Subnet2", "Subnet3"}},
  };
  s.foothold_host = "User0";
  s.impact_target = "Op_Server0";
  return s;
}

// ---------------------------------------------------------------------------
// Validation

inline std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto err = [&](std::string rule, std::string element, std::string msg) {
    out.push_back({std::move(rule), std::move(element), std::move(msg), Severity::Error});
  };

  std::set<std::string> subnet_names;
  for (std::size_t i = 0; i < s.subnets.size(); ++i) {
    const auto& sn = s.subnets[i];
    if (!subnet_names.insert(sn.name).second) {
      err("duplicate-subnet", sn.name, "subnet name appears more than once");
    }
    if (sn.index != i + 1) {
      err("subnet-index", sn.name,
          "subnet indices must be contiguous from 1 (expected " + std::to_string(i + 1) + ")");
    }
  }
  if (s.subnets.empty()) err("no-subnets", s.name, "scenario defines no subnets");

  std::map<std::string, const HostSpec*> hosts;
  for (const auto& h : s.hosts) {
    if (!hosts.emplace(h.name, &h).second) {
      err("duplicate-host", h.name, "host name appears more than once");
    }
    if (!subnet_names.count(h.subnet)) {
      err("unknown-subnet", h.name, "references unknown subnet '" + h.subnet + "'");
    }
    std::set<int> ports;
    for (const auto& svc : h.services) {
      if (svc.port < 1 || svc.port > 65535) {
        err("port-range", h.name + "/" + svc.name, "port " + std::to_string(svc.port) + " outside 1-65535");
      }
      if (svc.exploit_priority < 0) {
        err("priority-range", h.name + "/" + svc.name, "exploit priority must be >= 0");
      }
      if (!ports.insert(svc.port).second) {
        err("duplicate-port", h.name, "port " + std::to_string(svc.port) + " used by two services");
      }
    }
    for (DecoyType d : h.allowed_decoys) {
      if (ports.count(decoy_info(d).port)) {
        err("decoy-port-collision", h.name,
            std::string(to_string(d)) + " default port " + std::to_string(decoy_info(d).port) +
                " collides with a real service");
      }
    }
  }
  if (s.hosts.empty()) err("no-hosts", s.name, "scenario defines no hosts");

  for (const auto& [from, targets] : s.connectivity) {
    if (!subnet_names.count(from)) err("unknown-subnet", "connectivity", "unknown subnet '" + from + "'");
    for (const auto& to : targets) {
      if (!subnet_names.count(to)) err("unknown-subnet", "connectivity/" + from, "unknown subnet '" + to + "'");
    }
  }
  for (const auto& sn : s.subnets) {
    auto it = s.connectivity.find(sn.name);
    if (it == s.connectivity.end() || !it->second.count(sn.name)) {
      err("self-reachability", sn.name, "connectivity must let a subnet reach itself");
    }
  }

  auto foothold = hosts.find(s.foothold_host);
  if (foothold == hosts.end()) {
    err("unknown-host", "foothold", "foothold host '" + s.foothold_host + "' does not exist");
  } else if (foothold->second->kind != HostKind::Host) {
    err("foothold-kind", s.foothold_host, "foothold must have kind=host");
  }
  auto target = hosts.find(s.impact_target);
  if (target == hosts.end()) {
    err("unknown-host", "impact_target", "impact target '" + s.impact_target + "' does not exist");
  } else if (target->second->kind != HostKind::Server) {
    err("impact-target-kind", s.impact_target, "impact target must have kind=server");
  }
  if (foothold != hosts.end() && s.foothold_host == s.impact_target) {
    err("foothold-is-target", s.foothold_host, "foothold and impact target must differ");
  }

  const auto& p = s.params;
  const std::pair<const char*, double> probs[] = {{"p_root_on_exploit", p.p_root_on_exploit},
                                                  {"p_detect_exploit", p.p_detect_exploit},
                                                  {"p_detect_scan", p.p_detect_scan},
                                                  {"p_false_positive", p.p_false_positive}};
  for (const auto& [name, value] : probs) {
    if (!(value >= 0.0 && value <= 1.0)) err("probability-range", std::string("params/") + name, "must lie in [0, 1]");
  }
  const std::pair<const char*, double> weights[] = {{"impact_penalty", p.impact_penalty},
                                                    {"restore_penalty", p.restore_penalty},
                                                    {"host_weight", p.host_weight},
                                                    {"server_weight", p.server_weight}};
  for (const auto& [name, value] : weights) {
    if (!(value >= 0.0)) err("negative-weight", std::string("params/") + name, "must be >= 0");
  }

  // Hosts Red can reach transitively from the foothold but could never exploit.
  if (foothold != hosts.end() && subnet_names.count(foothold->second->subnet)) {
    std::set<std::string> reached{foothold->second->subnet};
    std::vector<std::string> frontier{foothold->second->subnet};
    while (!frontier.empty()) {
      auto cur = frontier.back();
      frontier.pop_back();
      auto it = s.connectivity.find(cur);
      if (it == s.connectivity.end()) continue;
      for (const auto& nxt : it->second) {
        if (subnet_names.count(nxt) && reached.insert(nxt).second) frontier.push_back(nxt);
      }
    }
    for (const auto& h : s.hosts) {
      if (h.name != s.foothold_host && reached.count(h.subnet) && h.services.empty()) {
        out.push_back({"no-services", h.name, "reachable host exposes no exploitable service", Severity::Warning});
      }
    }
  }
  return out;
}

inline bool has_errors(const std::vector<Violation>& vs) {
  return std::any_of(vs.begin(), vs.end(), [](const Violation& v) { return v.severity == Severity::Error; });
}

// ---------------------------------------------------------------------------
// Document format (JSON). serialize_scenario emits the canonical dialect.

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> known,
                                const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ScenarioError(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get_field(const nlohmann::json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError(where + ": missing required key '" + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(where + "/" + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return get_field<T>(obj, key, where);
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError("syntax error at " + detail::line_col(text, e.byte) + " (byte " + std::to_string(e.byte) +
                        "): " + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario document must be an object");
  detail::reject_unknown_keys(doc, {"name", "subnets", "hosts", "connectivity", "foothold", "impact_target", "params"},
                              "scenario");

  Scenario s;
  s.name = detail::get_or<std::string>(doc, "name", "scenario", "scenario");

  const auto& subnets = doc.contains("subnets") ? doc["subnets"] : json::array();
  if (!subnets.is_array()) throw ScenarioError("scenario/subnets: expected a list");
  std::set<std::string> subnet_names;
  for (std::size_t i = 0; i < subnets.size(); ++i) {
    const auto& e = subnets[i];
    const std::string where = "subnets[" + std::to_string(i) + "]";
    Subnet sn;
    if (e.is_string()) {
      sn = {e.get<std::string>(), i + 1};
    } else if (e.is_object()) {
      detail::reject_unknown_keys(e, {"name", "index"}, where);
      sn.name = detail::get_field<std::string>(e, "name", where);
      sn.index = detail::get_or<std::size_t>(e, "index", i + 1, where);
    } else {
      throw ScenarioError(where + ": expected a name or {name, index}");
    }
    if (!subnet_names.insert(sn.name).second) throw ScenarioError(where + ": duplicate subnet name '" + sn.name + "'");
    s.subnets.push_back(std::move(sn));
  }

  const auto& hosts = doc.contains("hosts") ? doc["hosts"] : json::array();
  if (!hosts.is_array()) throw ScenarioError("scenario/hosts: expected a list");
  std::set<std::string> host_names;
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    const auto& e = hosts[i];
    std::string where = "hosts[" + std::to_string(i) + "]";
    if (!e.is_object()) throw ScenarioError(where + ": expected an object");
    detail::reject_unknown_keys(e, {"name", "subnet", "kind", "services", "allowed_decoys"}, where);
    HostSpec h;
    h.name = detail::get_field<std::string>(e, "name", where);
    where += " (" + h.name + ")";
    if (!host_names.insert(h.name).second) throw ScenarioError(where + ": duplicate host name '" + h.name + "'");
    h.subnet = detail::get_field<std::string>(e, "subnet", where);
    if (!subnet_names.count(h.subnet)) {
      throw ScenarioError(where + ": unknown subnet reference '" + h.subnet + "'");
    }
    const auto kind = detail::get_or<std::string>(e, "kind", "host", where);
    if (kind == "host") {
      h.kind = HostKind::Host;
    } else if (kind == "server") {
      h.kind = HostKind::Server;
    } else {
      throw ScenarioError(where + ": kind must be 'host' or 'server', got '" + kind + "'");
    }
    if (e.contains("services")) {
      if (!e["services"].is_array()) throw ScenarioError(where + "/services: expected a list");
      for (const auto& svc : e["services"]) {
        if (!svc.is_object()) throw ScenarioError(where + "/services: expected objects");
        detail::reject_unknown_keys(svc, {"name", "port", "priority"}, where + "/services");
        h.services.push_back({detail::get_field<std::string>(svc, "name", where + "/services"),
                              detail::get_field<int>(svc, "port", where + "/services"),
                              detail::get_or<int>(svc, "priority", 0, where + "/services")});
      }
    }
    for (const auto& name : detail::get_or<std::vector<std::string>>(e, "allowed_decoys", {}, where)) {
      auto d = parse_decoy_type(name);
      if (!d) throw ScenarioError(where + ": unknown decoy type '" + name + "'");
      h.allowed_decoys.insert(*d);
    }
    s.hosts.push_back(std::move(h));
  }

  if (doc.contains("connectivity")) {
    const auto& conn = doc["connectivity"];
    if (!conn.is_object()) throw ScenarioError("scenario/connectivity: expected an object");
    for (const auto& [from, targets] : conn.items()) {
      if (!subnet_names.count(from)) throw ScenarioError("connectivity: unknown subnet reference '" + from + "'");
      if (!targets.is_array()) throw ScenarioError("connectivity/" + from + ": expected a list");
      auto& set = s.connectivity[from];
      for (const auto& t : targets) {
        if (!t.is_string()) throw ScenarioError("connectivity/" + from + ": expected subnet names");
        const auto to = t.get<std::string>();
        if (!subnet_names.count(to)) {
          throw ScenarioError("connectivity/" + from + ": unknown subnet reference '" + to + "'");
        }
        set.insert(to);
      }
    }
  } else {
    for (const auto& sn : s.subnets) s.connectivity[sn.name] = {sn.name};
  }

  s.foothold_host = detail::get_field<std::string>(doc, "foothold", "scenario");
  if (!host_names.count(s.foothold_host)) {
    throw ScenarioError("foothold: unknown host reference '" + s.foothold_host + "'");
  }
  s.impact_target = detail::get_field<std::string>(doc, "impact_target", "scenario");
  if (!host_names.count(s.impact_target)) {
    throw ScenarioError("impact_target: unknown host reference '" + s.impact_target + "'");
  }

  if (doc.contains("params")) {
    const auto& p = doc["params"];
    if (!p.is_object()) throw ScenarioError("scenario/params: expected an object");
    detail::reject_unknown_keys(p,
                                {"p_root_on_exploit", "p_detect_exploit", "p_detect_scan", "p_false_positive",
                                 "impact_penalty", "restore_penalty", "host_weight", "server_weight"},
                                "params");
    const EngineParams d;
    auto& out = s.params;
    out.p_root_on_exploit = detail::get_or(p, "p_root_on_exploit", d.p_root_on_exploit, "params");
    out.p_detect_exploit = detail::get_or(p, "p_detect_exploit", d.p_detect_exploit, "params");
    out.p_detect_scan = detail::get_or(p, "p_detect_scan", d.p_detect_scan, "params");
    out.p_false_positive = detail::get_or(p, "p_false_positive", d.p_false_positive, "params");
    out.impact_penalty = detail::get_or(p, "impact_penalty", d.impact_penalty, "params");
    out.restore_penalty = detail::get_or(p, "restore_penalty", d.restore_penalty, "params");
    out.host_weight = detail::get_or(p, "host_weight", d.host_weight, "params");
    out.server_weight = detail::get_or(p, "server_weight", d.server_weight, "params");
  }
  return s;
}

inline std::string serialize_scenario(const Scenario& s) {
  using detail::ordered_json;
  ordered_json doc;
  doc["name"] = s.name;
  doc["subnets"] = ordered_json::array();
  for (const auto& sn : s.subnets) doc["subnets"].push_back({{"name", sn.name}, {"index", sn.index}});
  doc["hosts"] = ordered_json::array();
  for (const auto& h : s.hosts) {
    ordered_json e;
    e["name"] = h.name;
    e["subnet"] = h.subnet;
    e["kind"] = std::string(to_string(h.kind));
    e["services"] = ordered_json::array();
    for (const auto& svc : h.services) {
      e["services"].push_back({{"name", svc.name}, {"port", svc.port}, {"priority", svc.exploit_priority}});
    }
    e["allowed_decoys"] = ordered_json::array();
    for (DecoyType d : h.allowed_decoys) e["allowed_decoys"].push_back(std::string(to_string(d)));
    doc["hosts"].push_back(std::move(e));
  }
  doc["connectivity"] = ordered_json::object();
  for (const auto& [from, targets] : s.connectivity) {
    doc["connectivity"][from] = ordered_json(std::vector<std::string>(targets.begin(), targets.end()));
  }
  doc["foothold"] = s.foothold_host;
  doc["impact_target"] = s.impact_target;
  const auto& p = s.params;
  doc["params"] = {{"p_root_on_exploit", p.p_root_on_exploit}, {"p_detect_exploit", p.p_detect_exploit},
                   {"p_detect_scan", p.p_detect_scan},         {"p_false_positive", p.p_false_positive},
                   {"impact_penalty", p.impact_penalty},       {"restore_penalty", p.restore_penalty},
                   {"host_weight", p.host_weight},             {"server_weight", p.server_weight}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Blue action space

inline std::vector<BlueAction> enumerate_blue_actions(const Scenario& s) {
  std::vector<BlueAction> out;
  out.reserve(kUntargetedBlueKinds + kTargetedBlueKinds * s.hosts.size());
  out.push_back({BlueActionKind::Sleep, std::nullopt});
  out.push_back({BlueActionKind::Monitor, std::nullopt});
  for (std::size_t k = kUntargetedBlueKinds; k < kBlueActionKindCount; ++k) {
    for (HostIndex h = 0; h < s.hosts.size(); ++h) out.push_back({static_cast<BlueActionKind>(k), h});
  }
  return out;
}

// Validated scenario plus the index tables the engine and agents work with.
class Network {
 public:
  explicit Network(Scenario s) : scenario_(std::move(s)) {
    const auto violations = validate_scenario(scenario_);
    if (has_errors(violations)) {
      std::ostringstream msg;
      msg << "invalid scenario '" << scenario_.name << "':";
      for (const auto& v : violations) {
        if (v.severity == Severity::Error) msg << "\n  " << to_string(v);
      }
      throw ScenarioError(msg.str());
    }
    for (const auto& h : scenario_.hosts) {
      host_subnet_.push_back(*find_subnet(h.subnet));
    }
    subnet_hosts_.resize(scenario_.subnets.size());
    for (HostIndex h = 0; h < host_subnet_.size(); ++h) subnet_hosts_[host_subnet_[h]].push_back(h);
    const auto n = scenario_.subnets.size();
    reach_.assign(n * n, false);
    for (const auto& [from, targets] : scenario_.connectivity) {
      for (const auto& to : targets) reach_[*find_subnet(from) * n + *find_subnet(to)] = true;
    }
    foothold_ = *find_host(scenario_.foothold_host);
    impact_target_ = *find_host(scenario_.impact_target);
    actions_ = enumerate_blue_actions(scenario_);
  }

  const Scenario& scenario() const { return scenario_; }
  const EngineParams& params() const { return scenario_.params; }

  std::size_t host_count() const { return scenario_.hosts.size(); }
  std::size_t subnet_count() const { return scenario_.subnets.size(); }
  const HostSpec& host(HostIndex h) const { return scenario_.hosts.at(h); }
  const std::string& host_name(HostIndex h) const { return scenario_.hosts.at(h).name; }
  const std::string& subnet_name(SubnetIndex s) const { return scenario_.subnets.at(s).name; }
  SubnetIndex subnet_of(HostIndex h) const { return host_subnet_.at(h); }
  const std::vector<HostIndex>& hosts_in(SubnetIndex s) const { return subnet_hosts_.at(s); }
  bool reaches(SubnetIndex from, SubnetIndex to) const { return reach_[from * subnet_count() + to]; }

  HostIndex foothold() const { return foothold_; }
  HostIndex impact_target() const { return impact_target_; }

  std::optional<HostIndex> find_host(std::string_view name) const {
    for (HostIndex i = 0; i < scenario_.hosts.size(); ++i) {
      if (scenario_.hosts[i].name == name) return i;
    }
    return std::nullopt;
  }
  std::optional<SubnetIndex> find_subnet(std::string_view name) const {
    for (SubnetIndex i = 0; i < scenario_.subnets.size(); ++i) {
      if (scenario_.subnets[i].name == name) return i;
    }
    return std::nullopt;
  }

  // Canonical Blue action list and its inverse.
  const std::vector<BlueAction>& actions() const { return actions_; }
  std::size_t action_count() const { return actions_.size(); }
  const BlueAction& action(ActionIndex i) const { return actions_.at(i); }
  ActionIndex index_of(const BlueAction& a) const {
    const auto k = static_cast<std::size_t>(a.kind);
    if (!is_targeted(a.kind)) return k;
    return kUntargetedBlueKinds + (k - kUntargetedBlueKinds) * host_count() + a.target.value();
  }

  std::size_t observation_length() const { return 4 * host_count(); }

 private:
  Scenario scenario_;
  std::vector<SubnetIndex> host_subnet_;
  std::vector<std::vector<HostIndex>> subnet_hosts_;
  std::vector<bool> reach_;
  HostIndex foothold_ = 0;
  HostIndex impact_target_ = 0;
  std::vector<BlueAction> actions_;
};

// Throws std::invalid_argument if the action's targeting does not match its kind.
inline void check_blue_action(const Network& net, const BlueAction& a) {
  if (is_targeted(a.kind) != a.target.has_value()) {
    throw std::invalid_argument(std::string(to_string(a.kind)) +
                                (is_targeted(a.kind) ? " requires a host target" : " takes no target"));
  }
  if (a.target && *a.target >= net.host_count()) {
    throw std::invalid_argument(std::string(to_string(a.kind)) + ": host index out of range");
  }
}

inline std::string describe(const Network& net, const BlueAction& a) {
  std::string out(to_string(a.kind));
  if (a.target) out += " " + net.host_name(*a.target);
  return out;
}

inline std::string describe(const Network& net, const RedAction& a) {
  std::string out(to_string(a.kind));
  if (a.target) out += " " + (a.targets_subnet() ? net.subnet_name(*a.target) : net.host_name(*a.target));
  return out;
}

}  // namespace lateralsim
