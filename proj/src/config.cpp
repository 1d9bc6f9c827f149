#include "iotsynth/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>

#include "iotsynth/appproto.hpp"
#include "iotsynth/rng.hpp"

namespace iotsynth::cfg {

namespace {

const std::array<std::string, 3> kSecurityNames = {"plaintext", "auth", "tls"};
const std::array<std::string, 6> kTraceAttackNames = {"none",      "publish_flood", "flood_dos",
                                                      "slowite",   "malformed",
                                                      "auth_bruteforce"};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t sep = s.find(',', start);
        std::string item = trim(sep == std::string::npos ? s.substr(start)
                                                         : s.substr(start, sep - start));
        if (!item.empty()) out.push_back(item);
        if (sep == std::string::npos) break;
        start = sep + 1;
    }
    return out;
}

struct Entry {
    std::string key;
    std::string value;
    int line;
};

struct Section {
    std::string name;
    int line;
    std::vector<Entry> entries;
};

std::vector<Section> parse_sections(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("unterminated section header", lineno);
            std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw ConfigError("empty section name", lineno);
            sections.push_back(Section{name, lineno, {}});
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", lineno);
        if (sections.empty())
            throw ConfigError("key outside of any [section]", lineno);
        Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
        if (e.key.empty()) throw ConfigError("empty key", lineno);
        sections.back().entries.push_back(std::move(e));
    }
    return sections;
}

long long to_int(const Entry& e) {
    char* end = nullptr;
    long long v = std::strtoll(e.value.c_str(), &end, 10);
    if (end == e.value.c_str() || *end != '\0')
        throw ConfigError("value of '" + e.key + "' must be an integer", e.line);
    return v;
}

double to_double(const Entry& e) {
    char* end = nullptr;
    double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0')
        throw ConfigError("value of '" + e.key + "' must be a number", e.line);
    return v;
}

bool to_bool(const Entry& e) {
    if (e.value == "yes" || e.value == "true" || e.value == "1") return true;
    if (e.value == "no" || e.value == "false" || e.value == "0") return false;
    throw ConfigError("value of '" + e.key + "' must be yes or no", e.line);
}

[[noreturn]] void unknown_key(const Section& s, const Entry& e) {
    throw ConfigError("unknown key '" + e.key + "' in section [" + s.name + "]", e.line);
}

std::vector<Window> parse_windows(const Entry& e) {
    std::vector<Window> out;
    for (const auto& item : split_list(e.value)) {
        std::size_t dash = item.find('-');
        if (dash == std::string::npos)
            throw ConfigError("window '" + item + "' must be start-end seconds", e.line);
        char* end = nullptr;
        double a = std::strtod(item.c_str(), &end);
        double b = std::strtod(item.c_str() + dash + 1, &end);
        if (a < 0 || b <= a)
            throw ConfigError("malformed window '" + item + "'", e.line);
        out.push_back(Window{seconds_to_us(a), seconds_to_us(b)});
    }
    return out;
}

std::string render_windows(const std::vector<Window>& ws) {
    std::string out;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i) out += ',';
        out += format_double(double(ws[i].start_us) / 1e6);
        out += '-';
        out += format_double(double(ws[i].end_us) / 1e6);
    }
    return out;
}

void apply_sensor_key(SensorBehavior& b, const Section& s, const Entry& e, bool allow_id) {
    if (e.key == "id") {
        if (!allow_id) throw ConfigError("'id' is not allowed in [sensor_defaults]", e.line);
        b.sensor_id = int(to_int(e));
    } else if (e.key == "schedule") {
        if (e.value == "periodic") b.schedule = ScheduleKind::periodic;
        else if (e.value == "random") b.schedule = ScheduleKind::random;
        else throw ConfigError("schedule must be periodic or random", e.line);
    } else if (e.key == "period_s") {
        b.period_s = to_double(e);
    } else if (e.key == "mean_s") {
        b.mean_s = to_double(e);
    } else if (e.key == "active_s") {
        b.active_windows = parse_windows(e);
    } else if (e.key == "dataset") {
        b.dataset_source = e.value;
    } else if (e.key == "columns") {
        b.columns = split_list(e.value);
    } else if (e.key == "target_broker") {
        if (e.value == "auto") b.target_broker = -1;
        else b.target_broker = int(to_int(e)) - 1;  // 1-based in the file
    } else if (e.key == "messages_per_connection") {
        b.messages_per_connection = int(to_int(e));
    } else {
        unknown_key(s, e);
    }
}

}  // namespace

const std::string& to_string(SecurityMode m) { return kSecurityNames[static_cast<int>(m)]; }

std::optional<SecurityMode> parse_security_mode(const std::string& s) {
    for (int i = 0; i < 3; ++i)
        if (kSecurityNames[i] == s) return static_cast<SecurityMode>(i);
    return std::nullopt;
}

const std::string& to_string(TraceAttack a) { return kTraceAttackNames[static_cast<int>(a)]; }

std::optional<TraceAttack> parse_trace_attack(const std::string& s) {
    for (int i = 0; i < 6; ++i)
        if (kTraceAttackNames[i] == s) return static_cast<TraceAttack>(i);
    return std::nullopt;
}

std::string format_double(double v) {
    char buf[40];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- topology ----

TopologyConfig parse_topology_config(const std::string& text) {
    TopologyConfig cfg;
    bool saw_topology = false;
    for (const auto& s : parse_sections(text)) {
        if (s.name == "topology") {
            if (saw_topology) throw ConfigError("duplicate [topology] section", s.line);
            saw_topology = true;
            for (const auto& e : s.entries) {
                if (e.key == "sensors") cfg.sensor_count = int(to_int(e));
                else if (e.key == "kafka_brokers") cfg.kafka_broker_count = int(to_int(e));
                else if (e.key == "kafka_connect") cfg.has_kafka_connect = to_bool(e);
                else if (e.key == "client_connect") cfg.has_client_connect = to_bool(e);
                else if (e.key == "routers") cfg.router_count = int(to_int(e));
                else if (e.key == "switches") cfg.switch_count = int(to_int(e));
                else if (e.key == "attacker_node") cfg.attacker_node = to_bool(e);
                else unknown_key(s, e);
            }
        } else if (s.name == "mqtt_broker") {
            BrokerSpec spec;
            for (const auto& e : s.entries) {
                if (e.key == "security") {
                    auto m = parse_security_mode(e.value);
                    if (!m)
                        throw ConfigError("security must be plaintext, auth or tls", e.line);
                    spec.security = *m;
                } else if (e.key == "subnet") {
                    spec.subnet = int(to_int(e));
                } else {
                    unknown_key(s, e);
                }
            }
            cfg.mqtt_brokers.push_back(spec);
        } else {
            throw ConfigError("unknown section [" + s.name + "]", s.line);
        }
    }
    if (!saw_topology) throw ConfigError("missing [topology] section");
    validate(cfg);
    return cfg;
}

void validate(const TopologyConfig& cfg) {
    if (cfg.sensor_count < 0) throw ConfigError("sensor count must be non-negative");
    if (cfg.kafka_broker_count != 0 && cfg.kafka_broker_count != 1)
        throw ConfigError("kafka broker count must be 0 or 1");
    if (cfg.router_count < 0) throw ConfigError("router count must be non-negative");
    if (cfg.switch_count < 0) throw ConfigError("switch count must be non-negative");
    std::set<int> subnets;
    for (const auto& b : cfg.mqtt_brokers) {
        if (b.subnet < 1 || b.subnet > 254)
            throw ConfigError("broker subnet must be in 1..254");
        if (b.subnet >= 18 && b.subnet <= 20)
            throw ConfigError("broker subnet collides with the sensor subnets 18-20");
        if (!subnets.insert(b.subnet).second)
            throw ConfigError("at most one broker per subnet (duplicate subnet " +
                              std::to_string(b.subnet) + ")");
    }
    if (cfg.has_kafka_connect && cfg.kafka_broker_count == 0)
        throw ConfigError("kafka_connect requires a kafka broker");
}

std::string render_topology_config(const TopologyConfig& cfg) {
    std::ostringstream out;
    out << "[topology]\n";
    out << "sensors = " << cfg.sensor_count << "\n";
    out << "kafka_brokers = " << cfg.kafka_broker_count << "\n";
    out << "kafka_connect = " << (cfg.has_kafka_connect ? "yes" : "no") << "\n";
    out << "client_connect = " << (cfg.has_client_connect ? "yes" : "no") << "\n";
    out << "routers = " << cfg.router_count << "\n";
    out << "switches = " << cfg.switch_count << "\n";
    out << "attacker_node = " << (cfg.attacker_node ? "yes" : "no") << "\n";
    for (const auto& b : cfg.mqtt_brokers) {
        out << "\n[mqtt_broker]\n";
        out << "security = " << to_string(b.security) << "\n";
        out << "subnet = " << b.subnet << "\n";
    }
    return out.str();
}

// ---- scenario ----

ScenarioConfig parse_scenario_config(const std::string& text, const TopologyConfig& topo) {
    ScenarioConfig cfg;
    std::vector<std::pair<SensorBehavior, int>> overrides;  // behavior, line
    bool saw_scenario = false;

    for (const auto& s : parse_sections(text)) {
        if (s.name == "scenario") {
            saw_scenario = true;
            for (const auto& e : s.entries) {
                if (e.key == "duration_s") cfg.duration_s = to_double(e);
                else unknown_key(s, e);
            }
        } else if (s.name == "engine") {
            for (const auto& e : s.entries) {
                auto& en = cfg.engine;
                if (e.key == "link_latency_s") en.link_latency_s = to_double(e);
                else if (e.key == "broker_capacity_eps") en.broker_capacity_eps = to_double(e);
                else if (e.key == "broker_max_queue") en.broker_max_queue = int(to_int(e));
                else if (e.key == "sensor_give_up_after") en.sensor_give_up_after = int(to_int(e));
                else if (e.key == "connect_timeout_s") en.connect_timeout_s = to_double(e);
                else if (e.key == "bridge_poll_interval_s")
                    en.bridge_poll_interval_s = to_double(e);
                else if (e.key == "rest_poll_interval_s") en.rest_poll_interval_s = to_double(e);
                else if (e.key == "dns_poll_interval_s") en.dns_poll_interval_s = to_double(e);
                else if (e.key == "ntp_poll_interval_s") en.ntp_poll_interval_s = to_double(e);
                else unknown_key(s, e);
            }
        } else if (s.name == "sensor_defaults") {
            for (const auto& e : s.entries) apply_sensor_key(cfg.sensor_template, s, e, false);
        } else if (s.name == "sensor") {
            SensorBehavior b = cfg.sensor_template;
            b.sensor_id = -1;
            for (const auto& e : s.entries) apply_sensor_key(b, s, e, true);
            if (b.sensor_id < 0)
                throw ConfigError("[sensor] section requires an 'id' key", s.line);
            overrides.emplace_back(std::move(b), s.line);
        } else if (s.name == "attack") {
            auto& a = cfg.attack;
            a.enabled = true;
            for (const auto& e : s.entries) {
                if (e.key == "enabled") a.enabled = to_bool(e);
                else if (e.key == "steps") {
                    a.enabled_steps.clear();
                    for (const auto& item : split_list(e.value))
                        a.enabled_steps.push_back(std::atoi(item.c_str()));
                } else if (e.key == "skip_to_ddos") a.skip_to_ddos = to_bool(e);
                else if (e.key == "start_s") a.start_s = to_double(e);
                else if (e.key == "sleeps_s") {
                    a.inter_step_sleep_s.clear();
                    for (const auto& item : split_list(e.value))
                        a.inter_step_sleep_s.push_back(std::strtod(item.c_str(), nullptr));
                } else if (e.key == "compromised_fraction") a.compromised_fraction = to_double(e);
                else if (e.key == "scan_port") a.scan.port = u16(to_int(e));
                else if (e.key == "scan_max_rate_pps") a.scan.max_rate_pps = to_double(e);
                else if (e.key == "scan_ranges") {
                    a.scan.target_ranges.clear();
                    for (const auto& item : split_list(e.value))
                        a.scan.target_ranges.push_back(parse_addr_range(item));
                } else if (e.key == "bruteforce_tasks") a.bruteforce.parallel_tasks = int(to_int(e));
                else if (e.key == "bruteforce_usernames")
                    a.bruteforce.username_dict_size = int(to_int(e));
                else if (e.key == "bruteforce_passwords")
                    a.bruteforce.password_dict_size = int(to_int(e));
                else if (e.key == "bruteforce_attempt_s")
                    a.bruteforce.attempt_duration_s = to_double(e);
                else if (e.key == "payload_bytes") a.payload.payload_bytes = u64(to_int(e));
                else if (e.key == "ddos_flood_connections")
                    a.ddos.flood_connections = int(to_int(e));
                else if (e.key == "ddos_flood_message_size")
                    a.ddos.flood_message_size = int(to_int(e));
                else if (e.key == "ddos_size_unit") {
                    if (e.value == "kb") a.ddos.fcsize_in_kb = true;
                    else if (e.value == "bytes") a.ddos.fcsize_in_kb = false;
                    else throw ConfigError("ddos_size_unit must be kb or bytes", e.line);
                } else if (e.key == "ddos_slow_connections")
                    a.ddos.slow_connections = int(to_int(e));
                else if (e.key == "ddos_flood_interval_s")
                    a.ddos.flood_publish_interval_s = to_double(e);
                else if (e.key == "ddos_target") a.ddos.target_broker = e.value;
                else unknown_key(s, e);
            }
        } else if (s.name == "capture") {
            for (const auto& e : s.entries) {
                if (e.key == "probe") cfg.capture_probes.push_back(e.value);
                else unknown_key(s, e);
            }
        } else if (s.name == "trace") {
            TraceJob t;
            for (const auto& e : s.entries) {
                if (e.key == "name") t.name = e.value;
                else if (e.key == "duration_s") t.duration_s = to_double(e);
                else if (e.key == "legit") t.include_legit = to_bool(e);
                else if (e.key == "attack") {
                    auto a = parse_trace_attack(e.value);
                    if (!a) throw ConfigError("unknown trace attack '" + e.value + "'", e.line);
                    t.attack = *a;
                } else if (e.key == "broker_mode") {
                    auto m = parse_security_mode(e.value);
                    if (!m)
                        throw ConfigError("broker_mode must be plaintext, auth or tls", e.line);
                    t.broker_mode_override = *m;
                } else if (e.key == "publish_interval_s") t.publish_interval_s = to_double(e);
                else if (e.key == "payload_bytes") t.payload_bytes = u64(to_int(e));
                else if (e.key == "messages_per_connection")
                    t.messages_per_connection = int(to_int(e));
                else if (e.key == "connections") t.connection_count = int(to_int(e));
                else unknown_key(s, e);
            }
            if (t.name.empty()) throw ConfigError("[trace] section requires a 'name'", s.line);
            cfg.traces.push_back(std::move(t));
        } else {
            throw ConfigError("unknown section [" + s.name + "]", s.line);
        }
    }
    if (!saw_scenario) throw ConfigError("missing [scenario] section");

    // Resolve the per-sensor list: template plus deltas.
    cfg.sensors.clear();
    cfg.sensors.reserve(std::size_t(topo.sensor_count));
    for (int i = 0; i < topo.sensor_count; ++i) {
        SensorBehavior b = cfg.sensor_template;
        b.sensor_id = i;
        cfg.sensors.push_back(std::move(b));
    }
    for (auto& [b, line] : overrides) {
        if (b.sensor_id >= topo.sensor_count)
            throw ConfigError("sensor id " + std::to_string(b.sensor_id) +
                                  " does not exist in the topology",
                              line);
        cfg.sensors[std::size_t(b.sensor_id)] = b;
    }

    validate(cfg, topo);
    return cfg;
}

void validate(const ScenarioConfig& cfg, const TopologyConfig& topo) {
    if (cfg.duration_s < 0) throw ConfigError("scenario duration must be non-negative");
    const auto& en = cfg.engine;
    if (en.link_latency_s <= 0) throw ConfigError("link latency must be positive");
    if (en.broker_capacity_eps <= 0) throw ConfigError("broker capacity must be positive");
    if (en.broker_max_queue < 1) throw ConfigError("broker queue bound must be at least 1");
    if (en.sensor_give_up_after < 1) throw ConfigError("give-up threshold must be at least 1");
    if (en.connect_timeout_s <= 0) throw ConfigError("connect timeout must be positive");

    for (const auto& b : cfg.sensors) {
        std::string who = "sensor " + std::to_string(b.sensor_id);
        if (b.schedule == ScheduleKind::periodic && b.period_s <= 0)
            throw ConfigError(who + ": period_s must be positive");
        if (b.schedule == ScheduleKind::random && b.mean_s <= 0)
            throw ConfigError(who + ": mean_s must be positive");
        if (b.messages_per_connection < 1)
            throw ConfigError(who + ": messages_per_connection must be positive");
        for (std::size_t i = 0; i < b.active_windows.size(); ++i) {
            const auto& w = b.active_windows[i];
            if (w.end_us <= w.start_us)
                throw ConfigError(who + ": active window must end after it starts");
            if (i > 0 && w.start_us < b.active_windows[i - 1].end_us)
                throw ConfigError(who + ": active windows must be sorted and non-overlapping");
        }
        if (b.columns.empty()) throw ConfigError(who + ": column selection is empty");
        if (b.target_broker >= 0 && b.target_broker >= int(topo.mqtt_brokers.size()))
            throw ConfigError(who + ": target broker " + std::to_string(b.target_broker + 1) +
                              " does not exist in the topology");
        // Column subset check against the dataset header.
        auto ds = app::SensorDataset::resolve(b.dataset_source);
        ds.column_indexes(b.columns);
    }
    if (!cfg.sensors.empty() && topo.mqtt_brokers.empty())
        throw ConfigError("sensors configured but the topology has no MQTT broker");

    const auto& a = cfg.attack;
    if (a.enabled) {
        if (topo.mqtt_brokers.empty())
            throw ConfigError("attack scenario requires at least one MQTT broker");
        if (a.compromised_fraction < 0.0 || a.compromised_fraction > 1.0)
            throw ConfigError("compromised_fraction must be within [0,1]");
        if (a.enabled_steps.empty()) throw ConfigError("attack enabled with no steps");
        if (a.skip_to_ddos) {
            if (a.enabled_steps != std::vector<int>{6})
                throw ConfigError("skip_to_ddos requires steps = 6");
        } else {
            for (std::size_t i = 0; i < a.enabled_steps.size(); ++i) {
                if (a.enabled_steps[i] != int(i) + 1)
                    throw ConfigError(
                        "enabled steps must be a prefix chain 1..k (or skip_to_ddos with step 6)");
            }
        }
        if (a.scan.max_rate_pps <= 0) throw ConfigError("scan max rate must be positive");
        if (a.inter_step_sleep_s.size() != 5)
            throw ConfigError("sleeps_s must list the 5 boundaries between the 6 steps");
        for (double s : a.inter_step_sleep_s)
            if (s < 0) throw ConfigError("inter-step sleeps must be non-negative");
        if (a.start_s < 0) throw ConfigError("attack start must be non-negative");
        if (a.bruteforce.parallel_tasks < 1)
            throw ConfigError("bruteforce parallel tasks must be at least 1");
        if (a.bruteforce.username_dict_size < 1 || a.bruteforce.password_dict_size < 1)
            throw ConfigError("bruteforce dictionary sizes must be at least 1");
        if (a.bruteforce.attempt_duration_s <= 0)
            throw ConfigError("bruteforce attempt duration must be positive");
        if (a.ddos.flood_connections < 0 || a.ddos.slow_connections < 0)
            throw ConfigError("ddos connection counts must be non-negative");
        if (a.ddos.flood_publish_interval_s <= 0)
            throw ConfigError("ddos flood interval must be positive");
        if (a.ddos.target_broker != "auto") parse_ipv4(a.ddos.target_broker);
        bool needs_chain = !a.skip_to_ddos && a.enabled_steps.size() >= 1;
        if (needs_chain && a.enabled_steps.front() == 1 &&
            (!topo.has_client_connect || !topo.has_kafka_connect))
            throw ConfigError("attack steps 1-2 require client_connect and kafka_connect nodes");
    }

    std::set<std::string> trace_names;
    for (const auto& t : cfg.traces) {
        if (t.duration_s <= 0) throw ConfigError("trace '" + t.name + "': duration must be positive");
        if (!trace_names.insert(t.name).second)
            throw ConfigError("duplicate trace name '" + t.name + "'");
        if (t.attack != TraceAttack::none && topo.mqtt_brokers.empty())
            throw ConfigError("trace '" + t.name + "' needs an MQTT broker");
        if (t.attack != TraceAttack::none && !topo.attacker_node)
            throw ConfigError("trace '" + t.name + "' needs the attacker node");
        if (t.publish_interval_s <= 0)
            throw ConfigError("trace '" + t.name + "': publish interval must be positive");
        if (t.messages_per_connection < 1)
            throw ConfigError("trace '" + t.name + "': messages_per_connection must be positive");
        if (t.connection_count < 1)
            throw ConfigError("trace '" + t.name + "': connections must be positive");
    }
}

std::string render_scenario_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "[scenario]\n";
    out << "duration_s = " << format_double(cfg.duration_s) << "\n";

    const EngineConfig dflt;
    const auto& en = cfg.engine;
    out << "\n[engine]\n";
    out << "link_latency_s = " << format_double(en.link_latency_s) << "\n";
    out << "broker_capacity_eps = " << format_double(en.broker_capacity_eps) << "\n";
    out << "broker_max_queue = " << en.broker_max_queue << "\n";
    out << "sensor_give_up_after = " << en.sensor_give_up_after << "\n";
    out << "connect_timeout_s = " << format_double(en.connect_timeout_s) << "\n";
    out << "bridge_poll_interval_s = " << format_double(en.bridge_poll_interval_s) << "\n";
    out << "rest_poll_interval_s = " << format_double(en.rest_poll_interval_s) << "\n";
    out << "dns_poll_interval_s = " << format_double(en.dns_poll_interval_s) << "\n";
    out << "ntp_poll_interval_s = " << format_double(en.ntp_poll_interval_s) << "\n";
    (void)dflt;

    auto render_sensor_body = [&](const SensorBehavior& b) {
        out << "schedule = " << (b.schedule == ScheduleKind::periodic ? "periodic" : "random")
            << "\n";
        out << "period_s = " << format_double(b.period_s) << "\n";
        out << "mean_s = " << format_double(b.mean_s) << "\n";
        if (!b.active_windows.empty()) out << "active_s = " << render_windows(b.active_windows) << "\n";
        out << "dataset = " << b.dataset_source << "\n";
        std::string cols;
        for (std::size_t i = 0; i < b.columns.size(); ++i) {
            if (i) cols += ',';
            cols += b.columns[i];
        }
        out << "columns = " << cols << "\n";
        if (b.target_broker < 0) out << "target_broker = auto\n";
        else out << "target_broker = " << (b.target_broker + 1) << "\n";
        out << "messages_per_connection = " << b.messages_per_connection << "\n";
    };

    out << "\n[sensor_defaults]\n";
    render_sensor_body(cfg.sensor_template);

    for (const auto& b : cfg.sensors) {
        SensorBehavior as_default = cfg.sensor_template;
        as_default.sensor_id = b.sensor_id;
        if (b == as_default) continue;
        out << "\n[sensor]\n";
        out << "id = " << b.sensor_id << "\n";
        render_sensor_body(b);
    }

    const auto& a = cfg.attack;
    if (a.enabled) {
        out << "\n[attack]\n";
        out << "enabled = yes\n";
        std::string steps;
        for (std::size_t i = 0; i < a.enabled_steps.size(); ++i) {
            if (i) steps += ',';
            steps += std::to_string(a.enabled_steps[i]);
        }
        out << "steps = " << steps << "\n";
        out << "skip_to_ddos = " << (a.skip_to_ddos ? "yes" : "no") << "\n";
        out << "start_s = " << format_double(a.start_s) << "\n";
        std::string sleeps;
        for (std::size_t i = 0; i < a.inter_step_sleep_s.size(); ++i) {
            if (i) sleeps += ',';
            sleeps += format_double(a.inter_step_sleep_s[i]);
        }
        out << "sleeps_s = " << sleeps << "\n";
        out << "compromised_fraction = " << format_double(a.compromised_fraction) << "\n";
        out << "scan_port = " << a.scan.port << "\n";
        out << "scan_max_rate_pps = " << format_double(a.scan.max_rate_pps) << "\n";
        std::string ranges;
        for (std::size_t i = 0; i < a.scan.target_ranges.size(); ++i) {
            if (i) ranges += ',';
            ranges += to_string(a.scan.target_ranges[i]);
        }
        out << "scan_ranges = " << ranges << "\n";
        out << "bruteforce_tasks = " << a.bruteforce.parallel_tasks << "\n";
        out << "bruteforce_usernames = " << a.bruteforce.username_dict_size << "\n";
        out << "bruteforce_passwords = " << a.bruteforce.password_dict_size << "\n";
        out << "bruteforce_attempt_s = " << format_double(a.bruteforce.attempt_duration_s) << "\n";
        out << "payload_bytes = " << a.payload.payload_bytes << "\n";
        out << "ddos_flood_connections = " << a.ddos.flood_connections << "\n";
        out << "ddos_flood_message_size = " << a.ddos.flood_message_size << "\n";
        out << "ddos_size_unit = " << (a.ddos.fcsize_in_kb ? "kb" : "bytes") << "\n";
        out << "ddos_slow_connections = " << a.ddos.slow_connections << "\n";
        out << "ddos_flood_interval_s = " << format_double(a.ddos.flood_publish_interval_s)
            << "\n";
        out << "ddos_target = " << a.ddos.target_broker << "\n";
    }

    if (!cfg.capture_probes.empty()) {
        out << "\n[capture]\n";
        for (const auto& p : cfg.capture_probes) out << "probe = " << p << "\n";
    }

    for (const auto& t : cfg.traces) {
        out << "\n[trace]\n";
        out << "name = " << t.name << "\n";
        out << "duration_s = " << format_double(t.duration_s) << "\n";
        out << "legit = " << (t.include_legit ? "yes" : "no") << "\n";
        out << "attack = " << to_string(t.attack) << "\n";
        if (t.broker_mode_override)
            out << "broker_mode = " << to_string(*t.broker_mode_override) << "\n";
        out << "publish_interval_s = " << format_double(t.publish_interval_s) << "\n";
        out << "payload_bytes = " << t.payload_bytes << "\n";
        out << "messages_per_connection = " << t.messages_per_connection << "\n";
        out << "connections = " << t.connection_count << "\n";
    }
    return out.str();
}

// ---- presets ----

namespace {

// Per-sensor parameters for the large preset are drawn from a fixed internal
// seed, so a scaled-down topology keeps the exact prefix of behaviors.
SensorBehavior kafka_preset_sensor(int i) {
    SplitMix64 g(RngStream::mix(0x6b61666b61ULL, "preset-sensor:" + std::to_string(i)));
    SensorBehavior b;
    b.sensor_id = i;
    if (g.next_below(10) < 6) {
        static const double periods[] = {5, 8, 10, 12, 15, 20, 30, 45, 60, 90, 120};
        b.schedule = ScheduleKind::periodic;
        b.period_s = periods[g.next_below(std::size(periods))];
    } else {
        static const double means[] = {0.5, 1, 2, 5};
        b.schedule = ScheduleKind::random;
        b.mean_s = means[g.next_below(std::size(means))];
    }
    static const std::vector<std::vector<std::string>> column_sets = {
        {"temp_c"},
        {"temp_c", "humidity_pct"},
        {"temp_c", "humidity_pct", "pressure_hpa"},
        {"co2_ppm"},
        {"lux", "noise_db"},
        {"voltage_v", "current_a", "power_w"},
        {"soil_ph", "wind_mps"},
        {"motion", "door_open"},
    };
    b.columns = column_sets[g.next_below(column_sets.size())];
    b.target_broker = i % 3;
    return b;
}

std::vector<AddrRange> scan_ranges_for(int sensor_count) {
    // Sensors fill subnets 18..20 sequentially, 150 hosts each, from .10.
    std::vector<AddrRange> ranges;
    int remaining = sensor_count;
    std::array<int, 3> per_subnet{};
    for (int s = 0; s < 3; ++s) {
        per_subnet[std::size_t(s)] = std::min(remaining, 150);
        remaining -= per_subnet[std::size_t(s)];
    }
    std::array<int, 3> hi{};
    for (int s = 0; s < 3; ++s) {
        if (per_subnet[std::size_t(s)] == 0) continue;
        hi[std::size_t(s)] = std::min(150, 10 + per_subnet[std::size_t(s)] - 1 + 10);
    }
    if (per_subnet[0] > 0 && per_subnet[1] > 0 && per_subnet[2] > 0 && hi[0] == hi[1] &&
        hi[1] == hi[2]) {
        AddrRange r;
        r.lo = {192, 168, 18, 10};
        r.hi = {192, 168, 20, u8(hi[0])};
        ranges.push_back(r);
        return ranges;
    }
    for (int s = 0; s < 3; ++s) {
        if (per_subnet[std::size_t(s)] == 0) continue;
        AddrRange r;
        r.lo = {192, 168, u8(18 + s), 10};
        r.hi = {192, 168, u8(18 + s), u8(hi[std::size_t(s)])};
        ranges.push_back(r);
    }
    return ranges;
}

}  // namespace

Preset preset_mqttset() {
    Preset p;
    auto& t = p.topology;
    t.sensor_count = 10;
    t.mqtt_brokers = {BrokerSpec{SecurityMode::plaintext, 2}};
    t.kafka_broker_count = 0;
    t.router_count = 5;
    t.switch_count = 18;
    t.attacker_node = true;

    auto& s = p.scenario;
    s.duration_s = 3600;
    s.sensor_template.target_broker = 0;
    s.sensor_template.columns = {"temp_c", "humidity_pct"};
    static const double periods[] = {60, 120, 180, 60, 120};
    static const std::vector<std::vector<std::string>> cols = {
        {"temp_c"},
        {"temp_c", "humidity_pct"},
        {"temp_c", "humidity_pct", "pressure_hpa"},
        {"co2_ppm"},
        {"lux", "noise_db"},
        {"voltage_v"},
        {"pressure_hpa", "wind_mps"},
        {"soil_ph"},
        {"noise_db", "motion"},
        {"battery_pct", "temp_c"},
    };
    for (int i = 0; i < 10; ++i) {
        SensorBehavior b = s.sensor_template;
        b.sensor_id = i;
        if (i < 5) {
            b.schedule = ScheduleKind::periodic;
            b.period_s = periods[i];
        } else {
            b.schedule = ScheduleKind::random;
            b.mean_s = 1.0;
        }
        b.columns = cols[std::size_t(i)];
        s.sensors.push_back(std::move(b));
    }
    s.capture_probes = {"broker-lan"};

    s.traces.push_back(TraceJob{"legitimate", 3600, true, TraceAttack::none, std::nullopt, 0.05,
                                100, 1, 30});
    s.traces.push_back(TraceJob{"publish-flood", 120, false, TraceAttack::publish_flood,
                                std::nullopt, 0.05, 100, 1, 30});
    s.traces.push_back(TraceJob{"flood-dos", 120, false, TraceAttack::flood_dos, std::nullopt,
                                0.25, 30700, 265, 30});
    s.traces.push_back(TraceJob{"slowite", 120, false, TraceAttack::slowite, std::nullopt, 0.05,
                                100, 1, 30});
    s.traces.push_back(TraceJob{"malformed", 60, false, TraceAttack::malformed, std::nullopt, 1.0,
                                100, 1, 30});
    s.traces.push_back(TraceJob{"auth-bruteforce", 60, false, TraceAttack::auth_bruteforce,
                                SecurityMode::auth, 0.2, 100, 1, 30});
    return p;
}

Preset preset_kafka_attack() { return preset_kafka_attack_scaled(450); }

Preset preset_kafka_attack_scaled(int sensor_count) {
    if (sensor_count < 1 || sensor_count > 450)
        throw ConfigError("scaled attack preset supports 1..450 sensors");
    Preset p;
    auto& t = p.topology;
    t.sensor_count = sensor_count;
    t.mqtt_brokers = {BrokerSpec{SecurityMode::plaintext, 2}, BrokerSpec{SecurityMode::auth, 3},
                      BrokerSpec{SecurityMode::tls, 4}};
    t.kafka_broker_count = 1;
    t.has_kafka_connect = true;
    t.has_client_connect = true;
    t.router_count = 4;
    t.switch_count = std::max(1, (41 * sensor_count + 225) / 450);

    auto& s = p.scenario;
    s.duration_s = 1800;
    s.sensor_template.columns = {"temp_c", "humidity_pct"};
    for (int i = 0; i < sensor_count; ++i) s.sensors.push_back(kafka_preset_sensor(i));

    auto& a = s.attack;
    a.enabled = true;
    a.enabled_steps = {1, 2, 3, 4, 5, 6};
    a.start_s = 120;
    a.inter_step_sleep_s = {30, 30, 30, 30, 30};
    a.compromised_fraction = 0.5;
    a.scan.target_ranges = scan_ranges_for(sensor_count);
    if (sensor_count < 450) a.ddos.fcsize_in_kb = false;  // desk-scale payloads

    s.capture_probes = {"zookeeper-kafka", "kafka-connect", "sensors-brokers"};
    return p;
}

}  // namespace iotsynth::cfg
