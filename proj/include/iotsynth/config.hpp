#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iotsynth/common.hpp"
#include "iotsynth/net.hpp"

namespace iotsynth::cfg {

enum class SecurityMode : u8 { plaintext, auth, tls };

const std::string& to_string(SecurityMode m);
std::optional<SecurityMode> parse_security_mode(const std::string& s);

struct BrokerSpec {
    SecurityMode security = SecurityMode::plaintext;
    int subnet = 2;  // third octet of the broker's 192.168.x.0/24 subnet

    bool operator==(const BrokerSpec&) const = default;
};

struct TopologyConfig {
    int sensor_count = 0;
    std::vector<BrokerSpec> mqtt_brokers;
    int kafka_broker_count = 0;  // 0 or 1; 1 also materializes a zookeeper node
    bool has_kafka_connect = false;
    bool has_client_connect = false;
    int router_count = 0;
    int switch_count = 0;
    bool attacker_node = false;  // endpoint for the single-broker attack traces

    bool operator==(const TopologyConfig&) const = default;
};

struct Window {
    u64 start_us = 0;
    u64 end_us = 0;

    bool operator==(const Window&) const = default;
};

enum class ScheduleKind : u8 { periodic, random };

struct SensorBehavior {
    int sensor_id = -1;  // -1 in the template
    ScheduleKind schedule = ScheduleKind::periodic;
    double period_s = 60.0;
    double mean_s = 1.0;
    std::vector<Window> active_windows;  // empty = active for the whole scenario
    std::string dataset_source = "builtin:readings";
    std::vector<std::string> columns = {"temp_c"};
    int target_broker = -1;  // index into mqtt_brokers; -1 = round robin by sensor id
    int messages_per_connection = 1;

    bool operator==(const SensorBehavior&) const = default;
};

struct ScanConfig {
    u16 port = 22;
    double max_rate_pps = 0.7;
    std::vector<AddrRange> target_ranges;

    bool operator==(const ScanConfig&) const = default;
};

struct BruteforceConfig {
    int parallel_tasks = 2;
    int username_dict_size = 4;
    int password_dict_size = 6;
    double attempt_duration_s = 0.8;

    bool operator==(const BruteforceConfig&) const = default;
};

struct PayloadTransferConfig {
    u64 payload_bytes = 262144;

    bool operator==(const PayloadTransferConfig&) const = default;
};

struct DdosConfig {
    int flood_connections = 100;      // fc
    int flood_message_size = 10;      // fcsize, unit below
    bool fcsize_in_kb = true;         // mqttsa size-flag interpretation
    int slow_connections = 2400;      // sc
    double flood_publish_interval_s = 1.0;
    std::string target_broker = "auto";  // "auto" = first MQTT broker

    u64 flood_message_bytes() const {
        return u64(flood_message_size) * (fcsize_in_kb ? 1024 : 1);
    }
    bool operator==(const DdosConfig&) const = default;
};

struct AttackConfig {
    bool enabled = false;
    std::vector<int> enabled_steps;       // ordered subset of 1..6
    bool skip_to_ddos = false;
    double start_s = 120.0;
    std::vector<double> inter_step_sleep_s = {30, 30, 30, 30, 30};  // boundaries 1-2 .. 5-6
    double compromised_fraction = 0.5;
    ScanConfig scan;
    BruteforceConfig bruteforce;
    PayloadTransferConfig payload;
    DdosConfig ddos;

    bool operator==(const AttackConfig&) const = default;
};

enum class TraceAttack : u8 { none, publish_flood, flood_dos, slowite, malformed, auth_bruteforce };

const std::string& to_string(TraceAttack a);
std::optional<TraceAttack> parse_trace_attack(const std::string& s);

// One capture job of the multi-trace dataset layout: legitimate traffic
// and/or one attack-tool run against the first broker.
struct TraceJob {
    std::string name;
    double duration_s = 120.0;
    bool include_legit = false;
    TraceAttack attack = TraceAttack::none;
    std::optional<SecurityMode> broker_mode_override;
    double publish_interval_s = 0.05;  // flood pacing
    u64 payload_bytes = 100;
    int messages_per_connection = 1;
    int connection_count = 30;  // slow connections for the slowite trace

    bool operator==(const TraceJob&) const = default;
};

struct EngineConfig {
    double link_latency_s = 0.0005;
    double broker_capacity_eps = 500.0;  // acknowledged events per second
    int broker_max_queue = 1000;
    int sensor_give_up_after = 3;  // consecutive unacknowledged connection attempts
    double connect_timeout_s = 5.0;
    double bridge_poll_interval_s = 10.0;
    double rest_poll_interval_s = 60.0;
    double dns_poll_interval_s = 300.0;
    double ntp_poll_interval_s = 300.0;

    bool operator==(const EngineConfig&) const = default;
};

struct ScenarioConfig {
    double duration_s = 1800.0;
    EngineConfig engine;
    SensorBehavior sensor_template;
    std::vector<SensorBehavior> sensors;  // one per topology sensor, resolved
    AttackConfig attack;
    std::vector<std::string> capture_probes;
    std::vector<TraceJob> traces;

    u64 duration_us() const { return seconds_to_us(duration_s); }
    bool operator==(const ScenarioConfig&) const = default;
};

// ---- parse / render ----

TopologyConfig parse_topology_config(const std::string& text);
ScenarioConfig parse_scenario_config(const std::string& text, const TopologyConfig& topo);

std::string render_topology_config(const TopologyConfig& cfg);
std::string render_scenario_config(const ScenarioConfig& cfg);

void validate(const TopologyConfig& cfg);
void validate(const ScenarioConfig& cfg, const TopologyConfig& topo);

// ---- presets ----

struct Preset {
    TopologyConfig topology;
    ScenarioConfig scenario;
};

Preset preset_mqttset();
Preset preset_kafka_attack();

// Desk-scale variant of the attack preset: fewer sensors, scan ranges
// re-targeted at the occupied address space. n must be in [1, 450].
Preset preset_kafka_attack_scaled(int sensor_count);

// Canonical decimal for doubles: shortest form that parses back bit-equal.
std::string format_double(double v);

}  // namespace iotsynth::cfg
