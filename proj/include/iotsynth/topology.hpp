#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "iotsynth/config.hpp"
#include "iotsynth/net.hpp"

namespace iotsynth::topo {

enum class NodeKind : u8 {
    sensor,
    mqtt_broker,
    kafka_broker,
    zookeeper,
    kafka_connect,
    client_connect,
    switch_node,
    router,
    attacker,
};

const std::string& to_string(NodeKind k);

struct Node {
    int index = -1;       // position in Topology::nodes
    int kind_index = 0;   // ordinal among nodes of the same kind
    std::string id;       // "sensor-17", "mqtt-broker-1", ...
    NodeKind kind = NodeKind::sensor;
    Ipv4 ip;
    Mac mac;
    std::vector<std::pair<u16, std::string>> listening_ports;
    std::optional<cfg::SecurityMode> security;  // MQTT brokers only
};

struct Topology {
    cfg::TopologyConfig config;
    u64 seed = 0;
    std::vector<Node> nodes;

    std::vector<int> sensors;       // node indexes by kind
    std::vector<int> mqtt_brokers;
    std::vector<int> routers;
    std::vector<int> switches;
    int kafka = -1;
    int zookeeper = -1;
    int kafka_connect = -1;
    int client_connect = -1;
    int attacker = -1;

    const Node& node(int index) const { return nodes[std::size_t(index)]; }
    const Node* find_by_id(const std::string& id) const;
    const Node* find_by_ip(Ipv4 ip) const;
    const Node& first_mqtt_broker() const;

    // Counts for the memory estimate: routers run as VMs, everything else in
    // containers.
    u64 qemu_node_count() const { return routers.size(); }
    u64 docker_node_count() const { return nodes.size() - routers.size(); }

private:
    friend Topology build_topology(const cfg::TopologyConfig&, u64);
    std::unordered_map<u32, int> by_ip_;
    std::unordered_map<std::string, int> by_id_;
};

// Deterministic node graph; same (cfg, seed) yields identical addresses.
// Throws ConfigError on address-space exhaustion.
Topology build_topology(const cfg::TopologyConfig& cfg, u64 seed);

// Megabytes of RAM for q qemu-VM nodes and d docker nodes.
u64 ram_estimate_mb(u64 q, u64 d);

// Human-readable node table for the dataset's settings file.
std::string dump_topology(const Topology& t);

enum class ProbeFilter : u8 {
    zk_kafka_link,      // both endpoints in {zookeeper, kafka}
    kafka_connect_net,  // kafka-connect / client-connect side, sensors excluded
    sensor_broker_net,  // any sensor, MQTT broker or attacker endpoint
    all_traffic,
    node_endpoint,
};

struct ProbeSpec {
    int probe_id = -1;
    std::string name;
    ProbeFilter filter = ProbeFilter::all_traffic;
    int node_index = -1;  // node_endpoint only
};

struct ProbePlan {
    std::vector<ProbeSpec> probes;

    // First matching probe wins; -1 when no probe captures this node pair.
    int match(const Node& a, const Node& b) const;
};

// Maps capture names from the scenario to concrete probes. Known names:
// "zookeeper-kafka", "kafka-connect", "sensors-brokers", "broker-lan",
// "lan", and "node:<node-id>". Throws ConfigError for unknown names or
// probes whose nodes are absent.
ProbePlan resolve_probes(const Topology& t, const std::vector<std::string>& capture_spec);

}  // namespace iotsynth::topo
