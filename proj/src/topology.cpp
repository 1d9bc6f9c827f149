#include "iotsynth/topology.hpp"

#include <sstream>

#include "iotsynth/appproto.hpp"

namespace iotsynth::topo {

namespace {
const std::array<std::string, 9> kKindNames = {
    "sensor",        "mqtt-broker",    "kafka-broker", "zookeeper", "kafka-connect",
    "client-connect", "switch",        "router",       "attacker",
};

constexpr int kSensorSubnetBase = 18;
constexpr int kSensorSubnets = 3;
constexpr int kSensorsPerSubnet = 150;  // hosts .10 through .159
constexpr int kSensorHostBase = 10;
}  // namespace

const std::string& to_string(NodeKind k) { return kKindNames[static_cast<int>(k)]; }

const Node* Topology::find_by_id(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &nodes[std::size_t(it->second)];
}

const Node* Topology::find_by_ip(Ipv4 ip) const {
    auto it = by_ip_.find(ip.value);
    return it == by_ip_.end() ? nullptr : &nodes[std::size_t(it->second)];
}

const Node& Topology::first_mqtt_broker() const {
    IOTSYNTH_CHECK(!mqtt_brokers.empty(), "topology has no MQTT broker");
    return nodes[std::size_t(mqtt_brokers.front())];
}

u64 ram_estimate_mb(u64 q, u64 d) { return q * 470 + d * 37; }

Topology build_topology(const cfg::TopologyConfig& cfg, u64 seed) {
    cfg::validate(cfg);
    Topology t;
    t.config = cfg;
    t.seed = seed;

    auto add = [&](NodeKind kind, int kind_index, const std::string& id, Ipv4 ip,
                   std::vector<std::pair<u16, std::string>> ports,
                   std::optional<cfg::SecurityMode> sec = std::nullopt) -> Node& {
        Node n;
        n.index = int(t.nodes.size());
        n.kind_index = kind_index;
        n.id = id;
        n.kind = kind;
        n.ip = ip;
        n.mac = Mac::for_ip(ip);
        n.listening_ports = std::move(ports);
        n.security = sec;
        if (!t.by_ip_.emplace(ip.value, n.index).second)
            throw ConfigError("duplicate address " + iotsynth::to_string(ip));
        if (!t.by_id_.emplace(id, n.index).second)
            throw ConfigError("duplicate node id " + id);
        t.nodes.push_back(std::move(n));
        return t.nodes.back();
    };

    // Routers first: 192.168.1.1 up. The first router doubles as the
    // network's DNS/NTP service.
    if (cfg.router_count > 253) throw ConfigError("router address space exhausted (max 253)");
    for (int i = 0; i < cfg.router_count; ++i) {
        std::vector<std::pair<u16, std::string>> ports;
        if (i == 0) ports = {{app::ports::dns, "dns"}, {app::ports::ntp, "ntp"}};
        add(NodeKind::router, i, "router-" + std::to_string(i + 1), Ipv4(192, 168, 1, u8(1 + i)),
            std::move(ports));
        t.routers.push_back(int(t.nodes.size()) - 1);
    }

    for (std::size_t i = 0; i < cfg.mqtt_brokers.size(); ++i) {
        const auto& spec = cfg.mqtt_brokers[i];
        const bool tls = spec.security == cfg::SecurityMode::tls;
        const u16 port = tls ? app::ports::mqtt_tls : app::ports::mqtt;
        add(NodeKind::mqtt_broker, int(i), "mqtt-broker-" + std::to_string(i + 1),
            Ipv4(192, 168, u8(spec.subnet), 1), {{port, tls ? "mqtt-tls" : "mqtt"}},
            spec.security);
        t.mqtt_brokers.push_back(int(t.nodes.size()) - 1);
    }

    if (cfg.kafka_broker_count == 1) {
        add(NodeKind::kafka_broker, 0, "kafka-broker", Ipv4(192, 168, 10, 2),
            {{app::ports::kafka, "kafka"}});
        t.kafka = int(t.nodes.size()) - 1;
        add(NodeKind::zookeeper, 0, "zookeeper", Ipv4(192, 168, 10, 3),
            {{app::ports::zookeeper, "zookeeper"}});
        t.zookeeper = int(t.nodes.size()) - 1;
    }
    if (cfg.has_kafka_connect) {
        add(NodeKind::kafka_connect, 0, "kafka-connect", Ipv4(192, 168, 11, 2),
            {{app::ports::kafka_connect_rest, "kafka-connect-rest"}});
        t.kafka_connect = int(t.nodes.size()) - 1;
    }
    if (cfg.has_client_connect) {
        add(NodeKind::client_connect, 0, "client-connect", Ipv4(192, 168, 12, 2),
            {{app::ports::tool_http, "http"}});
        t.client_connect = int(t.nodes.size()) - 1;
    }

    if (cfg.sensor_count > kSensorSubnets * kSensorsPerSubnet)
        throw ConfigError("sensor address space exhausted: " + std::to_string(cfg.sensor_count) +
                          " sensors exceed the capacity of subnets 192.168.18-20.0/24 (" +
                          std::to_string(kSensorSubnets * kSensorsPerSubnet) + ")");
    for (int i = 0; i < cfg.sensor_count; ++i) {
        const int subnet = kSensorSubnetBase + i / kSensorsPerSubnet;
        const int host = kSensorHostBase + i % kSensorsPerSubnet;
        add(NodeKind::sensor, i, "sensor-" + std::to_string(i), Ipv4(192, 168, u8(subnet), u8(host)),
            {{app::ports::ssh, "ssh"}});
        t.sensors.push_back(int(t.nodes.size()) - 1);
    }

    if (cfg.attacker_node) {
        add(NodeKind::attacker, 0, "attacker", Ipv4(192, 168, kSensorSubnetBase, 200), {});
        t.attacker = int(t.nodes.size()) - 1;
    }

    if (cfg.switch_count > 253) throw ConfigError("switch address space exhausted (max 253)");
    for (int i = 0; i < cfg.switch_count; ++i) {
        add(NodeKind::switch_node, i, "switch-" + std::to_string(i + 1),
            Ipv4(192, 168, 250, u8(1 + i)), {});
        t.switches.push_back(int(t.nodes.size()) - 1);
    }
    return t;
}

std::string dump_topology(const Topology& t) {
    std::ostringstream out;
    out << "# topology nodes: " << t.nodes.size() << " (docker " << t.docker_node_count()
        << ", qemu " << t.qemu_node_count() << ")\n";
    out << "# estimated RAM: " << ram_estimate_mb(t.qemu_node_count(), t.docker_node_count())
        << " MB\n";
    out << "# id\tkind\tip\tmac\tports\tsecurity\n";
    for (const auto& n : t.nodes) {
        out << n.id << '\t' << to_string(n.kind) << '\t' << iotsynth::to_string(n.ip) << '\t'
            << iotsynth::to_string(n.mac) << '\t';
        for (std::size_t i = 0; i < n.listening_ports.size(); ++i) {
            if (i) out << ',';
            out << n.listening_ports[i].first << '/' << n.listening_ports[i].second;
        }
        if (n.listening_ports.empty()) out << '-';
        out << '\t' << (n.security ? cfg::to_string(*n.security) : std::string("-")) << '\n';
    }
    return out.str();
}

int ProbePlan::match(const Node& a, const Node& b) const {
    auto is = [](const Node& n, NodeKind k) { return n.kind == k; };
    for (const auto& p : probes) {
        switch (p.filter) {
            case ProbeFilter::zk_kafka_link: {
                auto zk_or_kafka = [&](const Node& n) {
                    return is(n, NodeKind::zookeeper) || is(n, NodeKind::kafka_broker);
                };
                if (zk_or_kafka(a) && zk_or_kafka(b)) return p.probe_id;
                break;
            }
            case ProbeFilter::kafka_connect_net: {
                auto kc_side = [&](const Node& n) {
                    return is(n, NodeKind::kafka_connect) || is(n, NodeKind::client_connect);
                };
                bool has_sensor = is(a, NodeKind::sensor) || is(b, NodeKind::sensor);
                if ((kc_side(a) || kc_side(b)) && !has_sensor) return p.probe_id;
                break;
            }
            case ProbeFilter::sensor_broker_net: {
                auto lan = [&](const Node& n) {
                    return is(n, NodeKind::sensor) || is(n, NodeKind::mqtt_broker) ||
                           is(n, NodeKind::attacker);
                };
                if (lan(a) || lan(b)) return p.probe_id;
                break;
            }
            case ProbeFilter::all_traffic:
                return p.probe_id;
            case ProbeFilter::node_endpoint:
                if (a.index == p.node_index || b.index == p.node_index) return p.probe_id;
                break;
        }
    }
    return -1;
}

ProbePlan resolve_probes(const Topology& t, const std::vector<std::string>& capture_spec) {
    ProbePlan plan;
    for (const auto& name : capture_spec) {
        ProbeSpec spec;
        spec.probe_id = int(plan.probes.size());
        spec.name = name;
        if (name == "zookeeper-kafka") {
            if (t.kafka < 0 || t.zookeeper < 0)
                throw ConfigError("probe 'zookeeper-kafka' needs a kafka broker in the topology");
            spec.filter = ProbeFilter::zk_kafka_link;
        } else if (name == "kafka-connect") {
            if (t.kafka_connect < 0)
                throw ConfigError("probe 'kafka-connect' needs the kafka-connect node");
            spec.filter = ProbeFilter::kafka_connect_net;
        } else if (name == "sensors-brokers") {
            spec.filter = ProbeFilter::sensor_broker_net;
        } else if (name == "broker-lan" || name == "lan") {
            spec.filter = ProbeFilter::all_traffic;
        } else if (name.rfind("node:", 0) == 0) {
            const Node* n = t.find_by_id(name.substr(5));
            if (!n) throw ConfigError("probe on unknown node '" + name.substr(5) + "'");
            spec.filter = ProbeFilter::node_endpoint;
            spec.node_index = n->index;
        } else {
            throw ConfigError("unknown capture probe '" + name + "'");
        }
        plan.probes.push_back(std::move(spec));
    }
    return plan;
}

}  // namespace iotsynth::topo
