#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iotsynth/common.hpp"
#include "iotsynth/rng.hpp"
#include "iotsynth/wire.hpp"

namespace iotsynth::app {

// Default destination ports per application tag.
namespace ports {
constexpr u16 mqtt = 1883;
constexpr u16 mqtt_tls = 8883;
constexpr u16 kafka_connect_rest = 8083;
constexpr u16 kafka = 9092;
constexpr u16 zookeeper = 2181;
constexpr u16 ssh = 22;
constexpr u16 dns = 53;
constexpr u16 ntp = 123;
constexpr u16 tool_http = 8000;    // attacker's tool-staging HTTP server
constexpr u16 reverse_shell = 4444;
}  // namespace ports

u16 default_port(wire::AppTag tag);

// Best-effort tag classification from ports and payload preamble, used when
// re-deriving a Summary from raw bytes. ssh and scp share a port and banner
// and are reported as ssh.
wire::AppTag classify_app(u16 src_port, u16 dst_port, std::span<const u8> payload);

// ---- MQTT 3.1.1 ----

enum class MqttKind : u8 {
    connect = 1,
    connack = 2,
    publish = 3,
    puback = 4,
    disconnect = 14,
};

struct MqttMessage {
    MqttKind kind = MqttKind::connect;
    std::string client_id;           // connect
    std::string username;            // connect, optional
    std::string password;            // connect, optional
    u16 keep_alive_s = 60;           // connect
    std::string topic;               // publish
    std::vector<u8> payload;         // publish
    u8 qos = 0;                      // publish
    u16 packet_id = 0;               // publish (qos>0) and puback
    u8 connack_return_code = 0;      // connack

    bool operator==(const MqttMessage&) const = default;
};

class MqttDecodeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<u8> mqtt_encode(const MqttMessage& msg);
MqttMessage mqtt_decode(std::span<const u8> bytes);  // throws MqttDecodeError

// Remaining-length varint, exposed for tests and malformed-packet synthesis.
void mqtt_put_varint(std::vector<u8>& out, u32 value);  // value <= 268435455
std::optional<u32> mqtt_read_varint(std::span<const u8> in, std::size_t& pos);

// ---- sensor dataset ----

// CSV table with a header row; values are opaque text. Sensors read rows
// cyclically and publish a column selection.
class SensorDataset {
public:
    static SensorDataset from_csv_text(const std::string& text, char delimiter = ',');
    static SensorDataset from_file(const std::string& path, char delimiter = ',');
    // Deterministic synthetic readings table shipped with the tool; used when
    // a behavior names "builtin:readings".
    static const SensorDataset& builtin();
    static SensorDataset resolve(const std::string& source, char delimiter = ',');

    const std::vector<std::string>& header() const { return header_; }
    std::size_t row_count() const { return rows_.size(); }

    // Selected columns of row (row_index mod row_count), comma-joined.
    std::vector<u8> make_payload(const std::vector<std::string>& columns, u64 row_index) const;

    std::vector<std::size_t> column_indexes(const std::vector<std::string>& columns) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// ---- opaque application payloads ----

// Deterministic bytes with a recognizable per-tag preamble and rng-derived
// filler; total length == size. Throws ConfigError when size is below the
// tag's minimal preamble.
std::vector<u8> synth_app_bytes(wire::AppTag tag, std::size_t size, SplitMix64& rng);

std::size_t min_app_size(wire::AppTag tag);

// Specific shaped payloads used by agents and the attack steps.
std::vector<u8> http_post_connectors(const std::string& host, const std::string& connector_name,
                                     std::size_t body_pad, SplitMix64& rng);
std::vector<u8> http_response(int status, std::string_view reason, std::size_t body_len,
                              SplitMix64& rng);
std::vector<u8> http_get(const std::string& path, const std::string& host);
std::vector<u8> dns_query(u16 txid, const std::string& qname);
std::vector<u8> dns_response(u16 txid, const std::string& qname, Ipv4 answer);
std::vector<u8> ntp_packet(bool is_request);

}  // namespace iotsynth::app
