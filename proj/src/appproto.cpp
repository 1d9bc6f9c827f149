#include "iotsynth/appproto.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace iotsynth::app {

u16 default_port(wire::AppTag tag) {
    using wire::AppTag;
    switch (tag) {
        case AppTag::mqtt: return ports::mqtt;
        case AppTag::tls_record: return ports::mqtt_tls;
        case AppTag::http_post: return ports::kafka_connect_rest;
        case AppTag::http_get: return ports::tool_http;
        case AppTag::ssh: return ports::ssh;
        case AppTag::scp: return ports::ssh;
        case AppTag::kafka_produce: return ports::kafka;
        case AppTag::zookeeper_ping: return ports::zookeeper;
        case AppTag::dns: return ports::dns;
        case AppTag::ntp: return ports::ntp;
        case AppTag::none: return 0;
    }
    return 0;
}

namespace {
bool starts_with(std::span<const u8> payload, std::string_view prefix) {
    if (payload.size() < prefix.size()) return false;
    return std::memcmp(payload.data(), prefix.data(), prefix.size()) == 0;
}
}  // namespace

wire::AppTag classify_app(u16 src_port, u16 dst_port, std::span<const u8> payload) {
    using wire::AppTag;
    if (payload.empty()) return AppTag::none;
    if (starts_with(payload, "POST ")) return AppTag::http_post;
    if (starts_with(payload, "GET ")) return AppTag::http_get;
    if (starts_with(payload, "SSH-")) return AppTag::ssh;
    if (starts_with(payload, "KPRD")) return AppTag::kafka_produce;
    if (starts_with(payload, "ZKPG")) return AppTag::zookeeper_ping;
    if (payload.size() >= 3 && payload[0] == 0x17 && payload[1] == 0x03) return AppTag::tls_record;
    auto port_is = [&](u16 p) { return src_port == p || dst_port == p; };
    if (starts_with(payload, "HTTP/")) {
        return port_is(ports::tool_http) ? AppTag::http_get : AppTag::http_post;
    }
    if (port_is(ports::mqtt)) return AppTag::mqtt;
    if (port_is(ports::mqtt_tls)) return AppTag::tls_record;
    if (port_is(ports::dns)) return AppTag::dns;
    if (port_is(ports::ntp)) return AppTag::ntp;
    if (port_is(ports::zookeeper)) return AppTag::zookeeper_ping;
    if (port_is(ports::kafka)) return AppTag::kafka_produce;
    if (port_is(ports::ssh)) return AppTag::ssh;
    return AppTag::none;
}

// ---- MQTT ----

namespace {

constexpr u32 kMaxRemainingLength = 268435455;

void put_u16(std::vector<u8>& out, u16 v) {
    out.push_back(u8(v >> 8));
    out.push_back(u8(v));
}

void put_mqtt_string(std::vector<u8>& out, const std::string& s) {
    IOTSYNTH_CHECK(s.size() <= 0xffff, "MQTT string too long");
    put_u16(out, u16(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

struct Cursor {
    std::span<const u8> in;
    std::size_t pos = 0;

    u8 byte() {
        if (pos >= in.size()) throw MqttDecodeError("truncated packet");
        return in[pos++];
    }
    u16 read_u16() {
        u16 hi = byte(), lo = byte();
        return u16((hi << 8) | lo);
    }
    std::string read_string() {
        u16 n = read_u16();
        if (pos + n > in.size()) throw MqttDecodeError("string length exceeds packet");
        std::string s(reinterpret_cast<const char*>(in.data() + pos), n);
        pos += n;
        return s;
    }
    std::vector<u8> rest() {
        std::vector<u8> v(in.begin() + long(pos), in.end());
        pos = in.size();
        return v;
    }
    bool done() const { return pos == in.size(); }
};

}  // namespace

void mqtt_put_varint(std::vector<u8>& out, u32 value) {
    IOTSYNTH_CHECK(value <= kMaxRemainingLength, "remaining length out of range");
    do {
        u8 digit = value % 128;
        value /= 128;
        if (value > 0) digit |= 0x80;
        out.push_back(digit);
    } while (value > 0);
}

std::optional<u32> mqtt_read_varint(std::span<const u8> in, std::size_t& pos) {
    u32 value = 0;
    u32 multiplier = 1;
    for (int i = 0; i < 4; ++i) {
        if (pos >= in.size()) return std::nullopt;  // truncated
        u8 digit = in[pos++];
        value += u32(digit & 0x7f) * multiplier;
        if ((digit & 0x80) == 0) return value;
        multiplier *= 128;
    }
    return std::nullopt;  // continuation bit on the 4th byte
}

std::vector<u8> mqtt_encode(const MqttMessage& msg) {
    std::vector<u8> body;
    u8 first = 0;
    switch (msg.kind) {
        case MqttKind::connect: {
            first = 0x10;
            put_mqtt_string(body, "MQTT");
            body.push_back(0x04);  // protocol level 3.1.1
            u8 flags = 0x02;       // clean session
            if (!msg.username.empty()) flags |= 0x80;
            if (!msg.password.empty()) flags |= 0x40;
            body.push_back(flags);
            put_u16(body, msg.keep_alive_s);
            put_mqtt_string(body, msg.client_id);
            if (!msg.username.empty()) put_mqtt_string(body, msg.username);
            if (!msg.password.empty()) put_mqtt_string(body, msg.password);
            break;
        }
        case MqttKind::connack: {
            first = 0x20;
            body.push_back(0x00);  // session present = 0
            body.push_back(msg.connack_return_code);
            break;
        }
        case MqttKind::publish: {
            IOTSYNTH_CHECK(!msg.topic.empty(), "PUBLISH topic must be non-empty");
            IOTSYNTH_CHECK(msg.qos <= 1, "QoS 2 not supported");
            first = u8(0x30 | (msg.qos << 1));
            put_mqtt_string(body, msg.topic);
            if (msg.qos > 0) put_u16(body, msg.packet_id);
            body.insert(body.end(), msg.payload.begin(), msg.payload.end());
            break;
        }
        case MqttKind::puback: {
            first = 0x40;
            put_u16(body, msg.packet_id);
            break;
        }
        case MqttKind::disconnect: {
            first = 0xe0;
            break;
        }
    }
    std::vector<u8> out;
    out.reserve(body.size() + 5);
    out.push_back(first);
    mqtt_put_varint(out, u32(body.size()));
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

MqttMessage mqtt_decode(std::span<const u8> bytes) {
    if (bytes.empty()) throw MqttDecodeError("empty packet");
    const u8 first = bytes[0];
    const u8 type = first >> 4;
    const u8 flags = first & 0x0f;
    std::size_t pos = 1;
    auto remaining = mqtt_read_varint(bytes, pos);
    if (!remaining) throw MqttDecodeError("malformed remaining-length varint");
    if (pos + *remaining != bytes.size())
        throw MqttDecodeError("remaining length does not match packet size");

    Cursor c{bytes.subspan(pos, *remaining)};
    MqttMessage m;
    switch (type) {
        case 1: {  // CONNECT
            if (flags != 0) throw MqttDecodeError("reserved CONNECT flags set");
            m.kind = MqttKind::connect;
            if (c.read_string() != "MQTT") throw MqttDecodeError("bad protocol name");
            if (c.byte() != 0x04) throw MqttDecodeError("unsupported protocol level");
            u8 cf = c.byte();
            if (cf & 0x01) throw MqttDecodeError("reserved connect flag set");
            if (cf & 0x3c) throw MqttDecodeError("unsupported connect flags (will/retain)");
            if (!(cf & 0x02)) throw MqttDecodeError("persistent sessions not supported");
            m.keep_alive_s = c.read_u16();
            m.client_id = c.read_string();
            if (cf & 0x80) m.username = c.read_string();
            if (cf & 0x40) m.password = c.read_string();
            break;
        }
        case 2: {  // CONNACK
            if (flags != 0) throw MqttDecodeError("reserved CONNACK flags set");
            m.kind = MqttKind::connack;
            if (c.byte() & 0xfe) throw MqttDecodeError("bad connack acknowledge flags");
            m.connack_return_code = c.byte();
            break;
        }
        case 3: {  // PUBLISH
            m.kind = MqttKind::publish;
            m.qos = (flags >> 1) & 0x03;
            if (m.qos > 1) throw MqttDecodeError("unsupported QoS");
            if (flags & 0x09) throw MqttDecodeError("unsupported DUP/RETAIN flags");
            m.topic = c.read_string();
            if (m.topic.empty()) throw MqttDecodeError("empty PUBLISH topic");
            if (m.qos > 0) m.packet_id = c.read_u16();
            m.payload = c.rest();
            break;
        }
        case 4: {  // PUBACK
            if (flags != 0) throw MqttDecodeError("reserved PUBACK flags set");
            m.kind = MqttKind::puback;
            m.packet_id = c.read_u16();
            break;
        }
        case 14: {  // DISCONNECT
            if (flags != 0) throw MqttDecodeError("reserved DISCONNECT flags set");
            m.kind = MqttKind::disconnect;
            break;
        }
        default:
            throw MqttDecodeError("unknown packet type " + std::to_string(type));
    }
    if (!c.done()) throw MqttDecodeError("trailing bytes after packet body");
    return m;
}

// ---- sensor dataset ----

SensorDataset SensorDataset::from_csv_text(const std::string& text, char delimiter) {
    SensorDataset d;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            std::size_t sep = line.find(delimiter, start);
            if (sep == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, sep - start));
            start = sep + 1;
        }
        if (first) {
            d.header_ = std::move(cells);
            first = false;
        } else {
            cells.resize(d.header_.size());
            d.rows_.push_back(std::move(cells));
        }
    }
    if (d.header_.empty()) throw ConfigError("sensor dataset has no header row");
    return d;
}

SensorDataset SensorDataset::from_file(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open sensor dataset: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv_text(buf.str(), delimiter);
}

const SensorDataset& SensorDataset::builtin() {
    static const SensorDataset table = [] {
        // Synthetic, deterministic readings with plausible ranges and slow
        // daily cycles; 288 rows = one day at 5-minute resolution.
        std::string csv =
            "ts,temp_c,humidity_pct,pressure_hpa,lux,co2_ppm,pm25_ugm3,voltage_v,"
            "current_a,power_w,motion,door_open,noise_db,soil_ph,wind_mps,battery_pct\n";
        SplitMix64 noise(0x5e50bu ^ 0x1234567ULL);
        char row[256];
        for (int i = 0; i < 288; ++i) {
            double phase = double(i) / 288.0 * 6.283185307179586;
            double temp = 18.0 + 6.5 * std::sin(phase - 1.3) + noise.next_double() * 0.6;
            double hum = 55.0 - 12.0 * std::sin(phase - 1.0) + noise.next_double() * 2.0;
            double pres = 1013.0 + 4.0 * std::sin(phase * 2.0) + noise.next_double();
            double lux = std::max(0.0, 800.0 * std::sin(phase - 1.57)) + noise.next_double() * 10;
            double co2 = 420 + 180 * std::max(0.0, std::sin(phase + 0.4)) + noise.next_double() * 15;
            double pm = 8.0 + noise.next_double() * 6.0;
            double volt = 3.28 + noise.next_double() * 0.06;
            double amp = 0.02 + noise.next_double() * 0.03;
            int motion = noise.next_below(10) < 2 ? 1 : 0;
            int door = noise.next_below(40) == 0 ? 1 : 0;
            double db = 38 + noise.next_double() * 18;
            double ph = 6.4 + noise.next_double() * 0.5;
            double wind = noise.next_double() * 7.5;
            double bat = 100.0 - double(i) * 0.01 - noise.next_double() * 0.02;
            std::snprintf(row, sizeof(row),
                          "%d,%.1f,%.1f,%.1f,%.0f,%.0f,%.1f,%.2f,%.3f,%.2f,%d,%d,%.1f,%.2f,%.1f,"
                          "%.2f\n",
                          i * 300, temp, hum, pres, lux, co2, pm, volt, amp, volt * amp, motion,
                          door, db, ph, wind, bat);
            csv += row;
        }
        return from_csv_text(csv);
    }();
    return table;
}

SensorDataset SensorDataset::resolve(const std::string& source, char delimiter) {
    if (source == "builtin:readings" || source.empty()) return builtin();
    return from_file(source, delimiter);
}

std::vector<std::size_t> SensorDataset::column_indexes(
    const std::vector<std::string>& columns) const {
    std::vector<std::size_t> idx;
    idx.reserve(columns.size());
    for (const auto& c : columns) {
        auto it = std::find(header_.begin(), header_.end(), c);
        if (it == header_.end()) throw ConfigError("unknown dataset column '" + c + "'");
        idx.push_back(std::size_t(it - header_.begin()));
    }
    return idx;
}

std::vector<u8> SensorDataset::make_payload(const std::vector<std::string>& columns,
                                            u64 row_index) const {
    if (rows_.empty()) throw ConfigError("sensor dataset has no data rows");
    if (columns.empty()) throw ConfigError("column selection is empty");
    auto idx = column_indexes(columns);
    const auto& row = rows_[row_index % rows_.size()];
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ',';
        out += row[idx[i]];
    }
    return std::vector<u8>(out.begin(), out.end());
}

// ---- opaque payloads ----

namespace {

void fill_printable(std::vector<u8>& out, std::size_t n, SplitMix64& rng) {
    static const char cs[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+/";
    for (std::size_t i = 0; i < n; ++i) out.push_back(u8(cs[rng.next_below(64)]));
}

void fill_binary(std::vector<u8>& out, std::size_t n, SplitMix64& rng) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(u8(rng.next_u64()));
}

std::string preamble_for(wire::AppTag tag) {
    using wire::AppTag;
    switch (tag) {
        case AppTag::http_post: return "POST /connectors HTTP/1.1\r\n";
        case AppTag::http_get: return "GET /tools/payload HTTP/1.1\r\n";
        case AppTag::ssh: return "SSH-2.0-OpenSSH_8.9\r\n";
        case AppTag::scp: return "SSH-2.0-OpenSSH_8.9\r\n";
        case AppTag::kafka_produce: return "KPRD1";
        case AppTag::zookeeper_ping: return "ZKPG";
        default: return {};
    }
}

}  // namespace

std::size_t min_app_size(wire::AppTag tag) {
    using wire::AppTag;
    switch (tag) {
        case AppTag::dns: return 12;
        case AppTag::ntp: return 48;
        case AppTag::tls_record: return 5;
        case AppTag::none: return 0;
        case AppTag::mqtt: return 2;
        default: return preamble_for(tag).size();
    }
}

std::vector<u8> synth_app_bytes(wire::AppTag tag, std::size_t size, SplitMix64& rng) {
    using wire::AppTag;
    if (tag == AppTag::mqtt)
        throw ConfigError("mqtt payloads are structured; use mqtt_encode");
    if (size < min_app_size(tag))
        throw ConfigError("payload size " + std::to_string(size) + " below minimum for tag " +
                          wire::to_string(tag));
    std::vector<u8> out;
    out.reserve(size);
    switch (tag) {
        case AppTag::dns: {
            u16 txid = u16(rng.next_u64());
            out.push_back(u8(txid >> 8));
            out.push_back(u8(txid));
            out.push_back(0x01);  // RD
            out.push_back(0x00);
            out.push_back(0);
            out.push_back(1);  // one question
            for (int i = 0; i < 6; ++i) out.push_back(0);
            fill_binary(out, size - out.size(), rng);
            break;
        }
        case AppTag::ntp: {
            out.push_back(0x23);  // v4 client
            out.push_back(0);     // stratum
            out.push_back(6);     // poll
            out.push_back(u8(0xec));
            while (out.size() < 48) out.push_back(0);
            fill_binary(out, size - out.size(), rng);
            break;
        }
        case AppTag::tls_record: {
            out.push_back(0x17);  // application data
            out.push_back(0x03);
            out.push_back(0x03);
            std::size_t body = size - 5;
            out.push_back(u8(body >> 8));
            out.push_back(u8(body));
            fill_binary(out, body, rng);
            break;
        }
        case AppTag::none: {
            fill_printable(out, size, rng);
            break;
        }
        default: {
            std::string pre = preamble_for(tag);
            out.insert(out.end(), pre.begin(), pre.end());
            if (tag == AppTag::ssh || tag == AppTag::scp || tag == AppTag::kafka_produce)
                fill_binary(out, size - out.size(), rng);
            else
                fill_printable(out, size - out.size(), rng);
            break;
        }
    }
    IOTSYNTH_CHECK(out.size() == size, "synth_app_bytes size mismatch");
    return out;
}

std::vector<u8> http_post_connectors(const std::string& host, const std::string& connector_name,
                                     std::size_t body_pad, SplitMix64& rng) {
    std::string body =
        "{\"name\":\"" + connector_name +
        "\",\"config\":{"
        "\"connector.class\":\"io.confluent.connect.mqtt.MqttSourceConnector\","
        "\"mqtt.server.uri\":\"tcp://192.168.2.1:1883\","
        "\"mqtt.topics\":\"sensors/#\","
        "\"kafka.topic\":\"mqtt-bridge\","
        "\"tasks.max\":\"1\",\"note\":\"";
    std::vector<u8> pad;
    fill_printable(pad, body_pad, rng);
    body.append(pad.begin(), pad.end());
    body += "\"}}";
    std::string req = "POST /connectors HTTP/1.1\r\nHost: " + host +
                      ":8083\r\nUser-Agent: curl/7.88.1\r\nAccept: */*\r\nContent-Type: "
                      "application/json\r\nContent-Length: " +
                      std::to_string(body.size()) + "\r\n\r\n" + body;
    return std::vector<u8>(req.begin(), req.end());
}

std::vector<u8> http_response(int status, std::string_view reason, std::size_t body_len,
                              SplitMix64& rng) {
    std::string head = "HTTP/1.1 " + std::to_string(status) + " " + std::string(reason) +
                       "\r\nContent-Type: application/json\r\nContent-Length: " +
                       std::to_string(body_len) + "\r\n\r\n";
    std::vector<u8> out(head.begin(), head.end());
    fill_printable(out, body_len, rng);
    return out;
}

std::vector<u8> http_get(const std::string& path, const std::string& host) {
    std::string req = "GET " + path + " HTTP/1.1\r\nHost: " + host +
                      "\r\nUser-Agent: Wget/1.21.3\r\nAccept: */*\r\n\r\n";
    return std::vector<u8>(req.begin(), req.end());
}

namespace {
void put_qname(std::vector<u8>& out, const std::string& qname) {
    std::size_t start = 0;
    for (;;) {
        std::size_t dot = qname.find('.', start);
        std::string label =
            dot == std::string::npos ? qname.substr(start) : qname.substr(start, dot - start);
        IOTSYNTH_CHECK(label.size() > 0 && label.size() < 64, "bad DNS label");
        out.push_back(u8(label.size()));
        out.insert(out.end(), label.begin(), label.end());
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    out.push_back(0);
}
}  // namespace

std::vector<u8> dns_query(u16 txid, const std::string& qname) {
    std::vector<u8> out;
    out.push_back(u8(txid >> 8));
    out.push_back(u8(txid));
    out.push_back(0x01);  // RD
    out.push_back(0x00);
    out.push_back(0);
    out.push_back(1);
    for (int i = 0; i < 6; ++i) out.push_back(0);
    put_qname(out, qname);
    out.push_back(0);
    out.push_back(1);  // type A
    out.push_back(0);
    out.push_back(1);  // class IN
    return out;
}

std::vector<u8> dns_response(u16 txid, const std::string& qname, Ipv4 answer) {
    std::vector<u8> out;
    out.push_back(u8(txid >> 8));
    out.push_back(u8(txid));
    out.push_back(0x81);  // response, RD
    out.push_back(0x80);  // RA
    out.push_back(0);
    out.push_back(1);
    out.push_back(0);
    out.push_back(1);  // one answer
    out.push_back(0);
    out.push_back(0);
    out.push_back(0);
    out.push_back(0);
    put_qname(out, qname);
    out.push_back(0);
    out.push_back(1);
    out.push_back(0);
    out.push_back(1);
    out.push_back(0xc0);  // compression pointer to the question name
    out.push_back(0x0c);
    out.push_back(0);
    out.push_back(1);
    out.push_back(0);
    out.push_back(1);
    for (u32 ttl : {u32(0), u32(0), u32(1), u32(44)}) out.push_back(u8(ttl));  // ttl 300
    out.push_back(0);
    out.push_back(4);
    for (int i = 0; i < 4; ++i) out.push_back(answer.octet(i));
    return out;
}

std::vector<u8> ntp_packet(bool is_request) {
    std::vector<u8> out(48, 0);
    out[0] = is_request ? 0x23 : 0x24;  // v4 client / server
    out[1] = is_request ? 0 : 2;        // stratum
    out[2] = 6;
    out[3] = 0xec;
    return out;
}

}  // namespace iotsynth::app
