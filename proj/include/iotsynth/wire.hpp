#pragma once

#include <span>
#include <string>
#include <vector>

#include "iotsynth/common.hpp"
#include "iotsynth/labels.hpp"
#include "iotsynth/net.hpp"

namespace iotsynth::wire {

constexpr std::size_t kMtu = 1500;
constexpr std::size_t kMss = kMtu - 40;  // IPv4 + TCP headers, no options

namespace tcpflags {
constexpr u8 FIN = 0x01;
constexpr u8 SYN = 0x02;
constexpr u8 RST = 0x04;
constexpr u8 PSH = 0x08;
constexpr u8 ACK = 0x10;
}  // namespace tcpflags

enum class L4Proto : u8 { other = 0, tcp, udp, icmp, arp };

enum class AppTag : u8 {
    none = 0,
    mqtt,
    http_post,
    http_get,
    ssh,
    scp,
    kafka_produce,
    zookeeper_ping,
    dns,
    ntp,
    tls_record,
};

const std::string& to_string(AppTag tag);
const std::string& to_string(L4Proto p);

// Parsed L2-L7 digest of one frame. Everything except app_tag is re-derived
// by parse_frame; app_tag is assigned at synthesis time (appproto classifies
// on ports + payload when re-deriving).
struct Summary {
    Ipv4 src_ip;
    Ipv4 dst_ip;
    u16 src_port = 0;
    u16 dst_port = 0;
    L4Proto l4 = L4Proto::other;
    u8 tcp_flags = 0;
    u32 payload_len = 0;  // L4 application payload bytes
    AppTag app_tag = AppTag::none;

    bool operator==(const Summary&) const = default;
};

// One captured frame. `origin` is the generating agent's truth class; it is
// engine-internal and never serialized into pcap files.
struct PacketRecord {
    int probe_id = -1;
    u64 ts_us = 0;
    std::vector<u8> raw;
    Summary summary;
    Label origin = Label::normal;
};

u16 inet_checksum(std::span<const u8> data);

struct HostRef {
    Ipv4 ip;
    u16 port = 0;
    Mac mac;

    static HostRef of(Ipv4 ip, u16 port) { return HostRef{ip, port, Mac::for_ip(ip)}; }
};

// Stand-alone frame builders. IP id is caller-supplied so each sender can run
// its own counter.
std::vector<u8> build_tcp_frame(const HostRef& src, const HostRef& dst, u32 seq, u32 ack, u8 flags,
                                std::span<const u8> payload, u16 ip_id, bool with_mss_option);
std::vector<u8> build_udp_frame(const HostRef& src, const HostRef& dst, std::span<const u8> payload,
                                u16 ip_id);
std::vector<u8> build_icmp_echo(const HostRef& src, const HostRef& dst, bool is_request, u16 ident,
                                u16 seqno, std::span<const u8> payload, u16 ip_id);
std::vector<u8> build_arp(const Mac& src_mac, Ipv4 src_ip, Ipv4 target_ip, bool is_request,
                          const Mac& target_mac);

// Parses an Ethernet frame back into a Summary. Throws IoError on frames the
// builders above could not have produced.
Summary parse_frame(std::span<const u8> raw);

// Returns a view of the L4 application payload inside a raw frame (empty for
// ARP/ICMP and payload-less segments).
std::span<const u8> frame_payload(std::span<const u8> raw);

// Sequence/acknowledgment bookkeeping for one TCP connection plus frame
// synthesis for every state transition the simulator needs. The caller
// decides timing; this class guarantees coherent numbers.
class TcpSession {
public:
    enum class State : u8 { closed, syn_sent, established, fin_wait, reset, done };

    TcpSession(HostRef client, HostRef server, u32 client_iss, u32 server_iss);

    // Three-way handshake; leaves the session established.
    std::vector<std::vector<u8>> open();
    // SYN answered by RST-ACK (closed port); session ends in `reset`.
    std::vector<std::vector<u8>> open_refused();

    // Data segments from one side, split at MSS. Segments carry PSH-ACK and
    // acknowledge everything received so far (piggyback).
    std::vector<std::vector<u8>> send(bool from_client, std::span<const u8> payload);
    // Pure ACK of all bytes received so far.
    std::vector<u8> ack(bool from_client);
    // Orderly close initiated by one side: FIN-ACK, FIN-ACK, final ACK.
    std::vector<std::vector<u8>> close(bool from_client);
    std::vector<u8> abort(bool from_client);  // RST

    State state() const { return state_; }
    u64 payload_sent(bool client) const { return side(client).data_sent; }
    u64 payload_acked(bool client) const { return side(client).data_acked; }
    const HostRef& client_host() const { return client_.host; }
    const HostRef& server_host() const { return server_.host; }

private:
    struct Side {
        HostRef host;
        u32 iss = 0;
        u32 next_seq = 0;      // next sequence number to send
        u32 rcv_next = 0;      // next sequence expected from peer
        u64 data_sent = 0;     // cumulative payload bytes sent
        u64 data_acked = 0;    // payload bytes the peer has acknowledged
        u16 ip_id = 0;
        bool fin_sent = false;
    };

    Side& side(bool client) { return client ? client_ : server_; }
    const Side& side(bool client) const { return client ? client_ : server_; }
    std::vector<u8> segment(bool from_client, u8 flags, std::span<const u8> payload,
                            bool with_mss = false);
    void register_ack(bool to_client, u32 ackno);

    Side client_;
    Side server_;
    State state_ = State::closed;
};

// Classic pcap (magic 0xA1B2C3D4, version 2.4, linktype 1, microsecond
// timestamps). Writers stream; readers exist in both streaming and
// whole-file forms.
struct PcapPacket {
    u64 ts_us = 0;
    std::vector<u8> data;
};

class PcapWriter {
public:
    PcapWriter() = default;
    explicit PcapWriter(const std::string& path) { open(path); }
    ~PcapWriter();
    PcapWriter(const PcapWriter&) = delete;
    PcapWriter& operator=(const PcapWriter&) = delete;

    void open(const std::string& path);
    void write(u64 ts_us, std::span<const u8> data);
    void close();
    u64 packet_count() const { return count_; }
    bool is_open() const { return file_ != nullptr; }

private:
    std::FILE* file_ = nullptr;
    u64 count_ = 0;
    u64 last_ts_us_ = 0;
    std::string path_;
};

class PcapReader {
public:
    explicit PcapReader(const std::string& path);
    ~PcapReader();
    PcapReader(const PcapReader&) = delete;
    PcapReader& operator=(const PcapReader&) = delete;

    bool next(PcapPacket& out);  // false at clean EOF; throws IoError on corruption

private:
    std::FILE* file_ = nullptr;
    std::string path_;
};

void pcap_write(const std::string& path, const std::vector<PcapPacket>& packets);
std::vector<PcapPacket> pcap_read(const std::string& path);

}  // namespace iotsynth::wire
