#include "iotsynth/wire.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>

namespace iotsynth::wire {

namespace {

constexpr u16 kEtherIpv4 = 0x0800;
constexpr u16 kEtherArp = 0x0806;
constexpr std::size_t kEthHeader = 14;
constexpr std::size_t kMinFrame = 60;  // pad like a real NIC (no FCS)
constexpr u32 kPcapMagic = 0xa1b2c3d4;
constexpr u32 kPcapSnaplen = 65535;

void put_be16(std::vector<u8>& v, u16 x) {
    v.push_back(u8(x >> 8));
    v.push_back(u8(x));
}
void put_be32(std::vector<u8>& v, u32 x) {
    v.push_back(u8(x >> 24));
    v.push_back(u8(x >> 16));
    v.push_back(u8(x >> 8));
    v.push_back(u8(x));
}
u16 get_be16(const u8* p) { return u16((u16(p[0]) << 8) | p[1]); }
u32 get_be32(const u8* p) {
    return (u32(p[0]) << 24) | (u32(p[1]) << 16) | (u32(p[2]) << 8) | u32(p[3]);
}

void eth_header(std::vector<u8>& v, const Mac& dst, const Mac& src, u16 ethertype) {
    v.insert(v.end(), dst.bytes.begin(), dst.bytes.end());
    v.insert(v.end(), src.bytes.begin(), src.bytes.end());
    put_be16(v, ethertype);
}

// Fills the IPv4 header checksum in-place; `ip_off` is the header offset.
void finish_ip_checksum(std::vector<u8>& v, std::size_t ip_off) {
    v[ip_off + 10] = 0;
    v[ip_off + 11] = 0;
    u16 sum = inet_checksum(std::span<const u8>(v.data() + ip_off, 20));
    v[ip_off + 10] = u8(sum >> 8);
    v[ip_off + 11] = u8(sum);
}

void ip_header(std::vector<u8>& v, Ipv4 src, Ipv4 dst, u8 proto, u16 payload_len, u16 ip_id) {
    v.push_back(0x45);  // version 4, ihl 5
    v.push_back(0);     // tos
    put_be16(v, u16(20 + payload_len));
    put_be16(v, ip_id);
    put_be16(v, 0x4000);  // DF
    v.push_back(64);      // ttl
    v.push_back(proto);
    put_be16(v, 0);  // checksum placeholder
    put_be32(v, src.value);
    put_be32(v, dst.value);
}

// RFC 1071 sum over the TCP/UDP pseudo header.
u32 pseudo_sum(Ipv4 src, Ipv4 dst, u8 proto, u16 l4_len) {
    u32 s = 0;
    s += src.value >> 16;
    s += src.value & 0xffff;
    s += dst.value >> 16;
    s += dst.value & 0xffff;
    s += proto;
    s += l4_len;
    return s;
}

u16 fold_sum(u32 s) {
    while (s >> 16) s = (s & 0xffff) + (s >> 16);
    return u16(~s);
}

u32 bytes_sum(std::span<const u8> data) {
    u32 s = 0;
    std::size_t i = 0;
    for (; i + 1 < data.size(); i += 2) s += (u32(data[i]) << 8) | data[i + 1];
    if (i < data.size()) s += u32(data[i]) << 8;
    return s;
}

void pad_frame(std::vector<u8>& v) {
    if (v.size() < kMinFrame) v.resize(kMinFrame, 0);
}

const std::array<std::string, 11> kAppTagNames = {
    "none", "mqtt", "http_post", "http_get",   "ssh", "scp",
    "kafka_produce", "zookeeper_ping", "dns", "ntp", "tls_record",
};
const std::array<std::string, 5> kL4Names = {"other", "tcp", "udp", "icmp", "arp"};

}  // namespace

const std::string& to_string(AppTag tag) { return kAppTagNames[static_cast<int>(tag)]; }
const std::string& to_string(L4Proto p) { return kL4Names[static_cast<int>(p)]; }

u16 inet_checksum(std::span<const u8> data) { return fold_sum(bytes_sum(data)); }

std::vector<u8> build_tcp_frame(const HostRef& src, const HostRef& dst, u32 seq, u32 ack, u8 flags,
                                std::span<const u8> payload, u16 ip_id, bool with_mss_option) {
    IOTSYNTH_CHECK(payload.size() <= kMss, "TCP payload exceeds MSS");
    const u8 doff_words = with_mss_option ? 6 : 5;
    const u16 tcp_len = u16(doff_words * 4 + payload.size());

    std::vector<u8> v;
    v.reserve(kEthHeader + 20 + tcp_len);
    eth_header(v, dst.mac, src.mac, kEtherIpv4);
    const std::size_t ip_off = v.size();
    ip_header(v, src.ip, dst.ip, 6, tcp_len, ip_id);
    const std::size_t tcp_off = v.size();
    put_be16(v, src.port);
    put_be16(v, dst.port);
    put_be32(v, seq);
    put_be32(v, (flags & tcpflags::ACK) ? ack : 0);
    v.push_back(u8(doff_words << 4));
    v.push_back(flags);
    put_be16(v, 64240);  // advertised window
    put_be16(v, 0);      // checksum placeholder
    put_be16(v, 0);      // urgent
    if (with_mss_option) {
        v.push_back(2);  // kind MSS
        v.push_back(4);
        put_be16(v, u16(kMss));
    }
    v.insert(v.end(), payload.begin(), payload.end());

    u32 s = pseudo_sum(src.ip, dst.ip, 6, tcp_len);
    s += bytes_sum(std::span<const u8>(v.data() + tcp_off, tcp_len));
    u16 sum = fold_sum(s);
    v[tcp_off + 16] = u8(sum >> 8);
    v[tcp_off + 17] = u8(sum);
    finish_ip_checksum(v, ip_off);
    pad_frame(v);
    return v;
}

std::vector<u8> build_udp_frame(const HostRef& src, const HostRef& dst, std::span<const u8> payload,
                                u16 ip_id) {
    const u16 udp_len = u16(8 + payload.size());
    std::vector<u8> v;
    v.reserve(kEthHeader + 20 + udp_len);
    eth_header(v, dst.mac, src.mac, kEtherIpv4);
    const std::size_t ip_off = v.size();
    ip_header(v, src.ip, dst.ip, 17, udp_len, ip_id);
    const std::size_t udp_off = v.size();
    put_be16(v, src.port);
    put_be16(v, dst.port);
    put_be16(v, udp_len);
    put_be16(v, 0);
    v.insert(v.end(), payload.begin(), payload.end());

    u32 s = pseudo_sum(src.ip, dst.ip, 17, udp_len);
    s += bytes_sum(std::span<const u8>(v.data() + udp_off, udp_len));
    u16 sum = fold_sum(s);
    if (sum == 0) sum = 0xffff;  // UDP transmits all-ones for a zero sum
    v[udp_off + 6] = u8(sum >> 8);
    v[udp_off + 7] = u8(sum);
    finish_ip_checksum(v, ip_off);
    pad_frame(v);
    return v;
}

std::vector<u8> build_icmp_echo(const HostRef& src, const HostRef& dst, bool is_request, u16 ident,
                                u16 seqno, std::span<const u8> payload, u16 ip_id) {
    const u16 icmp_len = u16(8 + payload.size());
    std::vector<u8> v;
    eth_header(v, dst.mac, src.mac, kEtherIpv4);
    const std::size_t ip_off = v.size();
    ip_header(v, src.ip, dst.ip, 1, icmp_len, ip_id);
    const std::size_t icmp_off = v.size();
    v.push_back(is_request ? 8 : 0);
    v.push_back(0);
    put_be16(v, 0);  // checksum placeholder
    put_be16(v, ident);
    put_be16(v, seqno);
    v.insert(v.end(), payload.begin(), payload.end());
    u16 sum = inet_checksum(std::span<const u8>(v.data() + icmp_off, icmp_len));
    v[icmp_off + 2] = u8(sum >> 8);
    v[icmp_off + 3] = u8(sum);
    finish_ip_checksum(v, ip_off);
    pad_frame(v);
    return v;
}

std::vector<u8> build_arp(const Mac& src_mac, Ipv4 src_ip, Ipv4 target_ip, bool is_request,
                          const Mac& target_mac) {
    std::vector<u8> v;
    eth_header(v, is_request ? Mac::broadcast() : target_mac, src_mac, kEtherArp);
    put_be16(v, 1);  // hardware type ethernet
    put_be16(v, kEtherIpv4);
    v.push_back(6);
    v.push_back(4);
    put_be16(v, is_request ? 1 : 2);
    v.insert(v.end(), src_mac.bytes.begin(), src_mac.bytes.end());
    put_be32(v, src_ip.value);
    if (is_request) {
        Mac zero{};
        v.insert(v.end(), zero.bytes.begin(), zero.bytes.end());
    } else {
        v.insert(v.end(), target_mac.bytes.begin(), target_mac.bytes.end());
    }
    put_be32(v, target_ip.value);
    pad_frame(v);
    return v;
}

Summary parse_frame(std::span<const u8> raw) {
    if (raw.size() < kEthHeader) throw IoError("frame shorter than Ethernet header");
    const u16 ethertype = get_be16(raw.data() + 12);
    Summary s;
    if (ethertype == kEtherArp) {
        if (raw.size() < kEthHeader + 28) throw IoError("truncated ARP frame");
        const u8* arp = raw.data() + kEthHeader;
        s.l4 = L4Proto::arp;
        s.src_ip = Ipv4(get_be32(arp + 14));
        s.dst_ip = Ipv4(get_be32(arp + 24));
        return s;
    }
    if (ethertype != kEtherIpv4) throw IoError("unexpected ethertype");
    if (raw.size() < kEthHeader + 20) throw IoError("truncated IPv4 header");
    const u8* ip = raw.data() + kEthHeader;
    if ((ip[0] >> 4) != 4) throw IoError("not IPv4");
    const std::size_t ihl = std::size_t(ip[0] & 0x0f) * 4;
    const u16 total_len = get_be16(ip + 2);
    if (ihl < 20 || total_len < ihl || raw.size() < kEthHeader + total_len)
        throw IoError("inconsistent IPv4 lengths");
    s.src_ip = Ipv4(get_be32(ip + 12));
    s.dst_ip = Ipv4(get_be32(ip + 16));
    const u8 proto = ip[9];
    const u8* l4 = ip + ihl;
    const std::size_t l4_len = total_len - ihl;
    switch (proto) {
        case 6: {
            if (l4_len < 20) throw IoError("truncated TCP header");
            const std::size_t doff = std::size_t(l4[12] >> 4) * 4;
            if (doff < 20 || l4_len < doff) throw IoError("bad TCP data offset");
            s.l4 = L4Proto::tcp;
            s.src_port = get_be16(l4);
            s.dst_port = get_be16(l4 + 2);
            s.tcp_flags = l4[13];
            s.payload_len = u32(l4_len - doff);
            break;
        }
        case 17: {
            if (l4_len < 8) throw IoError("truncated UDP header");
            s.l4 = L4Proto::udp;
            s.src_port = get_be16(l4);
            s.dst_port = get_be16(l4 + 2);
            s.payload_len = u32(l4_len - 8);
            break;
        }
        case 1: {
            if (l4_len < 8) throw IoError("truncated ICMP header");
            s.l4 = L4Proto::icmp;
            s.payload_len = u32(l4_len - 8);
            break;
        }
        default:
            s.l4 = L4Proto::other;
            s.payload_len = u32(l4_len);
    }
    return s;
}

std::span<const u8> frame_payload(std::span<const u8> raw) {
    if (raw.size() < kEthHeader + 20) return {};
    const u8* ip = raw.data() + kEthHeader;
    const u16 ethertype = get_be16(raw.data() + 12);
    if (ethertype != kEtherIpv4) return {};
    const std::size_t ihl = std::size_t(ip[0] & 0x0f) * 4;
    const u16 total_len = get_be16(ip + 2);
    if (total_len < ihl || raw.size() < kEthHeader + total_len) return {};
    const u8 proto = ip[9];
    const u8* l4 = ip + ihl;
    const std::size_t l4_len = total_len - ihl;
    std::size_t hdr = 0;
    if (proto == 6) {
        if (l4_len < 20) return {};
        hdr = std::size_t(l4[12] >> 4) * 4;
    } else if (proto == 17) {
        hdr = 8;
    } else if (proto == 1) {
        hdr = 8;
    } else {
        return {};
    }
    if (l4_len < hdr) return {};
    return raw.subspan(kEthHeader + ihl + hdr, l4_len - hdr);
}

TcpSession::TcpSession(HostRef client, HostRef server, u32 client_iss, u32 server_iss) {
    client_.host = client;
    client_.iss = client_iss;
    client_.next_seq = client_iss;
    server_.host = server;
    server_.iss = server_iss;
    server_.next_seq = server_iss;
}

std::vector<u8> TcpSession::segment(bool from_client, u8 flags, std::span<const u8> payload,
                                    bool with_mss) {
    Side& self = side(from_client);
    Side& peer = side(!from_client);
    const u32 seq = self.next_seq;
    const u32 ackno = self.rcv_next;
    auto frame = build_tcp_frame(self.host, peer.host, seq, ackno, flags, payload, self.ip_id++,
                                 with_mss);
    u32 consumed = u32(payload.size());
    if (flags & tcpflags::SYN) consumed += 1;
    if (flags & tcpflags::FIN) consumed += 1;
    self.next_seq += consumed;
    self.data_sent += payload.size();
    if (!(flags & tcpflags::RST)) peer.rcv_next = self.next_seq;
    if (flags & tcpflags::ACK) register_ack(!from_client, ackno);
    return frame;
}

void TcpSession::register_ack(bool to_client, u32 ackno) {
    Side& acked = side(to_client);
    const u32 seq_base = acked.iss + 1;  // first payload byte
    u32 covered = ackno - seq_base;      // u32 wraparound intended
    if (acked.fin_sent && ackno == acked.next_seq) covered -= 1;
    if (covered <= acked.data_sent && covered > acked.data_acked) acked.data_acked = covered;
}

std::vector<std::vector<u8>> TcpSession::open() {
    IOTSYNTH_CHECK(state_ == State::closed, "open() on non-closed session");
    std::vector<std::vector<u8>> frames;
    state_ = State::syn_sent;
    frames.push_back(segment(true, tcpflags::SYN, {}, true));
    frames.push_back(segment(false, tcpflags::SYN | tcpflags::ACK, {}, true));
    frames.push_back(segment(true, tcpflags::ACK, {}));
    state_ = State::established;
    return frames;
}

std::vector<std::vector<u8>> TcpSession::open_refused() {
    IOTSYNTH_CHECK(state_ == State::closed, "open_refused() on non-closed session");
    std::vector<std::vector<u8>> frames;
    state_ = State::syn_sent;
    frames.push_back(segment(true, tcpflags::SYN, {}, true));
    // RST-ACK straight from the closed port; no sequence space consumed.
    frames.push_back(segment(false, tcpflags::RST | tcpflags::ACK, {}));
    state_ = State::reset;
    return frames;
}

std::vector<std::vector<u8>> TcpSession::send(bool from_client, std::span<const u8> payload) {
    IOTSYNTH_CHECK(state_ == State::established || state_ == State::fin_wait,
                   "send() on closed session");
    std::vector<std::vector<u8>> frames;
    std::size_t off = 0;
    do {
        const std::size_t n = std::min(kMss, payload.size() - off);
        frames.push_back(segment(from_client, tcpflags::PSH | tcpflags::ACK,
                                 payload.subspan(off, n)));
        off += n;
    } while (off < payload.size());
    return frames;
}

std::vector<u8> TcpSession::ack(bool from_client) {
    return segment(from_client, tcpflags::ACK, {});
}

std::vector<std::vector<u8>> TcpSession::close(bool from_client) {
    IOTSYNTH_CHECK(state_ == State::established, "close() on non-established session");
    std::vector<std::vector<u8>> frames;
    state_ = State::fin_wait;
    side(from_client).fin_sent = true;
    frames.push_back(segment(from_client, tcpflags::FIN | tcpflags::ACK, {}));
    side(!from_client).fin_sent = true;
    frames.push_back(segment(!from_client, tcpflags::FIN | tcpflags::ACK, {}));
    frames.push_back(segment(from_client, tcpflags::ACK, {}));
    state_ = State::done;
    return frames;
}

std::vector<u8> TcpSession::abort(bool from_client) {
    auto frame = segment(from_client, tcpflags::RST | tcpflags::ACK, {});
    state_ = State::reset;
    return frame;
}

// ---- pcap ----

namespace {
void write_u32le(std::FILE* f, u32 x) {
    u8 b[4] = {u8(x), u8(x >> 8), u8(x >> 16), u8(x >> 24)};
    std::fwrite(b, 1, 4, f);
}
void write_u16le(std::FILE* f, u16 x) {
    u8 b[2] = {u8(x), u8(x >> 8)};
    std::fwrite(b, 1, 2, f);
}
bool read_u32le(std::FILE* f, u32& x) {
    u8 b[4];
    if (std::fread(b, 1, 4, f) != 4) return false;
    x = u32(b[0]) | (u32(b[1]) << 8) | (u32(b[2]) << 16) | (u32(b[3]) << 24);
    return true;
}
}  // namespace

PcapWriter::~PcapWriter() { close(); }

void PcapWriter::open(const std::string& path) {
    IOTSYNTH_CHECK(file_ == nullptr, "PcapWriter already open");
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw IoError("cannot open for writing: " + path);
    path_ = path;
    write_u32le(file_, kPcapMagic);
    write_u16le(file_, 2);  // version major
    write_u16le(file_, 4);  // version minor
    write_u32le(file_, 0);  // thiszone
    write_u32le(file_, 0);  // sigfigs
    write_u32le(file_, kPcapSnaplen);
    write_u32le(file_, 1);  // LINKTYPE_ETHERNET
}

void PcapWriter::write(u64 ts_us, std::span<const u8> data) {
    IOTSYNTH_CHECK(file_ != nullptr, "write() on closed PcapWriter");
    IOTSYNTH_CHECK(count_ == 0 || ts_us >= last_ts_us_, "pcap timestamps must be non-decreasing");
    last_ts_us_ = ts_us;
    write_u32le(file_, u32(ts_us / kMicrosPerSecond));
    write_u32le(file_, u32(ts_us % kMicrosPerSecond));
    write_u32le(file_, u32(data.size()));
    write_u32le(file_, u32(data.size()));
    if (!data.empty()) std::fwrite(data.data(), 1, data.size(), file_);
    ++count_;
}

void PcapWriter::close() {
    if (file_) {
        if (std::fclose(file_) != 0) {
            file_ = nullptr;
            throw IoError("error closing " + path_);
        }
        file_ = nullptr;
    }
}

PcapReader::PcapReader(const std::string& path) : path_(path) {
    file_ = std::fopen(path.c_str(), "rb");
    if (!file_) throw IoError("cannot open pcap: " + path);
    u32 magic = 0, vz = 0, sig = 0, snap = 0, net = 0;
    u32 ver = 0;
    bool ok = read_u32le(file_, magic) && read_u32le(file_, ver) && read_u32le(file_, vz) &&
              read_u32le(file_, sig) && read_u32le(file_, snap) && read_u32le(file_, net);
    if (!ok) {
        std::fclose(file_);
        file_ = nullptr;
        throw IoError("truncated pcap global header: " + path);
    }
    if (magic != kPcapMagic || (ver & 0xffff) != 2 || (ver >> 16) != 4 || net != 1) {
        std::fclose(file_);
        file_ = nullptr;
        throw IoError("unsupported pcap format: " + path);
    }
}

PcapReader::~PcapReader() {
    if (file_) std::fclose(file_);
}

bool PcapReader::next(PcapPacket& out) {
    u32 sec = 0;
    if (!read_u32le(file_, sec)) return false;  // clean EOF
    u32 usec = 0, incl = 0, orig = 0;
    if (!read_u32le(file_, usec) || !read_u32le(file_, incl) || !read_u32le(file_, orig))
        throw IoError("truncated pcap record header: " + path_);
    if (usec >= kMicrosPerSecond || incl > kPcapSnaplen || incl != orig)
        throw IoError("corrupt pcap record header: " + path_);
    out.ts_us = u64(sec) * kMicrosPerSecond + usec;
    out.data.resize(incl);
    if (incl > 0 && std::fread(out.data.data(), 1, incl, file_) != incl)
        throw IoError("truncated pcap record body: " + path_);
    return true;
}

void pcap_write(const std::string& path, const std::vector<PcapPacket>& packets) {
    PcapWriter w(path);
    for (const auto& p : packets) w.write(p.ts_us, p.data);
    w.close();
}

std::vector<PcapPacket> pcap_read(const std::string& path) {
    PcapReader r(path);
    std::vector<PcapPacket> out;
    PcapPacket p;
    while (r.next(p)) out.push_back(std::move(p));
    return out;
}

}  // namespace iotsynth::wire
