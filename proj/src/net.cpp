#include "iotsynth/net.hpp"

#include <cstdio>

namespace iotsynth {

std::string to_string(Ipv4 ip) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", ip.octet(0), ip.octet(1), ip.octet(2),
                  ip.octet(3));
    return buf;
}

namespace {

// Parses one decimal octet from text starting at pos; advances pos.
int parse_octet(const std::string& text, std::size_t& pos) {
    if (pos >= text.size() || text[pos] < '0' || text[pos] > '9')
        throw ConfigError("bad IPv4 address '" + text + "'");
    int v = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        v = v * 10 + (text[pos] - '0');
        if (v > 255) throw ConfigError("IPv4 octet out of range in '" + text + "'");
        ++pos;
    }
    return v;
}

}  // namespace

Ipv4 parse_ipv4(const std::string& text) {
    std::size_t pos = 0;
    u32 v = 0;
    for (int i = 0; i < 4; ++i) {
        v = (v << 8) | u32(parse_octet(text, pos));
        if (i < 3) {
            if (pos >= text.size() || text[pos] != '.')
                throw ConfigError("bad IPv4 address '" + text + "'");
            ++pos;
        }
    }
    if (pos != text.size()) throw ConfigError("bad IPv4 address '" + text + "'");
    return Ipv4(v);
}

std::string to_string(const Mac& mac) {
    char buf[18];
    std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", mac.bytes[0], mac.bytes[1],
                  mac.bytes[2], mac.bytes[3], mac.bytes[4], mac.bytes[5]);
    return buf;
}

std::vector<Ipv4> AddrRange::expand() const {
    std::vector<Ipv4> out;
    out.reserve(size());
    for (u32 a = lo[0]; a <= hi[0]; ++a)
        for (u32 b = lo[1]; b <= hi[1]; ++b)
            for (u32 c = lo[2]; c <= hi[2]; ++c)
                for (u32 d = lo[3]; d <= hi[3]; ++d)
                    out.push_back(Ipv4(u8(a), u8(b), u8(c), u8(d)));
    return out;
}

AddrRange parse_addr_range(const std::string& text) {
    AddrRange r;
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        int lo = parse_octet(text, pos);
        int hi = lo;
        if (pos < text.size() && text[pos] == '-') {
            ++pos;
            hi = parse_octet(text, pos);
        }
        if (hi < lo) throw ConfigError("descending span in range '" + text + "'");
        r.lo[i] = u8(lo);
        r.hi[i] = u8(hi);
        if (i < 3) {
            if (pos >= text.size() || text[pos] != '.')
                throw ConfigError("bad address range '" + text + "'");
            ++pos;
        }
    }
    if (pos != text.size()) throw ConfigError("bad address range '" + text + "'");
    return r;
}

std::string to_string(const AddrRange& r) {
    std::string out;
    for (int i = 0; i < 4; ++i) {
        if (i) out += '.';
        out += std::to_string(r.lo[i]);
        if (r.hi[i] != r.lo[i]) {
            out += '-';
            out += std::to_string(r.hi[i]);
        }
    }
    return out;
}

}  // namespace iotsynth
