#pragma once

#include <array>
#include <string>
#include <vector>

#include "iotsynth/common.hpp"

namespace iotsynth {

// IPv4 address as host-order u32. 0 means "unset".
struct Ipv4 {
    u32 value = 0;

    constexpr Ipv4() = default;
    constexpr explicit Ipv4(u32 v) : value(v) {}
    constexpr Ipv4(u8 a, u8 b, u8 c, u8 d)
        : value((u32(a) << 24) | (u32(b) << 16) | (u32(c) << 8) | u32(d)) {}

    u8 octet(int i) const { return static_cast<u8>(value >> (8 * (3 - i))); }

    bool operator==(const Ipv4&) const = default;
    auto operator<=>(const Ipv4&) const = default;
};

std::string to_string(Ipv4 ip);
Ipv4 parse_ipv4(const std::string& text);  // throws ConfigError

struct Mac {
    std::array<u8, 6> bytes{};

    static Mac broadcast() { return Mac{{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}}; }
    // Locally administered MAC derived from the IP; unique iff IPs are unique.
    static Mac for_ip(Ipv4 ip) {
        return Mac{{0x02, 0x42, ip.octet(0), ip.octet(1), ip.octet(2), ip.octet(3)}};
    }
    bool operator==(const Mac&) const = default;
};

std::string to_string(const Mac& mac);

// Address range in nmap-style notation: each octet is either a value or a
// lo-hi span, e.g. "192.168.18-20.10-150".
struct AddrRange {
    std::array<u8, 4> lo{};
    std::array<u8, 4> hi{};

    bool contains(Ipv4 ip) const {
        for (int i = 0; i < 4; ++i) {
            u8 o = ip.octet(i);
            if (o < lo[i] || o > hi[i]) return false;
        }
        return true;
    }
    u64 size() const {
        u64 n = 1;
        for (int i = 0; i < 4; ++i) n *= u64(hi[i] - lo[i] + 1);
        return n;
    }
    // Enumerates addresses in ascending order.
    std::vector<Ipv4> expand() const;
};

AddrRange parse_addr_range(const std::string& text);  // throws ConfigError
std::string to_string(const AddrRange& r);

}  // namespace iotsynth
