#include "iotsynth/common.hpp"

#include <cstdio>
#include <cstdlib>

namespace iotsynth {

void internal_failure(const char* file, int line, const std::string& what) {
    std::fprintf(stderr, "internal invariant violated at %s:%d: %s\n", file, line, what.c_str());
    std::abort();
}

std::string format_us(u64 t_us) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%llu.%06llu",
                  static_cast<unsigned long long>(t_us / kMicrosPerSecond),
                  static_cast<unsigned long long>(t_us % kMicrosPerSecond));
    return buf;
}

u64 fnv1a64(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    u64 h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

u64 fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace iotsynth
