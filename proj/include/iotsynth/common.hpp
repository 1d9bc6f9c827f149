#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace iotsynth {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// User-facing configuration problems. `line` is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// I/O and format problems on files we read or write.
class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void internal_failure(const char* file, int line, const std::string& what);

// Internal invariant check; aborts with diagnostics rather than limping on.
#define IOTSYNTH_CHECK(cond, msg)                                        \
    do {                                                                 \
        if (!(cond)) ::iotsynth::internal_failure(__FILE__, __LINE__, (msg)); \
    } while (0)

constexpr u64 kMicrosPerSecond = 1'000'000;

inline u64 seconds_to_us(double s) {
    return static_cast<u64>(s * 1e6 + 0.5);
}

std::string format_us(u64 t_us);  // "123.456789" seconds, fixed width fraction

// FNV-1a, used for rng substream labels and config digests.
u64 fnv1a64(const void* data, std::size_t len);
u64 fnv1a64(const std::string& s);

}  // namespace iotsynth
