#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

namespace tpc {

// Shortest decimal form that round-trips to the same double, so emitted
// tables are byte-stable and lossless.
inline std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0.0 ? "inf" : "-inf";
    char buf[32];
    std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_u64(std::uint64_t v) { return std::to_string(v); }

} // namespace tpc
