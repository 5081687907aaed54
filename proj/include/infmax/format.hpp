#pragma once

#include <cstdio>
#include <string>

namespace infmax {

/// Shortest-faithful decimal for CSV output: %.*g with enough digits to
/// round-trip typical analysis values, no locale surprises.
inline std::string fmt_double(double value, int precision = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    return std::string(buf);
}

inline std::string fmt_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return std::string(buf);
}

}  // namespace infmax
