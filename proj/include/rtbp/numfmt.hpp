#pragma once
#include <charconv>
#include <string>

namespace rtbp {

/// Locale-independent decimal formatting with 17 significant digits
/// (round-trippable doubles; regression fixtures stay byte-comparable).
inline std::string fmt_g17(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace rtbp
