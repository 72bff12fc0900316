#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace ighsom {

/// Number of UTF-8 code points; invalid lead bytes count as one character each.
std::size_t utf8_length(std::string_view s);

/// Longest prefix of `s` holding at most `max_chars` code points.
std::string utf8_truncate(std::string_view s, std::size_t max_chars);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Bit pattern of a double as 16 lowercase hex digits, and its inverse.
std::string double_to_hex(double v);
double double_from_hex(std::string_view hex);

std::string xml_escape(std::string_view s);

}  // namespace ighsom
