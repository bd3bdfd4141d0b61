#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mvx {

inline constexpr const char* kToolName = "mvx";
inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit over raw bytes. Used for reproducibility stamps and
/// purity checks, not for security.
std::uint64_t fnv1a64(std::string_view bytes);

/// fnv1a64 rendered as a fixed-width lowercase hex string.
std::string content_hash_hex(std::string_view bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Render a double with the shortest digits that round-trip, always with
/// a '.' or exponent so reals stay distinguishable from integers.
std::string format_real(double value);

/// Number of Unicode scalar values (malformed bytes count one each).
std::size_t utf8_length(std::string_view text);

/// Byte offset of each scalar value start, plus one final end-of-text
/// offset; size is utf8_length(text) + 1.
std::vector<std::size_t> utf8_offsets(std::string_view text);

} // namespace mvx
