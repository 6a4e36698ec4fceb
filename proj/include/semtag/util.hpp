#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semtag {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);

/// Absolute URI check: `scheme ":" rest` with an RFC 3986 scheme and no whitespace.
bool is_absolute_uri(std::string_view s);

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string now_iso8601();

/// Random version-4 UUID string.
std::string make_uuid();

/// 64-bit FNV-1a, used to derive stable seeds from ids.
std::uint64_t fnv1a(std::string_view s);

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

/// Write `contents` to `path` through a sibling temp file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

} // namespace semtag
