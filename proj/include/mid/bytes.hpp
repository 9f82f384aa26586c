#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mid {

using Bytes = std::vector<std::uint8_t>;

Bytes bytes_of(std::string_view s);
std::string string_of(const Bytes& b);

std::string to_hex(const Bytes& b);
Bytes from_hex(std::string_view hex);

// FNV-1a, 64 bit; used for content digests in caches and reports.
std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n);
std::uint64_t fnv1a64(const Bytes& b);
std::string digest_hex(const Bytes& b);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, const Bytes& b);

Bytes concat(const Bytes& a, const Bytes& b);

}  // namespace mid
