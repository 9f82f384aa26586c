#pragma once

#include <cstdint>

#include "mid/bytes.hpp"

namespace mid {

// splitmix64. Deliberately not std::mt19937: the stream must be identical
// across platforms and standard-library versions because seeds are recorded
// in reports and frozen in tests.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n > 0. Lemire multiply-shift, no modulo bias loop
  // needed at the fidelity tests require.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  double unit() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    std::size_t i = 0;
    while (i + 8 <= n) {
      std::uint64_t v = next();
      for (int k = 0; k < 8; ++k) out[i++] = static_cast<std::uint8_t>(v >> (8 * k));
    }
    if (i < n) {
      std::uint64_t v = next();
      while (i < n) {
        out[i++] = static_cast<std::uint8_t>(v);
        v >>= 8;
      }
    }
    return out;
  }

 private:
  std::uint64_t state_;
};

}  // namespace mid
