#pragma once

#include <array>
#include <string>

#include "mid/bytes.hpp"
#include "mid/complexity.hpp"

namespace mid {

struct CompressorProfile {
  std::string id;
  bool deterministic = true;
  bool external = false;
  double header_bits = 0.0;  // cost of compressing the empty string
};

// Self-contained LZ77 with a 1 MiB window, literal-run tokens and a stored
// fallback ("midlz1", see docs/formats.md). The large window is the point:
// conditional sizes concatenate inputs that are far bigger than the 32 KiB
// window of off-the-shelf deflate, which would make long-range redundancy
// invisible.
class BuiltinCompressor final : public ComplexitySource {
 public:
  static constexpr std::size_t kWindow = 1u << 20;
  static constexpr std::size_t kMinMatch = 4;

  static Bytes compress(const Bytes& input);
  static Bytes decompress(const Bytes& packed);

  double size_bits(const Bytes& data) override;
  std::string id() const override { return "builtin:midlz1"; }
  CompressorProfile profile() const;
};

// Separator placed between condition and target before compressing the
// concatenation, so the boundary survives arbitrary content.
inline constexpr std::array<std::uint8_t, 8> kBoundaryMarker = {
    0x00, 0xff, 0x4d, 0x49, 0x44, 0x31, 0xff, 0x00};

// first ++ marker ++ second
Bytes marked_concat(const Bytes& first, const Bytes& second);

// The two inputs in canonical order around the marker; symmetric in (a, b).
Bytes canonical_pair_blob(const Bytes& a, const Bytes& b);

ComplexityEstimate compressed_size(const Bytes& data, ComplexitySource& src);

// Conditional cost of `target` given `condition`, realized as the extra
// bits the concatenation costs over the condition alone, clamped at zero.
ComplexityEstimate conditional_size(const Bytes& target, const Bytes& condition,
                                    ComplexitySource& src);

}  // namespace mid
