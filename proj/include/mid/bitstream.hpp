#pragma once

#include <bit>
#include <cstdint>

#include "mid/bytes.hpp"

namespace mid {

// MSB-first bit writer over a growable byte buffer. The final byte is
// zero-padded by finish().
class BitWriter {
 public:
  void put_bit(int b) {
    if (fill_ == 0) out_.push_back(0);
    if (b) out_.back() |= static_cast<std::uint8_t>(0x80u >> fill_);
    fill_ = (fill_ + 1) & 7;
    ++bits_;
  }

  // width <= 64, MSB first.
  void put_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) put_bit(static_cast<int>((value >> i) & 1u));
  }

  void put_byte(std::uint8_t v) { put_bits(v, 8); }

  // Elias gamma: floor(log2 v) zeros, then v in binary. v >= 1.
  void put_gamma(std::uint64_t v) {
    unsigned w = static_cast<unsigned>(std::bit_width(v));
    for (unsigned i = 1; i < w; ++i) put_bit(0);
    put_bits(v, w);
  }

  std::uint64_t bit_count() const { return bits_; }

  // Returns the buffer; trailing partial byte is already zero-padded by
  // construction (bits are or-ed into zero bytes).
  Bytes take() { return std::move(out_); }
  const Bytes& buffer() const { return out_; }

 private:
  Bytes out_;
  unsigned fill_ = 0;  // bits used in the last byte
  std::uint64_t bits_ = 0;
};

// MSB-first reader over a fixed byte buffer. All reads report failure via
// the ok flag instead of throwing; decoders turn failures into typed errors.
class BitReader {
 public:
  BitReader(const std::uint8_t* data, std::size_t size_bytes)
      : data_(data), nbits_(size_bytes * 8) {}
  explicit BitReader(const Bytes& b) : BitReader(b.data(), b.size()) {}

  std::uint64_t position() const { return pos_; }
  std::uint64_t remaining() const { return nbits_ - pos_; }

  int read_bit() {  // -1 on exhaustion
    if (pos_ >= nbits_) return -1;
    std::uint8_t byte = data_[pos_ >> 3];
    int b = (byte >> (7 - (pos_ & 7))) & 1;
    ++pos_;
    return b;
  }

  std::uint64_t read_bits(unsigned width, bool& ok) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) {
      int b = read_bit();
      if (b < 0) {
        ok = false;
        return 0;
      }
      v = (v << 1) | static_cast<unsigned>(b);
    }
    return v;
  }

  std::uint64_t read_gamma(bool& ok) {
    unsigned zeros = 0;
    for (;;) {
      int b = read_bit();
      if (b < 0 || zeros > 62) {
        ok = false;
        return 0;
      }
      if (b == 1) break;
      ++zeros;
    }
    std::uint64_t rest = read_bits(zeros, ok);
    if (!ok) return 0;
    return (1ull << zeros) | rest;
  }

 private:
  const std::uint8_t* data_;
  std::uint64_t nbits_;
  std::uint64_t pos_ = 0;
};

}  // namespace mid
