#include "mid/compressor.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

#include "mid/bitstream.hpp"
#include "mid/errors.hpp"
#include "mid/string_list.hpp"

namespace mid {

namespace {

constexpr std::uint8_t kTagStored = 0x00;
constexpr std::uint8_t kTagLz = 0x01;
constexpr int kHashBits = 17;
constexpr int kMaxChain = 64;

inline std::uint32_t hash4(const std::uint8_t* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return (v * 2654435761u) >> (32 - kHashBits);
}

inline std::size_t match_len(const std::uint8_t* a, const std::uint8_t* b,
                             std::size_t limit) {
  std::size_t n = 0;
  while (n < limit && a[n] == b[n]) ++n;
  return n;
}

}  // namespace

Bytes BuiltinCompressor::compress(const Bytes& input) {
  const std::size_t n = input.size();
  Bytes stored;
  stored.reserve(n + 1);
  stored.push_back(kTagStored);
  stored.insert(stored.end(), input.begin(), input.end());
  if (n < kMinMatch) return stored;  // lz can never win on tiny inputs

  BitWriter w;
  w.put_gamma(n + 1);
  std::vector<std::int32_t> head(std::size_t{1} << kHashBits, -1);
  std::vector<std::int32_t> prev(n, -1);
  const std::uint8_t* d = input.data();

  auto insert = [&](std::size_t pos) {
    if (pos + 4 <= n) {
      std::uint32_t h = hash4(d + pos);
      prev[pos] = head[h];
      head[h] = static_cast<std::int32_t>(pos);
    }
  };
  auto flush_literals = [&](std::size_t from, std::size_t to) {
    if (from >= to) return;
    w.put_bit(1);
    w.put_gamma(to - from);
    for (std::size_t i = from; i < to; ++i) w.put_byte(d[i]);
  };

  std::size_t pos = 0, lit_start = 0;
  while (pos < n) {
    std::size_t best_len = 0, best_dist = 0;
    if (pos + kMinMatch <= n) {
      std::int32_t cand = head[hash4(d + pos)];
      int chain = 0;
      const std::size_t limit = n - pos;
      while (cand >= 0 && chain < kMaxChain) {
        std::size_t dist = pos - static_cast<std::size_t>(cand);
        if (dist > kWindow) break;  // chain only gets older from here
        // cheap reject before the full extension
        if (best_len == 0 || d[cand + best_len] == d[pos + best_len]) {
          std::size_t len = match_len(d + cand, d + pos, limit);
          if (len >= kMinMatch && len > best_len) {
            best_len = len;
            best_dist = dist;
            if (len == limit) break;
          }
        }
        cand = prev[cand];
        ++chain;
      }
    }
    if (best_len >= kMinMatch) {
      flush_literals(lit_start, pos);
      w.put_bit(0);
      w.put_gamma(best_len - kMinMatch + 1);
      w.put_gamma(best_dist);
      std::size_t end = pos + best_len;
      for (; pos < end; ++pos) insert(pos);
      lit_start = pos;
    } else {
      insert(pos);
      ++pos;
    }
  }
  flush_literals(lit_start, n);

  Bytes lz;
  Bytes body = w.take();
  lz.reserve(body.size() + 1);
  lz.push_back(kTagLz);
  lz.insert(lz.end(), body.begin(), body.end());
  return lz.size() < stored.size() ? lz : stored;
}

Bytes BuiltinCompressor::decompress(const Bytes& packed) {
  if (packed.empty()) throw CodecError("compressed stream: empty input");
  if (packed[0] == kTagStored) return Bytes(packed.begin() + 1, packed.end());
  if (packed[0] != kTagLz) throw CodecError("compressed stream: unknown tag");
  BitReader r(packed.data() + 1, packed.size() - 1);
  bool ok = true;
  std::uint64_t n = r.read_gamma(ok) - 1;
  if (!ok) throw CodecError("compressed stream: bad length header");
  Bytes out;
  out.reserve(n);
  while (out.size() < n) {
    int flag = r.read_bit();
    if (flag < 0) throw CodecError("compressed stream: truncated token");
    if (flag == 1) {
      std::uint64_t run = r.read_gamma(ok);
      if (!ok || out.size() + run > n)
        throw CodecError("compressed stream: bad literal run");
      for (std::uint64_t i = 0; i < run; ++i)
        out.push_back(static_cast<std::uint8_t>(r.read_bits(8, ok)));
      if (!ok) throw CodecError("compressed stream: truncated literals");
    } else {
      std::uint64_t len = r.read_gamma(ok) + kMinMatch - 1;
      std::uint64_t dist = r.read_gamma(ok);
      if (!ok || dist == 0 || dist > out.size() || out.size() + len > n)
        throw CodecError("compressed stream: bad match token");
      std::size_t from = out.size() - dist;
      for (std::uint64_t i = 0; i < len; ++i) out.push_back(out[from + i]);
    }
  }
  if (r.remaining() >= 8) throw CodecError("compressed stream: trailing bytes");
  while (r.remaining() > 0)
    if (r.read_bit() != 0)
      throw CodecError("compressed stream: nonzero padding");
  return out;
}

double BuiltinCompressor::size_bits(const Bytes& data) {
  return 8.0 * static_cast<double>(compress(data).size());
}

CompressorProfile BuiltinCompressor::profile() const {
  CompressorProfile p;
  p.id = id();
  p.deterministic = true;
  p.external = false;
  p.header_bits = 8.0;  // the stored tag byte is all the empty string costs
  return p;
}

Bytes marked_concat(const Bytes& first, const Bytes& second) {
  Bytes out;
  out.reserve(first.size() + kBoundaryMarker.size() + second.size());
  out.insert(out.end(), first.begin(), first.end());
  out.insert(out.end(), kBoundaryMarker.begin(), kBoundaryMarker.end());
  out.insert(out.end(), second.begin(), second.end());
  return out;
}

Bytes canonical_pair_blob(const Bytes& a, const Bytes& b) {
  return canonical_less(b, a) ? marked_concat(b, a) : marked_concat(a, b);
}

ComplexityEstimate compressed_size(const Bytes& data, ComplexitySource& src) {
  ComplexityEstimate e;
  e.bits = src.size_bits(data);
  e.source = src.id();
  e.mode = EstimateMode::unconditional;
  return e;
}

ComplexityEstimate conditional_size(const Bytes& target, const Bytes& condition,
                                    ComplexitySource& src) {
  double joint = src.size_bits(marked_concat(condition, target));
  double base = src.size_bits(condition);
  ComplexityEstimate e;
  e.bits = std::max(0.0, joint - base);
  e.source = src.id();
  e.mode = EstimateMode::conditional_via_soi;
  return e;
}

const char* estimate_mode_name(EstimateMode m) {
  switch (m) {
    case EstimateMode::unconditional: return "unconditional";
    case EstimateMode::conditional_via_soi: return "conditional-via-soi";
    case EstimateMode::exact_bounded: return "exact-bounded";
  }
  return "?";
}

}  // namespace mid
