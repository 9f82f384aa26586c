#include "mid/string_list.hpp"

#include <algorithm>

#include "mid/bitstream.hpp"
#include "mid/errors.hpp"

namespace mid {

bool canonical_less(const Bytes& a, const Bytes& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

StringList StringList::canonicalize(std::vector<Bytes> items) {
  if (items.empty()) throw InputError("empty list");
  std::sort(items.begin(), items.end(), canonical_less);
  return StringList(std::move(items));
}

bool StringList::all_equal() const {
  for (std::size_t i = 1; i < elems_.size(); ++i)
    if (elems_[i] != elems_[0]) return false;
  return true;
}

bool StringList::contains(const Bytes& x) const {
  return std::binary_search(elems_.begin(), elems_.end(), x, canonical_less);
}

StringList StringList::without(std::size_t index) const {
  if (elems_.size() < 2) throw DomainError("cannot drop from a singleton list");
  if (index >= elems_.size()) throw InputError("element index out of range");
  std::vector<Bytes> rest;
  rest.reserve(elems_.size() - 1);
  for (std::size_t i = 0; i < elems_.size(); ++i)
    if (i != index) rest.push_back(elems_[i]);
  return StringList(std::move(rest));
}

StringList StringList::deduplicated() const {
  std::vector<Bytes> uniq;
  uniq.reserve(elems_.size());
  for (const Bytes& e : elems_)
    if (uniq.empty() || uniq.back() != e) uniq.push_back(e);
  return StringList(std::move(uniq));
}

StringList StringList::merged(const StringList& a, const StringList& b) {
  std::vector<Bytes> out;
  out.reserve(a.size() + b.size());
  std::merge(a.elems_.begin(), a.elems_.end(), b.elems_.begin(),
             b.elems_.end(), std::back_inserter(out), canonical_less);
  return StringList(std::move(out));
}

Bytes encode_list(const StringList& x) {
  // Headers are bit-packed, but every element payload starts on a byte
  // boundary (zero padding in between). Alignment matters: byte-oriented
  // compressors can only exploit repeated elements if repeats land on
  // identical byte sequences.
  Bytes out;
  unsigned fill = 0;
  auto put_bit = [&](int b) {
    if (fill == 0) out.push_back(0);
    if (b) out.back() |= static_cast<std::uint8_t>(0x80u >> fill);
    fill = (fill + 1) & 7;
  };
  auto put_gamma = [&](std::uint64_t v) {
    unsigned w = static_cast<unsigned>(std::bit_width(v));
    for (unsigned i = 1; i < w; ++i) put_bit(0);
    for (unsigned i = w; i-- > 0;) put_bit(static_cast<int>((v >> i) & 1u));
  };
  put_gamma(x.size());
  for (const Bytes& e : x.elements()) {
    put_gamma(e.size() + 1);
    fill = 0;  // zero-pad to the next byte boundary
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

StringList decode_list(const Bytes& encoded) {
  if (encoded.empty()) throw CodecError("malformed list encoding: empty input");
  BitReader r(encoded);
  bool ok = true;
  std::uint64_t m = r.read_gamma(ok);
  if (!ok) throw CodecError("malformed list encoding: bad count header");
  if (m > r.remaining())  // every element needs at least one header bit
    throw CodecError("malformed list encoding: implausible count");
  std::vector<Bytes> items;
  items.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uint64_t len_plus = r.read_gamma(ok);
    if (!ok) throw CodecError("malformed list encoding: bad length header");
    std::uint64_t len = len_plus - 1;
    while (r.position() % 8 != 0) {  // element payloads are byte-aligned
      if (r.read_bit() != 0)
        throw CodecError("malformed list encoding: nonzero padding");
    }
    if (len * 8 > r.remaining())
      throw CodecError("malformed list encoding: truncated element");
    Bytes e(len);
    for (std::uint64_t k = 0; k < len; ++k)
      e[k] = static_cast<std::uint8_t>(r.read_bits(8, ok));
    items.push_back(std::move(e));
    if (i > 0 && canonical_less(items[i], items[i - 1]))
      throw CodecError("malformed list encoding: elements out of canonical order");
  }
  // a valid stream ends byte-aligned right after the last payload
  if (r.remaining() > 0) throw CodecError("trailing bytes");
  return StringList::canonicalize(std::move(items));
}

}  // namespace mid
