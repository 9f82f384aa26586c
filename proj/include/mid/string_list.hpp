#pragma once

#include <cstddef>
#include <vector>

#include "mid/bytes.hpp"

namespace mid {

// Canonical order on byte strings: shorter first, ties broken by unsigned
// byte-wise lexicographic comparison.
bool canonical_less(const Bytes& a, const Bytes& b);

// A finite nonempty multiset of byte strings, kept sorted in canonical
// order. Duplicates are preserved.
class StringList {
 public:
  // Sorts the items; throws InputError("empty list") on an empty input.
  static StringList canonicalize(std::vector<Bytes> items);

  const std::vector<Bytes>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  const Bytes& at(std::size_t i) const { return elems_.at(i); }

  bool all_equal() const;
  bool contains(const Bytes& x) const;

  // Copy with element `index` removed; requires size() >= 2.
  StringList without(std::size_t index) const;

  // Copy with duplicate elements collapsed (set view).
  StringList deduplicated() const;

  // Multiset union of two canonical lists (merge keeps order).
  static StringList merged(const StringList& a, const StringList& b);

  friend bool operator==(const StringList& a, const StringList& b) {
    return a.elems_ == b.elems_;
  }
  friend bool operator!=(const StringList& a, const StringList& b) {
    return !(a == b);
  }

 private:
  explicit StringList(std::vector<Bytes> sorted) : elems_(std::move(sorted)) {}
  std::vector<Bytes> elems_;
};

// Self-delimiting encoding of a canonical list, padded to whole bytes:
//   gamma(m) then per element gamma(byte_length + 1) followed by the raw
//   element bytes, everything MSB-first. See docs/formats.md.
Bytes encode_list(const StringList& x);

// Strict inverse of encode_list. Throws CodecError:
//   "malformed list encoding ..." for truncated/invalid headers, nonzero
//   padding, or out-of-order elements; "trailing bytes" when whole unread
//   bytes remain after the last element.
StringList decode_list(const Bytes& encoded);

}  // namespace mid
