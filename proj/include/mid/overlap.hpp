#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mid/bytes.hpp"
#include "mid/errors.hpp"
#include "mid/rng.hpp"

namespace mid::overlap {

// ceil(log2(m)) for m >= 1; 0 for m = 1.
std::uint32_t ceil_log2(std::uint32_t m);

// Fixed-width bit string, MSB first. Width 0 is the empty field.
struct BitField {
  std::uint32_t value = 0;
  std::uint32_t width = 0;

  std::string str() const;  // '0'/'1' characters
  static BitField parse(const std::string& zero_ones);  // throws InputError

  friend bool operator==(const BitField& a, const BitField& b) {
    return a.value == b.value && a.width == b.width;
  }
  friend bool operator!=(const BitField& a, const BitField& b) {
    return !(a == b);
  }
};

// One m-component multiset, components in canonical (length, lex) order.
using Vector = std::vector<Bytes>;

// The combinatorial setting: a finite enumeration B of m-vectors together
// with the two bit budgets k1 <= k2. Every distinct string may occur as a
// component across B at most 2^k2 times, so that l = k2 - k1 prefix bits
// suffice to spread its uses over nodes of degree <= 2^k1.
struct OverlapInstance {
  std::uint32_t m = 0;
  std::uint32_t k1 = 0;
  std::uint32_t k2 = 0;
  std::vector<Vector> vectors;  // enumeration order: canonical on encodings

  std::uint32_t l() const { return k2 - k1; }
  std::uint32_t delta_width() const { return ceil_log2(m); }
  std::uint32_t color_width() const { return k1 + ceil_log2(m); }
  std::uint64_t capacity() const { return 1ull << k2; }

  // Validates budgets and component counts, canonicalizes every vector,
  // sorts the enumeration, and drops duplicate vectors. Throws InputError.
  static OverlapInstance make(std::uint32_t m, std::uint32_t k1,
                              std::uint32_t k2, std::vector<Vector> vectors);

  // Index of X in the enumeration after canonicalizing it, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const Vector& x) const;
};

// Bipartite graph: prefixed-string nodes r||s on one side, enumeration
// vectors on the other. All m edges of one vector carry a single color;
// at any node the incident colors are pairwise distinct. Components of a
// vector that land on the same node share one edge.
struct ColoredGraph {
  struct Node {
    BitField prefix;
    Bytes s;
    std::vector<std::pair<std::size_t, BitField>> edges;  // (vector, color)
  };
  struct VectorInfo {
    BitField color;
    std::vector<BitField> prefix_of;   // per component
    std::vector<std::size_t> node_of;  // per component
  };

  std::vector<Node> nodes;
  std::vector<VectorInfo> vectors;  // aligned with instance enumeration
  std::size_t edge_count = 0;
  std::size_t max_degree = 0;

  const Node* find_node(const BitField& prefix, const Bytes& s) const;

  // exposed for construction; key is prefix.str() + '|' + hex(s)
  std::unordered_map<std::string, std::size_t> index;
};

// Runs the enumeration: assigns each occurrence of a string its prefix
// (occurrence number i, 1-based, lands on the ceil(i / 2^k1)-th string of
// length l counting from 0^l) and greedily colors each vector's edges with
// the smallest color free at every endpoint.
// Throws DomainError("promise violated ...") past the 2^k2 occurrence cap
// and DomainError("coloring invariant broken") if no color is free (which
// the degree/budget bounds make unreachable).
ColoredGraph build(const OverlapInstance& inst);

// What the decoder needs beyond x itself: l + (k1 + ceil_log2(m)) +
// ceil_log2(m) bits.
struct SideInfo {
  BitField r;      // prefix of component i, width l
  BitField color;  // edge color, width k1 + ceil_log2(m)
  BitField delta;  // cyclic offset to the target index, width ceil_log2(m)

  std::uint32_t total_bits() const { return r.width + color.width + delta.width; }
};

// Side information that lets a holder of component i recover the whole
// vector and component k. Indices are 1-based. When component i occurs
// several times with the same prefix, delta is taken relative to the first
// such occurrence (the decoder cannot tell them apart, and need not).
// Throws InputError for X outside the enumeration or bad indices.
SideInfo encode(const OverlapInstance& inst, const ColoredGraph& graph,
                const Vector& x, std::uint32_t i, std::uint32_t k);

struct Decoded {
  std::size_t vector_index = 0;
  Vector list;
  Bytes element;  // component k
};

// Looks up the unique edge at node r||x with the given color. Throws
// DomainError("undecodable") when there is none and
// DomainError("coloring invariant broken") when there are several.
Decoded decode_with(const OverlapInstance& inst, const ColoredGraph& graph,
                    const Bytes& x, const SideInfo& side);

// Same, but rebuilds the graph from the instance first: decoding depends
// only on the instance, never on build-time transients.
Decoded decode(const OverlapInstance& inst, const Bytes& x, const SideInfo& side);

// JSON serialization of the instance plus its colored graph.
std::string to_json(const OverlapInstance& inst, const ColoredGraph& graph);

// Deterministic capacity-respecting instance for sweeps: n_vectors distinct
// vectors over a small shared pool plus fresh strings; no string is used
// more than 2^k2 times.
OverlapInstance random_instance(DetRng& rng, std::uint32_t m, std::uint32_t k1,
                                std::uint32_t k2, std::size_t n_vectors);

}  // namespace mid::overlap
