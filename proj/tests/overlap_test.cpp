#include <doctest.h>

#include <json.hpp>

#include "mid/overlap.hpp"

using namespace mid::overlap;
using mid::Bytes;
using mid::DetRng;
using mid::DomainError;
using mid::InputError;
using mid::bytes_of;

namespace {

// four 2-vectors sharing one component: the worked example for the prefix
// and coloring rules (k1=1 -> two uses per prefix bucket, l=1)
OverlapInstance shared_component_instance() {
  Bytes s = bytes_of("s");
  return OverlapInstance::make(
      2, 1, 2,
      {{bytes_of("a"), s}, {bytes_of("b"), s}, {bytes_of("c"), s},
       {bytes_of("d"), s}});
}

}  // namespace

TEST_CASE("bit fields") {
  CHECK(BitField{5, 4}.str() == "0101");
  CHECK(BitField{0, 0}.str() == "");
  CHECK(BitField::parse("0101") == BitField{5, 4});
  CHECK(BitField::parse("") == BitField{0, 0});
  CHECK_THROWS_AS(BitField::parse("012"), InputError);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(8) == 3);
  CHECK(ceil_log2(9) == 4);
}

TEST_CASE("instance canonicalization") {
  Bytes s = bytes_of("s");
  OverlapInstance inst = OverlapInstance::make(
      2, 1, 2,
      {{s, bytes_of("b")},  // components get sorted
       {bytes_of("a"), s},
       {bytes_of("a"), s}});  // duplicate vector dropped
  REQUIRE(inst.vectors.size() == 2);
  CHECK(inst.vectors[0] == Vector{bytes_of("a"), s});
  CHECK(inst.vectors[1] == Vector{bytes_of("b"), s});
  CHECK(inst.l() == 1);
  CHECK(inst.color_width() == 2);
  CHECK(inst.delta_width() == 1);
  CHECK(inst.find({s, bytes_of("a")}) == 0);  // order-insensitive lookup
  CHECK(inst.find({bytes_of("x"), s}) == OverlapInstance::npos);

  CHECK_THROWS_AS(OverlapInstance::make(2, 1, 2, {{s}}), InputError);
  CHECK_THROWS_AS(OverlapInstance::make(2, 3, 2, {{s, s}}), InputError);
  CHECK_THROWS_AS(OverlapInstance::make(0, 1, 2, {}), InputError);
  CHECK_THROWS_AS(OverlapInstance::make(1, 1, 2, {}), InputError);
}

TEST_CASE("build assigns prefixes by use count and greedy colors") {
  OverlapInstance inst = shared_component_instance();
  ColoredGraph g = build(inst);

  // component 2 of each vector is "s" (canonical order puts it last);
  // uses 1..4 land in buckets 1,1,2,2 -> prefixes 0,0,1,1
  REQUIRE(g.vectors.size() == 4);
  CHECK(g.vectors[0].prefix_of[1].str() == "0");
  CHECK(g.vectors[1].prefix_of[1].str() == "0");
  CHECK(g.vectors[2].prefix_of[1].str() == "1");
  CHECK(g.vectors[3].prefix_of[1].str() == "1");
  // fresh partners always sit in bucket 1
  for (int vi = 0; vi < 4; ++vi) CHECK(g.vectors[vi].prefix_of[0].str() == "0");

  // min-free-color at the shared nodes alternates 00, 01
  CHECK(g.vectors[0].color.str() == "00");
  CHECK(g.vectors[1].color.str() == "01");
  CHECK(g.vectors[2].color.str() == "00");
  CHECK(g.vectors[3].color.str() == "01");

  CHECK(g.edge_count == 8);     // no collapsed edges here
  CHECK(g.max_degree == 2);     // the shared nodes carry two edges
  CHECK(g.max_degree <= (1u << inst.k1));

  const ColoredGraph::Node* shared0 = g.find_node(BitField{0, 1}, bytes_of("s"));
  REQUIRE(shared0 != nullptr);
  CHECK(shared0->edges.size() == 2);
  CHECK(g.find_node(BitField{1, 1}, bytes_of("a")) == nullptr);
}

TEST_CASE("encode and decode round trip on the worked example") {
  OverlapInstance inst = shared_component_instance();
  ColoredGraph g = build(inst);

  SideInfo side = encode(inst, g, inst.vectors[0], 2, 1);
  CHECK(side.r.str() == "0");
  CHECK(side.color.str() == "00");
  CHECK(side.delta.str() == "1");  // (1 - 2) mod 2
  CHECK(side.total_bits() == inst.l() + inst.k1 + 2 * ceil_log2(inst.m));

  Decoded d = decode_with(inst, g, bytes_of("s"), side);
  CHECK(d.vector_index == 0);
  CHECK(d.list == inst.vectors[0]);
  CHECK(d.element == bytes_of("a"));

  // self-target has an all-zero delta
  SideInfo self = encode(inst, g, inst.vectors[2], 1, 1);
  CHECK(self.delta.str() == "0");
  CHECK(decode_with(inst, g, bytes_of("c"), self).element == bytes_of("c"));

  // full sweep over (X, i, k)
  for (std::size_t vi = 0; vi < inst.vectors.size(); ++vi)
    for (std::uint32_t i = 1; i <= inst.m; ++i)
      for (std::uint32_t k = 1; k <= inst.m; ++k) {
        SideInfo si = encode(inst, g, inst.vectors[vi], i, k);
        Decoded out = decode_with(inst, g, inst.vectors[vi][i - 1], si);
        CHECK(out.list == inst.vectors[vi]);
        CHECK(out.element == inst.vectors[vi][k - 1]);
      }

  // decode from a fresh rebuild agrees (replay determinism)
  Decoded fresh = decode(inst, bytes_of("s"), side);
  CHECK(fresh.vector_index == 0);
  CHECK(fresh.element == bytes_of("a"));
}

TEST_CASE("encode/decode input validation") {
  OverlapInstance inst = shared_component_instance();
  ColoredGraph g = build(inst);

  CHECK_THROWS_WITH_AS(encode(inst, g, {bytes_of("x"), bytes_of("y")}, 1, 1),
                       "vector not in the enumeration", InputError);
  CHECK_THROWS_AS(encode(inst, g, inst.vectors[0], 0, 1), InputError);
  CHECK_THROWS_AS(encode(inst, g, inst.vectors[0], 1, 3), InputError);

  SideInfo side = encode(inst, g, inst.vectors[0], 2, 1);
  SideInfo wrong = side;
  wrong.color = BitField{3, 2};  // color 11 is never assigned here
  CHECK_THROWS_WITH_AS(decode_with(inst, g, bytes_of("s"), wrong),
                       "undecodable: no edge with that color", DomainError);
  SideInfo narrow = side;
  narrow.r = BitField{0, 2};
  CHECK_THROWS_AS(decode_with(inst, g, bytes_of("s"), narrow), InputError);
  // right color, wrong node
  CHECK_THROWS_AS(decode_with(inst, g, bytes_of("zz"), side), DomainError);
}

TEST_CASE("degenerate m=1 instance") {
  OverlapInstance inst = OverlapInstance::make(
      1, 2, 3, {{bytes_of("p")}, {bytes_of("q")}, {bytes_of("r")}});
  ColoredGraph g = build(inst);
  CHECK(inst.color_width() == 2);  // just k1 bits
  CHECK(inst.delta_width() == 0);
  for (const auto& vi : g.vectors) CHECK(vi.color.width == 2);
  SideInfo side = encode(inst, g, {bytes_of("q")}, 1, 1);
  CHECK(side.total_bits() == inst.l() + inst.k1);
  Decoded d = decode_with(inst, g, bytes_of("q"), side);
  CHECK(d.element == bytes_of("q"));
}

TEST_CASE("capacity promise is enforced") {
  // k2 = 2 allows four occurrences; a fifth must be rejected at build time
  Bytes s = bytes_of("s");
  OverlapInstance inst = OverlapInstance::make(
      2, 1, 2,
      {{bytes_of("a"), s}, {bytes_of("b"), s}, {bytes_of("c"), s},
       {bytes_of("d"), s}, {bytes_of("e"), s}});
  CHECK_THROWS_WITH_AS(build(inst),
                       "promise violated: a string occurs more than 2^k2 times",
                       DomainError);
}

TEST_CASE("duplicate components in one vector collapse to one edge") {
  Bytes s = bytes_of("s");
  // (s,s) enumerates before (s,z), so its two uses share bucket 1 and
  // collapse onto one node with a single edge
  OverlapInstance inst =
      OverlapInstance::make(2, 1, 2, {{s, s}, {bytes_of("z"), s}});
  ColoredGraph g = build(inst);
  std::size_t vs = inst.find({s, s});
  REQUIRE(vs == 0);
  CHECK(g.vectors[0].node_of[0] == g.vectors[0].node_of[1]);

  const ColoredGraph::Node* node = g.find_node(BitField{0, 1}, s);
  REQUIRE(node != nullptr);
  REQUIRE(node->edges.size() == 1);
  CHECK(g.edge_count == 3);  // 1 collapsed + 2 from (s,z)
  // the third use of s spills into bucket 2
  CHECK(g.vectors[1].prefix_of[0].str() == "1");

  for (std::uint32_t i = 1; i <= 2; ++i)
    for (std::uint32_t k = 1; k <= 2; ++k) {
      SideInfo si = encode(inst, g, inst.vectors[0], i, k);
      Decoded out = decode_with(inst, g, s, si);
      CHECK(out.list == inst.vectors[0]);
      CHECK(out.element == s);
    }
}

TEST_CASE("seeded instance sweep: invariants and full round trips") {
  DetRng rng(404);
  for (int trial = 0; trial < 12; ++trial) {
    std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.below(8));
    std::uint32_t k1 = static_cast<std::uint32_t>(rng.below(7));
    std::uint32_t k2 = k1 + static_cast<std::uint32_t>(rng.below(11 - k1));
    if (k2 > 10) k2 = 10;
    std::size_t nv = 4 + rng.below(20);
    OverlapInstance inst = random_instance(rng, m, k1, k2, nv);
    ColoredGraph g = build(inst);
    CHECK(g.max_degree <= (1u << k1));
    for (const auto& vi : g.vectors) CHECK(vi.color.width == inst.color_width());
    for (std::size_t vi = 0; vi < inst.vectors.size(); ++vi)
      for (std::uint32_t i = 1; i <= m; ++i)
        for (std::uint32_t k = 1; k <= m; ++k) {
          SideInfo si = encode(inst, g, inst.vectors[vi], i, k);
          Decoded out = decode_with(inst, g, inst.vectors[vi][i - 1], si);
          REQUIRE(out.list == inst.vectors[vi]);
          REQUIRE(out.element == inst.vectors[vi][k - 1]);
        }
  }
}

TEST_CASE("json export") {
  OverlapInstance inst = shared_component_instance();
  ColoredGraph g = build(inst);
  std::string text = to_json(inst, g);
  nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j["m"] == 2);
  CHECK(j["k1"] == 1);
  CHECK(j["k2"] == 2);
  CHECK(j["l"] == 1);
  CHECK(j["color_width"] == 2);
  CHECK(j["vectors"].size() == 4);
  CHECK(j["vectors"][0]["components"][0] == "61");  // "a"
  CHECK(j["vectors"][0]["color"] == "00");
  CHECK(j["edges"].size() == 8);

  // serialization is rebuild-deterministic
  CHECK(to_json(inst, build(inst)) == text);
}
