#include "mid/overlap.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include <json.hpp>

#include "mid/string_list.hpp"

namespace mid::overlap {

std::uint32_t ceil_log2(std::uint32_t m) {
  if (m == 0) throw InputError("ceil_log2 of zero");
  return static_cast<std::uint32_t>(std::bit_width(m - 1));
}

std::string BitField::str() const {
  std::string s(width, '0');
  for (std::uint32_t i = 0; i < width; ++i)
    if ((value >> (width - 1 - i)) & 1u) s[i] = '1';
  return s;
}

BitField BitField::parse(const std::string& zero_ones) {
  if (zero_ones.size() > 31) throw InputError("bit field wider than 31 bits");
  BitField f;
  f.width = static_cast<std::uint32_t>(zero_ones.size());
  for (char c : zero_ones) {
    if (c != '0' && c != '1')
      throw InputError("bit field must contain only 0 and 1");
    f.value = (f.value << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return f;
}

OverlapInstance OverlapInstance::make(std::uint32_t m, std::uint32_t k1,
                                      std::uint32_t k2,
                                      std::vector<Vector> vectors) {
  if (m == 0) throw InputError("list size m must be positive");
  if (k1 > k2) throw InputError("k1 must not exceed k2");
  if (k2 > 20) throw InputError("k2 capped at 20");
  if (vectors.empty()) throw InputError("empty enumeration");
  for (Vector& v : vectors) {
    if (v.size() != m)
      throw InputError("vector with " + std::to_string(v.size()) +
                       " components in an m=" + std::to_string(m) +
                       " enumeration");
    std::sort(v.begin(), v.end(), canonical_less);
  }
  std::vector<Bytes> encodings;
  encodings.reserve(vectors.size());
  std::vector<std::size_t> order(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    encodings.push_back(encode_list(StringList::canonicalize(vectors[i])));
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canonical_less(encodings[a], encodings[b]);
  });
  OverlapInstance inst;
  inst.m = m;
  inst.k1 = k1;
  inst.k2 = k2;
  for (std::size_t idx : order) {
    if (!inst.vectors.empty() && inst.vectors.back() == vectors[idx]) continue;
    inst.vectors.push_back(std::move(vectors[idx]));
  }
  return inst;
}

std::size_t OverlapInstance::find(const Vector& x) const {
  Vector probe = x;
  std::sort(probe.begin(), probe.end(), canonical_less);
  Bytes enc = encode_list(StringList::canonicalize(probe));
  std::size_t lo = 0, hi = vectors.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    Bytes other = encode_list(StringList::canonicalize(vectors[mid]));
    if (canonical_less(other, enc))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < vectors.size() && vectors[lo] == probe) return lo;
  return npos;
}

namespace {
std::string node_key(const BitField& prefix, const Bytes& s) {
  return prefix.str() + '|' + to_hex(s);
}
}  // namespace

const ColoredGraph::Node* ColoredGraph::find_node(const BitField& prefix,
                                                  const Bytes& s) const {
  auto it = index.find(node_key(prefix, s));
  if (it == index.end()) return nullptr;
  return &nodes[it->second];
}

ColoredGraph build(const OverlapInstance& inst) {
  const std::uint32_t m = inst.m;
  const std::uint32_t cw = inst.color_width();
  const std::uint64_t occupancy = 1ull << inst.k1;  // uses per prefix bucket
  ColoredGraph g;
  g.vectors.resize(inst.vectors.size());
  std::unordered_map<std::string, std::uint64_t> use_count;

  for (std::size_t vi = 0; vi < inst.vectors.size(); ++vi) {
    const Vector& x = inst.vectors[vi];
    ColoredGraph::VectorInfo& info = g.vectors[vi];
    info.prefix_of.resize(m);
    info.node_of.resize(m);

    std::vector<std::size_t> endpoints;  // distinct node indices
    for (std::uint32_t j = 0; j < m; ++j) {
      const Bytes& s = x[j];
      std::uint64_t i = ++use_count[to_hex(s)];
      if (i > inst.capacity())
        throw DomainError("promise violated: a string occurs more than 2^k2 times");
      std::uint64_t bucket = (i + occupancy - 1) / occupancy;  // 1-based
      BitField r{static_cast<std::uint32_t>(bucket - 1), inst.l()};
      auto [it, fresh] = g.index.try_emplace(node_key(r, s), g.nodes.size());
      if (fresh) g.nodes.push_back({r, s, {}});
      info.prefix_of[j] = r;
      info.node_of[j] = it->second;
      if (std::find(endpoints.begin(), endpoints.end(), it->second) ==
          endpoints.end())
        endpoints.push_back(it->second);
    }

    // smallest color absent from every endpoint
    std::set<std::uint32_t> used;
    for (std::size_t ni : endpoints)
      for (const auto& [ev, ec] : g.nodes[ni].edges) {
        (void)ev;
        used.insert(ec.value);
      }
    if (used.size() > static_cast<std::size_t>(m) * occupancy - m)
      throw DomainError("coloring invariant broken: neighborhood over budget");
    std::uint32_t c = 0;
    while (used.count(c)) ++c;
    if (c >= (1u << cw))
      throw DomainError("coloring invariant broken: no free color");
    info.color = BitField{c, cw};

    for (std::size_t ni : endpoints) {
      g.nodes[ni].edges.emplace_back(vi, info.color);
      ++g.edge_count;
      g.max_degree = std::max(g.max_degree, g.nodes[ni].edges.size());
    }
  }

  for (const ColoredGraph::Node& node : g.nodes)
    if (node.edges.size() > occupancy)
      throw DomainError("coloring invariant broken: node degree over 2^k1");
  return g;
}

namespace {
// first component index (1-based) indistinguishable from i at the decoder:
// same string and same prefix
std::uint32_t first_twin(const Vector& x,
                         const ColoredGraph::VectorInfo& info,
                         std::uint32_t i) {
  for (std::uint32_t j = 1; j <= x.size(); ++j)
    if (x[j - 1] == x[i - 1] && info.prefix_of[j - 1] == info.prefix_of[i - 1])
      return j;
  return i;
}
}  // namespace

SideInfo encode(const OverlapInstance& inst, const ColoredGraph& graph,
                const Vector& x, std::uint32_t i, std::uint32_t k) {
  if (i < 1 || i > inst.m || k < 1 || k > inst.m)
    throw InputError("component index out of range");
  std::size_t vi = inst.find(x);
  if (vi == OverlapInstance::npos)
    throw InputError("vector not in the enumeration");
  const ColoredGraph::VectorInfo& info = graph.vectors.at(vi);
  const Vector& canon = inst.vectors[vi];
  std::uint32_t base = first_twin(canon, info, i);
  std::uint32_t delta =
      (k + inst.m - base) % inst.m;  // (k - base) mod m, both 1-based
  return SideInfo{info.prefix_of[i - 1], info.color,
                  BitField{delta, inst.delta_width()}};
}

Decoded decode_with(const OverlapInstance& inst, const ColoredGraph& graph,
                    const Bytes& x, const SideInfo& side) {
  if (side.r.width != inst.l() || side.color.width != inst.color_width() ||
      side.delta.width != inst.delta_width())
    throw InputError("side information width mismatch");
  const ColoredGraph::Node* node = graph.find_node(side.r, x);
  std::size_t hits = 0;
  std::size_t vi = 0;
  if (node != nullptr) {
    for (const auto& [ev, ec] : node->edges) {
      if (ec == side.color) {
        ++hits;
        vi = ev;
      }
    }
  }
  if (hits == 0) throw DomainError("undecodable: no edge with that color");
  if (hits > 1) throw DomainError("coloring invariant broken: ambiguous edge");

  const Vector& list = inst.vectors[vi];
  const ColoredGraph::VectorInfo& info = graph.vectors[vi];
  std::uint32_t base = 0;
  for (std::uint32_t j = 1; j <= inst.m; ++j) {
    if (list[j - 1] == x && info.prefix_of[j - 1] == side.r) {
      base = j;
      break;
    }
  }
  if (base == 0) throw DomainError("coloring invariant broken: edge without occurrence");
  std::uint32_t k = (base - 1 + side.delta.value) % inst.m + 1;
  return Decoded{vi, list, list[k - 1]};
}

Decoded decode(const OverlapInstance& inst, const Bytes& x, const SideInfo& side) {
  ColoredGraph graph = build(inst);
  return decode_with(inst, graph, x, side);
}

std::string to_json(const OverlapInstance& inst, const ColoredGraph& graph) {
  nlohmann::json j;
  j["m"] = inst.m;
  j["k1"] = inst.k1;
  j["k2"] = inst.k2;
  j["l"] = inst.l();
  j["color_width"] = inst.color_width();
  j["delta_width"] = inst.delta_width();
  nlohmann::json vecs = nlohmann::json::array();
  for (std::size_t vi = 0; vi < inst.vectors.size(); ++vi) {
    nlohmann::json v;
    nlohmann::json comps = nlohmann::json::array();
    for (const Bytes& s : inst.vectors[vi]) comps.push_back(to_hex(s));
    v["components"] = comps;
    v["color"] = graph.vectors[vi].color.str();
    nlohmann::json prefixes = nlohmann::json::array();
    for (const BitField& r : graph.vectors[vi].prefix_of)
      prefixes.push_back(r.str());
    v["prefixes"] = prefixes;
    vecs.push_back(v);
  }
  j["vectors"] = vecs;
  nlohmann::json edges = nlohmann::json::array();
  for (const ColoredGraph::Node& node : graph.nodes) {
    for (const auto& [ev, ec] : node.edges) {
      nlohmann::json e;
      e["prefix"] = node.prefix.str();
      e["string"] = to_hex(node.s);
      e["vector"] = ev;
      e["color"] = ec.str();
      edges.push_back(e);
    }
  }
  j["edges"] = edges;
  j["edge_count"] = graph.edge_count;
  j["max_degree"] = graph.max_degree;
  return j.dump(2);
}

OverlapInstance random_instance(DetRng& rng, std::uint32_t m, std::uint32_t k1,
                                std::uint32_t k2, std::size_t n_vectors) {
  if (n_vectors == 0) throw InputError("need at least one vector");
  const std::uint64_t cap = 1ull << k2;
  // a small pool forces prefix reuse; fresh strings keep capacity honest
  std::vector<Bytes> pool;
  std::size_t pool_size = std::max<std::size_t>(2, n_vectors / 3);
  for (std::size_t i = 0; i < pool_size; ++i)
    pool.push_back(rng.bytes(1 + rng.below(12)));
  std::unordered_map<std::string, std::uint64_t> used;
  std::vector<Vector> vectors;
  std::size_t attempts = 0;
  while (vectors.size() < n_vectors && attempts < 50 * n_vectors + 100) {
    ++attempts;
    Vector v;
    std::unordered_map<std::string, std::uint64_t> tentative;
    for (std::uint32_t j = 0; j < m; ++j) {
      Bytes s;
      if (rng.below(2) == 0) {
        s = pool[rng.below(pool.size())];
        std::string key = to_hex(s);
        // leave one slot of headroom so near-capacity pool strings retire
        if (used[key] + tentative[key] + 1 >= cap) s = rng.bytes(6 + rng.below(6));
      } else {
        s = rng.bytes(6 + rng.below(6));
      }
      ++tentative[to_hex(s)];
      v.push_back(std::move(s));
    }
    std::sort(v.begin(), v.end(), canonical_less);
    if (std::find(vectors.begin(), vectors.end(), v) != vectors.end()) continue;
    for (const auto& [key, n] : tentative) used[key] += n;
    vectors.push_back(std::move(v));
  }
  return OverlapInstance::make(m, k1, k2, std::move(vectors));
}

}  // namespace mid::overlap
