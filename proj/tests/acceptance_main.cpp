// Acceptance gate: one line per criterion, every tolerance pinned here.
// Exit 0 iff all criteria pass; failures keep running so the report is
// complete.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "mid/cache.hpp"
#include "mid/compressor.hpp"
#include "mid/errors.hpp"
#include "mid/estimators.hpp"
#include "mid/external.hpp"
#include "mid/harness.hpp"
#include "mid/overlap.hpp"
#include "mid/rng.hpp"
#include "mid/string_list.hpp"
#include "mid/toylab.hpp"

using namespace mid;

namespace {

int g_failures = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

template <typename F>
void criterion(int idx, const char* name, double budget_seconds, F f) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
  if (budget_seconds > 0.0 && dt > budget_seconds) {
    o.pass = false;
    o.detail += " [exceeded " + num(budget_seconds) + "s budget]";
  }
  std::printf("%s criterion-%d %s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL", idx,
              name, dt, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

// ---------------------------------------------------------------------------
// 1. normalized-distance triangle counterexample, n = 10^4 bits, builtin

Outcome c1_counterexample() {
  BuiltinCompressor raw;
  SizeCache cache;
  CachingSource src(raw, cache);

  harness::NormalizationReport main = harness::normalization_violation_demo(
      10000, Scheme::norm_max_sublist, src, 2001);
  bool values_ok = main.exy >= 0.8 && main.exz >= 0.35 && main.exz <= 0.65 &&
                   main.ezy <= 0.15 && main.exy > main.exz + main.ezy;

  bool all_flag = true;
  for (Scheme s : {Scheme::norm_max_sublist, Scheme::norm_drop_maximizer,
                   Scheme::norm_set_max_sublist, Scheme::norm_set_drop_maximizer}) {
    harness::NormalizationReport r =
        harness::normalization_violation_demo(10000, s, src, 2001);
    all_flag = all_flag && r.violation;
  }
  Outcome o;
  o.pass = values_ok && all_flag;
  o.detail = "exy=" + num(main.exy) + " exz=" + num(main.exz) +
             " ezy=" + num(main.ezy) +
             (all_flag ? " all four schemes flag violation"
                       : " some scheme missed the violation");
  return o;
}

// ---------------------------------------------------------------------------
// 2. triangle suite: 100 seeded triples, elements 1-50 KiB

Outcome c2_triangle_suite() {
  BuiltinCompressor raw;
  SizeCache cache;
  CachingSource src(raw, cache);
  harness::ListSampler sampler(2002);  // 1024..51200-byte elements
  harness::MetricReports r = harness::metric_check(sampler, src, 100);

  Outcome o;
  o.pass = r.pass() && r.symmetry.worst_slack == 0.0;
  o.detail = "triangle worst=" + num(r.triangle.worst_slack) + " allowance=" +
             num(r.triangle.allowance) +
             " symmetry worst=" + num(r.symmetry.worst_slack) +
             " posdef worst=" + num(r.positive_definiteness.worst_slack);
  return o;
}

// ---------------------------------------------------------------------------
// 3. additivity fails in both directions at n = 8000

Outcome c3_additivity() {
  BuiltinCompressor raw;
  SizeCache cache;
  CachingSource src(raw, cache);
  harness::AdditivityReport r = harness::additivity_demo(8000, src, 2003);
  Outcome o;
  o.pass = r.sub_ok && r.super_ok;
  o.detail = "shared " + num(r.sub_xy) + " vs 0.6*(" + num(r.sub_x) + "+" +
             num(r.sub_y) + "); independent " + num(r.super_xy) + " vs " +
             num(r.super_x + r.super_y) + "+4000";
  return o;
}

// ---------------------------------------------------------------------------
// 4. chain over 100 seeded lists, m in {3,4,5}

Outcome c4_chain() {
  BuiltinCompressor raw;
  SizeCache cache;
  CachingSource src(raw, cache);
  harness::ListSampler sampler(2004);
  harness::ViolationReport r = harness::chain_suite(sampler, src, 100);

  // the lower leg must hold exactly, not just within the allowance
  bool lower_exact = true;
  for (const harness::TrialRecord& rec : r.records) {
    double lo = 0.0, hi = 0.0;
    for (const auto& [name, v] : rec.values) {
      if (name == "emin_bits") lo = v;
      if (name == "emax_bits") hi = v;
    }
    if (lo > hi) lower_exact = false;
  }
  Outcome o;
  o.pass = r.pass && lower_exact;
  o.detail = "worst slack=" + num(r.worst_slack) + " allowance=" +
             num(r.allowance) +
             (lower_exact ? " emin<=emax exact in all 100" : " emin>emax seen");
  return o;
}

// ---------------------------------------------------------------------------
// 5. exact toy-machine suite at L = 20, S = 10^4, strings <= 8 bits

Outcome c5_toylab() {
  using namespace mid::toylab;
  const std::uint32_t L = 20;
  const std::uint64_t S = 10000;
  // frozen constants, measured once on this machine family and asserted since
  const double kFrozenSoiBound = 7.0;
  const double kFrozenCodingLo = 0.0;
  const double kFrozenCodingHi = 0.31;

  PrefixFreeReport pf = prefix_free_check(BitString(), L, S);
  if (!pf.pass || pf.violations != 0)
    return {false, "halting set is not prefix-free"};

  Oracle oracle(L, S, 6);
  double kraft = kraft_sum(oracle.table(BitString()));
  if (!(kraft <= 1.0)) return {false, "kraft sum " + num(kraft) + " > 1"};

  SoiScanReport soi = soi_scan(8, oracle);
  if (soi.max_abs_residual > kFrozenSoiBound)
    return {false, "soi residual " + num(soi.max_abs_residual) + " > " +
                       num(kFrozenSoiBound)};

  CodingScanReport coding = coding_scan(8, oracle);
  if (coding.strings_present != coding.strings_total)
    return {false, "some strings lack witnesses at L=20"};
  if (coding.min_residual < kFrozenCodingLo ||
      coding.max_residual > kFrozenCodingHi)
    return {false, "coding residual out of [" + num(kFrozenCodingLo) + ", " +
                       num(kFrozenCodingHi) + "]: min=" +
                       num(coding.min_residual) + " max=" +
                       num(coding.max_residual)};

  // monotonicity in L and in S over every string of length <= 8
  CondTable t16 = build_table(BitString(), 16, S);
  CondTable t20_lowS = build_table(BitString(), L, 100);
  const CondTable& t20 = oracle.table(BitString());
  std::size_t checked = 0;
  for (const auto& [target, entry] : t16.entries) {
    if (target.size() > 8) continue;
    auto it = t20.entries.find(target);
    if (it == t20.entries.end())
      return {false, "string present at L=16 missing at L=20"};
    if (it->second.min_program_bits > entry.min_program_bits)
      return {false, "C grew when L rose from 16 to 20"};
    ++checked;
  }
  for (const auto& [target, entry] : t20_lowS.entries) {
    if (target.size() > 8) continue;
    auto it = t20.entries.find(target);
    if (it == t20.entries.end())
      return {false, "string present at S=100 missing at S=10^4"};
    if (it->second.min_program_bits > entry.min_program_bits)
      return {false, "C grew when S rose from 100 to 10^4"};
  }

  Outcome o;
  o.pass = true;
  o.detail = "kraft=" + num(kraft) + " soi_max=" + num(soi.max_abs_residual) +
             " coding in [" + num(coding.min_residual) + ", " +
             num(coding.max_residual) + "] monotone over " +
             std::to_string(checked) + " strings";
  return o;
}

// ---------------------------------------------------------------------------
// 6. overlap construction sweep: 50 seeded instances

Outcome c6_overlap() {
  using namespace mid::overlap;
  DetRng rng(2006);
  std::size_t encodings = 0;
  for (int t = 0; t < 50; ++t) {
    std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.below(8));   // 1..8
    std::uint32_t k1 = static_cast<std::uint32_t>(rng.below(7));      // 0..6
    std::uint32_t k2 =
        k1 + static_cast<std::uint32_t>(rng.below(11 - k1));          // k1..10
    std::size_t n_vectors = 3 + rng.below(18);
    OverlapInstance inst = random_instance(rng, m, k1, k2, n_vectors);
    ColoredGraph graph = build(inst);  // throws on any no-free-color event

    if (graph.max_degree > (1u << k1))
      return {false, "node degree above 2^k1 in trial " + std::to_string(t)};
    std::uint32_t want_width = k1 + ceil_log2(m);
    for (const auto& vi : graph.vectors)
      if (vi.color.width != want_width)
        return {false, "color width != k1 + ceil(log2 m) in trial " +
                           std::to_string(t)};

    for (std::size_t vi = 0; vi < inst.vectors.size(); ++vi)
      for (std::uint32_t i = 1; i <= inst.m; ++i)
        for (std::uint32_t k = 1; k <= inst.m; ++k) {
          SideInfo side = encode(inst, graph, inst.vectors[vi], i, k);
          Decoded out =
              decode_with(inst, graph, inst.vectors[vi][i - 1], side);
          ++encodings;
          if (out.list != inst.vectors[vi] ||
              out.element != inst.vectors[vi][k - 1])
            return {false, "round trip mismatch in trial " + std::to_string(t)};
        }
  }
  return {true, "50 instances, " + std::to_string(encodings) +
                    " encodings, all round-tripped"};
}

// ---------------------------------------------------------------------------
// 7. density and dominance on the exhaustive toy universe (m<=3, len<=5)

Outcome c7_density_dominance() {
  using namespace mid::toylab;
  ToyUniverse u = build_universe(3, 5);
  EmaxTable t = emax_over_universe(u, 20, 10000);
  ToyDistanceTable d_emax = distance_from_emax(t, 0.0, "hardest-element");

  for (const BitString& anchor : u.strings) {
    DensityReport rep = density_check(u, d_emax, anchor);
    if (!rep.pass)
      return {false, "density fails at anchor " + anchor.str() + ": sum=" +
                         num(rep.sum)};
  }

  struct Candidate {
    ToyDistanceTable table;
    bool expect_zero_c;
  };
  std::vector<Candidate> family;
  family.push_back({distance_from_emax(t, 0.0, "hardest-element"), true});
  family.push_back({distance_from_emax(t, 5.0, "hardest-element-plus-5"), false});
  family.push_back({code_length_distance(u), false});
  family.push_back({hamming_style_distance(u), false});

  std::string cs;
  for (const Candidate& cand : family) {
    DominanceReport rep = dominance_check(u, cand.table, t, 64);
    if (!rep.pass || !rep.c)
      return {false, "no finite dominance constant for " + cand.table.name};
    if (cand.expect_zero_c && *rep.c != 0)
      return {false, "c=" + std::to_string(*rep.c) + " for the hardest-element"
                                                     " distance itself"};
    cs += (cs.empty() ? "" : ",") + cand.table.name + "=" +
          std::to_string(*rep.c);
  }
  return {true,
          std::to_string(u.lists.size()) + " lists, density ok at all " +
              std::to_string(u.strings.size()) + " anchors, c: " + cs};
}

// ---------------------------------------------------------------------------
// 8. external compressor adapter sanity

Outcome c8_external() {
  // prefer xz (large window); fall back to bzip2 when unavailable
  std::unique_ptr<ExternalCompressor> ext;
  Bytes probe = DetRng(1).bytes(4096);
  for (const char* spec : {"xz -9 -c", "bzip2 -9 -c"}) {
    try {
      auto candidate =
          std::make_unique<ExternalCompressor>(parse_command(spec, 60.0));
      candidate->audit_determinism(probe);
      ext = std::move(candidate);
      break;
    } catch (const ProcessError&) {
      continue;
    }
  }
  if (!ext) return {false, "neither xz nor bzip2 is usable"};

  Bytes x = DetRng(2008).bytes(102400);  // 100 KiB seeded random
  double self = ncd_pair(x, x, *ext).value;
  if (!(self <= 0.05)) return {false, "NCD(x,x)=" + num(self) + " > 0.05"};

  std::string dir = MID_FIXTURE_DIR;
  std::vector<NamedBlob> corpus;
  for (const char* name : {"alpha.txt", "beta.txt", "rand_a.bin", "rand_b.bin",
                           "records.bin"})
    corpus.push_back(NamedBlob{name, read_file(dir + "/" + name)});

  const std::string cache_path = "/tmp/mid_acceptance_cache.txt";
  std::remove(cache_path.c_str());
  double lo = 1e9, hi = -1e9;
  DistanceMatrix cold_matrix;
  {
    SizeCache cold(cache_path);
    CachingSource src(*ext, cold);
    cold_matrix = distance_matrix(corpus, Scheme::ncd, src, 1);
    for (double v : cold_matrix.entries) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo < 0.0 || hi > 1.1)
      return {false, "corpus NCD out of [0, 1.1]: [" + num(lo) + ", " +
                         num(hi) + "]"};
  }
  // a fresh cache over the same file must reproduce every value bit for bit
  SizeCache warm(cache_path);
  CachingSource warm_src(*ext, warm);
  DistanceMatrix warm_matrix = distance_matrix(corpus, Scheme::ncd, warm_src, 1);
  if (warm_matrix.entries != cold_matrix.entries)
    return {false, "cache hits changed matrix values"};
  if (warm.hits() == 0) return {false, "warm run never hit the cache"};

  return {true, "id=" + ext->id() + " self-NCD=" + num(self) + " corpus in [" +
                    num(lo) + ", " + num(hi) + "], " +
                    std::to_string(warm.hits()) + " cache hits identical"};
}

}  // namespace

int main() {
  std::printf("acceptance gate: 8 criteria\n");
  criterion(1, "normalized-triangle-counterexample", 10.0, c1_counterexample);
  criterion(2, "triangle-suite-100-triples", 120.0, c2_triangle_suite);
  criterion(3, "additivity-both-directions", 5.0, c3_additivity);
  criterion(4, "inequality-chain-100-lists", 120.0, c4_chain);
  criterion(5, "toy-machine-exact-suite", 120.0, c5_toylab);
  criterion(6, "overlap-construction-sweep", 30.0, c6_overlap);
  criterion(7, "density-and-dominance", 0.0, c7_density_dominance);
  criterion(8, "external-compressor-adapter", 0.0, c8_external);
  if (g_failures != 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
