#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mid/compressor.hpp"
#include "mid/errors.hpp"
#include "mid/estimators.hpp"
#include "mid/rng.hpp"
#include "mid/string_list.hpp"

namespace mid::harness {

// Additive bit budget standing in for logarithmic correction terms:
// 64 + 4*log2(max bits involved).
double slack_allowance(double max_bits);

struct TrialRecord {
  std::uint64_t index = 0;
  std::string inputs_digest;
  std::vector<std::pair<std::string, double>> values;  // raw components
  double slack = 0.0;
};

// One property over many trials. pass <=> worst_slack <= allowance; every
// record carries enough raw values to recompute its slack.
struct ViolationReport {
  std::string property;
  std::uint64_t trials = 0;
  double worst_slack = 0.0;
  double allowance = 0.0;
  bool pass = false;
  std::vector<TrialRecord> records;
  std::uint64_t seed = 0;
  std::string source;
};

// Deterministic generator of test corpora: byte strings of four textures
// (uniform random, text-like, record-structured, and fragments recombined
// from a shared pool so that sampled lists can carry mutual information).
class ListSampler {
 public:
  explicit ListSampler(std::uint64_t seed, std::size_t min_bytes = 1024,
                       std::size_t max_bytes = 51200);

  std::uint64_t seed() const { return seed_; }
  Bytes element();
  std::vector<Bytes> elements(std::size_t m);  // uncanonicalized
  StringList list(std::size_t m);
  StringList all_equal(std::size_t m);
  DetRng& rng() { return rng_; }

 private:
  Bytes random_element(std::size_t len);
  Bytes text_element(std::size_t len);
  Bytes structured_element(std::size_t len);
  Bytes related_element(std::size_t len);

  std::uint64_t seed_;
  DetRng rng_;
  std::size_t min_;
  std::size_t max_;
  std::vector<Bytes> pool_;
  std::uint64_t counter_ = 0;
};

struct MetricReports {
  ViolationReport positive_definiteness;
  ViolationReport symmetry;
  ViolationReport triangle;
  bool pass() const {
    return positive_definiteness.pass && symmetry.pass && triangle.pass;
  }
};

// Three hardest-element metric axioms over sampled lists:
//  - positive definiteness: all-equal lists cost <= 0.05 * C(element),
//    mixed lists cost > 0 (allowance 0);
//  - permutation symmetry: identical value for permuted inputs, slack 0;
//  - triangle over merged lists: E(XY) <= E(XZ) + E(ZY) + allowance.
// Throws InputError for trials < 1.
MetricReports metric_check(ListSampler& sampler, ComplexitySource& src,
                           std::uint64_t trials);

struct AdditivityReport {
  std::uint64_t seed = 0;
  std::size_t n_bits = 0;
  std::string source;
  // shared construction: x = y, X = (eps, x), Y = (eps, y)
  double sub_xy = 0.0, sub_x = 0.0, sub_y = 0.0;
  bool sub_strict = false;  // E(XY) < E(X) + E(Y)
  bool sub_ok = false;      // E(XY) <= 0.6 * (E(X) + E(Y))
  // independent construction: X = (x, x), Y = (y, y)
  double super_xy = 0.0, super_x = 0.0, super_y = 0.0;
  bool super_strict = false;  // E(XY) > E(X) + E(Y)
  bool super_ok = false;      // E(XY) >= E(X) + E(Y) + n/2
  bool pass = false;
};

// Both failure directions of additivity on one seed: merging identical
// lists costs far less than the sum, merging independent duplicated lists
// costs about n more than the sum. n_bits >= 1000 and divisible by 8.
AdditivityReport additivity_demo(std::size_t n_bits, ComplexitySource& src,
                                 std::uint64_t seed);

struct NormalizationReport {
  std::uint64_t seed = 0;
  std::size_t n_bits = 0;
  Scheme scheme = Scheme::norm_max_sublist;
  bool set_variant = false;
  std::string source;
  double exy = 0.0, exz = 0.0, ezy = 0.0;
  bool violation = false;  // exy > exz + ezy
};

// The triangle counterexample for normalized list distances: x random of n
// bits, y random on 0.9n bits padded with zeros, X = (x), Y = (y), and
// Z = (y, y) (for set-variant schemes, two one-bit flips of y instead).
// Expected values for norm-max-sublist: about 1, 1/2, 0. n_bits >= 10000
// and divisible by 80; scheme must be one of the four normalized ones.
NormalizationReport normalization_violation_demo(std::size_t n_bits,
                                                 Scheme scheme,
                                                 ComplexitySource& src,
                                                 std::uint64_t seed);

struct MinimalOverlapReport {
  std::uint64_t seed = 0;
  std::size_t n_bits = 0;
  std::string source;
  double mi_z_y = 0.0;  // mutual information, bits
  double mi_z_x = 0.0;
  double mi_y_x = 0.0;
  double cond_x_given_y = 0.0;     // about n
  double cond_x_given_pair = 0.0;  // see docs: reported, not asserted
  bool xor_identity = false;
  bool pass = false;  // mi bounds + conditional band + xor identity
};

// Two information-disjoint conversion programs: with x = y xor z for
// independent random y, z, the pad z converts y to x yet shares almost no
// information with x (nor does y); printing x literally is the second
// program. A match-based compressor cannot certify C(x | y, z) itself —
// the report carries the measured value for inspection only.
MinimalOverlapReport minimal_overlap_demo(std::size_t n_bits,
                                          ComplexitySource& src,
                                          std::uint64_t seed);

// Chain for one list: min-cost <= max-cost exactly, and max-cost bounded by
// the pairwise sum bound plus allowance. Propagates the sum bound's
// DomainError for singletons.
ViolationReport inequality_chain_check(const StringList& x,
                                       ComplexitySource& src);

// The chain over sampled lists with m cycling through {3, 4, 5}.
ViolationReport chain_suite(ListSampler& sampler, ComplexitySource& src,
                            std::uint64_t trials);

// JSON object strings (no envelope; the CLI wraps them with run metadata).
std::string to_json(const ViolationReport& r);
std::string to_json(const MetricReports& r);
std::string to_json(const AdditivityReport& r);
std::string to_json(const NormalizationReport& r);
std::string to_json(const MinimalOverlapReport& r);

}  // namespace mid::harness
