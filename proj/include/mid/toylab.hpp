#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mid/errors.hpp"

namespace mid::toylab {

// ---------------------------------------------------------------------------
// Bit strings (the toy machine is bit-granular, unlike the byte-level model).

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}
  static BitString parse(const std::string& zero_ones);  // throws InputError

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int bit(std::size_t i) const { return bits_[i]; }
  void push_back(int b) { bits_.push_back(static_cast<std::uint8_t>(b & 1)); }
  void append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  }
  const std::vector<std::uint8_t>& raw() const { return bits_; }
  std::string str() const;

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator!=(const BitString& a, const BitString& b) {
    return !(a == b);
  }
  // canonical: length first, then lexicographic with 0 < 1
  friend bool operator<(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.bits_ < b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

struct BitStringHash {
  std::size_t operator()(const BitString& s) const {
    std::uint64_t h = 14695981039346656037ull;
    for (std::uint8_t b : s.raw()) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (s.size() * 0x9e3779b97f4a7c15ull));
  }
};

// ---------------------------------------------------------------------------
// Programs and the machine.
//
// A program is a plain bit string executed left to right; the instruction
// set is prefix-coded, so halting programs form a prefix-free set (no
// halting program is a proper prefix of another: halting requires the
// cursor to land exactly on the end). Opcodes, operands and costs are
// specified in docs/toy_machine.md.

inline constexpr std::uint32_t kDefaultL = 20;      // program length budget
inline constexpr std::uint64_t kDefaultS = 10000;   // step budget
inline constexpr std::uint32_t kMaxEnumerationL = 24;
inline constexpr std::uint64_t kMaxStepBudget = 1000000;
// Halting outputs longer than this are tallied but not retained in tables.
inline constexpr std::size_t kMaxRetainedOutput = 48;

struct ProgramBits {
  std::uint32_t value = 0;  // MSB-first when length > 0
  std::uint8_t length = 0;

  int bit(std::size_t i) const {
    return static_cast<int>((value >> (length - 1 - i)) & 1u);
  }
  BitString to_bitstring() const;
  static ProgramBits from_bitstring(const BitString& b);  // length <= 32
};

enum class RunStatus { halted, diverge, invalid };

struct RunResult {
  RunStatus status = RunStatus::invalid;
  BitString output;
  std::uint64_t steps = 0;
};

// Reusable runner; run() does not allocate when the program dies early.
class MachineRunner {
 public:
  RunStatus run(ProgramBits p, const BitString& condition, std::uint64_t step_budget);
  const std::vector<std::uint8_t>& output() const { return out_; }
  std::uint64_t steps() const { return steps_; }

 private:
  enum class St { cont, halted, invalid, diverge };
  St exec_one(unsigned& cur);
  int read_bit(unsigned& cur) {
    return cur < prog_.length ? prog_.bit(cur++) : -1;
  }
  bool read_field(unsigned& cur, unsigned width, std::uint32_t& out);

  ProgramBits prog_;
  const BitString* cond_ = nullptr;
  std::uint64_t budget_ = 0;
  std::uint64_t steps_ = 0;
  std::vector<std::uint8_t> out_;
};

RunResult run_program(ProgramBits p, const BitString& condition,
                      std::uint64_t step_budget);

// Visits every bit string of length 0..L in length-then-value order
// (epsilon, 0, 1, 00, 01, ...). Throws BudgetError("enumeration budget ...")
// when L exceeds max_l.
void for_each_program(std::uint32_t L, const std::function<void(ProgramBits)>& fn,
                      std::uint32_t max_l = kMaxEnumerationL);

// Materialized variant for small L (2^{L+1}-1 entries).
std::vector<BitString> enumerate_programs(std::uint32_t L,
                                          std::uint32_t max_l = kMaxEnumerationL);

// ---------------------------------------------------------------------------
// Exhaustive oracle per condition.

struct OracleEntry {
  std::uint32_t min_program_bits = 0;
  std::uint64_t weight = 0;  // sum of 2^(L - |p|) over halting p, see kraft_sum
};

struct CondTable {
  BitString condition;
  std::uint32_t L = kDefaultL;
  std::uint64_t S = kDefaultS;
  std::unordered_map<BitString, OracleEntry, BitStringHash> entries;
  std::uint64_t total_weight = 0;  // includes outputs beyond the retention cap
  std::uint64_t halting_programs = 0;
  std::uint64_t diverging_programs = 0;
  std::uint64_t invalid_programs = 0;
};

CondTable build_table(const BitString& condition, std::uint32_t L, std::uint64_t S,
                      std::uint32_t max_l = kMaxEnumerationL);

// Sum of 2^-|p| over halting programs; <= 1 by prefix-freeness (Kraft).
double kraft_sum(const CondTable& t);

// Memoizing front end over build_table; keeps a handful of tables alive.
class Oracle {
 public:
  Oracle(std::uint32_t L, std::uint64_t S, std::size_t keep_tables = 4);

  std::uint32_t L() const { return L_; }
  std::uint64_t S() const { return S_; }

  const CondTable& table(const BitString& condition);
  std::optional<std::uint32_t> complexity(const BitString& target,
                                          const BitString& condition);
  double apriori(const BitString& target, const BitString& condition);

 private:
  std::uint32_t L_;
  std::uint64_t S_;
  std::size_t keep_;
  std::list<CondTable> tables_;  // most recently used first
};

// C(target | condition) with one-shot budgets.
std::optional<std::uint32_t> bounded_complexity(const BitString& target,
                                                const BitString& condition,
                                                std::uint32_t L, std::uint64_t S);
double apriori_probability(const BitString& target, const BitString& condition,
                           std::uint32_t L, std::uint64_t S);

// ---------------------------------------------------------------------------
// Structural checks.

struct PrefixFreeReport {
  bool pass = false;
  std::uint64_t halting = 0;
  std::uint64_t violations = 0;
};
PrefixFreeReport prefix_free_check(const BitString& condition, std::uint32_t L,
                                   std::uint64_t S);

// bounded complexity + log2(apriori); absent when the target has no halting
// program within budgets. Always >= 0 because the witness program itself
// contributes 2^-C to the apriori sum.
std::optional<double> coding_residual(const BitString& target, Oracle& oracle);

struct CodingScanReport {
  std::uint32_t max_len = 0;
  std::size_t strings_total = 0;
  std::size_t strings_present = 0;
  double max_residual = 0.0;
  double min_residual = 0.0;
};
CodingScanReport coding_scan(std::uint32_t max_len, Oracle& oracle);

// ---------------------------------------------------------------------------
// Lists of bit strings (for joint complexities and the density condition).

using ToyList = std::vector<BitString>;  // kept canonically sorted

ToyList toy_canonical(ToyList items);             // throws on empty
BitString toy_encode_list(const ToyList& items);  // gamma headers, bit level

struct SoiResidual {
  // joint - C(first) - C(second | first), both expansion orders
  std::optional<double> via_first;
  std::optional<double> via_second;
};
SoiResidual soi_residual(const BitString& x, const BitString& y, Oracle& oracle);

struct SoiScanReport {
  std::uint32_t max_len = 0;
  std::size_t pairs_total = 0;
  std::size_t pairs_present = 0;   // both residual directions defined
  std::size_t pairs_absent = 0;
  double max_abs_residual = 0.0;
};
SoiScanReport soi_scan(std::uint32_t max_len, Oracle& oracle);

// ---------------------------------------------------------------------------
// Universe sweeps: density and dominance.

struct ToyUniverse {
  std::uint32_t max_m = 0;
  std::uint32_t max_len = 0;
  std::vector<BitString> strings;  // all strings up to max_len, canonical
  std::vector<ToyList> lists;      // all multisets of size 1..max_m
};
ToyUniverse build_universe(std::uint32_t max_m, std::uint32_t max_len);

// Hardest-element complexity over the whole universe: for every list X,
// max_i C(encoding of X | x_i), exact within (L, S); absent propagates.
struct EmaxTable {
  std::uint32_t L = 0;
  std::uint64_t S = 0;
  std::vector<std::optional<std::uint32_t>> bits;  // aligned with universe.lists
  std::size_t absent = 0;
};
EmaxTable emax_over_universe(const ToyUniverse& u, std::uint32_t L, std::uint64_t S);

// A candidate distance: one value (or absent) per universe list.
struct ToyDistanceTable {
  std::string name;
  std::vector<std::optional<double>> values;  // aligned with universe.lists
};

ToyDistanceTable distance_from_emax(const EmaxTable& t, double shift,
                                    const std::string& name);
ToyDistanceTable code_length_distance(const ToyUniverse& u);
ToyDistanceTable hamming_style_distance(const ToyUniverse& u);

struct DensityReport {
  double sum = 0.0;
  bool pass = false;
  std::size_t terms = 0;
  std::size_t skipped_not_containing = 0;
  std::size_t skipped_nonpositive = 0;
  std::size_t skipped_absent = 0;
};
// sum over lists X in the universe with anchor in X and D(X) > 0 of 2^-D(X).
DensityReport density_check(const ToyUniverse& u, const ToyDistanceTable& d,
                            const BitString& anchor);

struct DominanceReport {
  std::optional<std::uint32_t> c;  // smallest shift making emax <= D + c
  bool pass = false;
  std::size_t compared = 0;
  std::size_t skipped = 0;
};
DominanceReport dominance_check(const ToyUniverse& u, const ToyDistanceTable& d,
                                const EmaxTable& emax_table,
                                std::uint32_t c_bound);

}  // namespace mid::toylab
