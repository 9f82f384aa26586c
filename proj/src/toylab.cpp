#include "mid/toylab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace mid::toylab {

// ---------------------------------------------------------------------------
// BitString

BitString BitString::parse(const std::string& zero_ones) {
  std::vector<std::uint8_t> bits;
  bits.reserve(zero_ones.size());
  for (char c : zero_ones) {
    if (c != '0' && c != '1')
      throw InputError("bit string must contain only 0 and 1");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitString(std::move(bits));
}

std::string BitString::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (std::uint8_t b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

BitString ProgramBits::to_bitstring() const {
  std::vector<std::uint8_t> bits(length);
  for (std::size_t i = 0; i < length; ++i)
    bits[i] = static_cast<std::uint8_t>(bit(i));
  return BitString(std::move(bits));
}

ProgramBits ProgramBits::from_bitstring(const BitString& b) {
  if (b.size() > 32) throw InputError("program longer than 32 bits");
  ProgramBits p;
  p.length = static_cast<std::uint8_t>(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    p.value = (p.value << 1) | static_cast<std::uint32_t>(b.bit(i));
  return p;
}

// ---------------------------------------------------------------------------
// Machine
//
// Opcode map ('*' marks operand fields):
//   0 ****           PRINT  n = field+1 in 1..16, emit next n bits, halt
//   10               HALT
//   110              COPY   emit the whole condition register
//   1110 ****        EMIT   n = field+1 in 1..16, emit next n bits, continue
//   11110 *** ***    SLICE  start s in 0..7, len = field+1 in 1..8; emit
//                           condition[s, s+len), invalid if out of range
//   11111 ****       REPEAT k = field+2 in 2..17, execute next instruction
//                           k times
// Every executed instruction costs 1 step plus 1 per emitted bit. The step
// budget is checked before each fetch and after each execution.

bool MachineRunner::read_field(unsigned& cur, unsigned width, std::uint32_t& out) {
  out = 0;
  for (unsigned i = 0; i < width; ++i) {
    int b = read_bit(cur);
    if (b < 0) return false;
    out = (out << 1) | static_cast<unsigned>(b);
  }
  return true;
}

MachineRunner::St MachineRunner::exec_one(unsigned& cur) {
  if (steps_ >= budget_) return St::diverge;
  int b0 = read_bit(cur);
  if (b0 < 0) return St::invalid;

  if (b0 == 0) {  // PRINT
    std::uint32_t f;
    if (!read_field(cur, 4, f)) return St::invalid;
    unsigned n = f + 1;
    for (unsigned i = 0; i < n; ++i) {
      int b = read_bit(cur);
      if (b < 0) return St::invalid;
      out_.push_back(static_cast<std::uint8_t>(b));
    }
    steps_ += 1 + n;
    if (steps_ > budget_) return St::diverge;
    return St::halted;
  }

  int b1 = read_bit(cur);
  if (b1 < 0) return St::invalid;
  if (b1 == 0) {  // HALT
    steps_ += 1;
    if (steps_ > budget_) return St::diverge;
    return St::halted;
  }

  int b2 = read_bit(cur);
  if (b2 < 0) return St::invalid;
  if (b2 == 0) {  // COPY
    steps_ += 1 + cond_->size();
    if (steps_ > budget_) return St::diverge;
    for (std::size_t i = 0; i < cond_->size(); ++i)
      out_.push_back(static_cast<std::uint8_t>(cond_->bit(i)));
    return St::cont;
  }

  int b3 = read_bit(cur);
  if (b3 < 0) return St::invalid;
  if (b3 == 0) {  // EMIT
    std::uint32_t f;
    if (!read_field(cur, 4, f)) return St::invalid;
    unsigned n = f + 1;
    steps_ += 1 + n;
    if (steps_ > budget_) return St::diverge;
    for (unsigned i = 0; i < n; ++i) {
      int b = read_bit(cur);
      if (b < 0) return St::invalid;
      out_.push_back(static_cast<std::uint8_t>(b));
    }
    return St::cont;
  }

  int b4 = read_bit(cur);
  if (b4 < 0) return St::invalid;
  if (b4 == 0) {  // SLICE
    std::uint32_t s, f;
    if (!read_field(cur, 3, s)) return St::invalid;
    if (!read_field(cur, 3, f)) return St::invalid;
    unsigned len = f + 1;
    if (s + len > cond_->size()) return St::invalid;
    steps_ += 1 + len;
    if (steps_ > budget_) return St::diverge;
    for (unsigned i = 0; i < len; ++i)
      out_.push_back(static_cast<std::uint8_t>(cond_->bit(s + i)));
    return St::cont;
  }

  // REPEAT: re-execute the following instruction k times by re-parsing it
  // from the saved cursor; the stream itself is consumed once.
  std::uint32_t f;
  if (!read_field(cur, 4, f)) return St::invalid;
  unsigned k = f + 2;
  unsigned inner_start = cur;
  unsigned inner_end = cur;
  for (unsigned i = 0; i < k; ++i) {
    cur = inner_start;
    St st = exec_one(cur);
    if (st != St::cont) return st;  // halt/invalid/diverge propagate as-is
    inner_end = cur;
  }
  cur = inner_end;
  return St::cont;
}

RunStatus MachineRunner::run(ProgramBits p, const BitString& condition,
                             std::uint64_t step_budget) {
  prog_ = p;
  cond_ = &condition;
  budget_ = step_budget;
  steps_ = 0;
  out_.clear();
  unsigned cur = 0;
  for (;;) {
    St st = exec_one(cur);
    if (st == St::cont) continue;
    if (st == St::halted)
      return cur == p.length ? RunStatus::halted : RunStatus::invalid;
    return st == St::invalid ? RunStatus::invalid : RunStatus::diverge;
  }
}

RunResult run_program(ProgramBits p, const BitString& condition,
                      std::uint64_t step_budget) {
  MachineRunner r;
  RunResult res;
  res.status = r.run(p, condition, step_budget);
  res.steps = r.steps();
  if (res.status == RunStatus::halted) {
    res.output = BitString(std::vector<std::uint8_t>(r.output().begin(),
                                                     r.output().end()));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Enumeration

void for_each_program(std::uint32_t L, const std::function<void(ProgramBits)>& fn,
                      std::uint32_t max_l) {
  if (L > max_l)
    throw BudgetError("enumeration budget exceeded: L=" + std::to_string(L) +
                      " > " + std::to_string(max_l));
  for (std::uint32_t len = 0; len <= L; ++len) {
    std::uint64_t count = 1ull << len;
    for (std::uint64_t v = 0; v < count; ++v) {
      ProgramBits p;
      p.value = static_cast<std::uint32_t>(v);
      p.length = static_cast<std::uint8_t>(len);
      fn(p);
    }
  }
}

std::vector<BitString> enumerate_programs(std::uint32_t L, std::uint32_t max_l) {
  std::vector<BitString> out;
  for_each_program(
      L, [&](ProgramBits p) { out.push_back(p.to_bitstring()); }, max_l);
  return out;
}

// ---------------------------------------------------------------------------
// Tables

CondTable build_table(const BitString& condition, std::uint32_t L, std::uint64_t S,
                      std::uint32_t max_l) {
  if (S > kMaxStepBudget)
    throw BudgetError("step budget exceeded: S=" + std::to_string(S) + " > " +
                      std::to_string(kMaxStepBudget));
  CondTable t;
  t.condition = condition;
  t.L = L;
  t.S = S;
  t.entries.reserve(1u << 17);
  MachineRunner runner;
  for_each_program(
      L,
      [&](ProgramBits p) {
        RunStatus st = runner.run(p, condition, S);
        if (st == RunStatus::diverge) {
          ++t.diverging_programs;
          return;
        }
        if (st == RunStatus::invalid) {
          ++t.invalid_programs;
          return;
        }
        ++t.halting_programs;
        std::uint64_t w = 1ull << (L - p.length);
        t.total_weight += w;
        const auto& out = runner.output();
        if (out.size() > kMaxRetainedOutput) return;  // tallied, not retained
        BitString key(std::vector<std::uint8_t>(out.begin(), out.end()));
        auto [it, fresh] = t.entries.try_emplace(std::move(key));
        if (fresh) it->second.min_program_bits = p.length;
        it->second.weight += w;
      },
      max_l);
  return t;
}

double kraft_sum(const CondTable& t) {
  return static_cast<double>(t.total_weight) * std::ldexp(1.0, -static_cast<int>(t.L));
}

Oracle::Oracle(std::uint32_t L, std::uint64_t S, std::size_t keep_tables)
    : L_(L), S_(S), keep_(std::max<std::size_t>(1, keep_tables)) {}

const CondTable& Oracle::table(const BitString& condition) {
  for (auto it = tables_.begin(); it != tables_.end(); ++it) {
    if (it->condition == condition) {
      tables_.splice(tables_.begin(), tables_, it);
      return tables_.front();
    }
  }
  tables_.push_front(build_table(condition, L_, S_));
  while (tables_.size() > keep_) tables_.pop_back();
  return tables_.front();
}

std::optional<std::uint32_t> Oracle::complexity(const BitString& target,
                                                const BitString& condition) {
  if (target.size() > kMaxRetainedOutput)
    throw InputError("target longer than the table retention cap");
  const CondTable& t = table(condition);
  auto it = t.entries.find(target);
  if (it == t.entries.end()) return std::nullopt;
  return it->second.min_program_bits;
}

double Oracle::apriori(const BitString& target, const BitString& condition) {
  if (target.size() > kMaxRetainedOutput)
    throw InputError("target longer than the table retention cap");
  const CondTable& t = table(condition);
  auto it = t.entries.find(target);
  if (it == t.entries.end()) return 0.0;
  return static_cast<double>(it->second.weight) *
         std::ldexp(1.0, -static_cast<int>(t.L));
}

std::optional<std::uint32_t> bounded_complexity(const BitString& target,
                                                const BitString& condition,
                                                std::uint32_t L, std::uint64_t S) {
  Oracle o(L, S, 1);
  return o.complexity(target, condition);
}

double apriori_probability(const BitString& target, const BitString& condition,
                           std::uint32_t L, std::uint64_t S) {
  Oracle o(L, S, 1);
  return o.apriori(target, condition);
}

// ---------------------------------------------------------------------------
// Structural checks

PrefixFreeReport prefix_free_check(const BitString& condition, std::uint32_t L,
                                   std::uint64_t S) {
  PrefixFreeReport rep;
  // halting program values per length
  std::vector<std::vector<std::uint32_t>> by_len(L + 1);
  MachineRunner runner;
  for_each_program(L, [&](ProgramBits p) {
    if (runner.run(p, condition, S) == RunStatus::halted)
      by_len[p.length].push_back(p.value);
  });
  for (auto& v : by_len) std::sort(v.begin(), v.end());
  rep.pass = true;
  for (std::uint32_t len = 0; len <= L; ++len) {
    for (std::uint32_t v : by_len[len]) {
      ++rep.halting;
      for (std::uint32_t shorter = 0; shorter < len; ++shorter) {
        std::uint32_t prefix = v >> (len - shorter);
        if (std::binary_search(by_len[shorter].begin(), by_len[shorter].end(),
                               prefix)) {
          ++rep.violations;
          rep.pass = false;
        }
      }
    }
  }
  return rep;
}

std::optional<double> coding_residual(const BitString& target, Oracle& oracle) {
  auto c = oracle.complexity(target, BitString{});
  if (!c) return std::nullopt;
  double q = oracle.apriori(target, BitString{});
  return static_cast<double>(*c) + std::log2(q);
}

CodingScanReport coding_scan(std::uint32_t max_len, Oracle& oracle) {
  CodingScanReport rep;
  rep.max_len = max_len;
  bool any = false;
  for (std::uint32_t len = 0; len <= max_len; ++len) {
    for (std::uint64_t v = 0; v < (1ull << len); ++v) {
      std::vector<std::uint8_t> bits(len);
      for (std::uint32_t i = 0; i < len; ++i)
        bits[i] = static_cast<std::uint8_t>((v >> (len - 1 - i)) & 1u);
      BitString s(std::move(bits));
      ++rep.strings_total;
      auto r = coding_residual(s, oracle);
      if (!r) continue;
      ++rep.strings_present;
      if (!any || *r > rep.max_residual) rep.max_residual = *r;
      if (!any || *r < rep.min_residual) rep.min_residual = *r;
      any = true;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Toy lists

ToyList toy_canonical(ToyList items) {
  if (items.empty()) throw InputError("empty list");
  std::sort(items.begin(), items.end());
  return items;
}

namespace {
void append_gamma(BitString& out, std::uint64_t v) {
  unsigned w = static_cast<unsigned>(std::bit_width(v));
  for (unsigned i = 1; i < w; ++i) out.push_back(0);
  for (unsigned i = w; i-- > 0;) out.push_back(static_cast<int>((v >> i) & 1u));
}
}  // namespace

BitString toy_encode_list(const ToyList& items) {
  if (items.empty()) throw InputError("empty list");
  BitString out;
  append_gamma(out, items.size());
  for (const BitString& e : items) {
    append_gamma(out, e.size() + 1);
    out.append(e);
  }
  return out;
}

SoiResidual soi_residual(const BitString& x, const BitString& y, Oracle& oracle) {
  BitString joint_target = toy_encode_list(toy_canonical({x, y}));
  auto joint = oracle.complexity(joint_target, BitString{});
  auto cx = oracle.complexity(x, BitString{});
  auto cy = oracle.complexity(y, BitString{});
  auto cy_given_x = oracle.complexity(y, x);
  auto cx_given_y = oracle.complexity(x, y);
  SoiResidual r;
  if (joint && cx && cy_given_x)
    r.via_first = static_cast<double>(*joint) - static_cast<double>(*cx) -
                  static_cast<double>(*cy_given_x);
  if (joint && cy && cx_given_y)
    r.via_second = static_cast<double>(*joint) - static_cast<double>(*cy) -
                   static_cast<double>(*cx_given_y);
  return r;
}

SoiScanReport soi_scan(std::uint32_t max_len, Oracle& oracle) {
  // One exhaustive table per condition (the expensive part), then pure
  // arithmetic over the collected values.
  SoiScanReport rep;
  rep.max_len = max_len;
  std::vector<BitString> strings;
  for (std::uint32_t len = 0; len <= max_len; ++len) {
    for (std::uint64_t v = 0; v < (1ull << len); ++v) {
      std::vector<std::uint8_t> bits(len);
      for (std::uint32_t i = 0; i < len; ++i)
        bits[i] = static_cast<std::uint8_t>((v >> (len - 1 - i)) & 1u);
      strings.emplace_back(std::move(bits));
    }
  }
  const std::size_t n = strings.size();

  std::vector<std::optional<std::uint32_t>> single(n);
  std::vector<std::vector<std::optional<std::uint32_t>>> joint(
      n, std::vector<std::optional<std::uint32_t>>(n));
  std::vector<std::vector<std::optional<std::uint32_t>>> cond(
      n, std::vector<std::optional<std::uint32_t>>(n));  // cond[x][y] = C(y|x)

  {
    const CondTable& t = oracle.table(BitString{});
    auto find = [&](const BitString& key) -> std::optional<std::uint32_t> {
      auto it = t.entries.find(key);
      if (it == t.entries.end()) return std::nullopt;
      return it->second.min_program_bits;
    };
    for (std::size_t i = 0; i < n; ++i) single[i] = find(strings[i]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        joint[i][j] = find(toy_encode_list(toy_canonical({strings[i], strings[j]})));
  }
  // A pair only contributes when its joint encoding has a witness, so skip
  // the (expensive) condition tables of strings outside any such pair.
  std::vector<char> needed(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (joint[i][j]) needed[i] = needed[j] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!needed[i]) continue;
    CondTable t = build_table(strings[i], oracle.L(), oracle.S());
    for (std::size_t j = 0; j < n; ++j) {
      auto it = t.entries.find(strings[j]);
      if (it != t.entries.end()) cond[i][j] = it->second.min_program_bits;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      ++rep.pairs_total;
      bool via_first = joint[i][j] && single[i] && cond[i][j];
      bool via_second = joint[i][j] && single[j] && cond[j][i];
      if (via_first && via_second) {
        ++rep.pairs_present;
        double jb = static_cast<double>(*joint[i][j]);
        double r1 = jb - static_cast<double>(*single[i]) -
                    static_cast<double>(*cond[i][j]);
        double r2 = jb - static_cast<double>(*single[j]) -
                    static_cast<double>(*cond[j][i]);
        rep.max_abs_residual =
            std::max({rep.max_abs_residual, std::abs(r1), std::abs(r2)});
      } else {
        ++rep.pairs_absent;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Universe sweeps

ToyUniverse build_universe(std::uint32_t max_m, std::uint32_t max_len) {
  if (max_len > 16) throw BudgetError("universe string length capped at 16");
  if (max_m > 4) throw BudgetError("universe list size capped at 4");
  ToyUniverse u;
  u.max_m = max_m;
  u.max_len = max_len;
  for (std::uint32_t len = 0; len <= max_len; ++len) {
    for (std::uint64_t v = 0; v < (1ull << len); ++v) {
      std::vector<std::uint8_t> bits(len);
      for (std::uint32_t i = 0; i < len; ++i)
        bits[i] = static_cast<std::uint8_t>((v >> (len - 1 - i)) & 1u);
      u.strings.emplace_back(std::move(bits));
    }
  }
  // multisets as non-decreasing index tuples
  std::vector<std::uint32_t> idx;
  const std::uint32_t n = static_cast<std::uint32_t>(u.strings.size());
  for (std::uint32_t m = 1; m <= max_m; ++m) {
    idx.assign(m, 0);
    for (;;) {
      ToyList lst;
      lst.reserve(m);
      for (std::uint32_t i : idx) lst.push_back(u.strings[i]);
      u.lists.push_back(std::move(lst));
      // next non-decreasing tuple
      std::uint32_t pos = m;
      while (pos > 0 && idx[pos - 1] == n - 1) --pos;
      if (pos == 0) break;
      std::uint32_t v = ++idx[pos - 1];
      for (std::uint32_t k = pos; k < m; ++k) idx[k] = v;
    }
  }
  return u;
}

EmaxTable emax_over_universe(const ToyUniverse& u, std::uint32_t L, std::uint64_t S) {
  EmaxTable t;
  t.L = L;
  t.S = S;
  t.bits.assign(u.lists.size(), std::nullopt);

  std::vector<BitString> encodings;
  encodings.reserve(u.lists.size());
  for (const auto& lst : u.lists) encodings.push_back(toy_encode_list(lst));

  // lists grouped by distinct member string
  std::unordered_map<BitString, std::vector<std::size_t>, BitStringHash> by_member;
  for (std::size_t li = 0; li < u.lists.size(); ++li) {
    const ToyList& lst = u.lists[li];
    for (std::size_t k = 0; k < lst.size(); ++k) {
      if (k > 0 && lst[k] == lst[k - 1]) continue;
      by_member[lst[k]].push_back(li);
    }
  }

  // one exhaustive table per condition; max over members, absent propagates
  std::vector<std::uint32_t> acc(u.lists.size(), 0);
  std::vector<std::uint32_t> member_hits(u.lists.size(), 0);
  std::vector<std::uint32_t> member_counts(u.lists.size(), 0);
  for (std::size_t li = 0; li < u.lists.size(); ++li) {
    const ToyList& lst = u.lists[li];
    std::uint32_t distinct = 0;
    for (std::size_t k = 0; k < lst.size(); ++k)
      if (k == 0 || lst[k] != lst[k - 1]) ++distinct;
    member_counts[li] = distinct;
  }

  for (const BitString& s : u.strings) {
    auto group = by_member.find(s);
    if (group == by_member.end()) continue;
    CondTable table = build_table(s, L, S);
    for (std::size_t li : group->second) {
      auto it = table.entries.find(encodings[li]);
      if (it == table.entries.end()) continue;  // absent under this condition
      ++member_hits[li];
      acc[li] = std::max(acc[li], it->second.min_program_bits);
    }
  }
  for (std::size_t li = 0; li < u.lists.size(); ++li) {
    if (member_hits[li] == member_counts[li]) {
      t.bits[li] = acc[li];
    } else {
      ++t.absent;
    }
  }
  return t;
}

ToyDistanceTable distance_from_emax(const EmaxTable& t, double shift,
                                    const std::string& name) {
  ToyDistanceTable d;
  d.name = name;
  d.values.reserve(t.bits.size());
  for (const auto& b : t.bits) {
    if (b)
      d.values.emplace_back(static_cast<double>(*b) + shift);
    else
      d.values.emplace_back(std::nullopt);
  }
  return d;
}

ToyDistanceTable code_length_distance(const ToyUniverse& u) {
  ToyDistanceTable d;
  d.name = "code-length";
  d.values.reserve(u.lists.size());
  for (const auto& lst : u.lists)
    d.values.emplace_back(static_cast<double>(toy_encode_list(lst).size()));
  return d;
}

namespace {
double hamming_bits(const BitString& a, const BitString& b) {
  const BitString& s = a.size() <= b.size() ? a : b;
  const BitString& t = a.size() <= b.size() ? b : a;
  double d = static_cast<double>(t.size() - s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.bit(i) != t.bit(i)) d += 1.0;
  return d;
}
}  // namespace

ToyDistanceTable hamming_style_distance(const ToyUniverse& u) {
  // 4m + 2 * total length + worst pairwise Hamming gap. The first two terms
  // pay for the Kraft budget (sum over all lists of 2^-D is well under 1);
  // the Hamming term only shrinks the sum further.
  ToyDistanceTable d;
  d.name = "hamming-style";
  d.values.reserve(u.lists.size());
  for (const auto& lst : u.lists) {
    double v = 4.0 * static_cast<double>(lst.size());
    for (const auto& e : lst) v += 2.0 * static_cast<double>(e.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < lst.size(); ++i)
      for (std::size_t j = i + 1; j < lst.size(); ++j)
        worst = std::max(worst, hamming_bits(lst[i], lst[j]));
    d.values.emplace_back(v + worst);
  }
  return d;
}

DensityReport density_check(const ToyUniverse& u, const ToyDistanceTable& d,
                            const BitString& anchor) {
  DensityReport rep;
  for (std::size_t li = 0; li < u.lists.size(); ++li) {
    const ToyList& lst = u.lists[li];
    bool contains = std::binary_search(lst.begin(), lst.end(), anchor);
    if (!contains) {
      ++rep.skipped_not_containing;
      continue;
    }
    if (!d.values[li]) {
      ++rep.skipped_absent;
      continue;
    }
    double v = *d.values[li];
    if (v <= 0.0) {
      ++rep.skipped_nonpositive;
      continue;
    }
    rep.sum += std::exp2(-v);
    ++rep.terms;
  }
  rep.pass = rep.sum <= 1.0;
  return rep;
}

DominanceReport dominance_check(const ToyUniverse& u, const ToyDistanceTable& d,
                                const EmaxTable& emax_table,
                                std::uint32_t c_bound) {
  DominanceReport rep;
  double worst = 0.0;
  for (std::size_t li = 0; li < u.lists.size(); ++li) {
    if (!emax_table.bits[li] || !d.values[li]) {
      ++rep.skipped;
      continue;
    }
    ++rep.compared;
    double gap = static_cast<double>(*emax_table.bits[li]) - *d.values[li];
    worst = std::max(worst, gap);
  }
  if (rep.compared > 0) {
    rep.c = static_cast<std::uint32_t>(std::ceil(worst));
    rep.pass = *rep.c <= c_bound;
  }
  return rep;
}

}  // namespace mid::toylab
