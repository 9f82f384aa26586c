#include "mid/harness.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace mid::harness {

double slack_allowance(double max_bits) {
  return 64.0 + 4.0 * std::log2(std::max(2.0, max_bits));
}

// ---------------------------------------------------------------------------
// ListSampler

ListSampler::ListSampler(std::uint64_t seed, std::size_t min_bytes,
                         std::size_t max_bytes)
    : seed_(seed), rng_(seed), min_(min_bytes), max_(max_bytes) {
  if (min_ == 0 || max_ < min_) throw InputError("bad sampler length bounds");
  for (int i = 0; i < 6; ++i) pool_.push_back(rng_.bytes(2048 + rng_.below(6144)));
}

Bytes ListSampler::random_element(std::size_t len) { return rng_.bytes(len); }

Bytes ListSampler::text_element(std::size_t len) {
  static const char* kWords[] = {
      "list",   "of",     "strings", "carries", "more",    "information",
      "than",   "any",    "single",  "member",  "distance", "between",
      "finite",  "multisets", "is",  "measured", "in",      "bits",
  };
  constexpr std::size_t kWordCount = sizeof(kWords) / sizeof(kWords[0]);
  std::string text;
  text.reserve(len + 16);
  while (text.size() < len) {
    text += kWords[rng_.below(kWordCount)];
    text.push_back(rng_.below(12) == 0 ? '\n' : ' ');
  }
  text.resize(len);
  return bytes_of(text);
}

Bytes ListSampler::structured_element(std::size_t len) {
  Bytes out;
  out.reserve(len + 16);
  std::uint64_t key = rng_.next();
  std::uint32_t id = static_cast<std::uint32_t>(rng_.below(1000));
  while (out.size() < len) {
    for (int i = 0; i < 8; ++i)
      out.push_back(static_cast<std::uint8_t>(key >> (8 * i)));
    for (int i = 0; i < 4; ++i)
      out.push_back(static_cast<std::uint8_t>(id >> (8 * i)));
    std::uint32_t noise = static_cast<std::uint32_t>(rng_.next());
    for (int i = 0; i < 4; ++i)
      out.push_back(static_cast<std::uint8_t>(noise >> (8 * i)));
    ++id;
  }
  out.resize(len);
  return out;
}

Bytes ListSampler::related_element(std::size_t len) {
  Bytes out;
  out.reserve(len + 256);
  while (out.size() < len) {
    const Bytes& frag = pool_[rng_.below(pool_.size())];
    std::size_t off = rng_.below(frag.size() / 2 + 1);
    std::size_t take = std::min(frag.size() - off, 512 + rng_.below(2048));
    out.insert(out.end(), frag.begin() + off, frag.begin() + off + take);
  }
  out.resize(len);
  return out;
}

Bytes ListSampler::element() {
  std::size_t len = min_ + rng_.below(max_ - min_ + 1);
  switch (counter_++ % 4) {
    case 0: return random_element(len);
    case 1: return text_element(len);
    case 2: return structured_element(len);
    default: return related_element(len);
  }
}

std::vector<Bytes> ListSampler::elements(std::size_t m) {
  std::vector<Bytes> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(element());
  return out;
}

StringList ListSampler::list(std::size_t m) {
  return StringList::canonicalize(elements(m));
}

StringList ListSampler::all_equal(std::size_t m) {
  Bytes e = element();
  std::vector<Bytes> items(m, e);
  return StringList::canonicalize(std::move(items));
}

// ---------------------------------------------------------------------------
// report plumbing

namespace {

std::string list_digest(const StringList& x) {
  return digest_hex(encode_list(x));
}

void add_trial(ViolationReport& rep, TrialRecord record) {
  rep.worst_slack = rep.records.empty()
                        ? record.slack
                        : std::max(rep.worst_slack, record.slack);
  rep.records.push_back(std::move(record));
}

void finalize(ViolationReport& rep) {
  rep.trials = rep.records.size();
  rep.pass = rep.worst_slack <= rep.allowance;
}

}  // namespace

// ---------------------------------------------------------------------------
// metric axioms

MetricReports metric_check(ListSampler& sampler, ComplexitySource& src,
                           std::uint64_t trials) {
  if (trials < 1) throw InputError("trials must be at least 1");
  MetricReports out;
  out.positive_definiteness.property = "positive-definiteness";
  out.symmetry.property = "permutation-symmetry";
  out.triangle.property = "triangle";
  for (ViolationReport* r :
       {&out.positive_definiteness, &out.symmetry, &out.triangle}) {
    r->seed = sampler.seed();
    r->source = src.id();
    r->allowance = 0.0;
  }

  double triangle_max_bits = 2.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    {  // positive definiteness: all-equal about zero, mixed strictly above
      StringList eq = sampler.all_equal(2 + t % 3);
      double element_bits = compressed_size(eq.at(0), src).bits;
      double d_eq = emax(eq, src).value;
      StringList mixed = sampler.list(2 + t % 3);
      double d_mix = emax(mixed, src).value;
      TrialRecord rec;
      rec.index = t;
      rec.inputs_digest = list_digest(eq) + ":" + list_digest(mixed);
      rec.values = {{"all_equal_bits", d_eq},
                    {"element_bits", element_bits},
                    {"mixed_bits", d_mix}};
      rec.slack = std::max(d_eq - 0.05 * element_bits,
                           d_mix > 0.0 ? -d_mix : 1.0);
      add_trial(out.positive_definiteness, rec);
    }
    {  // permutation symmetry: canonicalization makes the value exact
      std::vector<Bytes> elems = sampler.elements(2 + t % 4);
      std::vector<Bytes> shuffled = elems;
      for (std::size_t i = shuffled.size() - 1; i > 0; --i)
        std::swap(shuffled[i], shuffled[sampler.rng().below(i + 1)]);
      double a = emax(StringList::canonicalize(elems), src).value;
      double b = emax(StringList::canonicalize(shuffled), src).value;
      TrialRecord rec;
      rec.index = t;
      rec.inputs_digest = list_digest(StringList::canonicalize(elems));
      rec.values = {{"forward_bits", a}, {"shuffled_bits", b}};
      rec.slack = std::fabs(a - b);
      add_trial(out.symmetry, rec);
    }
    {  // triangle over merged lists
      StringList x = sampler.list(1 + t % 3);
      StringList y = sampler.list(1 + (t + 1) % 3);
      StringList z = sampler.list(1 + (t + 2) % 3);
      DistanceReport xy = emax(StringList::merged(x, y), src);
      DistanceReport xz = emax(StringList::merged(x, z), src);
      DistanceReport zy = emax(StringList::merged(z, y), src);
      triangle_max_bits = std::max(
          {triangle_max_bits, xy.list_bits, xz.list_bits, zy.list_bits});
      TrialRecord rec;
      rec.index = t;
      rec.inputs_digest =
          list_digest(x) + ":" + list_digest(y) + ":" + list_digest(z);
      rec.values = {{"xy_bits", xy.value},
                    {"xz_bits", xz.value},
                    {"zy_bits", zy.value}};
      rec.slack = xy.value - xz.value - zy.value;
      add_trial(out.triangle, rec);
    }
  }
  out.triangle.allowance = slack_allowance(triangle_max_bits);
  finalize(out.positive_definiteness);
  finalize(out.symmetry);
  finalize(out.triangle);
  return out;
}

// ---------------------------------------------------------------------------
// additivity

AdditivityReport additivity_demo(std::size_t n_bits, ComplexitySource& src,
                                 std::uint64_t seed) {
  if (n_bits < 1000 || n_bits % 8 != 0)
    throw InputError("n must be at least 1000 bits and divisible by 8");
  AdditivityReport rep;
  rep.seed = seed;
  rep.n_bits = n_bits;
  rep.source = src.id();
  DetRng rng(seed);
  const std::size_t nb = n_bits / 8;

  {  // x = y: merging costs barely more than one copy
    Bytes x = rng.bytes(nb);
    StringList sub = StringList::canonicalize({Bytes{}, x});
    rep.sub_x = emax(sub, src).value;
    rep.sub_y = rep.sub_x;
    rep.sub_xy = emax(StringList::merged(sub, sub), src).value;
    rep.sub_strict = rep.sub_xy < rep.sub_x + rep.sub_y;
    rep.sub_ok = rep.sub_xy <= 0.6 * (rep.sub_x + rep.sub_y);
  }
  {  // independent x, y: duplicated singletons are cheap alone, dear merged
    Bytes x = rng.bytes(nb);
    Bytes y = rng.bytes(nb);
    StringList sx = StringList::canonicalize({x, x});
    StringList sy = StringList::canonicalize({y, y});
    rep.super_x = emax(sx, src).value;
    rep.super_y = emax(sy, src).value;
    rep.super_xy = emax(StringList::merged(sx, sy), src).value;
    rep.super_strict = rep.super_xy > rep.super_x + rep.super_y;
    rep.super_ok =
        rep.super_xy >= rep.super_x + rep.super_y + 0.5 * static_cast<double>(n_bits);
  }
  rep.pass = rep.sub_strict && rep.sub_ok && rep.super_strict && rep.super_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// normalization counterexample

NormalizationReport normalization_violation_demo(std::size_t n_bits,
                                                 Scheme scheme,
                                                 ComplexitySource& src,
                                                 std::uint64_t seed) {
  if (!scheme_is_normalized(scheme))
    throw InputError("scheme must be one of the normalized list schemes");
  if (n_bits < 10000 || n_bits % 80 != 0)
    throw InputError("n must be at least 10000 bits and divisible by 80");
  NormalizationReport rep;
  rep.seed = seed;
  rep.n_bits = n_bits;
  rep.scheme = scheme;
  rep.set_variant = scheme == Scheme::norm_set_max_sublist ||
                    scheme == Scheme::norm_set_drop_maximizer;
  rep.source = src.id();

  DetRng rng(seed);
  const std::size_t nb = n_bits / 8;
  Bytes x = rng.bytes(nb);
  Bytes y = rng.bytes(nb * 9 / 10);
  y.resize(nb, 0);  // zero tail: C(y) is about 0.9 n while |y| = n

  StringList lx = StringList::canonicalize({x});
  StringList ly = StringList::canonicalize({y});
  std::vector<Bytes> z_items;
  if (rep.set_variant) {
    Bytes y1 = y;
    y1[0] ^= 0x80;  // flip bit 1
    Bytes y2 = y;
    y2[0] ^= 0x40;  // flip bit 2
    z_items = {y1, y2};
  } else {
    z_items = {y, y};
  }
  StringList lz = StringList::canonicalize(std::move(z_items));

  rep.exy = normalized_list(StringList::merged(lx, ly), scheme, src).value;
  rep.exz = normalized_list(StringList::merged(lx, lz), scheme, src).value;
  rep.ezy = normalized_list(StringList::merged(lz, ly), scheme, src).value;
  rep.violation = rep.exy > rep.exz + rep.ezy;
  return rep;
}

// ---------------------------------------------------------------------------
// minimal overlap

MinimalOverlapReport minimal_overlap_demo(std::size_t n_bits,
                                          ComplexitySource& src,
                                          std::uint64_t seed) {
  if (n_bits < 1000 || n_bits % 8 != 0)
    throw InputError("n must be at least 1000 bits and divisible by 8");
  MinimalOverlapReport rep;
  rep.seed = seed;
  rep.n_bits = n_bits;
  rep.source = src.id();

  DetRng rng(seed);
  const std::size_t nb = n_bits / 8;
  Bytes y = rng.bytes(nb);
  Bytes z = rng.bytes(nb);
  Bytes x(nb);
  for (std::size_t i = 0; i < nb; ++i) x[i] = y[i] ^ z[i];

  rep.mi_z_y = mutual_information(z, y, src).bits;
  rep.mi_z_x = mutual_information(z, x, src).bits;
  rep.mi_y_x = mutual_information(y, x, src).bits;
  rep.cond_x_given_y = conditional_size(x, y, src).bits;
  Bytes pair_blob = encode_list(StringList::canonicalize({y, z}));
  rep.cond_x_given_pair = conditional_size(x, pair_blob, src).bits;

  bool identity = true;
  for (std::size_t i = 0; i < nb; ++i)
    if ((y[i] ^ z[i]) != x[i]) identity = false;
  rep.xor_identity = identity;

  const double n = static_cast<double>(n_bits);
  rep.pass = rep.mi_z_y <= 0.1 * n && rep.mi_z_x <= 0.1 * n &&
             rep.mi_y_x <= 0.1 * n && rep.cond_x_given_y >= 0.5 * n &&
             rep.cond_x_given_y <= 1.5 * n && rep.xor_identity;
  return rep;
}

// ---------------------------------------------------------------------------
// inequality chain

namespace {

TrialRecord chain_trial(const StringList& x, ComplexitySource& src,
                        double& max_bits) {
  DistanceReport lo = emin(x, src);
  DistanceReport hi = emax(x, src);
  DistanceReport sum = sum_bound(x, src);
  max_bits = std::max({max_bits, hi.list_bits, sum.value});
  TrialRecord rec;
  rec.inputs_digest = list_digest(x);
  rec.values = {{"emin_bits", lo.value},
                {"emax_bits", hi.value},
                {"sum_bound_bits", sum.value}};
  // left leg is exact, right leg consumes the allowance
  rec.slack = std::max(lo.value - hi.value, hi.value - sum.value);
  return rec;
}

}  // namespace

ViolationReport inequality_chain_check(const StringList& x,
                                       ComplexitySource& src) {
  ViolationReport rep;
  rep.property = "inequality-chain";
  rep.source = src.id();
  double max_bits = 2.0;
  TrialRecord rec = chain_trial(x, src, max_bits);
  rep.allowance = slack_allowance(max_bits);
  add_trial(rep, std::move(rec));
  finalize(rep);
  return rep;
}

ViolationReport chain_suite(ListSampler& sampler, ComplexitySource& src,
                            std::uint64_t trials) {
  if (trials < 1) throw InputError("trials must be at least 1");
  ViolationReport rep;
  rep.property = "inequality-chain";
  rep.seed = sampler.seed();
  rep.source = src.id();
  double max_bits = 2.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    TrialRecord rec = chain_trial(sampler.list(3 + t % 3), src, max_bits);
    rec.index = t;
    add_trial(rep, std::move(rec));
  }
  rep.allowance = slack_allowance(max_bits);
  finalize(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json record_json(const TrialRecord& t) {
  nlohmann::json j;
  j["index"] = t.index;
  j["inputs_digest"] = t.inputs_digest;
  j["slack"] = t.slack;
  nlohmann::json vals;
  for (const auto& [name, v] : t.values) vals[name] = v;
  j["values"] = vals;
  return j;
}

nlohmann::json violation_json(const ViolationReport& r) {
  nlohmann::json j;
  j["property"] = r.property;
  j["trials"] = r.trials;
  j["worst_slack"] = r.worst_slack;
  j["allowance"] = r.allowance;
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  j["source"] = r.source;
  nlohmann::json recs = nlohmann::json::array();
  for (const TrialRecord& t : r.records) recs.push_back(record_json(t));
  j["records"] = recs;
  return j;
}

}  // namespace

std::string to_json(const ViolationReport& r) { return violation_json(r).dump(2); }

std::string to_json(const MetricReports& r) {
  nlohmann::json j;
  j["positive_definiteness"] = violation_json(r.positive_definiteness);
  j["symmetry"] = violation_json(r.symmetry);
  j["triangle"] = violation_json(r.triangle);
  j["pass"] = r.pass();
  return j.dump(2);
}

std::string to_json(const AdditivityReport& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["n_bits"] = r.n_bits;
  j["source"] = r.source;
  j["shared"] = {{"xy_bits", r.sub_xy},
                 {"x_bits", r.sub_x},
                 {"y_bits", r.sub_y},
                 {"strictly_below_sum", r.sub_strict},
                 {"below_sixty_percent", r.sub_ok}};
  j["independent"] = {{"xy_bits", r.super_xy},
                      {"x_bits", r.super_x},
                      {"y_bits", r.super_y},
                      {"strictly_above_sum", r.super_strict},
                      {"above_sum_plus_half_n", r.super_ok}};
  j["pass"] = r.pass;
  return j.dump(2);
}

std::string to_json(const NormalizationReport& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["n_bits"] = r.n_bits;
  j["scheme"] = scheme_name(r.scheme);
  j["set_variant"] = r.set_variant;
  j["source"] = r.source;
  j["exy"] = r.exy;
  j["exz"] = r.exz;
  j["ezy"] = r.ezy;
  j["violation"] = r.violation;
  return j.dump(2);
}

std::string to_json(const MinimalOverlapReport& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["n_bits"] = r.n_bits;
  j["source"] = r.source;
  j["mi_z_y_bits"] = r.mi_z_y;
  j["mi_z_x_bits"] = r.mi_z_x;
  j["mi_y_x_bits"] = r.mi_y_x;
  j["cond_x_given_y_bits"] = r.cond_x_given_y;
  j["cond_x_given_pair_bits"] = r.cond_x_given_pair;
  j["xor_identity"] = r.xor_identity;
  j["pass"] = r.pass;
  return j.dump(2);
}

}  // namespace mid::harness
