#include "mid/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "mid/compressor.hpp"
#include "mid/errors.hpp"

namespace mid {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::emax: return "emax";
    case Scheme::emin: return "emin";
    case Scheme::sum_bound: return "sum-bound";
    case Scheme::ncd: return "ncd";
    case Scheme::e1: return "e1";
    case Scheme::norm_max_sublist: return "norm-max-sublist";
    case Scheme::norm_drop_maximizer: return "norm-drop-maximizer";
    case Scheme::norm_set_max_sublist: return "norm-set-max-sublist";
    case Scheme::norm_set_drop_maximizer: return "norm-set-drop-maximizer";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::emax, Scheme::emin, Scheme::sum_bound, Scheme::ncd,
                   Scheme::e1, Scheme::norm_max_sublist,
                   Scheme::norm_drop_maximizer, Scheme::norm_set_max_sublist,
                   Scheme::norm_set_drop_maximizer}) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

bool scheme_is_normalized(Scheme s) {
  switch (s) {
    case Scheme::ncd:
    case Scheme::e1:
    case Scheme::norm_max_sublist:
    case Scheme::norm_drop_maximizer:
    case Scheme::norm_set_max_sublist:
    case Scheme::norm_set_drop_maximizer:
      return true;
    default:
      return false;
  }
}

namespace {

// max_i / min_i over clamp(C(enc(X)) - C(x_i), 0); shared by emax and emin.
DistanceReport extremal(const StringList& x, ComplexitySource& src, bool want_max) {
  DistanceReport rep;
  rep.scheme = want_max ? Scheme::emax : Scheme::emin;
  rep.source = src.id();
  rep.list_bits = src.size_bits(encode_list(x));
  double best = 0.0;
  std::size_t best_i = 0;
  bool first = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double ci = src.size_bits(x.at(i));
    double cond = std::max(0.0, rep.list_bits - ci);
    rep.per_element.emplace_back(i, cond);
    bool better = first || (want_max ? cond > best : cond < best);
    if (better) {
      best = cond;
      best_i = i;
      first = false;
    }
  }
  rep.value = best;
  rep.numerator_bits = best;
  rep.maximizer_index = best_i;
  return rep;
}

double pair_emax_bits(const Bytes& a, const Bytes& b, ComplexitySource& src) {
  double ca = src.size_bits(a);
  double cb = src.size_bits(b);
  double cab = src.size_bits(canonical_pair_blob(a, b));
  return std::max(0.0, cab - std::min(ca, cb));
}

}  // namespace

DistanceReport emax(const StringList& x, ComplexitySource& src) {
  return extremal(x, src, true);
}

DistanceReport emin(const StringList& x, ComplexitySource& src) {
  return extremal(x, src, false);
}

DistanceReport sum_bound(const StringList& x, ComplexitySource& src) {
  if (x.size() < 2)
    throw DomainError("sum bound requires at least two elements");
  DistanceReport rep;
  rep.scheme = Scheme::sum_bound;
  rep.source = src.id();
  double best = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k == i) continue;
      total += pair_emax_bits(x.at(i), x.at(k), src);
    }
    rep.per_element.emplace_back(i, total);
    if (i == 0 || total < best) {
      best = total;
      best_i = i;
    }
  }
  rep.value = best;
  rep.numerator_bits = best;
  rep.maximizer_index = best_i;
  return rep;
}

DistanceReport ncd_pair(const Bytes& x, const Bytes& y, ComplexitySource& src) {
  double cx = src.size_bits(x);
  double cy = src.size_bits(y);
  double cxy = src.size_bits(canonical_pair_blob(x, y));
  DistanceReport rep;
  rep.scheme = Scheme::ncd;
  rep.source = src.id();
  rep.list_bits = cxy;
  rep.numerator_bits = std::max(0.0, cxy - std::min(cx, cy));
  rep.denominator_bits = std::max(cx, cy);
  rep.per_element.emplace_back(0, cx);
  rep.per_element.emplace_back(1, cy);
  if (rep.denominator_bits <= 0.0) throw DomainError("degenerate pair");
  rep.value = rep.numerator_bits / rep.denominator_bits;
  return rep;
}

DistanceReport e1_pair(const Bytes& x, const Bytes& y, ComplexitySource& src) {
  double cx = src.size_bits(x);
  double cy = src.size_bits(y);
  double cxy = src.size_bits(canonical_pair_blob(x, y));
  DistanceReport rep;
  rep.scheme = Scheme::e1;
  rep.source = src.id();
  rep.list_bits = cxy;
  rep.numerator_bits = std::max(0.0, cxy - std::min(cx, cy));
  rep.denominator_bits = cxy;
  rep.per_element.emplace_back(0, cx);
  rep.per_element.emplace_back(1, cy);
  if (rep.denominator_bits <= 0.0) throw DomainError("degenerate pair");
  rep.value = rep.numerator_bits / rep.denominator_bits;
  return rep;
}

DistanceReport normalized_list(const StringList& x, Scheme scheme,
                               ComplexitySource& src) {
  if (scheme != Scheme::norm_max_sublist && scheme != Scheme::norm_drop_maximizer &&
      scheme != Scheme::norm_set_max_sublist &&
      scheme != Scheme::norm_set_drop_maximizer)
    throw InputError("not a list normalization scheme: " + scheme_name(scheme));
  if (x.size() < 2)
    throw DomainError("normalization undefined for singletons");

  DistanceReport rep = emax(x, src);
  rep.scheme = scheme;
  const bool set_view = scheme == Scheme::norm_set_max_sublist ||
                        scheme == Scheme::norm_set_drop_maximizer;
  const bool drop_max = scheme == Scheme::norm_drop_maximizer ||
                        scheme == Scheme::norm_set_drop_maximizer;

  auto sublist_bits = [&](std::size_t drop) {
    StringList sub = x.without(drop);
    if (set_view) sub = sub.deduplicated();
    return src.size_bits(encode_list(sub));
  };

  double den = 0.0;
  if (drop_max) {
    den = sublist_bits(rep.maximizer_index);
  } else {
    for (std::size_t i = 0; i < x.size(); ++i)
      den = std::max(den, sublist_bits(i));
  }
  if (den <= 0.0) throw DomainError("zero denominator in normalization");
  rep.denominator_bits = den;
  rep.value = rep.numerator_bits / den;
  return rep;
}

ComplexityEstimate mutual_information(const Bytes& x, const Bytes& y,
                                      ComplexitySource& src) {
  double cx = src.size_bits(x);
  double cx_given_y = conditional_size(x, y, src).bits;
  ComplexityEstimate e;
  e.bits = std::max(0.0, cx - cx_given_y);
  e.source = src.id();
  e.mode = EstimateMode::conditional_via_soi;
  return e;
}

std::string DistanceMatrix::to_csv() const {
  std::string out = "label";
  for (const auto& l : labels) {
    out += ',';
    out += l;
  }
  out += '\n';
  char buf[64];
  for (std::size_t i = 0; i < dim(); ++i) {
    out += labels[i];
    for (std::size_t j = 0; j < dim(); ++j) {
      out += ',';
      auto res = std::to_chars(buf, buf + sizeof(buf), at(i, j));
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix distance_matrix(const std::vector<NamedBlob>& corpus,
                               Scheme scheme, ComplexitySource& src, int jobs) {
  if (scheme != Scheme::ncd && scheme != Scheme::e1)
    throw InputError("matrix scheme must be ncd or e1");
  if (corpus.empty()) throw InputError("empty corpus");
  const std::size_t n = corpus.size();

  DistanceMatrix m;
  m.scheme = scheme;
  m.source = src.id();
  for (const auto& b : corpus) m.labels.push_back(b.label);
  m.entries.assign(n * n, 0.0);

  // upper triangle incl. diagonal, row-major
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) cells.emplace_back(i, j);

  auto compute = [&](const std::pair<std::size_t, std::size_t>& c) {
    const auto& a = corpus[c.first];
    const auto& b = corpus[c.second];
    try {
      DistanceReport rep = scheme == Scheme::ncd
                               ? ncd_pair(a.data, b.data, src)
                               : e1_pair(a.data, b.data, src);
      return rep.value;
    } catch (Error& e) {
      throw DomainError("pair (" + a.label + ", " + b.label + "): " + e.what());
    }
  };

  if (jobs <= 1) {
    for (const auto& c : cells)
      m.entries[c.first * n + c.second] = compute(c);
  } else {
    // Pre-warm per-element sizes so worker threads mostly read the cache.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (;;) {
            std::size_t k = next.fetch_add(1);
            if (k >= cells.size()) break;
            m.entries[cells[k].first * n + cells[k].second] = compute(cells[k]);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (std::size_t i = 0; i < n; ++i) {
    m.max_diagonal = std::max(m.max_diagonal, std::abs(m.at(i, i)));
    for (std::size_t j = i + 1; j < n; ++j)
      m.entries[j * n + i] = m.entries[i * n + j];
  }
  return m;
}

}  // namespace mid
