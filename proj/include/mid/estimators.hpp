#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mid/complexity.hpp"
#include "mid/string_list.hpp"

namespace mid {

enum class Scheme {
  emax,
  emin,
  sum_bound,
  ncd,
  e1,
  norm_max_sublist,
  norm_drop_maximizer,
  norm_set_max_sublist,
  norm_set_drop_maximizer,
};

std::string scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(const std::string& name);
bool scheme_is_normalized(Scheme s);

struct DistanceReport {
  double value = 0.0;
  Scheme scheme = Scheme::emax;
  double numerator_bits = 0.0;
  double denominator_bits = 0.0;  // 0 when the scheme is not a ratio
  // (element index, conditional bits given that element)
  std::vector<std::pair<std::size_t, double>> per_element;
  std::string source;
  // audit extras
  double list_bits = 0.0;          // compressed size of the list encoding
  std::size_t maximizer_index = 0; // element attaining the extremum
};

// Hardest-element cost: max_i of clamp(C(list encoding) - C(x_i), 0).
// Defined for singletons (the list-vs-element overhead, approx 0).
DistanceReport emax(const StringList& x, ComplexitySource& src);

// Same with min instead of max.
DistanceReport emin(const StringList& x, ComplexitySource& src);

// For every i, the sum over k != i of the pairwise hardest-element cost of
// (x_i, x_k); the value is the smallest such sum. Requires >= 2 elements.
DistanceReport sum_bound(const StringList& x, ComplexitySource& src);

// Classic normalized pair distance:
//   (C(xy) - min(C(x), C(y))) / max(C(x), C(y)).
DistanceReport ncd_pair(const Bytes& x, const Bytes& y, ComplexitySource& src);

// Rejected pair normalization (numerator over the joint cost); kept for the
// demos that show why it degenerates toward 1/2.
DistanceReport e1_pair(const Bytes& x, const Bytes& y, ComplexitySource& src);

// Normalized list distances; scheme must be one of the four norm_* values.
// Throws DomainError("normalization undefined for singletons") when the
// list has fewer than two elements.
DistanceReport normalized_list(const StringList& x, Scheme scheme,
                               ComplexitySource& src);

// Algorithmic mutual information clamp(C(x) - C(x|y), 0).
ComplexityEstimate mutual_information(const Bytes& x, const Bytes& y,
                                      ComplexitySource& src);

struct DistanceMatrix {
  std::vector<std::string> labels;
  std::vector<double> entries;  // row-major, size labels.size()^2
  Scheme scheme = Scheme::ncd;
  std::string source;
  double max_diagonal = 0.0;

  std::size_t dim() const { return labels.size(); }
  double at(std::size_t i, std::size_t j) const {
    return entries[i * labels.size() + j];
  }
  std::string to_csv() const;
};

struct NamedBlob {
  std::string label;
  Bytes data;
};

// Pairwise matrix over the corpus; scheme must be ncd or e1. Symmetric by
// construction, diagonal computed (not assumed zero). jobs > 1 splits the
// cell list over threads; the result is identical for any job count.
DistanceMatrix distance_matrix(const std::vector<NamedBlob>& corpus,
                               Scheme scheme, ComplexitySource& src,
                               int jobs = 1);

}  // namespace mid
