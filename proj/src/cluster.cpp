#include "mid/cluster.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "mid/errors.hpp"

namespace mid {

Linkage parse_linkage(const std::string& name) {
  if (name == "single") return Linkage::single;
  if (name == "average") return Linkage::average;
  if (name == "complete") return Linkage::complete;
  throw InputError("unknown linkage: " + name);
}

const char* linkage_name(Linkage linkage) {
  switch (linkage) {
    case Linkage::single: return "single";
    case Linkage::average: return "average";
    case Linkage::complete: return "complete";
  }
  return "?";
}

std::string quote_newick_label(const std::string& label) {
  bool needs_quote = label.empty();
  for (char c : label)
    if (c == ' ' || c == '(' || c == ')' || c == ',' || c == ':' || c == ';' ||
        c == '\'' || c == '[' || c == ']')
      needs_quote = true;
  if (!needs_quote) return label;
  std::string out = "'";
  for (char c : label) {
    out.push_back(c);
    if (c == '\'') out.push_back('\'');  // Newick doubles embedded quotes
  }
  out.push_back('\'');
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 12);
  (void)ec;
  return std::string(buf, end);
}

struct Cluster {
  std::vector<std::size_t> members;  // leaf indices
  std::string repr;                  // smallest member label
  std::string newick;
  double height = 0.0;
};

double cross_distance(const DistanceMatrix& m, const Cluster& a,
                      const Cluster& b, Linkage linkage) {
  double best = linkage == Linkage::complete
                    ? 0.0
                    : std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i : a.members)
    for (std::size_t j : b.members) {
      double d = m.at(i, j);
      sum += d;
      if (linkage == Linkage::single)
        best = std::min(best, d);
      else if (linkage == Linkage::complete)
        best = std::max(best, d);
    }
  if (linkage == Linkage::average)
    return sum / static_cast<double>(a.members.size() * b.members.size());
  return best;
}

}  // namespace

std::string cluster_newick(const DistanceMatrix& matrix, Linkage linkage) {
  const std::size_t n = matrix.dim();
  if (n < 2) throw InputError("clustering needs at least 2 items");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(matrix.at(i, j)))
        throw InputError("distance matrix contains NaN");
      if (matrix.at(i, j) != matrix.at(j, i))
        throw InputError("distance matrix not symmetric");
    }

  std::vector<Cluster> active;
  active.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    active.push_back(Cluster{{i},
                             matrix.labels[i],
                             quote_newick_label(matrix.labels[i]),
                             0.0});

  while (active.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        double d = cross_distance(matrix, active[a], active[b], linkage);
        // tie-break: lowest representative-label pair
        const auto key = [&](std::size_t x, std::size_t y) {
          return active[x].repr <= active[y].repr
                     ? std::pair(active[x].repr, active[y].repr)
                     : std::pair(active[y].repr, active[x].repr);
        };
        if (d < best_d ||
            (d == best_d && key(a, b) < key(best_a, best_b))) {
          best_d = d;
          best_a = a;
          best_b = b;
        }
      }

    Cluster& a = active[best_a];
    Cluster& b = active[best_b];
    const Cluster& first = a.repr <= b.repr ? a : b;
    const Cluster& second = a.repr <= b.repr ? b : a;
    Cluster merged;
    merged.members = first.members;
    merged.members.insert(merged.members.end(), second.members.begin(),
                          second.members.end());
    merged.repr = first.repr;
    merged.height = best_d;
    merged.newick = "(" + first.newick + ":" + fmt(best_d - first.height) +
                    "," + second.newick + ":" + fmt(best_d - second.height) +
                    ")";
    active.erase(active.begin() + best_b);
    active.erase(active.begin() + best_a);
    active.push_back(std::move(merged));
  }
  return active.front().newick + ";";
}

}  // namespace mid
