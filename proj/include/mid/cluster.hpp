#pragma once

#include <string>

#include "mid/estimators.hpp"

namespace mid {

enum class Linkage { single, average, complete };

Linkage parse_linkage(const std::string& name);  // throws InputError
const char* linkage_name(Linkage linkage);

// Newick label, single-quoted when it contains structural characters.
std::string quote_newick_label(const std::string& label);

// Deterministic naive agglomerative clustering over a symmetric matrix.
// Cluster-pair ties break toward the lowest representative-label pair;
// children are ordered by representative label, and branch lengths are the
// difference between the parent's and the child's merge heights (leaves sit
// at height 0). Returns a Newick string terminated by ";".
// Throws InputError for < 2 items, NaN entries, or an asymmetric matrix.
std::string cluster_newick(const DistanceMatrix& matrix, Linkage linkage);

}  // namespace mid
