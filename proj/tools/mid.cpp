// mid: multiset information distance toolkit.
//
// Subcommands: matrix, list, check, lab, cluster. Every JSON artifact is
// wrapped in an envelope carrying tool version, compressor id, seed and the
// budgets in force, so a run can be reproduced bit for bit.
// Exit codes: 0 success, 1 failed check, 2 usage/input, 3 domain, 4 budget.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mid/cache.hpp"
#include "mid/cluster.hpp"
#include "mid/compressor.hpp"
#include "mid/errors.hpp"
#include "mid/estimators.hpp"
#include "mid/external.hpp"
#include "mid/harness.hpp"
#include "mid/overlap.hpp"
#include "mid/rng.hpp"
#include "mid/string_list.hpp"
#include "mid/toylab.hpp"
#include "mid/version.hpp"

using nlohmann::json;

namespace {

struct GlobalConfig {
  std::string compressor = "builtin";
  std::string cache_path;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  double timeout = 60.0;
  std::string out_path;
  std::string format = "json";
};

// One compressor active per run: builtin or an external filter command,
// always behind the digest cache (file-backed when --cache names a path).
struct Engine {
  std::unique_ptr<mid::ComplexitySource> raw;
  std::unique_ptr<mid::SizeCache> cache;
  std::unique_ptr<mid::CachingSource> cached;

  mid::ComplexitySource& src() { return *cached; }
};

Engine make_engine(const GlobalConfig& g) {
  Engine e;
  if (g.compressor.empty() || g.compressor == "builtin")
    e.raw = std::make_unique<mid::BuiltinCompressor>();
  else
    e.raw = std::make_unique<mid::ExternalCompressor>(
        mid::parse_command(g.compressor, g.timeout));
  e.cache = g.cache_path.empty()
                ? std::make_unique<mid::SizeCache>()
                : std::make_unique<mid::SizeCache>(g.cache_path);
  e.cached = std::make_unique<mid::CachingSource>(*e.raw, *e.cache);
  return e;
}

void emit(const GlobalConfig& g, const std::string& payload) {
  if (g.out_path.empty()) {
    std::fputs(payload.c_str(), stdout);
    std::fputc('\n', stdout);
  } else {
    mid::write_file(g.out_path, mid::bytes_of(payload + "\n"));
  }
}

json envelope(const GlobalConfig& g, Engine& e, const std::string& command,
              json budgets, json report) {
  return json{{"tool", mid::kToolName},  {"version", mid::kToolVersion},
              {"command", command},      {"compressor", e.src().id()},
              {"seed", g.seed},          {"budgets", std::move(budgets)},
              {"report", std::move(report)}};
}

json matrix_json(const mid::DistanceMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"labels", m.labels},
              {"scheme", mid::scheme_name(m.scheme)},
              {"source", m.source},
              {"max_diagonal", m.max_diagonal},
              {"rows", std::move(rows)}};
}

json report_json(const mid::DistanceReport& r) {
  json per = json::array();
  for (const auto& [idx, bits] : r.per_element)
    per.push_back(json{{"element", idx}, {"bits", bits}});
  return json{{"value", r.value},
              {"scheme", mid::scheme_name(r.scheme)},
              {"numerator_bits", r.numerator_bits},
              {"denominator_bits", r.denominator_bits},
              {"list_bits", r.list_bits},
              {"maximizer_index", r.maximizer_index},
              {"per_element", std::move(per)},
              {"source", r.source}};
}

std::vector<mid::NamedBlob> read_corpus(const std::vector<std::string>& paths) {
  std::vector<mid::NamedBlob> corpus;
  corpus.reserve(paths.size());
  for (const std::string& p : paths)
    corpus.push_back(mid::NamedBlob{p, mid::read_file(p)});
  return corpus;
}

mid::Scheme scheme_or_throw(const std::string& name) {
  std::optional<mid::Scheme> s = mid::parse_scheme(name);
  if (!s) throw mid::InputError("unknown scheme: " + name);
  return *s;
}

// ---------------------------------------------------------------------------
// matrix

int cmd_matrix(const GlobalConfig& g, const std::vector<std::string>& paths,
               const std::string& scheme_str) {
  if (paths.size() < 2) throw mid::InputError("matrix needs at least 2 files");
  Engine e = make_engine(g);
  mid::DistanceMatrix m = mid::distance_matrix(
      read_corpus(paths), scheme_or_throw(scheme_str), e.src(), g.jobs);
  if (g.format == "csv" || g.format == "text") {
    emit(g, m.to_csv());
  } else {
    json budgets{{"timeout_seconds", g.timeout}, {"jobs", g.jobs}};
    emit(g, envelope(g, e, "matrix", budgets, matrix_json(m)).dump(2));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// list

int cmd_list(const GlobalConfig& g, const std::vector<std::string>& paths,
             const std::string& scheme_str) {
  if (paths.empty()) throw mid::InputError("list needs at least 1 file");
  mid::Scheme scheme = scheme_or_throw(scheme_str);
  Engine e = make_engine(g);

  std::vector<mid::Bytes> items;
  for (const std::string& p : paths) items.push_back(mid::read_file(p));
  mid::StringList list = mid::StringList::canonicalize(std::move(items));

  mid::DistanceReport rep;
  switch (scheme) {
    case mid::Scheme::emax: rep = mid::emax(list, e.src()); break;
    case mid::Scheme::emin: rep = mid::emin(list, e.src()); break;
    case mid::Scheme::sum_bound: rep = mid::sum_bound(list, e.src()); break;
    case mid::Scheme::norm_max_sublist:
    case mid::Scheme::norm_drop_maximizer:
    case mid::Scheme::norm_set_max_sublist:
    case mid::Scheme::norm_set_drop_maximizer:
      rep = mid::normalized_list(list, scheme, e.src());
      break;
    default:
      throw mid::InputError("scheme " + scheme_str +
                            " applies to pairs; use the matrix command");
  }
  if (g.format == "text" || g.format == "csv") {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s %.6f", scheme_str.c_str(), rep.value);
    emit(g, buf);
  } else {
    json budgets{{"timeout_seconds", g.timeout}};
    emit(g, envelope(g, e, "list", budgets, report_json(rep)).dump(2));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const GlobalConfig& g, const std::string& suite,
              std::uint64_t trials, std::size_t n_bits,
              const std::string& scheme_str) {
  Engine e = make_engine(g);
  json report;
  bool pass = false;

  if (suite == "metric") {
    mid::harness::ListSampler sampler(g.seed);
    mid::harness::MetricReports r = mid::harness::metric_check(sampler, e.src(), trials);
    report = json::parse(mid::harness::to_json(r));
    pass = r.pass();
  } else if (suite == "additivity") {
    mid::harness::AdditivityReport r =
        mid::harness::additivity_demo(n_bits ? n_bits : 8000, e.src(), g.seed);
    report = json::parse(mid::harness::to_json(r));
    pass = r.pass;
  } else if (suite == "normalization") {
    mid::Scheme scheme = scheme_or_throw(
        scheme_str.empty() ? "norm-max-sublist" : scheme_str);
    mid::harness::NormalizationReport r = mid::harness::normalization_violation_demo(
        n_bits ? n_bits : 10000, scheme, e.src(), g.seed);
    report = json::parse(mid::harness::to_json(r));
    pass = r.violation;  // the violation is the expected outcome
  } else if (suite == "chain") {
    mid::harness::ListSampler sampler(g.seed);
    mid::harness::ViolationReport r = mid::harness::chain_suite(sampler, e.src(), trials);
    report = json::parse(mid::harness::to_json(r));
    pass = r.pass;
  } else if (suite == "minimal-overlap") {
    mid::harness::MinimalOverlapReport r =
        mid::harness::minimal_overlap_demo(n_bits ? n_bits : 8000, e.src(), g.seed);
    report = json::parse(mid::harness::to_json(r));
    pass = r.pass;
  } else {
    throw mid::InputError("unknown suite: " + suite);
  }

  json budgets{{"trials", trials}, {"n_bits", n_bits}};
  report["suite_pass"] = pass;
  emit(g, envelope(g, e, "check", budgets, std::move(report)).dump(2));
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// lab

struct LabArgs {
  std::string op;
  std::uint32_t L = 14;
  std::uint64_t S = 10000;
  std::string target;
  std::string condition;
  std::uint32_t max_len = 4;
  std::uint32_t max_m = 2;
  std::uint32_t m = 2;
  std::uint32_t k1 = 1;
  std::uint32_t k2 = 2;
  std::size_t instances = 10;
  std::uint32_t c_bound = 64;
};

json lab_density(const LabArgs& a) {
  mid::toylab::ToyUniverse u = mid::toylab::build_universe(a.max_m, a.max_len);
  mid::toylab::EmaxTable t = mid::toylab::emax_over_universe(u, a.L, a.S);
  mid::toylab::ToyDistanceTable d =
      mid::toylab::distance_from_emax(t, 0.0, "hardest-element");
  std::size_t failures = 0;
  double worst_sum = 0.0;
  std::string worst_anchor;
  for (const mid::toylab::BitString& anchor : u.strings) {
    mid::toylab::DensityReport rep = mid::toylab::density_check(u, d, anchor);
    if (!rep.pass) ++failures;
    if (rep.sum > worst_sum) {
      worst_sum = rep.sum;
      worst_anchor = anchor.str();
    }
  }
  return json{{"distance", d.name},
              {"anchors", u.strings.size()},
              {"lists", u.lists.size()},
              {"emax_absent", t.absent},
              {"failures", failures},
              {"worst_sum", worst_sum},
              {"worst_anchor", worst_anchor},
              {"pass", failures == 0}};
}

json lab_dominance(const LabArgs& a) {
  mid::toylab::ToyUniverse u = mid::toylab::build_universe(a.max_m, a.max_len);
  mid::toylab::EmaxTable t = mid::toylab::emax_over_universe(u, a.L, a.S);
  std::vector<mid::toylab::ToyDistanceTable> family;
  family.push_back(mid::toylab::distance_from_emax(t, 0.0, "hardest-element"));
  family.push_back(mid::toylab::distance_from_emax(t, 5.0, "hardest-element-plus-5"));
  family.push_back(mid::toylab::code_length_distance(u));
  family.push_back(mid::toylab::hamming_style_distance(u));

  json rows = json::array();
  bool all_pass = true;
  for (const mid::toylab::ToyDistanceTable& d : family) {
    mid::toylab::DominanceReport rep =
        mid::toylab::dominance_check(u, d, t, a.c_bound);
    json row{{"name", d.name},
             {"pass", rep.pass},
             {"compared", rep.compared},
             {"skipped", rep.skipped}};
    if (rep.c)
      row["c"] = *rep.c;
    else
      row["c"] = nullptr;
    rows.push_back(std::move(row));
    all_pass = all_pass && rep.pass;
  }
  return json{{"lists", u.lists.size()},
              {"c_bound", a.c_bound},
              {"candidates", std::move(rows)},
              {"pass", all_pass}};
}

json lab_overlap(const LabArgs& a, std::uint64_t seed) {
  mid::DetRng rng(seed);
  std::size_t encodings = 0, ok = 0;
  for (std::size_t t = 0; t < a.instances; ++t) {
    mid::overlap::OverlapInstance inst = mid::overlap::random_instance(
        rng, a.m, a.k1, a.k2, a.m + 2);
    mid::overlap::ColoredGraph graph = mid::overlap::build(inst);
    for (std::size_t vi = 0; vi < inst.vectors.size(); ++vi)
      for (std::uint32_t i = 1; i <= inst.m; ++i)
        for (std::uint32_t k = 1; k <= inst.m; ++k) {
          mid::overlap::SideInfo side =
              mid::overlap::encode(inst, graph, inst.vectors[vi], i, k);
          mid::overlap::Decoded out = mid::overlap::decode_with(
              inst, graph, inst.vectors[vi][i - 1], side);
          ++encodings;
          if (out.list == inst.vectors[vi] &&
              out.element == inst.vectors[vi][k - 1])
            ++ok;
        }
  }
  return json{{"instances", a.instances},
              {"m", a.m},
              {"k1", a.k1},
              {"k2", a.k2},
              {"encodings", encodings},
              {"roundtrips_ok", ok},
              {"pass", encodings == ok}};
}

int cmd_lab(const GlobalConfig& g, const LabArgs& a) {
  json report;
  bool pass = true;
  json budgets{{"L", a.L}, {"S", a.S}};

  if (a.op == "complexity") {
    std::optional<std::uint32_t> bits = mid::toylab::bounded_complexity(
        mid::toylab::BitString::parse(a.target),
        mid::toylab::BitString::parse(a.condition), a.L, a.S);
    report = json{{"target", a.target}, {"condition", a.condition}};
    if (bits) {
      report["present"] = true;
      report["bits"] = *bits;
    } else {
      report["present"] = false;
      report["bits"] = nullptr;
    }
  } else if (a.op == "apriori") {
    double p = mid::toylab::apriori_probability(
        mid::toylab::BitString::parse(a.target),
        mid::toylab::BitString::parse(a.condition), a.L, a.S);
    report = json{{"target", a.target},
                  {"condition", a.condition},
                  {"probability", p}};
  } else if (a.op == "soi") {
    mid::toylab::Oracle oracle(a.L, a.S);
    mid::toylab::SoiScanReport r = mid::toylab::soi_scan(a.max_len, oracle);
    report = json{{"max_len", r.max_len},
                  {"pairs_total", r.pairs_total},
                  {"pairs_present", r.pairs_present},
                  {"pairs_absent", r.pairs_absent},
                  {"max_abs_residual", r.max_abs_residual}};
    budgets["max_len"] = a.max_len;
  } else if (a.op == "coding") {
    mid::toylab::Oracle oracle(a.L, a.S);
    mid::toylab::CodingScanReport r = mid::toylab::coding_scan(a.max_len, oracle);
    report = json{{"max_len", r.max_len},
                  {"strings_total", r.strings_total},
                  {"strings_present", r.strings_present},
                  {"max_residual", r.max_residual},
                  {"min_residual", r.min_residual}};
    pass = r.min_residual >= 0.0;
    budgets["max_len"] = a.max_len;
  } else if (a.op == "density") {
    report = lab_density(a);
    pass = report["pass"].get<bool>();
    budgets["max_len"] = a.max_len;
    budgets["max_m"] = a.max_m;
  } else if (a.op == "dominance") {
    report = lab_dominance(a);
    pass = report["pass"].get<bool>();
    budgets["max_len"] = a.max_len;
    budgets["max_m"] = a.max_m;
    budgets["c_bound"] = a.c_bound;
  } else if (a.op == "overlap") {
    report = lab_overlap(a, g.seed);
    pass = report["pass"].get<bool>();
    budgets = json{{"instances", a.instances},
                   {"m", a.m},
                   {"k1", a.k1},
                   {"k2", a.k2}};
  } else {
    throw mid::InputError("unknown lab op: " + a.op);
  }

  Engine e = make_engine(g);  // only for envelope metadata; lab is exact
  emit(g, envelope(g, e, "lab", budgets, std::move(report)).dump(2));
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// cluster

int cmd_cluster(const GlobalConfig& g, const std::vector<std::string>& paths,
                const std::string& linkage_str, const std::string& scheme_str) {
  if (paths.size() < 2) throw mid::InputError("cluster needs at least 2 files");
  mid::Linkage linkage = mid::parse_linkage(linkage_str);
  Engine e = make_engine(g);
  mid::DistanceMatrix m = mid::distance_matrix(
      read_corpus(paths), scheme_or_throw(scheme_str), e.src(), g.jobs);
  std::string newick = mid::cluster_newick(m, linkage);
  if (g.format == "text") {
    emit(g, newick);
  } else {
    json budgets{{"timeout_seconds", g.timeout}, {"jobs", g.jobs}};
    json report{{"newick", newick},
                {"linkage", mid::linkage_name(linkage)},
                {"scheme", mid::scheme_name(m.scheme)},
                {"labels", m.labels}};
    emit(g, envelope(g, e, "cluster", budgets, std::move(report)).dump(2));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mid: information distance between lists of strings"};
  app.require_subcommand(1);

  GlobalConfig g;
  app.add_option("--compressor", g.compressor,
                 "builtin or an external filter command, e.g. \"xz -9 -c\"")
      ->envname("MID_COMPRESSOR");
  app.add_option("--cache", g.cache_path, "size-cache file (shared, append-only)")
      ->envname("MID_CACHE");
  app.add_option("--seed", g.seed, "rng seed recorded in every artifact");
  app.add_option("--jobs", g.jobs, "parallel workers for matrix cells")
      ->check(CLI::Range(1u, 256u));
  app.add_option("--timeout", g.timeout, "external compressor timeout, seconds");
  app.add_option("--out", g.out_path, "write the artifact here instead of stdout");
  app.add_option("--format", g.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  auto* matrix = app.add_subcommand("matrix", "pairwise distance matrix over files");
  std::vector<std::string> matrix_paths;
  std::string matrix_scheme = "ncd";
  matrix->add_option("paths", matrix_paths, "input files (at least 2)");
  matrix->add_option("--scheme", matrix_scheme, "pair scheme: ncd or e1");

  auto* list = app.add_subcommand("list", "distance of one list of files");
  std::vector<std::string> list_paths;
  std::string list_scheme = "emax";
  list->add_option("paths", list_paths, "input files (the list elements)");
  list->add_option("--scheme", list_scheme,
                   "emax, emin, sum-bound or a norm-* scheme");

  auto* check = app.add_subcommand("check", "property suites over sampled corpora");
  std::string suite;
  std::uint64_t trials = 20;
  std::size_t n_bits = 0;
  std::string check_scheme;
  check->add_option("--suite", suite,
                    "metric, additivity, normalization, chain, minimal-overlap")
      ->required();
  check->add_option("--trials", trials, "trial count for sampled suites");
  check->add_option("--n-bits", n_bits, "input size for the constructions");
  check->add_option("--scheme", check_scheme, "scheme for the normalization suite");

  auto* lab = app.add_subcommand("lab", "exact small-machine experiments");
  LabArgs la;
  lab->add_option("--op", la.op,
                  "complexity, apriori, soi, coding, density, dominance, overlap")
      ->required();
  lab->add_option("--L", la.L, "program length budget (bits)");
  lab->add_option("--S", la.S, "step budget");
  lab->add_option("--target", la.target, "target bit string, e.g. 1010");
  lab->add_option("--condition", la.condition, "condition bit string");
  lab->add_option("--max-len", la.max_len, "string length cap for scans");
  lab->add_option("--max-m", la.max_m, "list size cap for universe sweeps");
  lab->add_option("--m", la.m, "components per vector");
  lab->add_option("--k1", la.k1, "degree exponent");
  lab->add_option("--k2", la.k2, "occurrence-capacity exponent");
  lab->add_option("--instances", la.instances, "sweep instance count");
  lab->add_option("--c-bound", la.c_bound, "dominance constant search cap");

  auto* cluster = app.add_subcommand("cluster", "hierarchical clustering to Newick");
  std::vector<std::string> cluster_paths;
  std::string linkage = "average";
  std::string cluster_scheme = "ncd";
  cluster->add_option("paths", cluster_paths, "input files (at least 2)");
  cluster->add_option("--linkage", linkage, "single, average or complete");
  cluster->add_option("--scheme", cluster_scheme, "pair scheme: ncd or e1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*matrix) return cmd_matrix(g, matrix_paths, matrix_scheme);
    if (*list) return cmd_list(g, list_paths, list_scheme);
    if (*check) return cmd_check(g, suite, trials, n_bits, check_scheme);
    if (*lab) return cmd_lab(g, la);
    if (*cluster) return cmd_cluster(g, cluster_paths, linkage, cluster_scheme);
  } catch (const mid::BudgetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const mid::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const mid::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const mid::ProcessError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
