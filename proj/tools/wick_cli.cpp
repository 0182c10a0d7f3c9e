// Command-line front end: JSON problems in, canonical JSON or human-readable
// expressions out. Exit codes are a fixed function of the outcome class:
//   0 success (oracle-check: EQUAL)   1 schema/usage/structure error
//   2 missing table entry or symbol   3 pairing enumeration over the limit
//   4 oracle-check mismatch           5 unsupported perturbation order

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wick/wick.hpp"

namespace {

using wick::Json;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 1;
constexpr int kExitMissingEntry = 2;
constexpr int kExitOracleLimit = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitUnsupportedOrder = 5;

struct GlobalOptions {
  std::string input_path;
  std::string output_path;
  std::string format = "json";
  std::uint64_t seed = 12345;
  std::size_t oracle_limit = wick::kDefaultOracleLimit;
};

void write_output(const GlobalOptions& opts, const std::string& text) {
  if (opts.output_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(opts.output_path, std::ios::binary);
  if (!out) throw wick::Error("cannot open output file " + opts.output_path);
  out << text << "\n";
}

Json load_input(const GlobalOptions& opts) {
  if (opts.input_path.empty()) {
    throw wick::SchemaError("--input FILE is required for this command");
  }
  std::ifstream in(opts.input_path, std::ios::binary);
  if (!in) throw wick::SchemaError("cannot open input file " + opts.input_path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw wick::SchemaError(std::string("input is not valid JSON: ") + e.what());
  }
  return j;
}

// Splits a problem into its fermi and bose parts plus the fermionic
// reordering sign (pair products come pre-split with sign +1).
struct SplitProblem {
  wick::PairProduct fermi{wick::Statistics::Fermi, {}};
  wick::PairProduct bose{wick::Statistics::Bose, {}};
  int sign = 1;
};

SplitProblem split_problem(const wick::ProblemFile& problem) {
  SplitProblem out;
  if (std::holds_alternative<wick::OperatorString>(problem.input)) {
    const auto form = wick::pair_form(std::get<wick::OperatorString>(problem.input));
    out.fermi = form.fermi;
    out.bose = form.bose;
    out.sign = form.sign;
  } else {
    const auto& p = std::get<wick::PairProduct>(problem.input);
    (p.statistics == wick::Statistics::Fermi ? out.fermi : out.bose) = p;
  }
  return out;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

int cmd_evaluate(const GlobalOptions& opts) {
  const auto problem = wick::problem_from_json(load_input(opts));
  const auto split = split_problem(problem);
  if (problem.provider.mode() == wick::PropagatorProvider::Mode::Symbolic) {
    wick::SymbolicSum result =
        wick::evaluate_pair_product(split.fermi, split.bose, problem.provider);
    if (split.sign < 0) result = -result;
    write_output(opts, opts.format == "pretty" ? wick::render(result)
                                               : wick::to_json(result).dump());
  } else {
    wick::ExactScalar result = wick::evaluate_pair_product_numeric(
        split.fermi, split.bose, problem.provider);
    if (split.sign < 0) result = -result;
    write_output(opts, opts.format == "pretty"
                           ? wick::short_fraction_string(result)
                           : Json{{"value", wick::fraction_string(result)}}.dump());
  }
  return kExitOk;
}

int cmd_oracle_check(const GlobalOptions& opts, bool corrupt) {
  const auto problem = wick::problem_from_json(load_input(opts));
  const auto split = split_problem(problem);

  Json report;
  bool equal = false;
  if (problem.provider.mode() == wick::PropagatorProvider::Mode::Symbolic) {
    if (corrupt) {
      throw wick::SchemaError("--self-test-corrupt needs a table provider");
    }
    wick::SymbolicSum evaluator =
        wick::evaluate_pair_product(split.fermi, split.bose, problem.provider);
    wick::SymbolicSum oracle =
        wick::oracle_expectation(split.fermi, problem.provider, opts.oracle_limit);
    oracle *= wick::oracle_expectation(split.bose, problem.provider,
                                       opts.oracle_limit);
    equal = evaluator == oracle;
    report = Json{{"verdict", equal ? "EQUAL" : "UNEQUAL"},
                  {"evaluator", wick::to_json(evaluator)},
                  {"oracle", wick::to_json(oracle)}};
  } else {
    auto oracle_provider = problem.provider;
    if (corrupt) {
      // Harness self-test: perturb one entry of the oracle's table only, so
      // the two routes must disagree.
      auto table = problem.provider.table();
      if (table.empty()) {
        throw wick::SchemaError("--self-test-corrupt needs a nonempty table");
      }
      table.begin()->second += 1;
      oracle_provider = wick::PropagatorProvider::table(std::move(table));
    }
    wick::ExactScalar evaluator = wick::evaluate_pair_product_numeric(
        split.fermi, split.bose, problem.provider);
    wick::ExactScalar oracle = wick::oracle_expectation_numeric(
        split.fermi, oracle_provider, opts.oracle_limit);
    oracle *= wick::oracle_expectation_numeric(split.bose, oracle_provider,
                                               opts.oracle_limit);
    equal = evaluator == oracle;
    report = Json{{"verdict", equal ? "EQUAL" : "UNEQUAL"},
                  {"evaluator", wick::fraction_string(evaluator)},
                  {"oracle", wick::fraction_string(oracle)}};
  }
  if (opts.format == "pretty") {
    std::ostringstream text;
    text << report["verdict"].get<std::string>() << "\n"
         << "evaluator: " << report["evaluator"].dump() << "\n"
         << "oracle:    " << report["oracle"].dump();
    write_output(opts, text.str());
  } else {
    write_output(opts, report.dump());
  }
  return equal ? kExitOk : kExitMismatch;
}

template <typename T>
Json laplace_report(const wick::ContractionMatrix<T>& matrix,
                    const std::vector<std::size_t>& rows,
                    const std::function<Json(const T&)>& value_json,
                    const T& full) {
  const auto expansion = wick::laplace_expand(matrix, rows);
  Json terms = Json::array();
  for (const auto& term : expansion.terms) {
    terms.push_back(Json{{"rows", term.rows},
                         {"cols", term.cols},
                         {"sign", term.sign},
                         {"minor", value_json(term.minor)},
                         {"complement", value_json(term.complement)}});
  }
  const bool equal = expansion.total == full;
  return Json{{"rows", rows},
              {"term_count", expansion.terms.size()},
              {"terms", std::move(terms)},
              {"total", value_json(expansion.total)},
              {"matrix_value", value_json(full)},
              {"verdict", equal ? "EQUAL" : "UNEQUAL"}};
}

int cmd_laplace(const GlobalOptions& opts, const std::string& rows_csv) {
  const auto problem = wick::problem_from_json(load_input(opts));
  const auto split = split_problem(problem);
  if (!split.fermi.pairs.empty() && !split.bose.pairs.empty()) {
    throw wick::SchemaError("laplace needs a single-statistics problem");
  }
  const auto& pairs = split.fermi.pairs.empty() ? split.bose : split.fermi;

  std::vector<std::size_t> rows;
  for (const auto& field : CLI::detail::split(rows_csv, ',')) {
    try {
      rows.push_back(std::stoul(field));
    } catch (const std::exception&) {
      throw wick::IndexError("bad row index \"" + field + "\"");
    }
  }

  Json report;
  if (problem.provider.mode() == wick::PropagatorProvider::Mode::Symbolic) {
    const auto matrix = wick::build_symbolic_matrix(pairs, problem.provider);
    report = laplace_report<wick::SymbolicSum>(
        matrix, rows,
        [](const wick::SymbolicSum& v) { return wick::to_json(v); },
        pairs.statistics == wick::Statistics::Fermi ? wick::det_minors(matrix)
                                                    : wick::perm_ryser(matrix));
  } else {
    const auto matrix = wick::build_numeric_matrix(pairs, problem.provider);
    report = laplace_report<wick::ExactScalar>(
        matrix, rows,
        [](const wick::ExactScalar& v) {
          return Json(wick::fraction_string(v));
        },
        pairs.statistics == wick::Statistics::Fermi
            ? wick::det_elimination(matrix)
            : wick::perm_ryser(matrix));
  }
  if (opts.format == "pretty") {
    std::ostringstream text;
    text << report["term_count"].get<std::size_t>() << " terms, "
         << report["verdict"].get<std::string>() << "\n";
    for (const auto& term : report["terms"]) {
      text << "rows " << term["rows"].dump() << " cols " << term["cols"].dump()
           << " sign " << term["sign"].get<int>() << " minor "
           << term["minor"].dump() << " complement "
           << term["complement"].dump() << "\n";
    }
    text << "total " << report["total"].dump();
    write_output(opts, text.str());
  } else {
    write_output(opts, report.dump());
  }
  return kExitOk;
}

int cmd_greens(const GlobalOptions& opts, int particles, int order,
               bool self_energy, const std::string& labels_csv) {
  std::vector<wick::PointLabel> labels;
  if (!labels_csv.empty()) {
    for (const auto& token : CLI::detail::split(labels_csv, ',')) {
      if (token.empty()) throw wick::SchemaError("empty label in --labels");
      labels.push_back(wick::PointLabel{token});
    }
  } else {
    labels = {wick::PointLabel{"x1"}, wick::PointLabel{"x2"},
              wick::PointLabel{"x3"}, wick::PointLabel{"x4"}};
    labels.resize(particles == 1 ? 2 : 4);
  }
  wick::GreensRequest request;
  request.particles =
      particles == 1 ? wick::Particles::One : wick::Particles::Two;
  request.order = order;
  request.external_points = labels;
  const auto result = wick::greens_function(request);

  if (self_energy) {
    const auto sigma = wick::extract_self_energy(result);
    write_output(opts, opts.format == "pretty" ? wick::render(sigma)
                                               : wick::to_json(sigma).dump());
  } else if (opts.format == "pretty") {
    std::ostringstream text;
    text << "externals:";
    for (const auto& p : result.external_points) text << " " << p.token;
    text << "\nintegration_vars:";
    for (const auto& p : result.integration_vars) text << " " << p.token;
    text << "\nexpression: " << wick::render(result.expression);
    write_output(opts, text.str());
  } else {
    write_output(opts, wick::to_json(result).dump());
  }
  return kExitOk;
}

int cmd_bench(const GlobalOptions& opts, const std::string& mode,
              const std::string& sizes_csv) {
  std::vector<std::size_t> sizes;
  for (const auto& field : CLI::detail::split(sizes_csv, ',')) {
    try {
      sizes.push_back(std::stoul(field));
    } catch (const std::exception&) {
      throw wick::SchemaError("bad size \"" + field + "\"");
    }
  }
  std::ostringstream csv;
  csv << "n,seconds,checksum";
  for (std::size_t n : sizes) {
    const std::uint64_t seed = opts.seed + 0x9e3779b97f4a7c15ull * n;
    std::string digest;
    const auto start = std::chrono::steady_clock::now();
    if (mode == "det") {
      const auto matrix = wick::random_rational_matrix(n, seed);
      digest = wick::fraction_string(wick::det_elimination(matrix));
    } else {
      const auto matrix = wick::random_double_matrix(n, seed);
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%.12e", wick::perm_ryser(matrix));
      digest = buf;
    }
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    char seconds[32];
    std::snprintf(seconds, sizeof(seconds), "%.6f", elapsed.count());
    csv << "\n" << n << "," << seconds << "," << hex64(fnv1a(digest));
  }
  write_output(opts, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluates time-ordered pair averages as determinants or "
               "permanents of contraction matrices, checks them against a "
               "brute-force pairing oracle, and derives first-order thermal "
               "Green's functions symbolically."};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--input", opts.input_path, "JSON problem file");
  app.add_option("--output", opts.output_path, "write result here (default stdout)");
  app.add_option("--format", opts.format, "json|pretty")
      ->check(CLI::IsMember({"json", "pretty"}));
  app.add_option("--seed", opts.seed, "RNG seed for bench");
  app.add_option("--oracle-limit", opts.oracle_limit,
                 "max pairs for the pairing oracle");

  auto* evaluate = app.add_subcommand(
      "evaluate", "determinant/permanent value of a problem");

  auto* oracle_check = app.add_subcommand(
      "oracle-check", "compare evaluator against the pairing oracle");
  bool corrupt = false;
  oracle_check->add_flag("--self-test-corrupt", corrupt,
                         "perturb one oracle table entry; the check must "
                         "report UNEQUAL");

  auto* laplace = app.add_subcommand(
      "laplace", "generalized Laplace expansion over fixed rows");
  std::string rows_csv;
  laplace->add_option("--rows", rows_csv, "comma-separated 1-based row indices")
      ->required();

  auto* greens = app.add_subcommand(
      "greens", "thermal Green's function through first order");
  int particles = 1;
  int order = 0;
  bool self_energy = false;
  std::string labels_csv;
  greens->add_option("--particles", particles, "1 or 2")
      ->check(CLI::IsMember({1, 2}));
  greens->add_option("--order", order, "perturbation order");
  greens->add_flag("--self-energy", self_energy,
                   "strip the external legs and print the kernel");
  greens->add_option("--labels", labels_csv,
                     "external point labels (default x1,x2[,x3,x4])");

  auto* bench = app.add_subcommand("bench", "timing table as CSV");
  std::string bench_mode = "det";
  std::string sizes_csv;
  bench->add_option("--mode", bench_mode, "det|perm")
      ->check(CLI::IsMember({"det", "perm"}));
  bench->add_option("--sizes", sizes_csv, "comma-separated matrix sizes")
      ->required();

  // Global flags may appear on either side of the subcommand name.
  for (auto* sub : {evaluate, oracle_check, laplace, greens, bench}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (evaluate->parsed()) return cmd_evaluate(opts);
    if (oracle_check->parsed()) return cmd_oracle_check(opts, corrupt);
    if (laplace->parsed()) return cmd_laplace(opts, rows_csv);
    if (greens->parsed()) {
      return cmd_greens(opts, particles, order, self_energy, labels_csv);
    }
    if (bench->parsed()) return cmd_bench(opts, bench_mode, sizes_csv);
  } catch (const wick::MissingEntryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingEntry;
  } catch (const wick::MissingSymbolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingEntry;
  } catch (const wick::OracleLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOracleLimit;
  } catch (const wick::UnsupportedOrderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupportedOrder;
  } catch (const wick::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  }
  return kExitSchema;
}
