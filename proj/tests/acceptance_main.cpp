// Acceptance suite: runs every verification criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code = number of failures.
//
// Usage: wick_acceptance --cli PATH --golden DIR --problems DIR [criterion...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wick/wick.hpp"

namespace {

using namespace wick;
using Clock = std::chrono::steady_clock;

struct Context {
  std::string cli_path;
  std::string golden_dir;
  std::string problems_dir;
};

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& command_line) {
  CommandResult result;
  FILE* pipe = popen((command_line + " 2>/dev/null").c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return Json::parse(in);
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  template <typename A, typename B>
  void equal(const A& actual, const B& expected, const std::string& what) {
    if (!(actual == expected)) {
      ok = false;
      detail << "    mismatch: " << what << "\n";
    }
  }
  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << "    failed: " << what << "\n";
    }
  }
};

PairProduct permuted_division(const RandomPairInstance& instance,
                              const std::vector<std::size_t>& perm) {
  PairProduct p = instance.pairs;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    p.pairs[i].second = instance.pairs.pairs[perm[i]].second;
  }
  return p;
}

// --- criterion 1: det(build_matrix) == oracle, fermi ------------------------

bool criterion_equivalence(Statistics statistics, Check& check) {
  const bool fermi = statistics == Statistics::Fermi;
  // Exhaustive over every pair division for n ≤ 4.
  for (std::size_t n = 0; n <= 4; ++n) {
    const auto instance =
        random_pair_instance(n, 1000 + n, statistics);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      const auto division = permuted_division(instance, perm);
      const auto matrix = build_numeric_matrix(division, instance.provider);
      const ExactScalar via_matrix =
          fermi ? det_elimination(matrix) : perm_ryser(matrix);
      const ExactScalar via_oracle =
          oracle_expectation_numeric(division, instance.provider);
      if (via_matrix != via_oracle) {
        check.require(false, "n=" + std::to_string(n) + " division mismatch");
        return false;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  // 100 random-table instances for each n in {5, 6, 7}.
  std::mt19937_64 shuffler(fermi ? 77 : 78);
  for (std::size_t n = 5; n <= 7; ++n) {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      const auto instance =
          random_pair_instance(n, 2000 + 100 * n + trial, statistics);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), shuffler);
      const auto division = permuted_division(instance, perm);
      const auto matrix = build_numeric_matrix(division, instance.provider);
      const ExactScalar via_matrix =
          fermi ? det_elimination(matrix) : perm_ryser(matrix);
      const ExactScalar via_oracle =
          oracle_expectation_numeric(division, instance.provider);
      if (via_matrix != via_oracle) {
        check.require(false, "n=" + std::to_string(n) + " trial " +
                                 std::to_string(trial) + " mismatch");
        return false;
      }
    }
  }
  return true;
}

bool criterion_1(const Context&, Check& check) {
  const auto start = Clock::now();
  if (!criterion_equivalence(Statistics::Fermi, check)) return false;
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  check.require(elapsed.count() < 60.0,
                "runtime " + std::to_string(elapsed.count()) + " s >= 60 s");
  return check.ok;
}

// --- criterion 2: permanents --------------------------------------------------

bool criterion_2(const Context&, Check& check) {
  if (!criterion_equivalence(Statistics::Bose, check)) return false;
  // perm_ryser == perm_naive exactly for n ≤ 8.
  for (std::size_t n = 0; n <= 8; ++n) {
    const auto m = random_rational_matrix(n, 3000 + n, Statistics::Bose);
    check.equal(perm_ryser(m), perm_naive(m),
                "ryser vs naive, n=" + std::to_string(n));
  }
  // Float mode stays within relative 1e-10 of the exact value for n ≤ 12.
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto exact_matrix = random_rational_matrix(n, 3100 + n, Statistics::Bose);
    ContractionMatrix<double> approx;
    approx.statistics = Statistics::Bose;
    approx.row_points = exact_matrix.row_points;
    approx.col_points = exact_matrix.col_points;
    for (const auto& e : exact_matrix.entries) {
      approx.entries.push_back(e.convert_to<double>());
    }
    const double exact = perm_ryser(exact_matrix).convert_to<double>();
    const double floated = perm_ryser(approx);
    const double scale = std::max(1.0, std::abs(exact));
    check.require(std::abs(floated - exact) <= 1e-10 * scale,
                  "float ryser drift at n=" + std::to_string(n));
  }
  return check.ok;
}

// --- criterion 3: generalized Wick row expansion ------------------------------

bool criterion_3(const Context&, Check& check) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto m = random_rational_matrix(n, 4000 + n);
    const ExactScalar reference = det_elimination(m);
    for (std::size_t row = 1; row <= n; ++row) {
      check.equal(expand_along_row(m, row).total, reference,
                  "row " + std::to_string(row) + " of n=" + std::to_string(n));
    }
  }
  return check.ok;
}

// --- criterion 4: Laplace expansion -------------------------------------------

bool criterion_4(const Context&, Check& check) {
  auto binomial = [](std::size_t n, std::size_t m) {
    std::size_t value = 1;
    for (std::size_t i = 1; i <= m; ++i) value = value * (n - m + i) / i;
    return value;
  };
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto matrix = random_rational_matrix(n, 5000 + n);
    const ExactScalar reference = det_elimination(matrix);
    for (std::size_t m = 1; m < n; ++m) {
      // Exhaust every row subset of size m.
      std::vector<bool> selector(n, false);
      std::fill(selector.begin(), selector.begin() + static_cast<long>(m), true);
      std::sort(selector.begin(), selector.end());
      do {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < n; ++r) {
          if (selector[r]) rows.push_back(r + 1);
        }
        const auto expansion = laplace_expand(matrix, rows);
        check.equal(expansion.terms.size(), binomial(n, m),
                    "term count at n=" + std::to_string(n) +
                        " m=" + std::to_string(m));
        check.equal(expansion.total, reference,
                    "total at n=" + std::to_string(n) + " m=" + std::to_string(m));
        if (!check.ok) return false;
      } while (std::next_permutation(selector.begin(), selector.end()));
    }
  }
  // Spot check from the count formula: 4!/2!2! = 6.
  const auto spot = laplace_expand(random_rational_matrix(4, 5999), {1, 2});
  check.equal(spot.terms.size(), std::size_t{6}, "4!/2!2! spot check");
  return check.ok;
}

// --- criterion 5: sign invariance ----------------------------------------------

bool criterion_5(const Context&, Check& check) {
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto instance = random_pair_instance(n, 6000 + n, Statistics::Fermi);
    const auto base_matrix =
        build_numeric_matrix(instance.pairs, instance.provider);
    const ExactScalar det_base = det_elimination(base_matrix);
    const ExactScalar oracle_base =
        oracle_expectation_numeric(instance.pairs, instance.provider);
    for (std::size_t beta = 0; beta < n; ++beta) {
      for (std::size_t gamma = beta + 1; gamma < n; ++gamma) {
        auto swapped = instance.pairs;
        std::swap(swapped.pairs[beta].second, swapped.pairs[gamma].second);
        check.equal(
            det_elimination(build_numeric_matrix(swapped, instance.provider)),
            ExactScalar(-det_base), "ψ̄ swap negates the determinant");
        check.equal(oracle_expectation_numeric(swapped, instance.provider),
                    ExactScalar(-oracle_base), "ψ̄ swap negates the oracle");

        auto pair_swapped = instance.pairs;
        std::swap(pair_swapped.pairs[beta], pair_swapped.pairs[gamma]);
        check.equal(det_elimination(
                        build_numeric_matrix(pair_swapped, instance.provider)),
                    det_base, "pair swap keeps the determinant");
        check.equal(
            oracle_expectation_numeric(pair_swapped, instance.provider),
            oracle_base, "pair swap keeps the oracle");
        if (!check.ok) return false;
      }
    }
  }
  return check.ok;
}

// --- criteria 6 and 7: golden reproductions ------------------------------------

bool criterion_6(const Context& ctx, Check& check) {
  const auto order0 = one_particle_greens(PointLabel{"x1"}, PointLabel{"x2"}, 0);
  check.equal(
      to_json(order0).dump(),
      load_json_file(ctx.golden_dir + "/greens_one_particle_order0.json").dump(),
      "order-0 one-particle golden form");

  const auto order1 = one_particle_greens(PointLabel{"x1"}, PointLabel{"x2"}, 1);
  check.equal(
      to_json(order1).dump(),
      load_json_file(ctx.golden_dir + "/greens_one_particle_order1.json").dump(),
      "order-1 one-particle golden form");

  const auto sigma = extract_self_energy(order1);
  check.equal(
      to_json(sigma).dump(),
      load_json_file(ctx.golden_dir + "/self_energy_first_order.json").dump(),
      "first-order self-energy golden form");
  check.equal(sigma.terms().size(), std::size_t{2}, "self-energy term count");
  return check.ok;
}

bool criterion_7(const Context& ctx, Check& check) {
  const auto result = two_particle_greens(PointLabel{"x1"}, PointLabel{"x2"},
                                          PointLabel{"x3"}, PointLabel{"x4"}, 1);
  check.equal(
      to_json(result).dump(),
      load_json_file(ctx.golden_dir + "/greens_two_particle_order1.json").dump(),
      "two-particle golden form");
  check.equal(result.expression.terms().size(), std::size_t{6},
              "6 canonical monomials");

  // Folding the dummy orientations together gives the bracketed display form.
  const auto merged = relabel_dummies(result.expression, result.integration_vars);
  check.equal(
      to_json(merged).dump(),
      load_json_file(ctx.golden_dir + "/greens_two_particle_order1_merged.json")
          .dump(),
      "merged bracket form");

  const auto swapped = two_particle_greens(
      PointLabel{"x1"}, PointLabel{"x2"}, PointLabel{"x4"}, PointLabel{"x3"}, 1);
  check.equal(swapped.expression, -result.expression,
              "antisymmetry under x3 <-> x4");
  return check.ok;
}

// --- criterion 8: linked-cluster commutation ------------------------------------

bool criterion_8(const Context&, Check& check) {
  const PointLabel x1{"x1"}, x2{"x2"}, x3{"x3"}, x4{"x4"}, z1{"z1"}, z2{"z2"};
  {
    PairProduct p{Statistics::Fermi, {{x1, x2}, {z1, z1}, {z2, z2}}};
    const auto m = build_symbolic_matrix(p, PropagatorProvider::symbolic());
    check.equal(det_minors(zero_external_block(m, {x1, x2})),
                linked_cluster_reduce(det_minors(m), {x1, x2}),
                "one-particle case");
  }
  {
    PairProduct p{Statistics::Fermi, {{x1, x3}, {x2, x4}, {z1, z1}, {z2, z2}}};
    const auto m = build_symbolic_matrix(p, PropagatorProvider::symbolic());
    check.equal(det_minors(zero_external_block(m, {x1, x2, x3, x4})),
                linked_cluster_reduce(det_minors(m), {x1, x2, x3, x4}),
                "two-particle case");
  }
  return check.ok;
}

// --- criterion 9: performance floor ---------------------------------------------

bool criterion_9(const Context&, Check& check) {
  {
    const auto matrix = random_rational_matrix(200, 424242);
    const auto start = Clock::now();
    const ExactScalar det = det_elimination(matrix);
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    check.require(det != 0, "200x200 determinant is nonzero");
    check.require(elapsed.count() < 10.0,
                  "exact determinant n=200 took " +
                      std::to_string(elapsed.count()) + " s (limit 10)");
  }
  {
    const auto matrix = random_double_matrix(20, 515151);
    const auto start = Clock::now();
    const double perm = perm_ryser(matrix);
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    check.require(perm > 0, "positive matrix has a positive permanent");
    check.require(elapsed.count() < 30.0,
                  "float Ryser n=20 took " + std::to_string(elapsed.count()) +
                      " s (limit 30)");
  }
  {
    const auto instance = random_pair_instance(8, 616161, Statistics::Fermi);
    const auto start = Clock::now();
    const auto pairings = enumerate_pairings(instance.pairs, 8);
    const ExactScalar value =
        oracle_expectation_numeric(instance.pairs, instance.provider, 8);
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    check.equal(pairings.size(), std::size_t{40320}, "8! pairings");
    check.equal(value,
                det_elimination(
                    build_numeric_matrix(instance.pairs, instance.provider)),
                "n=8 oracle equals the determinant");
    check.require(elapsed.count() < 5.0,
                  "oracle n=8 took " + std::to_string(elapsed.count()) +
                      " s (limit 5)");
  }
  return check.ok;
}

// --- criterion 10: determinism and CLI outcome classes ---------------------------

bool criterion_10(const Context& ctx, Check& check) {
  const std::string cli = "'" + ctx.cli_path + "'";
  const std::string problems = ctx.problems_dir;
  const std::vector<std::pair<std::string, int>> commands = {
      {cli + " --input " + problems + "/fermi2_symbolic.json evaluate", 0},
      {cli + " --input " + problems + "/first_order_matrix.json evaluate", 0},
      {cli + " --input " + problems + "/bose3_ones.json evaluate", 0},
      {cli + " --input " + problems + "/fermi4_table.json evaluate", 0},
      {cli + " --input " + problems + "/mixed_operator_string.json evaluate", 0},
      {cli + " --input " + problems + "/fermi3_table.json oracle-check", 0},
      {cli + " --input " + problems + "/empty.json oracle-check", 0},
      {cli + " --input " + problems + "/fermi4_table.json laplace --rows 1,2", 0},
      {cli + " greens --particles 1 --order 0", 0},
      {cli + " greens --particles 1 --order 1", 0},
      {cli + " greens --particles 1 --order 1 --self-energy", 0},
      {cli + " greens --particles 2 --order 1", 0},
  };
  for (const auto& [command, expected_code] : commands) {
    const auto first = run_command(command);
    check.equal(first.exit_code, expected_code, "exit code of: " + command);
    for (int repeat = 0; repeat < 2; ++repeat) {
      const auto again = run_command(command);
      if (again.output != first.output) {
        check.require(false, "output drift across runs: " + command);
        return false;
      }
    }
  }

  // Content spot checks on the evaluate outputs used above.
  {
    const auto two_pair = run_command(
        cli + " --input " + problems + "/fermi2_symbolic.json evaluate");
    check.equal(sum_from_json(Json::parse(two_pair.output)).terms().size(),
                std::size_t{2}, "2-pair symbolic problem has 2 terms");
    const auto three_pair = run_command(
        cli + " --input " + problems + "/first_order_matrix.json evaluate");
    check.equal(sum_from_json(Json::parse(three_pair.output)).terms().size(),
                std::size_t{6}, "3-pair symbolic problem has 3! terms");
    const auto all_ones = run_command(
        cli + " --input " + problems + "/bose3_ones.json evaluate");
    check.equal(Json::parse(all_ones.output)["value"].get<std::string>(),
                std::string("6/1"), "bose all-ones 3x3 counts 3! pairings");
  }

  // bench: wall time varies, the checksum column must not.
  const std::string bench =
      cli + " bench --mode det --sizes 8,16 --seed 7";
  auto checksum_column = [](const std::string& csv) {
    std::vector<std::string> sums;
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) {
      const auto comma = line.rfind(',');
      if (comma != std::string::npos) sums.push_back(line.substr(comma + 1));
    }
    return sums;
  };
  const auto bench_first = run_command(bench);
  check.equal(bench_first.exit_code, 0, "bench exit code");
  for (int repeat = 0; repeat < 2; ++repeat) {
    const auto again = run_command(bench);
    check.equal(checksum_column(again.output).size(), std::size_t{3},
                "bench rows (header + 2 sizes)");
    check.require(checksum_column(again.output) ==
                      checksum_column(bench_first.output),
                  "bench checksums drift across runs");
  }

  // Outcome classes map to fixed exit codes.
  check.equal(run_command(cli + " --input " + problems +
                          "/fermi3_table.json oracle-check --self-test-corrupt")
                  .exit_code,
              4, "corrupted oracle table must report UNEQUAL (exit 4)");
  check.equal(
      run_command(cli + " --input " + problems + "/empty.json evaluate --nope")
          .exit_code,
      1, "unknown flag is a usage error (exit 1)");
  check.equal(run_command(cli + " greens --particles 1 --order 2").exit_code, 5,
              "order 2 is unsupported (exit 5)");
  {
    // Missing table entry: drop one entry from fermi3 and evaluate.
    auto broken = load_json_file(problems + "/fermi3_table.json");
    broken["provider"]["entries"].erase(0);
    const std::string path = "/tmp/wick_acceptance_broken.json";
    std::ofstream out(path);
    out << broken.dump();
    out.close();
    check.equal(run_command(cli + " --input " + path + " evaluate").exit_code,
                2, "missing table entry (exit 2)");
  }
  {
    // Oracle limit: a 5-pair table problem with --oracle-limit 4.
    check.equal(
        run_command(cli + " --input " + problems +
                    "/fermi3_table.json --oracle-limit 2 oracle-check")
            .exit_code,
        3, "over the oracle limit (exit 3)");
  }
  check.equal(run_command(cli + " --input /nonexistent.json evaluate").exit_code,
              1, "unreadable input (exit 1)");

  // The one-particle greens output equals the golden file byte-for-byte.
  const auto greens =
      run_command(cli + " greens --particles 1 --order 0");
  std::string trimmed = greens.output;
  while (!trimmed.empty() && (trimmed.back() == '\n' || trimmed.back() == '\r')) {
    trimmed.pop_back();
  }
  check.equal(
      trimmed,
      load_json_file(ctx.golden_dir + "/greens_one_particle_order0.json").dump(),
      "CLI greens output matches the golden form");
  return check.ok;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool(const Context&, Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      ctx.cli_path = argv[++i];
    } else if (arg == "--golden" && i + 1 < argc) {
      ctx.golden_dir = argv[++i];
    } else if (arg == "--problems" && i + 1 < argc) {
      ctx.problems_dir = argv[++i];
    } else {
      selected.push_back(std::atoi(arg.c_str()));
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "theorem equivalence: determinant vs pairing oracle (fermi)",
       criterion_1},
      {2, "boson analogue: permanent vs oracle, Ryser exact and float",
       criterion_2},
      {3, "generalized Wick: row expansion reassembles the determinant",
       criterion_3},
      {4, "Laplace expansion: C(n,m) terms and exact reassembly", criterion_4},
      {5, "sign invariance under point and pair swaps", criterion_5},
      {6, "one-particle reproduction: order 0 and the 2-term self-energy",
       criterion_6},
      {7, "two-particle reproduction: canonical 6-monomial result",
       criterion_7},
      {8, "linked-cluster reduction commutes with expansion", criterion_8},
      {9, "performance floor: det n=200, Ryser n=20, oracle n=8", criterion_9},
      {10, "byte-identical outputs and fixed CLI outcome classes",
       criterion_10},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), criterion.id) ==
            selected.end()) {
      continue;
    }
    Check check;
    bool ok = false;
    std::string error;
    const auto start = Clock::now();
    try {
      ok = criterion.run(ctx, check) && check.ok;
    } catch (const std::exception& e) {
      error = e.what();
      ok = false;
    }
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    std::printf("criterion %2d  %s  %s  (%.2fs)\n", criterion.id,
                ok ? "PASS" : "FAIL", criterion.title, elapsed.count());
    if (!ok) {
      ++failures;
      if (!error.empty()) std::printf("    exception: %s\n", error.c_str());
      std::fputs(check.detail.str().c_str(), stdout);
    }
  }
  return failures;
}
