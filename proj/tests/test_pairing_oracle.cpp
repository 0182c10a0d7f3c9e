#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "test_helpers.hpp"
#include "wick/wick.hpp"

using namespace wick;
using wick::testing::pt;
using wick::testing::reorder_parity;
using wick::testing::sym;

TEST_CASE("pairing counts are n factorial") {
  PairProduct p1{Statistics::Fermi, {{pt("x1"), pt("x2")}}};
  const auto single = enumerate_pairings(p1);
  REQUIRE(single.size() == 1);
  REQUIRE(single[0].sign == 1);

  PairProduct p2{Statistics::Fermi, {{pt("a1"), pt("b1")}, {pt("a2"), pt("b2")}}};
  const auto two = enumerate_pairings(p2);
  REQUIRE(two.size() == 2);
  REQUIRE(two[0].sign == 1);   // identity matching
  REQUIRE(two[1].sign == -1);  // crossed matching

  const auto four = enumerate_pairings(
      random_pair_instance(4, 1, Statistics::Fermi).pairs);
  REQUIRE(four.size() == 24);
}

TEST_CASE("enumeration order is deterministic and lexicographic") {
  PairProduct p{Statistics::Fermi,
                {{pt("a1"), pt("b1")}, {pt("a2"), pt("b2")}, {pt("a3"), pt("b3")}}};
  const auto pairings = enumerate_pairings(p);
  REQUIRE(pairings.size() == 6);
  // First matching is the identity, last is the full reversal.
  REQUIRE(pairings.front().arcs ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 3}, {4, 5}});
  REQUIRE(pairings.back().arcs ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 5}, {2, 3}, {4, 1}});
  const auto again = enumerate_pairings(p);
  for (std::size_t i = 0; i < pairings.size(); ++i) {
    REQUIRE(pairings[i].arcs == again[i].arcs);
    REQUIRE(pairings[i].sign == again[i].sign);
  }
}

TEST_CASE("the oracle limit is enforced") {
  const auto instance = random_pair_instance(5, 3, Statistics::Fermi);
  REQUIRE_THROWS_AS(enumerate_pairings(instance.pairs, 4), OracleLimitError);
  REQUIRE_THROWS_WITH(enumerate_pairings(instance.pairs, 4),
                      Catch::Matchers::ContainsSubstring("determinant"));
  REQUIRE(enumerate_pairings(instance.pairs, 5).size() == 120);
}

TEST_CASE("oracle expectation on small cases") {
  SECTION("single pair") {
    PairProduct p{Statistics::Fermi, {{pt("x1"), pt("x2")}}};
    REQUIRE(oracle_expectation(p, PropagatorProvider::symbolic()) ==
            sym(fermi_contraction(pt("x1"), pt("x2"))));
  }
  SECTION("two pairs reproduce the zeroth-order two-particle form") {
    PairProduct p{Statistics::Fermi, {{pt("x1"), pt("x3")}, {pt("x2"), pt("x4")}}};
    const auto expected =
        sym(fermi_contraction(pt("x1"), pt("x3"))) *
            sym(fermi_contraction(pt("x2"), pt("x4"))) -
        sym(fermi_contraction(pt("x1"), pt("x4"))) *
            sym(fermi_contraction(pt("x2"), pt("x3")));
    REQUIRE(oracle_expectation(p, PropagatorProvider::symbolic()) == expected);
  }
  SECTION("empty product is one") {
    PairProduct p{Statistics::Fermi, {}};
    REQUIRE(oracle_expectation(p, PropagatorProvider::symbolic()) ==
            SymbolicSum(1));
  }
}

TEST_CASE("oracle equals the evaluators") {
  SECTION("fermi n=5 random table equals elimination determinant") {
    const auto instance = random_pair_instance(5, 5, Statistics::Fermi);
    REQUIRE(oracle_expectation_numeric(instance.pairs, instance.provider) ==
            det_elimination(
                build_numeric_matrix(instance.pairs, instance.provider)));
  }
  SECTION("bose n=4 random table equals the permanent") {
    const auto instance = random_pair_instance(4, 7, Statistics::Bose);
    REQUIRE(oracle_expectation_numeric(instance.pairs, instance.provider) ==
            perm_ryser(
                build_numeric_matrix(instance.pairs, instance.provider)));
  }
  SECTION("symbolic n=3 equality, term for term") {
    PairProduct p{Statistics::Fermi,
                  {{pt("a1"), pt("b1")}, {pt("a2"), pt("b2")}, {pt("a3"), pt("b3")}}};
    const auto symbolic = PropagatorProvider::symbolic();
    REQUIRE(oracle_expectation(p, symbolic) ==
            det_minors(build_symbolic_matrix(p, symbolic)));
  }
}

TEST_CASE("all-ones contractions collapse to the sign sum") {
  for (std::size_t n = 2; n <= 5; ++n) {
    PropagatorTable table;
    PairProduct fermi{Statistics::Fermi, {}};
    PairProduct bose{Statistics::Bose, {}};
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = PointLabel{"a" + std::to_string(i)};
      const auto r = PointLabel{"b" + std::to_string(i)};
      fermi.pairs.emplace_back(l, r);
      bose.pairs.emplace_back(l, r);
    }
    for (const auto& [l1, r1] : fermi.pairs) {
      for (const auto& [l2, r2] : fermi.pairs) {
        table[{l1, r2}] = ExactScalar(1);
      }
    }
    const auto provider = PropagatorProvider::table(table);
    ExactScalar factorial(1);
    for (std::size_t i = 2; i <= n; ++i) factorial *= ExactScalar(i);
    REQUIRE(oracle_expectation_numeric(fermi, provider) == 0);
    REQUIRE(oracle_expectation_numeric(bose, provider) == factorial);
  }
}

TEST_CASE("oracle equals the evaluator over every pair division, n <= 5") {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (auto statistics : {Statistics::Fermi, Statistics::Bose}) {
      const auto instance = random_pair_instance(
          n, 900 + 2 * n + (statistics == Statistics::Bose), statistics);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        auto division = instance.pairs;
        for (std::size_t i = 0; i < n; ++i) {
          division.pairs[i].second = instance.pairs.pairs[perm[i]].second;
        }
        const auto matrix = build_numeric_matrix(division, instance.provider);
        const ExactScalar via_matrix = statistics == Statistics::Fermi
                                           ? det_elimination(matrix)
                                           : perm_ryser(matrix);
        REQUIRE(oracle_expectation_numeric(division, instance.provider) ==
                via_matrix);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
}

TEST_CASE("crossing signs agree with bubble reordering on every pairing") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto instance = random_pair_instance(n, 11 + n, Statistics::Fermi);
    std::vector<std::size_t> psi_pos(n), psibar_pos(n);
    for (std::size_t a = 0; a < n; ++a) {
      psi_pos[a] = 2 * a;
      psibar_pos[a] = 2 * a + 1;
    }
    for (const auto& pairing : enumerate_pairings(instance.pairs)) {
      std::vector<std::size_t> matching(n);
      for (std::size_t a = 0; a < n; ++a) {
        matching[a] = pairing.arcs[a].second / 2;
      }
      REQUIRE(pairing.sign == reorder_parity(psi_pos, psibar_pos, matching));
    }
  }
}
