#include <doctest.h>

#include <set>

#include "qgeo/classifier.hpp"
#include "qgeo/flattening.hpp"
#include "qgeo/invariants.hpp"
#include "test_util.hpp"

using namespace qgeo;
using qt::code_of;

namespace {

const std::vector<Table> kTables = {Table::T2_1, Table::T4_1, Table::T5_1, Table::T5_2, Table::T5qubit};

// Rows of Table 4.1 whose exemplars have tensor rank 3: the classifier finds a
// three-term decomposition and places them on the secant side.
const std::set<std::string> kRankThreePrimed = {"(333)'", "(332)'", "(323)'", "(233)'"};

// Cayley hyperdeterminant of a 2x2x2 tensor.
cd hyperdet(const PureState& s) {
  auto a = [&](int i, int j, int k) { return s.at({i, j, k}); };
  cd d = a(0, 0, 0) * a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 1) + a(0, 0, 1) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 0) +
         a(0, 1, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 1) + a(1, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(0, 1, 1);
  d -= 2.0 * (a(0, 0, 0) * a(1, 1, 1) * a(0, 0, 1) * a(1, 1, 0) + a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 0) * a(1, 0, 1) +
              a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 0) * a(0, 1, 1) + a(0, 0, 1) * a(1, 1, 0) * a(0, 1, 0) * a(1, 0, 1) +
              a(0, 0, 1) * a(1, 1, 0) * a(1, 0, 0) * a(0, 1, 1) + a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 0) * a(0, 1, 1));
  d += 4.0 * (a(0, 0, 0) * a(0, 1, 1) * a(1, 0, 1) * a(1, 1, 0) + a(1, 1, 1) * a(1, 0, 0) * a(0, 1, 0) * a(0, 0, 1));
  return d;
}

// Class from hyperdeterminant and one-party ranks alone.
std::string brute_force_3qubit(const PureState& s) {
  if (std::abs(hyperdet(s)) > 1e-9 * std::pow(s.norm(), 4)) return "GHZ";
  std::vector<int> r;
  for (int p = 1; p <= 3; ++p) r.push_back(numerical_rank(matricize(s, {p}), RankBackend::numeric(1e-9)));
  if (r == std::vector<int>{2, 2, 2}) return "W";
  if (r == std::vector<int>{1, 1, 1}) return "Sep";
  if (r[0] == 1) return "B1";
  if (r[1] == 1) return "B2";
  return "B3";
}

ClassifyOptions invariant_only() {
  ClassifyOptions o;
  o.use_rank_certificates = false;
  o.use_als = false;
  return o;
}

}  // namespace

TEST_CASE("every exemplar lands on its own row") {
  for (Table t : kTables)
    for (const auto& row : table_rows(t)) {
      CAPTURE(table_name(t));
      CAPTURE(row.key);
      auto s = exemplar(t, row.key);
      auto r = classify(s, ClassifyOptions{RankBackend::exact()});
      CHECK(r.table == table_name(t));
      CHECK(r.one_multirank == row.one_multirank);
      if (s.parties() >= 4) CHECK(r.two_multirank == row.two_multirank);
      CHECK(r.k_lower <= row.k);
      auto listed = [&](const std::string& k) {
        return std::find(r.compatible_rows.begin(), r.compatible_rows.end(), k) != r.compatible_rows.end();
      };
      if (t == Table::T4_1 && kRankThreePrimed.count(row.key)) {
        CHECK_FALSE(listed(row.key));
        CHECK(listed(row.key.substr(0, 5)));
        // rank 3 = border rank 3: a certificate for the secant column
        CHECK(r.tangent_flag == TangentFlag::secant);
        CHECK(r.family == "sigma3");
        continue;
      }
      if (t == Table::T5_1 && row.key == "(333)'4") {
        // no certificate separates rank 5 from border rank 4 here
        CHECK(listed(row.key));
        CHECK(r.k_lower == 4);
        CHECK(r.tangent_flag == TangentFlag::unknown);
        CHECK_FALSE(r.family_label);
        continue;
      }
      CHECK(listed(row.key));
      CHECK(r.family == family_name(row.k, row.tangent));
      CHECK(r.family_label == row.subfamily);
      CHECK(r.k_lower == row.k);
      CHECK(r.tangent_flag == (row.tangent ? TangentFlag::tangent : TangentFlag::secant));
    }
}

TEST_CASE("classify examples") {
  auto p = classify(basis_state({2, 2, 2}, {0, 0, 0}));
  CHECK(p.family == "Segre");
  CHECK(p.one_multirank == "(111)");
  CHECK(p.separability.size() == 3);

  auto g = classify(ghz(2, 4));
  CHECK(g.k_lower == 2);
  CHECK(g.family == "sigma2");
  CHECK(g.one_multirank == "(2222)");
  CHECK(g.two_multirank == "(222)");

  auto w = classify(w_state(5));
  CHECK(w.k_lower == 2);
  CHECK(w.tangent_flag == TangentFlag::tangent);
  CHECK(w.family == "tau2");

  auto x = classify_3qutrit(x3());
  CHECK(x.k_lower == 3);
  CHECK(x.one_multirank == "(333)");
  CHECK(x.tangent_flag == TangentFlag::tangent);

  auto gh = classify_3qutrit(ghz(3, 3));
  CHECK(gh.k_lower == 3);
  CHECK(gh.family_label == "GHZ3(2)");

  auto gp = classify_3qutrit(g3_pencil(2.0));
  CHECK(gp.k_lower == 5);
  CHECK(gp.koszul_index == 5);
  CHECK(gp.family == "sigma5");

  auto b2 = classify_3qutrit(exemplar(Table::T5_1, "B(2)_1"));
  std::string sorted = b2.one_multirank;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == "()133");

  auto cl = classify_4qubit(cluster4(2));
  CHECK(cl.two_multirank == "(424)");
  CHECK(cl.family == "sigma4");
  CHECK(cl.k_upper == 4);

  auto bb = classify_4qubit(tensor_product(bell(1), bell(1)));
  CHECK(bb.two_multirank == "(144)");
  CHECK(bb.separability.size() == 2);

  CHECK(code_of([] { classify(zero_state({2, 2})); }) == "ZeroTensor");
  CHECK(code_of([] { classify_4qubit(ghz(2, 3)); }) == "WrongShape");
  CHECK(code_of([] { classify_3qutrit(ghz(2, 3)); }) == "WrongShape");
  CHECK(code_of([] { classify_3qubit(ghz(3, 3)); }) == "WrongShape");
}

TEST_CASE("three-qubit table") {
  CHECK(classify_3qubit(basis_state({2, 2, 2}, {0, 0, 0})) == "Sep");
  CHECK(classify_3qubit(tensor_product(basis_state({2}, {0}), bell(1))) == "B1");
  CHECK(classify_3qubit(w_state(3)) == "W");
  CHECK(classify_3qubit(ghz(2, 3)) == "GHZ");
  for (const auto& key : exemplar_rows(Table::T2_1)) CHECK(classify_3qubit(exemplar(Table::T2_1, key)) == key);
}

TEST_CASE("three-qubit classifier agrees with a brute-force discriminator") {
  std::mt19937_64 rng(101);
  std::vector<PureState> seeds = {w_state(3), ghz(2, 3), tensor_product(basis_state({2}, {0}), bell(1)),
                                  permute_parties({2, 1, 3}, tensor_product(basis_state({2}, {0}), bell(1))),
                                  tensor_product(bell(1), basis_state({2}, {0})), basis_state({2, 2, 2}, {0, 0, 0})};
  for (int trial = 0; trial < 300; ++trial) {
    const PureState& seed = seeds[trial % seeds.size()];
    PureState s = apply_local(qt::random_slocc(seed.shape, rng), seed);
    if (trial % 7 == 0) s = qt::random_state({2, 2, 2}, rng);
    s = (1.0 / s.norm()) * s;
    CAPTURE(trial);
    const std::string c = classify_3qubit(s);
    CHECK(c == brute_force_3qubit(s));
    const auto inv = three_qubit_invariants(s);
    const bool w_pattern = inv.tau < 1e-9 && inv.c_ab > 1e-9 && inv.c_ac > 1e-9 && inv.c_bc > 1e-9;
    CHECK(w_pattern == (c == "W"));
  }
}

TEST_CASE("two-multirank constraint") {
  CHECK(two_multirank_constraint(1, 3, 3) == TripleStatus::forbidden);
  CHECK(two_multirank_constraint(3, 1, 3) == TripleStatus::forbidden);
  CHECK(two_multirank_constraint(2, 4, 4) == TripleStatus::achievable);
  CHECK(two_multirank_constraint(1, 1, 1) == TripleStatus::achievable);
  CHECK(two_multirank_constraint(2, 2, 3) == TripleStatus::forbidden);
  CHECK(two_multirank_constraint(1, 2, 4) == TripleStatus::forbidden);
}

TEST_CASE("random four-qubit states obey the two-multirank theorem") {
  std::mt19937_64 rng(4096);
  const RankBackend b = RankBackend::numeric(1e-10);
  for (int trial = 0; trial < 1000; ++trial) {
    // mix generic states with low-rank sums to reach smaller triples
    PureState s = trial % 2 ? qt::random_state({2, 2, 2, 2}, rng) : qt::random_rank({2, 2, 2, 2}, 1 + trial % 4, rng);
    auto r = multirank(s, 2, b).canonical_ranks(4);
    REQUIRE(r.size() == 3);
    const int m = *std::max_element(r.begin(), r.end());
    CHECK(std::count(r.begin(), r.end(), m) >= 2);
    std::sort(r.begin(), r.end());
    CHECK(r != std::vector<int>{1, 3, 3});
    CHECK(two_multirank_constraint(r[0], r[1], r[2]) == TripleStatus::achievable);
  }
}

TEST_CASE("Table 4.1 exemplars realize every achievable triple") {
  std::set<std::vector<int>> seen;
  for (const auto& key : exemplar_rows(Table::T4_1)) {
    auto r = multirank(exemplar(Table::T4_1, key), 2, RankBackend::exact()).canonical_ranks(4);
    std::sort(r.begin(), r.end());
    seen.insert(r);
  }
  for (int a = 1; a <= 4; ++a)
    for (int b = a; b <= 4; ++b)
      for (int c = b; c <= 4; ++c) {
        CAPTURE(a * 100 + b * 10 + c);
        const bool ok = two_multirank_constraint(a, b, c) == TripleStatus::achievable;
        CHECK(seen.count({a, b, c}) == (ok ? 1u : 0u));
      }
}

TEST_CASE("classification is invariant under local invertible maps") {
  std::mt19937_64 rng(55);
  for (Table t : kTables)
    for (const auto& key : exemplar_rows(t)) {
      const PureState s = exemplar(t, key);
      const auto base = classify(s, invariant_only());
      for (int trial = 0; trial < 4; ++trial) {
        CAPTURE(table_name(t));
        CAPTURE(key);
        const auto r = classify(apply_local(qt::random_slocc(s.shape, rng), s), invariant_only());
        CHECK(r.one_multirank == base.one_multirank);
        CHECK(r.two_multirank == base.two_multirank);
        CHECK(r.k_lower == base.k_lower);
        CHECK(r.k_upper == base.k_upper);
        CHECK(r.tangent_flag == base.tangent_flag);
        CHECK(r.separability == base.separability);
      }
    }
}

TEST_CASE("multiranks are bounded by a certified secant index") {
  for (Table t : kTables)
    for (const auto& key : exemplar_rows(t)) {
      const PureState s = exemplar(t, key);
      const auto r = classify(s);
      if (!r.k_upper) continue;
      CAPTURE(key);
      for (int ell = 1; ell <= s.parties() / 2; ++ell) CHECK(multirank(s, ell, RankBackend::exact()).max_rank() <= *r.k_upper);
    }
}

TEST_CASE("separability") {
  auto f = separability(tensor_product(bell(1), w_state(3)), RankBackend::numeric());
  CHECK(f == std::vector<std::vector<int>>{{1, 2}, {3, 4, 5}});
  auto g = separability(permute_parties({1, 3, 2}, tensor_product(basis_state({2}, {1}), bell(1))), RankBackend::numeric());
  CHECK(g == std::vector<std::vector<int>>{{1}, {2, 3}});
  CHECK(separability(ghz(2, 4), RankBackend::numeric()).size() == 1);
}
