#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qgeo/classifier.hpp"
#include "qgeo/cli.hpp"
#include "qgeo/degeneration.hpp"
#include "qgeo/exact.hpp"
#include "qgeo/flattening.hpp"
#include "qgeo/invariants.hpp"
#include "qgeo/rank_lab.hpp"
#include "qgeo/zoo.hpp"

using namespace qgeo;

namespace {

// Collects the first few mismatches of one criterion.
struct Check {
  std::vector<std::string> problems;
  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  bool ok() const { return problems.empty(); }
};

std::string sorted_digits(std::string s) {
  std::sort(s.begin(), s.end());
  return s;
}

std::string dn(int d, int n) { return "(d=" + std::to_string(d) + ",n=" + std::to_string(n) + ")"; }

cd gauss(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

void c1(Check& c) {
  const RankBackend ex = RankBackend::exact();
  auto one = [&](const std::string& key) { return multirank(exemplar(Table::T2_1, key), 1, ex).canonical(3); };
  c.require(one("Sep") == "(111)", "Sep one-multirank " + one("Sep"));
  for (const char* b : {"B1", "B2", "B3"})
    c.require(sorted_digits(one(b)) == sorted_digits("(122)"), std::string(b) + " one-multirank " + one(b));
  c.require(one("B1") != one("B2") && one("B2") != one("B3") && one("B1") != one("B3"), "B rows not distinct permutations");
  c.require(one("GHZ") == "(222)", "GHZ one-multirank " + one("GHZ"));
  c.require(one("W") == "(222)", "W one-multirank " + one("W"));
  for (const auto& key : exemplar_rows(Table::T2_1)) {
    const std::string got = classify_3qubit(exemplar(Table::T2_1, key));
    c.require(got == key, "classify_3qubit(" + key + ") = " + got);
  }
}

void c2(Check& c) {
  const RankBackend ex = RankBackend::exact();
  auto two = [&](const PureState& s) { return multirank(s, 2, ex).canonical(4); };
  const std::vector<std::pair<std::string, std::string>> expect = {
      {"Cl1", "(244)"}, {"Cl2", "(424)"}, {"Cl3", "(442)"}, {"(344)", "(344)"}, {"(434)", "(434)"}, {"(443)", "(443)"}};
  for (const auto& [key, sig] : expect) {
    const std::string got = two(exemplar(Table::T4_1, key));
    c.require(got == sig, key + " two-multirank " + got);
  }
  std::set<std::string> bb;
  for (const char* key : {"BB_1", "BB_2", "BB_3"}) {
    const std::string got = two(exemplar(Table::T4_1, key));
    c.require(sorted_digits(got) == sorted_digits("(144)"), std::string(key) + " two-multirank " + got);
    bb.insert(got);
  }
  c.require(bb.size() == 3, "BB rows do not realize all three permutations");
  const std::string d42 = two(dicke(4, 2));
  c.require(d42 == "(333)", "D4^2 two-multirank " + d42);
}

void c3(Check& c) {
  const RankBackend nb = RankBackend::numeric(1e-10);
  std::mt19937_64 rng(2023);
  int forbidden = 0, once = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    PureState s = zero_state({2, 2, 2, 2});
    for (Eigen::Index i = 0; i < s.size(); ++i) s.amps(i) = gauss(rng);
    auto r = multirank(s, 2, nb).canonical_ranks(4);
    const int m = *std::max_element(r.begin(), r.end());
    if (std::count(r.begin(), r.end(), m) < 2) ++once;
    std::sort(r.begin(), r.end());
    if (r == std::vector<int>{1, 3, 3}) ++forbidden;
  }
  c.require(once == 0, std::to_string(once) + " random states with a unique maximum");
  c.require(forbidden == 0, std::to_string(forbidden) + " random states with triple (133)");

  std::set<std::vector<int>> seen;
  for (const auto& key : exemplar_rows(Table::T4_1)) {
    auto r = multirank(exemplar(Table::T4_1, key), 2, RankBackend::exact()).canonical_ranks(4);
    std::sort(r.begin(), r.end());
    seen.insert(r);
  }
  for (int a = 1; a <= 4; ++a)
    for (int b = a; b <= 4; ++b)
      for (int d = b; d <= 4; ++d) {
        const bool achievable = two_multirank_constraint(a, b, d) == TripleStatus::achievable;
        const std::string t = "(" + std::to_string(a) + std::to_string(b) + std::to_string(d) + ")";
        if (achievable) c.require(seen.count({a, b, d}) == 1, "no exemplar realizes " + t);
        else c.require(seen.count({a, b, d}) == 0, "exemplar realizes forbidden " + t);
      }
}

void c4(Check& c) {
  const RankBackend ex = RankBackend::exact();
  for (double t : {2.0, 3.0, -1.0}) {
    const cd det = exact::determinant(koszul_flattening_3qutrit(g3_pencil(t))).to_complex();
    const double want = 2 * t * (1 - t);
    std::ostringstream msg;
    msg << "t=" << t << ": det F = " << det.real() << (det.imag() != 0 ? "+i" + std::to_string(det.imag()) : "")
        << ", expected " << want;
    c.require(std::abs(det - want) < 1e-9, msg.str());
  }
  const int g = koszul_secant_index(ghz(3, 3), ex);
  c.require(g == 3, "koszul_secant_index(GHZ3(2)) = " + std::to_string(g));
  const int d = koszul_secant_index(dicke_qudit(3, {1, 1, 1}), ex);
  c.require(d == 4, "koszul_secant_index(D3(111)) = " + std::to_string(d));
}

void c5(Check& c) {
  auto exact_at = [&](const PureState& s, int want, const std::string& what, bool als) {
    RankOptions opt;
    opt.use_als = als;
    const RankCertificate r = rank_bounds(s, opt);
    c.require(r.exact() && r.lower == want,
              what + ": bounds [" + std::to_string(r.lower) + "," + std::to_string(r.upper) + "], want " + std::to_string(want));
    c.require(r.witness && relative_residual(*r.witness, s) < 1e-10,
              what + ": witness residual " + std::to_string(r.witness ? relative_residual(*r.witness, s) : -1.0));
  };
  for (int n = 2; n <= 6; ++n) exact_at(w_state(n), n, "W_" + std::to_string(n), false);
  for (int d = 2; d <= 4; ++d)
    for (int n = 2; n <= 4; ++n) {
      const int r = (n - 1) * (d - 1) + 1;
      exact_at(l_state(d, n), r, "L" + dn(d, n), false);
      exact_at(n_state(d, n), r, "N" + dn(d, n), false);
      exact_at(m_state(d, n), r, "M" + dn(d, n), n <= 3);
      exact_at(ghz(d, n), d, "GHZ" + dn(d, n), false);
    }
  for (int d = 2; d <= 4; ++d) {
    const auto fit = als_upper_bound(m_state(d, 3), 2 * d - 1);
    c.require(fit.has_value(), "ALS found no fit for M" + dn(d, 3) + " at r=2d-1");
    if (fit) c.require(relative_residual(*fit, m_state(d, 3)) < 1e-10, "ALS residual for M" + dn(d, 3));
  }
}

void c6(Check& c) {
  const RankBackend nb = RankBackend::numeric();
  for (int d = 2; d <= 4; ++d)
    for (int n = 2; n <= 4; ++n) {
      for (const auto& [name, s] : {std::pair<std::string, PureState>{"L", l_state(d, n)}, {"M", m_state(d, n)}, {"N", n_state(d, n)}}) {
        const int f = max_flattening_rank(s, nb);
        c.require(f == d, name + dn(d, n) + " max flattening rank " + std::to_string(f));
      }
      std::vector<std::string> names = {"ghz_to_l", "ghz_to_nprime"};
      if (d >= 3) names.push_back("ghz_to_mprime");
      for (const auto& name : names) {
        const auto w = catalog_witness(name, {{"d", d}, {"n", n}});
        const auto rep = verify_degeneration(w);
        c.require(rep.ok, name + dn(d, n) + " failed: " + rep.message);
        c.require(max_flattening_rank(w.source, nb) == d, name + dn(d, n) + " source is not GHZ(d,n)");
      }
    }
}

void c7(Check& c) {
  for (int d = 2; d <= 4; ++d)
    for (int n : {3, 4})
      for (const char* name : {"l_to_m", "m_to_n"}) {
        const auto rep = verify_degeneration(catalog_witness(name, {{"d", d}, {"n", n}}));
        c.require(rep.ok && rep.lowest_term_matches_target && rep.deviation <= 1e-10, std::string(name) + dn(d, n));
      }
  const auto gw = catalog_witness("ghz_to_w", {{"n", 4}});
  c.require(gw.printed, "ghz_to_w(4) is not the printed witness");
  c.require(verify_degeneration(gw).ok, "ghz_to_w(4)");
  for (const char* name : {"x4_to_w", "m4_to_w"}) {
    const auto rep = verify_degeneration(catalog_witness(name));
    c.require(rep.ok && rep.deviation <= 1e-10, name);
  }
}

void c8(Check& c) {
  for (int d = 2; d <= 4; ++d)
    for (int n = 2; n <= 4; ++n)
      for (const char* name : {"ghz_to_l", "l_to_m", "m_to_n"}) {
        std::ostringstream out, err;
        const int code = cli::run({"degenerate", "--name", name, "--d", std::to_string(d), "--n", std::to_string(n), "--verify"},
                                  out, err);
        const std::string what = std::string(name) + dn(d, n);
        if (code != 0) {
          c.require(false, what + " exit " + std::to_string(code) + " " + err.str());
          continue;
        }
        const auto j = nlohmann::json::parse(out.str());
        c.require(std::abs(j["schmidt_rate_bound"].get<double>() - 1.0) < 1e-12, what + " Schmidt rate bound is not 1");
        c.require(j["rate_one"] == true, what + " not reported as rate one");
        c.require(j["conversion"].get<std::string>().find("by asymptotic SLOCC at rate 1") != std::string::npos,
                  what + " conversion line missing");
      }
}

void c9(Check& c) {
  using K = PersistenceVerdict::Kind;
  for (int n = 2; n <= 6; ++n)
    c.require(persistence_structural(w_state(n)).kind == K::persistent_structural, "W_" + std::to_string(n) + " structural");
  for (int d = 2; d <= 4; ++d)
    for (int n = 2; n <= 4; ++n) {
      c.require(persistence_structural(l_state(d, n)).persistent(), "L" + dn(d, n) + " structural");
      c.require(persistence_structural(m_state(d, n)).persistent(), "M" + dn(d, n) + " structural");
      c.require(persistence_structural(n_state(d, n)).persistent(), "N" + dn(d, n) + " structural");
    }
  c.require(persistence_structural(nonsymmetric_persistent()).persistent(), "nonsymmetric example structural");

  PersistenceOptions opt;
  opt.seed = 7;
  opt.refutation_tries = 64;
  c.require(persistence_randomized(ghz(2, 3), opt).kind == K::not_persistent, "GHZ(2,3) not refuted");
  c.require(persistence_randomized(dicke(4, 2), opt).kind == K::not_persistent, "D4^2 not refuted");

  const auto ws = rank_bounds(direct_sum(w_state(3), w_state(3)));
  c.require(ws.exact() && ws.lower == 6 && ws.lower_provenance == "direct_sum",
            "rk(W3+W3): [" + std::to_string(ws.lower) + "," + std::to_string(ws.upper) + "] via " + ws.lower_provenance);
  for (int d = 2; d <= 3; ++d)
    for (int n = 2; n <= 4; ++n) {
      const PureState s = kronecker_product(ghz(d, n), w_state(n));
      const auto r = rank_bounds(s);
      // the GHZ-product certificate is always recorded; for these states the
      // direct-sum or conciseness bound reaches the same value
      const bool noted = std::find(r.notes.begin(), r.notes.end(), "ghz_product bound " + std::to_string(n * d)) != r.notes.end();
      c.require(r.exact() && r.lower == n * d && noted,
                "rk(GHZ" + dn(d, n) + " x W_n) = [" + std::to_string(r.lower) + "," + std::to_string(r.upper) + "]");
      c.require(ghz_product_rank(d, w_state(n)).rank == n * d, "ghz_product_rank" + dn(d, n));
    }
}

void c10(Check& c) {
  c.require(qubit_family_count(3) == 2 && qubit_family_count(4) == 4 && qubit_family_count(5) == 6, "qubit_family_count");
  c.require(tripartite_generic_rank(3).value == 5, "tripartite_generic_rank(3)");
  const auto e = expected_secant_dim(3, {2, 2, 2, 2});
  c.require(e.value == 13 && e.exceptional, "expected_secant_dim(3,[2,2,2,2])");
  c.require(waring_rank_monomial({2, 2}) == 3, "waring_rank((2,2))");
  c.require(waring_rank_monomial({1, 1, 1}) == 4, "waring_rank((1,1,1))");
  for (int n = 2; n <= 8; ++n)
    for (int l = 1; l <= n / 2; ++l) {
      const auto [r, b] = dicke_rank_brank(n, l);
      c.require(r + b == n + 2, "dicke_rank_brank" + dn(l, n));
    }
}

void c11(Check& c) {
  AlsOptions opt;
  opt.restarts = 32;
  opt.norm_cap = 1e3;
  c.require(!als_upper_bound(w_state(3), 2, opt).has_value(), "ALS returned a rank-2 fit for W3");
  const auto fit = als_upper_bound(w_state(3), 3, opt);
  c.require(fit.has_value() && relative_residual(*fit, w_state(3)) < 1e-8, "ALS found no rank-3 fit for W3");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--known-failures" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) known.insert(std::stoi(tok));
    }
  }

  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"three-qubit multiranks and Table 2.1", c1},
      {"four-qubit two-multirank signatures", c2},
      {"two-multirank theorem", c3},
      {"Koszul certificates", c4},
      {"rank exactness", c5},
      {"border rank of L, M, N", c6},
      {"degeneration chain", c7},
      {"rate-one reports", c8},
      {"persistence suite", c9},
      {"formula regression", c10},
      {"ALS honesty", c11},
  };
  std::vector<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int id = static_cast<int>(i + 1);
    std::cout << (c.ok() ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first;
    std::cout << " (" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << "s)";
    if (!c.ok()) {
      std::cout << ": ";
      for (std::size_t k = 0; k < c.problems.size() && k < 4; ++k) std::cout << (k ? "; " : "") << c.problems[k];
      if (c.problems.size() > 4) std::cout << "; ... " << c.problems.size() - 4 << " more";
      failed.push_back(id);
    }
    std::cout << "\n";
  }

  bool unexpected = false;
  for (int id : failed) unexpected = unexpected || !known.count(id);
  if (!failed.empty()) {
    std::cout << "failed:";
    for (int id : failed) std::cout << " " << id << (known.count(id) ? " (known)" : "");
    std::cout << "\n";
  }
  if (known.empty()) return failed.empty() ? 0 : 1;
  return unexpected ? 1 : 0;
}
