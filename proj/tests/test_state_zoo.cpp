#include <doctest.h>

#include <algorithm>
#include <set>

#include "qgeo/flattening.hpp"
#include "qgeo/zoo.hpp"
#include "test_util.hpp"

using namespace qgeo;
using qt::amp;
using qt::code_of;

namespace {

// Builds a state from a predicate on the multi-index, with amplitude 1 where
// it holds.
template <class F>
PureState from_rule(const Shape& sh, F rule) {
  PureState s = zero_state(sh);
  for (Eigen::Index f = 0; f < s.size(); ++f)
    if (rule(multi_index(sh, f))) s.amps(f) = 1.0;
  return s;
}

std::vector<int> nonzeros(const Index& idx) {
  std::vector<int> v;
  for (int x : idx)
    if (x) v.push_back(x);
  return v;
}

int sum(const Index& idx) {
  int t = 0;
  for (int x : idx) t += x;
  return t;
}

PureState l_oracle(int d, int n) {
  return from_rule(Shape(n, d), [&](const Index& i) { return sum(i) == d - 1; });
}

PureState m_oracle(int d, int n) {
  return from_rule(Shape(n, d), [&](const Index& i) { return sum(i) == d - 1 && nonzeros(i).size() <= 2; });
}

PureState mprime_oracle(int d, int n) {
  return from_rule(Shape(n, d), [&](const Index& i) {
    auto nz = nonzeros(i);
    if (nz.size() == 1) return nz[0] == d - 1;
    return nz.size() == 2 && nz[0] == nz[1] && nz[0] <= d - 2;
  });
}

PureState n_oracle(int d, int n) {
  return from_rule(Shape(n, d), [&](const Index& i) {
    Index head(i.begin(), i.end() - 1);
    auto nz = nonzeros(head);
    if (nz.size() > 1) return false;
    const int j = nz.empty() ? 0 : nz[0];
    return i.back() == d - 1 - j;
  });
}

std::set<std::string> support(const PureState& s) {
  std::set<std::string> out;
  for (Eigen::Index f = 0; f < s.size(); ++f)
    if (s.amps(f) != cd(0)) {
      std::string k;
      for (int x : multi_index(s.shape, f)) k += char('0' + x);
      out.insert(k);
    }
  return out;
}

Shape table_for_shape_oracle(Table t) {
  switch (t) {
    case Table::T2_1: return {2, 2, 2};
    case Table::T4_1: return {2, 2, 2, 2};
    case Table::T5_1: return {3, 3, 3};
    case Table::T5_2: return {3, 3};
    case Table::T5qubit: return {2, 2, 2, 2, 2};
  }
  return {};
}

}  // namespace

TEST_CASE("GHZ and W supports") {
  CHECK(support(ghz(3, 3)) == std::set<std::string>{"000", "111", "222"});
  CHECK(support(w_state(2)) == std::set<std::string>{"01", "10"});
  CHECK(support(w_state(4)) == std::set<std::string>{"0001", "0010", "0100", "1000"});
  CHECK(support(ghz_zeta(4, 3, 2)) == std::set<std::string>{"000", "111", "222"});
  CHECK(code_of([] { ghz_zeta(3, 3, 3); }) == "BadParams");
}

TEST_CASE("L(3,3) is Y3") {
  CHECK(support(l_state(3, 3)) == std::set<std::string>{"002", "020", "200", "011", "101", "110"});
  CHECK(max_abs_diff(y_state(3), l_state(3, 3)) == 0.0);
}

TEST_CASE("L, M, M', N, N' match their defining sums") {
  for (int d = 2; d <= 5; ++d)
    for (int n = 2; n <= 4; ++n) {
      CAPTURE(d);
      CAPTURE(n);
      CHECK(max_abs_diff(l_state(d, n), l_oracle(d, n)) == 0.0);
      CHECK(max_abs_diff(m_state(d, n), m_oracle(d, n)) == 0.0);
      CHECK(max_abs_diff(n_state(d, n), n_oracle(d, n)) == 0.0);
      if (d >= 3) CHECK(max_abs_diff(mprime_state(d, n), mprime_oracle(d, n)) == 0.0);
    }
}

TEST_CASE("qubit members of the L, M, N families are W") {
  for (int n = 2; n <= 6; ++n) {
    CHECK(max_abs_diff(l_state(2, n), w_state(n)) == 0.0);
    CHECK(max_abs_diff(m_state(2, n), w_state(n)) == 0.0);
    CHECK(max_abs_diff(n_state(2, n), w_state(n)) == 0.0);
  }
  CHECK(max_abs_diff(m_state(3, 3), mprime_state(3, 3)) == 0.0);
}

TEST_CASE("M and M' are related by the local change of basis") {
  for (int d : {3, 4, 5})
    for (int n : {3, 4}) {
      const LocalOperator b = m_to_mprime_basis(d);
      auto t = apply_local(std::vector<LocalOperator>(n, b), m_state(d, n));
      CHECK(max_abs_diff(t, mprime_state(d, n)) < 1e-10);
    }
}

TEST_CASE("N' is N with the last party reversed") {
  for (int d : {2, 3, 4})
    for (int n : {2, 3, 4}) {
      LocalOperator flip = LocalOperator::Zero(d, d);
      for (int j = 0; j < d; ++j) flip(d - 1 - j, j) = 1.0;
      CHECK(max_abs_diff(apply_on(n, flip, n_state(d, n)), nprime_state(d, n)) == 0.0);
    }
}

TEST_CASE("Dicke states") {
  for (int n = 2; n <= 6; ++n)
    for (int l = 0; l <= n; ++l) {
      auto s = dicke(n, l);
      auto expect = from_rule(Shape(n, 2), [&](const Index& i) { return sum(i) == l; });
      CHECK(max_abs_diff(s, expect) == 0.0);
    }
  auto d111 = dicke_qudit(3, {1, 1, 1});
  CHECK(support(d111) == std::set<std::string>{"012", "021", "102", "120", "201", "210"});
  CHECK(max_abs_diff(dicke(4, 1), w_state(4)) == 0.0);
}

TEST_CASE("Bell and cluster states") {
  CHECK(support(bell(1)) == std::set<std::string>{"00", "11"});
  CHECK(amp(bell(2), "11") == cd(-1));
  CHECK(support(bell(3)) == std::set<std::string>{"01", "10"});
  CHECK(amp(bell(4), "10") == cd(-1));
  auto c = cluster4(1);
  CHECK(amp(c, "0000") == cd(0.5));
  CHECK(amp(c, "0011") == cd(0.5));
  CHECK(amp(c, "1100") == cd(0.5));
  CHECK(amp(c, "1111") == cd(-0.5));
  CHECK(support(c).size() == 4);
  CHECK(support(cluster4(2)) == std::set<std::string>{"0000", "0101", "1010", "1111"});
  CHECK(support(cluster4(3)) == std::set<std::string>{"0000", "0110", "1001", "1111"});
}

TEST_CASE("X3, X4, W-type additions and the separable curve") {
  CHECK(max_abs_diff(x3(), w_state(3, 3) + basis_state({3, 3, 3}, {2, 2, 2})) == 0.0);
  CHECK(max_abs_diff(x4(), w_state(4) + basis_state({2, 2, 2, 2}, {1, 1, 1, 1})) == 0.0);
  CHECK(support(m_nr(4, 2)) == std::set<std::string>{"0000", "0011", "1111"});
  CHECK(support(n_nt(4, 1)) == std::set<std::string>{"0001", "0010", "0100", "1000"});

  const cd eps = 0.25;
  auto sc = separable_curve(3, eps);
  for (Eigen::Index f = 0; f < sc.size(); ++f) CHECK(std::abs(sc.amps(f) - std::pow(eps, sum(multi_index(sc.shape, f)))) < 1e-15);
}

TEST_CASE("G3 and its pencil") {
  auto g = g3();
  CHECK(g.shape == Shape{3, 3, 3});
  CHECK(g.is_gaussian_integer());
  auto p = g3_pencil(2.0);
  Eigen::VectorXcd a(3), b(3), c(3);
  a << 0, 1, 1;
  b << 1, 0, 1;
  c << 1, 1, 0;
  PureState extra = tensor_product(tensor_product(make_tensor({3}, a), make_tensor({3}, b)), make_tensor({3}, c));
  CHECK(max_abs_diff(p, g + 2.0 * extra) == 0.0);
}

TEST_CASE("make_named dispatch") {
  StateKind k;
  k.name = "l";
  k.params = {{"d", 3.0}, {"n", 3.0}};
  CHECK(max_abs_diff(make_named(k), l_state(3, 3)) == 0.0);
  k.name = "ghz";
  CHECK(max_abs_diff(make_named(k), ghz(3, 3)) == 0.0);
  k.name = "dicke";
  k.params = {{"n", 4.0}, {"l", 2.0}};
  CHECK(max_abs_diff(make_named(k), dicke(4, 2)) == 0.0);
  k.name = "nosuch";
  CHECK(code_of([&] { make_named(k); }) == "UnknownKind");
  CHECK(code_of([] { l_state(1, 3); }) == "BadParams");
  CHECK(code_of([] { mprime_state(2, 3); }) == "BadParams");
  for (const char* name : {"ghz", "w", "dicke", "l", "m", "mprime", "n", "nprime", "cluster4", "x3", "g3"}) {
    StateKind s;
    s.name = name;
    s.params = {{"d", 3.0}, {"n", 3.0}};
    CHECK_NOTHROW(make_named(s));
  }
}

TEST_CASE("table exemplars") {
  CHECK(max_abs_diff(exemplar(Table::T2_1, "GHZ"), ghz(2, 3)) == 0.0);
  CHECK(max_abs_diff(exemplar(Table::T4_1, "Cl1"), cluster4(1)) == 0.0);
  auto r = exemplar(Table::T5_1, "(223)");
  CHECK(multirank(r, 1, RankBackend::exact()).canonical(3) == "(223)");
  CHECK(code_of([] { exemplar(Table::T2_1, "nope"); }) == "UnknownRow");
  for (Table t : {Table::T2_1, Table::T4_1, Table::T5_1, Table::T5_2, Table::T5qubit})
    for (const auto& key : exemplar_rows(t)) {
      CAPTURE(key);
      auto s = exemplar(t, key);
      CHECK_FALSE(s.is_zero());
      CHECK(table_for_shape_oracle(t) == s.shape);
    }
  CHECK(parse_table("T4.1") == Table::T4_1);
  CHECK(table_name(Table::T5_1) == "T5.1");
}
