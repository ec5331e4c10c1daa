#include "qgeo/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "qgeo/errors.hpp"

namespace qgeo {

namespace {

void need(bool ok, const std::string& what) {
  if (!ok) fail("BadParams", what);
}

Shape cube(int d, int n) { return Shape(n, d); }

// Fills amplitude 1 wherever pred(index) holds.
PureState where(const Shape& shape, const std::function<bool(const Index&)>& pred) {
  PureState s = zero_state(shape);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (pred(multi_index(shape, i))) s.amps(i) = 1.0;
  return s;
}

PureState from_bits(const std::vector<std::pair<std::string, cd>>& terms, int d = 2) {
  const Shape shape = cube(d, static_cast<int>(terms.front().first.size()));
  PureState s = zero_state(shape);
  for (const auto& [bits, c] : terms) {
    Index idx(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) idx[i] = bits[i] - '0';
    s.amps(flat_index(shape, idx)) += c;
  }
  return s;
}

int count_nonzero(const Index& idx) {
  return static_cast<int>(std::count_if(idx.begin(), idx.end(), [](int v) { return v != 0; }));
}

int index_sum(const Index& idx) { return std::accumulate(idx.begin(), idx.end(), 0); }

PureState ket(int d, int v) {
  PureState s = zero_state({d});
  s.amps(v) = 1.0;
  return s;
}

PureState product_of(const std::vector<PureState>& parts) {
  PureState s = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) s = tensor_product(s, parts[i]);
  return s;
}

// Places `core` on the parties not listed in `single` (1-based, ascending)
// and |0> of dimension d on each listed party.
PureState embed_with_zeros(const PureState& core, const std::vector<int>& single, int d = 2) {
  const int n = core.parties() + static_cast<int>(single.size());
  PureState s = core;
  for (std::size_t k = 0; k < single.size(); ++k) s = tensor_product(s, ket(d, 0));
  // s has core parties first, then the singles; move them into place.
  std::vector<int> perm(n);
  int next_core = 1, next_single = core.parties() + 1;
  for (int p = 1; p <= n; ++p) {
    if (std::find(single.begin(), single.end(), p) != single.end())
      perm[p - 1] = next_single++;
    else
      perm[p - 1] = next_core++;
  }
  return permute_parties(perm, s);
}

std::vector<std::vector<int>> pairs_of(int n) {
  std::vector<std::vector<int>> out;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) out.push_back({a, b});
  return out;
}

std::vector<int> complement(const std::vector<int>& set, int n) {
  std::vector<int> out;
  for (int p = 1; p <= n; ++p)
    if (std::find(set.begin(), set.end(), p) == set.end()) out.push_back(p);
  return out;
}

}  // namespace

PureState ghz(int d, int n) {
  need(d >= 1 && n >= 1, "ghz needs d >= 1, n >= 1");
  return where(cube(d, n), [](const Index& i) {
    return std::all_of(i.begin(), i.end(), [&](int v) { return v == i[0]; });
  });
}

PureState ghz_zeta(int d, int n, int zeta) {
  need(zeta >= 1 && zeta <= d - 1, "ghz_zeta needs 1 <= zeta <= d-1");
  return where(cube(d, n), [zeta](const Index& i) {
    return i[0] <= zeta && std::all_of(i.begin(), i.end(), [&](int v) { return v == i[0]; });
  });
}

PureState w_state(int n, int d, int alpha, int beta) {
  need(n >= 1 && d >= 2, "w needs n >= 1, d >= 2");
  need(alpha != beta && alpha >= 0 && beta >= 0 && alpha < d && beta < d, "w labels out of range");
  return where(cube(d, n), [=](const Index& i) {
    const auto b = std::count(i.begin(), i.end(), beta);
    const auto a = std::count(i.begin(), i.end(), alpha);
    return b == 1 && a == static_cast<long>(i.size()) - 1;
  });
}

PureState dicke(int n, int l) {
  need(n >= 1 && l >= 0 && l <= n, "dicke needs 0 <= l <= n");
  return where(cube(2, n), [l](const Index& i) { return index_sum(i) == l; });
}

PureState dicke_qudit(int n, const std::vector<int>& excitation) {
  need(!excitation.empty(), "excitation vector is empty");
  need(std::accumulate(excitation.begin(), excitation.end(), 0) == n, "excitations must sum to n");
  for (int j : excitation) need(j >= 0, "negative excitation");
  const int d = static_cast<int>(excitation.size());
  return where(cube(d, n), [&](const Index& i) {
    for (int v = 0; v < d; ++v)
      if (std::count(i.begin(), i.end(), v) != excitation[v]) return false;
    return true;
  });
}

PureState bell(int which) {
  switch (which) {
    case 1: return from_bits({{"00", 1.0}, {"11", 1.0}});
    case 2: return from_bits({{"00", 1.0}, {"11", -1.0}});
    case 3: return from_bits({{"01", 1.0}, {"10", 1.0}});
    case 4: return from_bits({{"01", 1.0}, {"10", -1.0}});
  }
  fail("BadParams", "bell index must be 1..4");
}

PureState cluster4(int i) {
  static const char* mid[3][2] = {{"0011", "1100"}, {"0101", "1010"}, {"0110", "1001"}};
  need(i >= 1 && i <= 3, "cluster4 index must be 1..3");
  return from_bits({{"0000", 0.5}, {mid[i - 1][0], 0.5}, {mid[i - 1][1], 0.5}, {"1111", -0.5}});
}

PureState l_state(int d, int n) {
  need(d >= 2 && n >= 2, "L needs d >= 2, n >= 2");
  return where(cube(d, n), [d](const Index& i) { return index_sum(i) == d - 1; });
}

PureState m_state(int d, int n) {
  need(d >= 2 && n >= 2, "M needs d >= 2, n >= 2");
  return where(cube(d, n), [d](const Index& i) {
    const int nz = count_nonzero(i);
    if (index_sum(i) != d - 1) return false;
    return nz == 1 || nz == 2;
  });
}

PureState mprime_state(int d, int n) {
  need(d >= 3 && n >= 2, "M' needs d >= 3, n >= 2");
  return where(cube(d, n), [d](const Index& i) {
    const int nz = count_nonzero(i);
    if (nz == 1) return index_sum(i) == d - 1;
    if (nz != 2) return false;
    int a = -1, b = -1;
    for (int v : i)
      if (v) (a < 0 ? a : b) = v;
    return a == b && a <= d - 2;
  });
}

PureState n_state(int d, int n) {
  need(d >= 2 && n >= 2, "N needs d >= 2, n >= 2");
  return where(cube(d, n), [d](const Index& i) {
    const int last = i.back();
    int nz_front = 0, j = 0;
    for (std::size_t k = 0; k + 1 < i.size(); ++k)
      if (i[k]) ++nz_front, j = i[k];
    if (nz_front == 0) return last == d - 1;
    return nz_front == 1 && last == d - j - 1;
  });
}

PureState nprime_state(int d, int n) {
  LocalOperator flip = LocalOperator::Zero(d, d);
  for (int j = 0; j < d; ++j) flip(d - j - 1, j) = 1.0;
  return apply_on(n, flip, n_state(d, n));
}

PureState y_state(int n) { return l_state(3, n); }

PureState x3(int alpha, int beta, int gamma) {
  need(alpha != gamma && beta != gamma, "x3 labels must differ");
  PureState s = w_state(3, 3, alpha, beta);
  s.amps(flat_index(s.shape, {gamma, gamma, gamma})) += 1.0;
  return s;
}

PureState g3() {
  PureState s = ghz(3, 3);
  s.amps.array() += 1.0;  // |w1 w1 w1> has every amplitude equal to 1
  return s;
}

PureState g3_pencil(cd t) {
  const PureState a = make_tensor({3}, std::vector<cd>{0, 1, 1});
  const PureState b = make_tensor({3}, std::vector<cd>{1, 0, 1});
  const PureState c = make_tensor({3}, std::vector<cd>{1, 1, 0});
  return g3() + t * product_of({a, b, c});
}

PureState g_nr(int n, int r, cd alpha, cd beta, cd gamma, cd delta) {
  need(n >= 2 && r >= 1 && r <= n - 1, "G_n^r needs 1 <= r <= n-1");
  const std::string zr(r, '0'), or_(r, '1'), zs(n - r, '0'), os(n - r, '1');
  return from_bits({{zr + zs, alpha}, {zr + os, beta}, {or_ + zs, gamma}, {or_ + os, delta}});
}

PureState m_nr(int n, int r) {
  need(n >= 2 && r >= 0 && r <= n, "M_n^r needs 0 <= r <= n");
  PureState s = ghz(2, n);
  Index idx(n, 1);
  std::fill(idx.begin(), idx.begin() + r, 0);
  s.amps(flat_index(s.shape, idx)) += 1.0;
  return s;
}

PureState n_nt(int n, int t) {
  need(n >= 2 && t >= 0 && t <= n, "N_n^t needs 0 <= t <= n");
  PureState s = w_state(n);
  Index idx(n, 0);
  std::fill(idx.begin(), idx.begin() + t, 1);
  s.amps(flat_index(s.shape, idx)) += 1.0;
  return s;
}

PureState m4(cd alpha, cd beta, cd gamma) {
  return from_bits({{"0000", alpha}, {"0011", beta}, {"1111", gamma}});
}

PureState x4() {
  PureState s = w_state(4);
  s.amps(15) += 1.0;
  return s;
}

PureState nonsymmetric_persistent(cd alpha, cd beta, int sign) {
  need(sign == 1 || sign == -1, "sign must be +1 or -1");
  const cd mix = alpha + static_cast<double>(sign) * beta;
  return from_bits({{"0011", alpha * alpha},
                    {"0101", beta * beta},
                    {"0110", mix * mix},
                    {"1001", 1.0},
                    {"1010", 1.0},
                    {"1100", 1.0}});
}

PureState separable_curve(int n, cd eps) {
  need(n >= 1, "n must be positive");
  const PureState v = make_tensor({2}, std::vector<cd>{1.0, eps});
  return product_of(std::vector<PureState>(n, v));
}

LocalOperator m_to_mprime_basis(int d) {
  LocalOperator a = LocalOperator::Identity(d, d);
  const double h = 1.0 / std::sqrt(2.0);
  const cd i(0, 1);
  for (int j = 1; j <= (d - 2) / 2; ++j) {
    const int k = d - j - 1;
    a(j, j) = h;
    a(k, j) = i * h;
    a(j, k) = h;
    a(k, k) = -i * h;
  }
  return a;
}

int StateKind::get_int(const std::string& key, int fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second.real();
  if (it->second.imag() != 0.0 || std::floor(v) != v) fail("BadParams", key + " must be an integer");
  return static_cast<int>(v);
}

cd StateKind::get(const std::string& key, cd fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

PureState make_named(const StateKind& k) {
  const std::string& s = k.name;
  const int d = k.get_int("d", 2);
  const int n = k.get_int("n", 3);
  if (s == "ghz") return ghz(d, n);
  if (s == "ghz_zeta") return ghz_zeta(d, n, k.get_int("zeta", 1));
  if (s == "w") return w_state(n, d, k.get_int("alpha", 0), k.get_int("beta", 1));
  if (s == "dicke") {
    if (!k.excitation.empty()) return dicke_qudit(n, k.excitation);
    return dicke(n, k.get_int("l", 1));
  }
  if (s == "dicke_qudit") return dicke_qudit(n, k.excitation);
  if (s == "bell") return bell(k.get_int("i", 1));
  if (s == "cluster4") return cluster4(k.get_int("i", 1));
  if (s == "l") return l_state(d, n);
  if (s == "m") return m_state(d, n);
  if (s == "mprime") return mprime_state(d, n);
  if (s == "n") return n_state(d, n);
  if (s == "nprime") return nprime_state(d, n);
  if (s == "y") return y_state(n);
  if (s == "x3") return x3(k.get_int("alpha", 0), k.get_int("beta", 1), k.get_int("gamma", 2));
  if (s == "x4") return x4();
  if (s == "g3") return g3();
  if (s == "g3_pencil") return g3_pencil(k.get("t", 2.0));
  if (s == "g_nr")
    return g_nr(n, k.get_int("r", 2), k.get("alpha", 1.0), k.get("beta", 1.0), k.get("gamma", 1.0),
                k.get("delta", 2.0));
  if (s == "m_nr") return m_nr(n, k.get_int("r", 2));
  if (s == "n_nt") return n_nt(n, k.get_int("t", 2));
  if (s == "m4") return m4(k.get("alpha", 1.0), k.get("beta", 1.0), k.get("gamma", 1.0));
  if (s == "nonsymmetric")
    return nonsymmetric_persistent(k.get("alpha", 1.0), k.get("beta", 1.0), k.get_int("sign", 1));
  if (s == "separable_curve") return separable_curve(n, k.get("eps", 0.5));
  fail("UnknownKind", s);
}

Table parse_table(const std::string& name) {
  if (name == "T2.1") return Table::T2_1;
  if (name == "T4.1") return Table::T4_1;
  if (name == "T5.1") return Table::T5_1;
  if (name == "T5.2") return Table::T5_2;
  if (name == "T5qubit") return Table::T5qubit;
  fail("UnknownTable", name);
}

std::string table_name(Table t) {
  switch (t) {
    case Table::T2_1: return "T2.1";
    case Table::T4_1: return "T4.1";
    case Table::T5_1: return "T5.1";
    case Table::T5_2: return "T5.2";
    case Table::T5qubit: return "T5qubit";
  }
  return "?";
}

namespace {

// Splits "B_GHZ3_2" into ("B_GHZ3", 2); returns 0 when there is no suffix.
std::pair<std::string, int> split_suffix(const std::string& key) {
  const auto pos = key.rfind('_');
  if (pos == std::string::npos || pos + 1 >= key.size()) return {key, 0};
  const std::string tail = key.substr(pos + 1);
  if (!std::all_of(tail.begin(), tail.end(), ::isdigit)) return {key, 0};
  return {key.substr(0, pos), std::stoi(tail)};
}

PureState row_t21(const std::string& key) {
  if (key == "Sep") return from_bits({{"000", 1.0}});
  if (key == "B1") return from_bits({{"000", 1.0}, {"011", 1.0}});
  if (key == "B2") return from_bits({{"000", 1.0}, {"101", 1.0}});
  if (key == "B3") return from_bits({{"000", 1.0}, {"110", 1.0}});
  if (key == "W") return w_state(3);
  if (key == "GHZ") return ghz(2, 3);
  fail("UnknownRow", key);
}

PureState row_t41(const std::string& key) {
  const auto [base, i] = split_suffix(key);
  if (key == "Sep") return from_bits({{"0000", 1.0}});
  if (key == "GHZ4") return ghz(2, 4);
  if (key == "W4") return w_state(4);
  if (base == "B_GHZ3" && i >= 1 && i <= 4) return embed_with_zeros(ghz(2, 3), {i});
  if (base == "B_W3" && i >= 1 && i <= 4) return embed_with_zeros(w_state(3), {i});
  if (base == "T" && i >= 1 && i <= 6) {
    const auto pair = pairs_of(4)[i - 1];
    return embed_with_zeros(bell(), complement(pair, 4));
  }
  if (base == "BB" && i >= 1 && i <= 3) {
    const std::vector<int> first{1, i + 1};
    const auto rest = complement(first, 4);
    // Bell(first) x Bell(rest), then reorder into parties 1..4.
    const PureState s = tensor_product(bell(), bell());
    std::vector<int> at{first[0], first[1], rest[0], rest[1]};
    std::vector<int> perm(4);
    for (int k = 0; k < 4; ++k) perm[at[k] - 1] = k + 1;
    return permute_parties(perm, s);
  }
  if (key == "Cl1" || key == "(244)") return cluster4(1);
  if (key == "Cl2" || key == "(424)") return cluster4(2);
  if (key == "Cl3" || key == "(442)") return cluster4(3);
  if (key == "(344)") return cluster4(1) + from_bits({{"0101", 1.0}});
  if (key == "(434)") return cluster4(2) + from_bits({{"0110", 1.0}});
  if (key == "(443)") return cluster4(3) + from_bits({{"0011", 1.0}});
  if (key == "(444)") return cluster4(1) + from_bits({{"0101", 1.0}, {"1010", 1.0}});
  if (key == "(333)") return dicke(4, 2);
  if (key == "(233)") return ghz(2, 4) + from_bits({{"0011", 1.0}});
  if (key == "(323)") return ghz(2, 4) + from_bits({{"0101", 1.0}});
  if (key == "(332)") return ghz(2, 4) + from_bits({{"0110", 1.0}});
  if (key == "(333)'") return x4();
  if (key == "(233)'") return w_state(4) + from_bits({{"0011", 1.0}});
  if (key == "(323)'") return w_state(4) + from_bits({{"0101", 1.0}});
  if (key == "(332)'") return w_state(4) + from_bits({{"0110", 1.0}});
  fail("UnknownRow", key);
}

PureState row_t51(const std::string& key) {
  const auto [base, i] = split_suffix(key);
  auto q = [](const std::string& t) { return from_bits({{t, 1.0}}, 3); };
  const PureState g1 = q("000") + q("111");
  if (key == "Sep") return q("000");
  if (key == "GHZ3(1)") return g1;
  if (key == "W3") return w_state(3, 3);
  if (key == "GHZ3(2)") return ghz(3, 3);
  if (base == "B(1)" && i >= 1 && i <= 3) return embed_with_zeros(ghz_zeta(3, 2, 1), {i}, 3);
  if (base == "B(2)" && i >= 1 && i <= 3) return embed_with_zeros(ghz(3, 2), {i}, 3);
  if (key == "(233)") return g1 + q("022");
  if (key == "(323)") return g1 + q("202");
  if (key == "(332)") return g1 + q("220");
  if (key == "(223)") return g1 + q("012");
  if (key == "(232)") return g1 + q("021");
  if (key == "(322)") return g1 + q("201");
  if (key == "(333)'3" || key == "X3") return x3();
  if (key == "Y3") return y_state(3);
  if (key == "(233)'") return w_state(3, 3) + q("022");
  if (key == "(323)'") return w_state(3, 3) + q("202");
  if (key == "(332)'") return w_state(3, 3) + q("220");
  if (key == "(333)4") return q("000") + q("011") + q("122") + q("221");
  if (key == "G3") return g3();
  if (key == "D3(111)") return dicke_qudit(3, {1, 1, 1});
  if (key == "(333)'4") return q("010") + q("100") + q("112") + q("201") + q("222");
  if (key == "(333)5") return g3_pencil(2.0);
  fail("UnknownRow", key);
}

PureState row_t52(const std::string& key) {
  if (key == "Sep") return from_bits({{"00", 1.0}}, 3);
  if (key == "GHZ2(1)") return ghz_zeta(3, 2, 1);
  if (key == "GHZ2(2)") return ghz(3, 2);
  fail("UnknownRow", key);
}

PureState row_t5q(const std::string& key) {
  const auto [base, i] = split_suffix(key);
  if (key == "Sep") return from_bits({{"00000", 1.0}});
  if (key == "GHZ5") return ghz(2, 5);
  if (key == "W5") return w_state(5);
  if (base == "B_GHZ4" && i >= 1 && i <= 5) return embed_with_zeros(ghz(2, 4), {i});
  if (base == "B_W4" && i >= 1 && i <= 5) return embed_with_zeros(w_state(4), {i});
  if (base == "T_GHZ3" && i >= 1 && i <= 10) return embed_with_zeros(ghz(2, 3), pairs_of(5)[i - 1]);
  if (base == "T_W3" && i >= 1 && i <= 10) return embed_with_zeros(w_state(3), pairs_of(5)[i - 1]);
  if (base == "Q" && i >= 1 && i <= 10) return embed_with_zeros(bell(), complement(pairs_of(5)[i - 1], 5));
  if (key == "G5_2") return g_nr(5, 2);
  fail("UnknownRow", key);
}

}  // namespace

PureState exemplar(Table table, const std::string& row_key) {
  switch (table) {
    case Table::T2_1: return row_t21(row_key);
    case Table::T4_1: return row_t41(row_key);
    case Table::T5_1: return row_t51(row_key);
    case Table::T5_2: return row_t52(row_key);
    case Table::T5qubit: return row_t5q(row_key);
  }
  fail("UnknownRow", row_key);
}

std::vector<std::string> exemplar_rows(Table table) {
  std::vector<std::string> rows;
  auto indexed = [&](const std::string& base, int count) {
    for (int i = 1; i <= count; ++i) rows.push_back(base + "_" + std::to_string(i));
  };
  switch (table) {
    case Table::T2_1:
      rows = {"Sep", "B1", "B2", "B3", "W", "GHZ"};
      break;
    case Table::T4_1:
      rows = {"Sep", "GHZ4", "W4"};
      indexed("B_GHZ3", 4);
      indexed("B_W3", 4);
      indexed("T", 6);
      for (const char* r : {"(333)", "(332)", "(323)", "(233)", "(333)'", "(332)'", "(323)'", "(233)'",
                            "(444)", "(443)", "(434)", "(344)", "(442)", "(424)", "(244)"})
        rows.push_back(r);
      indexed("BB", 3);
      break;
    case Table::T5_1:
      rows = {"Sep", "GHZ3(1)", "W3", "GHZ3(2)"};
      indexed("B(1)", 3);
      for (const char* r : {"(332)", "(323)", "(233)", "(322)", "(232)", "(223)"}) rows.push_back(r);
      indexed("B(2)", 3);
      for (const char* r : {"X3", "Y3", "(332)'", "(323)'", "(233)'", "(333)4", "G3", "D3(111)", "(333)'4",
                            "(333)5"})
        rows.push_back(r);
      break;
    case Table::T5_2:
      rows = {"Sep", "GHZ2(1)", "GHZ2(2)"};
      break;
    case Table::T5qubit:
      rows = {"Sep", "GHZ5", "W5"};
      indexed("B_GHZ4", 5);
      indexed("B_W4", 5);
      indexed("T_GHZ3", 10);
      indexed("T_W3", 10);
      indexed("Q", 10);
      rows.push_back("G5_2");
      break;
  }
  return rows;
}

}  // namespace qgeo
