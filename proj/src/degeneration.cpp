#include "qgeo/degeneration.hpp"

#include <algorithm>
#include <cmath>

#include "qgeo/errors.hpp"
#include "qgeo/exact.hpp"
#include "qgeo/zoo.hpp"

namespace qgeo {

LaurentScalar::LaurentScalar(cd c, int exponent) {
  if (c != cd(0)) coeffs[exponent] = c;
}

cd LaurentScalar::eval(double delta) const {
  cd v = 0;
  for (const auto& [e, c] : coeffs) v += c * std::pow(delta, e);
  return v;
}

LaurentScalar operator+(const LaurentScalar& a, const LaurentScalar& b) {
  LaurentScalar r = a;
  for (const auto& [e, c] : b.coeffs) {
    const cd v = r.coeffs[e] + c;
    if (v == cd(0))
      r.coeffs.erase(e);
    else
      r.coeffs[e] = v;
  }
  return r;
}

LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b) {
  LaurentScalar r;
  for (const auto& [ea, ca] : a.coeffs)
    for (const auto& [eb, cb] : b.coeffs) r = r + LaurentScalar(ca * cb, ea + eb);
  return r;
}

LaurentOperator::LaurentOperator(int r, int c, int q) : rows(r), cols(c), entries(r * c), eps_power(q) {
  if (q < 1) fail("BadParams", "eps power must be positive");
}

LaurentOperator LaurentOperator::constant(const Eigen::MatrixXcd& m, int q) {
  LaurentOperator op(static_cast<int>(m.rows()), static_cast<int>(m.cols()), q);
  for (int i = 0; i < op.rows; ++i)
    for (int j = 0; j < op.cols; ++j) op.at(i, j) = LaurentScalar(m(i, j));
  return op;
}

LaurentOperator LaurentOperator::diagonal(const std::vector<LaurentScalar>& d, int q) {
  const int n = static_cast<int>(d.size());
  LaurentOperator op(n, n, q);
  for (int i = 0; i < n; ++i) op.at(i, i) = d[i];
  return op;
}

std::map<int, Eigen::MatrixXcd> LaurentOperator::by_exponent() const {
  std::map<int, Eigen::MatrixXcd> out;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (const auto& [e, c] : at(i, j).coeffs) {
        auto it = out.try_emplace(e, Eigen::MatrixXcd::Zero(rows, cols)).first;
        it->second(i, j) = c;
      }
  return out;
}

Eigen::MatrixXcd LaurentOperator::eval(double delta) const {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = at(i, j).eval(delta);
  return m;
}

LaurentOperator operator*(const LaurentOperator& a, const LaurentOperator& b) {
  if (a.cols != b.rows) fail("DimMismatch", "operator product");
  if (a.eps_power != b.eps_power) fail("MixedEpsPower", "operator product");
  LaurentOperator r(a.rows, b.cols, a.eps_power);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j)
      for (int k = 0; k < a.cols; ++k) r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
  return r;
}

LaurentTensor laurent_apply(const std::vector<LaurentOperator>& ops, const LaurentScalar& scale, const PureState& s) {
  if (static_cast<int>(ops.size()) != s.parties()) fail("DimMismatch", "one operator per party expected");
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].cols != s.shape[k]) fail("DimMismatch", "operator for party " + std::to_string(k + 1));
    if (ops[k].eps_power != ops[0].eps_power) fail("MixedEpsPower", "operators use different eps substitutions");
  }
  LaurentTensor cur;
  for (const auto& [e, c] : scale.coeffs) cur.emplace(e, c * s);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    LaurentTensor next;
    const auto parts = ops[k].by_exponent();
    for (const auto& [e, t] : cur)
      for (const auto& [f, m] : parts) {
        PureState piece = apply_on(static_cast<int>(k) + 1, m, t);
        auto it = next.find(e + f);
        if (it == next.end())
          next.emplace(e + f, std::move(piece));
        else
          it->second = it->second + piece;
      }
    cur = std::move(next);
  }
  for (auto it = cur.begin(); it != cur.end();)
    it = it->second.is_zero() ? cur.erase(it) : std::next(it);
  return cur;
}

namespace {

bool exact_inputs(const DegenerationWitness& w) {
  auto rep = [](cd c) { return exact::representable(c); };
  for (const auto& op : w.operators)
    for (const auto& e : op.entries)
      for (const auto& [k, c] : e.coeffs)
        if (!rep(c)) return false;
  for (const auto& [k, c] : w.global_scale.coeffs)
    if (!rep(c)) return false;
  return exact::representable(Eigen::MatrixXcd(w.source.amps)) && exact::representable(Eigen::MatrixXcd(w.target.amps));
}

}  // namespace

DegenerationReport verify_degeneration(const DegenerationWitness& w) {
  DegenerationReport rep;
  LaurentTensor lt;
  try {
    lt = laurent_apply(w.operators, w.global_scale, w.source);
  } catch (const Error& e) {
    rep.message = e.what();
    return rep;
  }
  rep.exact = exact_inputs(w);
  const double tol = rep.exact ? 0.0 : 1e-10 * std::max(1.0, w.target.norm());
  for (auto it = lt.begin(); it != lt.end();)
    it = it->second.is_zero(tol) ? lt.erase(it) : std::next(it);
  if (lt.empty()) {
    rep.message = "expansion vanishes identically";
    return rep;
  }
  rep.lowest_order = lt.begin()->first;
  rep.error_degree = lt.rbegin()->first - rep.lowest_order;
  const PureState& low = lt.begin()->second;
  if (low.shape != w.target.shape) {
    rep.message = "lowest term has the wrong shape";
    return rep;
  }
  rep.deviation = max_abs_diff(low, w.target);
  rep.lowest_term_matches_target = rep.deviation <= tol;
  rep.ok = rep.lowest_term_matches_target && rep.lowest_order == w.expected_order;
  if (!rep.lowest_term_matches_target)
    rep.message = "lowest term differs from target";
  else if (!rep.ok)
    rep.message = "lowest order " + std::to_string(rep.lowest_order) + " differs from expected " +
                  std::to_string(w.expected_order);
  return rep;
}

namespace {

int param(const std::map<std::string, int>& p, const std::string& key, int fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

cd root(int p, int r) { return std::polar(1.0, 2.0 * M_PI * double(((p % r) + r) % r) / double(r)); }

// Operators whose p-th column is the p-th vector of a weighted sum over a
// GHZ source; the weights sit on the first party.
std::vector<LaurentOperator> column_ops(const std::vector<std::vector<std::vector<LaurentScalar>>>& cols_per_party,
                                        const std::vector<LaurentScalar>& weights, int rows_dim) {
  std::vector<LaurentOperator> ops;
  for (std::size_t k = 0; k < cols_per_party.size(); ++k) {
    const auto& cols = cols_per_party[k];
    LaurentOperator op(rows_dim, static_cast<int>(cols.size()));
    for (std::size_t p = 0; p < cols.size(); ++p)
      for (int i = 0; i < rows_dim; ++i) op.at(i, static_cast<int>(p)) = k == 0 ? weights[p] * cols[p][i] : cols[p][i];
    ops.push_back(op);
  }
  return ops;
}

using Vec = std::vector<LaurentScalar>;

Vec zero_vec(int d) { return Vec(d); }

DegenerationWitness ghz_to_w(int n) {
  if (n < 2) fail("BadParams", "ghz_to_w needs n >= 2");
  const cd c = std::polar(1.0, M_PI / n);
  LaurentOperator a(2, 2, n);
  a.at(0, 0) = LaurentScalar(c, -1);
  a.at(0, 1) = LaurentScalar(1.0, -1);
  a.at(1, 0) = LaurentScalar(1.0, n - 1);
  DegenerationWitness w{"ghz_to_w", "ghz", "w", ghz(2, n), w_state(n), std::vector<LaurentOperator>(n, a),
                        LaurentScalar(std::pow(c, -(n - 1))), 0, n == 4};
  return w;
}

LaurentOperator qubit_singular(cd c, cd b, cd low) {
  LaurentOperator a(2, 2, 4);
  a.at(0, 0) = LaurentScalar(c, -1);
  a.at(0, 1) = LaurentScalar(b, -1);
  a.at(1, 0) = LaurentScalar(low, 3);
  return a;
}

DegenerationWitness x4_to_w() {
  const cd c = std::polar(1.0, M_PI / 4);
  const cd b = std::polar(std::pow(2.0, 2.0 / 3.0), 7 * M_PI / 12);
  return {"x4_to_w", "x4", "w", x4(), w_state(4), std::vector<LaurentOperator>(4, qubit_singular(c, b, 1.0)),
          LaurentScalar(1.0 / (3.0 * c * c * b)), 0, true};
}

DegenerationWitness m4_to_w() {
  const cd c = std::polar(1.0, M_PI / 4);
  const cd b = std::sqrt(0.5 * cd(-std::sqrt(3.0), -1.0));
  // The printed map leaves unequal weights on the W components; a constant
  // diagonal rescaling of |1> on each party evens them out.
  const cd a12 = c * c * c + b * b * c, a34 = c * c * c;
  std::vector<LaurentOperator> ops = {qubit_singular(c, b, 1.0 / a12), qubit_singular(c, b, 1.0 / a12),
                                      qubit_singular(c, b, 1.0 / a34), qubit_singular(c, b, 1.0 / a34)};
  return {"m4_to_w", "m4", "w", m4(), w_state(4), ops, LaurentScalar(1.0), 0, true};
}

DegenerationWitness ghz_to_l(int d, int n) {
  if (d < 2 || n < 2) fail("BadParams", "ghz_to_l needs d >= 2 and n >= 2");
  std::vector<Vec> cols(d, zero_vec(d));
  Vec weights(d);
  for (int p = 0; p < d; ++p) {
    for (int j = 0; j < d; ++j) cols[p][j] = LaurentScalar(root(p * j, d), j);
    weights[p] = LaurentScalar(root(p, d));
  }
  return {"ghz_to_l", "ghz", "l", ghz(d, n), l_state(d, n),
          column_ops(std::vector<std::vector<Vec>>(n, cols), weights, d), LaurentScalar(1.0 / d), d - 1, true};
}

DegenerationWitness l_to_m(int d, int n) {
  if (d < 2 || n < 2) fail("BadParams", "l_to_m needs d >= 2 and n >= 2");
  Vec diag(d, LaurentScalar(1.0, n - 2));
  diag[0] = LaurentScalar(1.0, -2);
  diag[d - 1] = LaurentScalar(1.0, 2 * (n - 1));
  return {"l_to_m", "l", "m", l_state(d, n), m_state(d, n),
          std::vector<LaurentOperator>(n, LaurentOperator::diagonal(diag)), LaurentScalar(1.0), 0, true};
}

DegenerationWitness m_to_n(int d, int n) {
  if (d < 2 || n < 2) fail("BadParams", "m_to_n needs d >= 2 and n >= 2");
  Vec up(d, LaurentScalar(1.0, 1)), down(d, LaurentScalar(1.0, -1));
  up[0] = up[d - 1] = down[0] = down[d - 1] = LaurentScalar(1.0);
  std::vector<LaurentOperator> ops(n - 1, LaurentOperator::diagonal(up));
  ops.push_back(LaurentOperator::diagonal(down));
  return {"m_to_n", "m", "n", m_state(d, n), n_state(d, n), ops, LaurentScalar(1.0), 0, true};
}

DegenerationWitness ghz_to_mprime(int d, int n) {
  if (d < 3 || n < 2) fail("BadParams", "ghz_to_mprime needs d >= 3 and n >= 2");
  std::vector<Vec> cols(d, zero_vec(d));
  Vec weights(d, LaurentScalar(1.0));
  for (int j = 1; j <= d - 2; ++j) {
    Vec& v = cols[j - 1];
    v[0] = LaurentScalar(1.0);
    v[j] = LaurentScalar(1.0, 1);
    v[d - 1] = LaurentScalar(1.0 / (d - 2), 2);
  }
  cols[d - 2][0] = LaurentScalar(1.0);
  for (int j = 1; j <= d - 2; ++j) cols[d - 2][j] = LaurentScalar(1.0, 2);
  weights[d - 2] = LaurentScalar(-1.0, -1);
  cols[d - 1][0] = LaurentScalar(1.0);
  weights[d - 1] = LaurentScalar(-(d - 2.0)) + LaurentScalar(1.0, -1);
  return {"ghz_to_mprime", "ghz", "mprime", ghz(d, n), mprime_state(d, n),
          column_ops(std::vector<std::vector<Vec>>(n, cols), weights, d), LaurentScalar(1.0), 2, true};
}

DegenerationWitness ghz_to_nprime(int d, int n) {
  if (d < 2 || n < 2) fail("BadParams", "ghz_to_nprime needs d >= 2 and n >= 2");
  std::vector<Vec> head(d, zero_vec(d)), last(d, zero_vec(d));
  head[0][0] = LaurentScalar(1.0);
  last[0][0] = LaurentScalar(1.0, 1);
  for (int j = 1; j < d; ++j) {
    head[j][0] = LaurentScalar(1.0);
    head[j][j] = LaurentScalar(1.0, 1);
    last[j][j] = LaurentScalar(1.0);
    last[0][j] = LaurentScalar(-1.0);
  }
  std::vector<std::vector<Vec>> per(n - 1, head);
  per.push_back(last);
  return {"ghz_to_nprime", "ghz", "nprime", ghz(d, n), nprime_state(d, n),
          column_ops(per, Vec(d, LaurentScalar(1.0)), d), LaurentScalar(1.0), 1, true};
}

DegenerationWitness ghz2_to_x3() {
  std::vector<Vec> cols(3, zero_vec(3));
  cols[0][0] = LaurentScalar(1.0);
  cols[0][1] = LaurentScalar(1.0, 1);
  cols[1][2] = LaurentScalar(1.0);
  cols[2][0] = LaurentScalar(1.0);
  const Vec weights = {LaurentScalar(1.0), LaurentScalar(1.0, 1), LaurentScalar(-1.0)};
  return {"ghz2_to_x3", "ghz", "x3", ghz(3, 3), x3(),
          column_ops(std::vector<std::vector<Vec>>(3, cols), weights, 3), LaurentScalar(1.0), 1, true};
}

DegenerationWitness ghz2_to_y3() {
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<Vec> cols(3, zero_vec(3));
  cols[0][0] = LaurentScalar(1.0);
  cols[0][1] = LaurentScalar(h, 1);
  cols[0][2] = LaurentScalar(1.0, 2);
  cols[1][0] = LaurentScalar(1.0);
  cols[1][1] = LaurentScalar(-h, 1);
  cols[2][0] = LaurentScalar(1.0);
  const Vec weights = {LaurentScalar(1.0), LaurentScalar(1.0), LaurentScalar(-2.0)};
  return {"ghz2_to_y3", "ghz", "y", ghz(3, 3), y_state(3),
          column_ops(std::vector<std::vector<Vec>>(3, cols), weights, 3), LaurentScalar(1.0), 2, true};
}

DegenerationWitness sep_to_dicke(int n, int m) {
  if (n < 2 || m < 0 || m + 1 > n) fail("BadParams", "sep_to_dicke needs 0 <= m <= n-1");
  const int r = m + 2;
  std::vector<Vec> cols(r, zero_vec(2));
  Vec weights(r);
  for (int p = 0; p < r; ++p) {
    cols[p][0] = LaurentScalar(1.0);
    cols[p][1] = LaurentScalar(root(p, r), 1);
    weights[p] = LaurentScalar(root(-p * (m + 1), r));
  }
  DegenerationWitness w{"sep_to_dicke", "ghz", "dicke", ghz(r, n), dicke(n, m + 1),
                        column_ops(std::vector<std::vector<Vec>>(n, cols), weights, 2), LaurentScalar(1.0 / r), m + 1,
                        true};
  return w;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"ghz_to_w",      "x4_to_w",       "m4_to_w",    "ghz_to_l",   "l_to_m",      "m_to_n",
          "l_to_n",        "ghz_to_mprime", "ghz_to_nprime", "ghz2_to_x3", "ghz2_to_y3", "sep_to_dicke"};
}

DegenerationWitness catalog_witness(const std::string& name, const std::map<std::string, int>& params) {
  const int d = param(params, "d", 3), n = param(params, "n", name == "ghz_to_w" ? 4 : 3);
  if (name == "ghz_to_w") return ghz_to_w(n);
  if (name == "x4_to_w") return x4_to_w();
  if (name == "m4_to_w") return m4_to_w();
  if (name == "ghz_to_l") return ghz_to_l(d, n);
  if (name == "l_to_m") return l_to_m(d, n);
  if (name == "m_to_n") return m_to_n(d, n);
  if (name == "l_to_n") {
    DegenerationWitness w = compose(l_to_m(d, n), m_to_n(d, n));
    w.name = "l_to_n";
    return w;
  }
  if (name == "ghz_to_mprime") return ghz_to_mprime(d, n);
  if (name == "ghz_to_nprime") return ghz_to_nprime(d, n);
  if (name == "ghz2_to_x3") return ghz2_to_x3();
  if (name == "ghz2_to_y3") return ghz2_to_y3();
  if (name == "sep_to_dicke") return sep_to_dicke(n, param(params, "m", 0));
  fail("UnknownEntry", name);
}

DegenerationWitness identity_witness(const PureState& s) {
  DegenerationWitness w;
  w.name = "identity";
  w.source_kind = w.target_kind = "state";
  w.source = w.target = s;
  for (int d : s.shape) w.operators.push_back(LaurentOperator::constant(Eigen::MatrixXcd::Identity(d, d)));
  return w;
}

DegenerationWitness compose(const DegenerationWitness& first, const DegenerationWitness& second) {
  if (first.operators.size() != second.operators.size()) fail("DimMismatch", "party counts differ");
  DegenerationWitness w;
  w.name = first.name + "+" + second.name;
  w.source_kind = first.source_kind;
  w.target_kind = second.target_kind;
  w.source = first.source;
  w.target = second.target;
  for (std::size_t k = 0; k < first.operators.size(); ++k)
    w.operators.push_back(second.operators[k] * first.operators[k]);
  w.global_scale = first.global_scale * second.global_scale;
  w.expected_order = first.expected_order + second.expected_order;
  w.printed = first.printed && second.printed;
  return w;
}

std::vector<double> numeric_limit_deviations(const DegenerationWitness& w, const std::vector<double>& eps_grid) {
  const int q = w.operators.empty() ? 1 : w.operators[0].eps_power;
  std::vector<double> out;
  for (double eps : eps_grid) {
    const double delta = std::pow(eps, 1.0 / q);
    std::vector<LocalOperator> ops;
    for (const auto& op : w.operators) ops.push_back(op.eval(delta));
    const PureState r = (w.global_scale.eval(delta) / std::pow(delta, w.expected_order)) * apply_local(ops, w.source);
    out.push_back((r.amps - w.target.amps).norm() / w.target.norm());
  }
  return out;
}

double numeric_limit_check(const DegenerationWitness& w, const std::vector<double>& eps_grid) {
  const auto devs = numeric_limit_deviations(w, eps_grid);
  return devs.empty() ? 0.0 : *std::max_element(devs.begin(), devs.end());
}

}  // namespace qgeo
