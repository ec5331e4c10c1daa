#include "qgeo/classifier.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "qgeo/errors.hpp"
#include "qgeo/invariants.hpp"
#include "qgeo/rank_lab.hpp"

namespace qgeo {

std::string to_string(TangentFlag f) {
  switch (f) {
    case TangentFlag::secant: return "secant";
    case TangentFlag::tangent: return "tangent";
    case TangentFlag::unknown: return "unknown";
  }
  return "unknown";
}

std::string family_name(int k, bool tangent) {
  if (k <= 1) return "Segre";
  return (tangent ? "tau" : "sigma") + std::to_string(k);
}

namespace {

struct RowSpec {
  std::string key;
  std::string subfamily;  // empty: same as key
  int k;
  bool tangent;
};

std::vector<RowSpec> row_specs(Table t) {
  std::vector<RowSpec> r;
  auto indexed = [&](const std::string& base, int count, int k, bool tan) {
    for (int i = 1; i <= count; ++i) r.push_back({base + "_" + std::to_string(i), "", k, tan});
  };
  switch (t) {
    case Table::T2_1:
      r = {{"Sep", "", 1, false}, {"B1", "", 2, false}, {"B2", "", 2, false},
           {"B3", "", 2, false},  {"W", "", 2, true},   {"GHZ", "", 2, false}};
      break;
    case Table::T4_1:
      r = {{"Sep", "", 1, false}, {"GHZ4", "", 2, false}, {"W4", "", 2, true}};
      indexed("B_GHZ3", 4, 2, false);
      indexed("B_W3", 4, 2, true);
      indexed("T", 6, 2, false);
      for (const char* k : {"(333)", "(332)", "(323)", "(233)"}) r.push_back({k, "", 3, false});
      for (const char* k : {"(333)'", "(332)'", "(323)'", "(233)'"}) r.push_back({k, "", 3, true});
      for (const char* k : {"(444)", "(443)", "(434)", "(344)", "(442)", "(424)", "(244)"})
        r.push_back({k, "", 4, false});
      indexed("BB", 3, 4, false);
      break;
    case Table::T5_1:
      r = {{"Sep", "", 1, false}, {"GHZ3(1)", "", 2, false}, {"W3", "", 2, true},
           {"GHZ3(2)", "", 3, false}};
      indexed("B(1)", 3, 2, false);
      for (const char* k : {"(332)", "(323)", "(233)", "(322)", "(232)", "(223)"}) r.push_back({k, "", 3, false});
      indexed("B(2)", 3, 3, false);
      r.push_back({"X3", "(333)'3", 3, true});
      r.push_back({"Y3", "(333)'3", 3, true});
      for (const char* k : {"(332)'", "(323)'", "(233)'"}) r.push_back({k, "", 3, true});
      r.push_back({"(333)4", "", 4, false});
      r.push_back({"G3", "(333)4", 4, false});
      r.push_back({"D3(111)", "(333)4", 4, false});
      r.push_back({"(333)'4", "", 4, true});
      r.push_back({"(333)5", "", 5, false});
      break;
    case Table::T5_2:
      r = {{"Sep", "", 1, false}, {"GHZ2(1)", "", 2, false}, {"GHZ2(2)", "", 3, false}};
      break;
    case Table::T5qubit:
      r = {{"Sep", "", 1, false}, {"GHZ5", "", 2, false}, {"W5", "", 2, true}};
      indexed("B_GHZ4", 5, 2, false);
      indexed("B_W4", 5, 2, true);
      indexed("T_GHZ3", 10, 2, false);
      indexed("T_W3", 10, 2, true);
      indexed("Q", 10, 2, false);
      r.push_back({"G5_2", "", 4, false});
      break;
  }
  return r;
}

std::vector<TableRow> build_rows(Table t) {
  std::vector<TableRow> rows;
  for (const auto& spec : row_specs(t)) {
    const PureState ex = exemplar(t, spec.key);
    TableRow row;
    row.key = spec.key;
    row.subfamily = spec.subfamily.empty() ? spec.key : spec.subfamily;
    row.k = spec.k;
    row.tangent = spec.tangent;
    const int n = ex.parties();
    row.one_multirank = multirank(ex, 1, RankBackend::exact()).canonical(n);
    if (n >= 4) row.two_multirank = multirank(ex, 2, RankBackend::exact()).canonical(n);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

const std::vector<TableRow>& table_rows(Table t) {
  static std::map<Table, std::vector<TableRow>> cache;
  auto it = cache.find(t);
  if (it == cache.end()) it = cache.emplace(t, build_rows(t)).first;
  return it->second;
}

std::optional<Table> table_for_shape(const Shape& dims) {
  if (dims == Shape{2, 2, 2}) return Table::T2_1;
  if (dims == Shape{2, 2, 2, 2}) return Table::T4_1;
  if (dims == Shape{3, 3, 3}) return Table::T5_1;
  if (dims == Shape{3, 3}) return Table::T5_2;
  if (dims == Shape{2, 2, 2, 2, 2}) return Table::T5qubit;
  return std::nullopt;
}

TripleStatus two_multirank_constraint(int a, int b, int c) {
  std::vector<int> t{a, b, c};
  std::sort(t.begin(), t.end());
  if (t[1] != t[2]) return TripleStatus::forbidden;
  if (t == std::vector<int>{1, 3, 3}) return TripleStatus::forbidden;
  return TripleStatus::achievable;
}

std::vector<std::vector<int>> separability(const PureState& s, const RankBackend& backend) {
  const int n = s.parties();
  if (s.is_zero()) fail("ZeroTensor", "separability of the zero tensor");
  // Parties stay together unless some rank-one cut splits them.
  std::vector<std::vector<bool>> side(n);
  for (unsigned mask = 1; mask + 1 < (1u << n); mask += 2) {
    Partition rows;
    for (int k = 0; k < n; ++k)
      if (mask & (1u << k)) rows.push_back(k + 1);
    if (numerical_rank(matricize(s, rows), backend) != 1) continue;
    for (int k = 0; k < n; ++k) side[k].push_back(mask & (1u << k));
  }
  std::vector<std::vector<int>> blocks;
  std::vector<bool> used(n, false);
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    std::vector<int> b;
    for (int j = i; j < n; ++j)
      if (!used[j] && side[j] == side[i]) {
        used[j] = true;
        b.push_back(j + 1);
      }
    blocks.push_back(b);
  }
  return blocks;
}

std::string classify_3qubit(const PureState& s) {
  if (s.shape != Shape{2, 2, 2}) fail("WrongShape", "three qubits expected");
  if (s.is_zero()) fail("ZeroTensor", "classification of the zero tensor");
  const ThreeQubitInvariants inv = three_qubit_invariants(s);
  const double tol = 1e-9;
  if (inv.tau > tol) return "GHZ";
  const bool bc = inv.c_bc > tol, ac = inv.c_ac > tol, ab = inv.c_ab > tol;
  if (bc && ac && ab) return "W";
  if (bc && !ac && !ab) return "B1";
  if (!bc && ac && !ab) return "B2";
  if (!bc && !ac && ab) return "B3";
  if (!bc && !ac && !ab) return "Sep";
  fail("ConstraintViolation", "concurrence pattern outside the three-qubit classes");
}

namespace {

Eigen::VectorXcd random_vec(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = cd(g(rng), g(rng));
  return v;
}

// Drops unused directions on every party (coordinate selection when the
// unused directions are basis vectors, otherwise an SVD basis) and removes
// parties of dimension one. Rank and border rank are unchanged.
PureState concise_core(const PureState& s, double tol) {
  const RankBackend nb = RankBackend::numeric(tol);
  std::vector<LocalOperator> ops;
  for (int k = 1; k <= s.parties(); ++k) {
    const Eigen::MatrixXcd m = matricize(s, {k});
    const int d = s.dim(k);
    const int r = numerical_rank(m, nb);
    if (r == d) {
      ops.push_back(LocalOperator::Identity(d, d));
      continue;
    }
    std::vector<int> used;
    for (int i = 0; i < d; ++i)
      if (m.row(i).norm() > tol * m.norm()) used.push_back(i);
    LocalOperator p = LocalOperator::Zero(r, d);
    if (static_cast<int>(used.size()) == r) {
      for (int i = 0; i < r; ++i) p(i, used[i]) = 1.0;
    } else {
      const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU);
      p = svd.matrixU().leftCols(r).adjoint();
    }
    ops.push_back(p);
  }
  PureState core = apply_local(ops, s);
  Shape sh;
  for (int d : core.shape)
    if (d > 1) sh.push_back(d);
  if (sh.empty()) sh.push_back(1);
  core.shape = sh;
  return core;
}

enum class PencilVerdict { rank_d, tangent_brank_d, none };

// A perturbed Jordan block splits into nearby simple eigenvalues whose
// eigenvectors are almost parallel, so the assembled eigenbasis is also
// required to be well conditioned.
bool diagonalizable(const Eigen::MatrixXcd& a) {
  const int d = static_cast<int>(a.rows());
  const double scale = std::max(1.0, a.norm());
  const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(a, false).eigenvalues();
  Eigen::MatrixXcd basis(d, d);
  int filled = 0;
  std::vector<bool> seen(d, false);
  for (int i = 0; i < d; ++i) {
    if (seen[i]) continue;
    cd mean = 0.0;
    int mult = 0;
    for (int j = i; j < d; ++j)
      if (!seen[j] && std::abs(ev(j) - ev(i)) < 1e-6 * scale) {
        seen[j] = true;
        mean += ev(j);
        ++mult;
      }
    mean /= static_cast<double>(mult);
    const Eigen::MatrixXcd shifted = a - mean * Eigen::MatrixXcd::Identity(d, d);
    if (mult > 1 && numerical_rank(shifted, RankBackend::numeric(1e-6)) != d - mult) return false;
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
    basis.middleCols(filled, mult) = svd.matrixV().rightCols(mult);
    filled += mult;
  }
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(basis).singularValues();
  return sv(d - 1) > 1e-6 * sv(0);
}

// Three-party concise core whose parties other than c have dimension d.
// The slices T(x) T(u)^{-1} must commute for border rank d (automatic when
// party c is two-dimensional); the family is then diagonalizable iff the
// rank is d, and otherwise its closure still reaches the diagonal pencils
// when c is two-dimensional or d <= 3.
PencilVerdict pencil_test(const PureState& core, int c, std::mt19937_64& rng) {
  const int m = core.dim(c);
  int d = 0;
  for (int k = 1; k <= 3; ++k)
    if (k != c) d = core.dim(k);
  auto slice = [&](const Eigen::VectorXcd& x) { return matricize(contract_mode(c, x, core), {1}); };
  for (int attempt = 0; attempt < 5; ++attempt) {
    const Eigen::MatrixXcd tu = slice(random_vec(rng, m));
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tu);
    const auto sv = svd.singularValues();
    if (sv(d - 1) < 1e-10 * sv(0)) continue;
    const Eigen::MatrixXcd inv = tu.inverse();
    const Eigen::MatrixXcd a = slice(random_vec(rng, m)) * inv;
    if (m > 2) {
      const Eigen::MatrixXcd b = slice(random_vec(rng, m)) * inv;
      const double comm = (a * b - b * a).norm() / (a.norm() * b.norm());
      if (comm > 1e-7) return PencilVerdict::none;
    }
    if (diagonalizable(a)) return PencilVerdict::rank_d;
    return (m == 2 || d <= 3) ? PencilVerdict::tangent_brank_d : PencilVerdict::none;
  }
  return PencilVerdict::none;
}

// Border rank two core with at least three parties: GHZ type iff some
// contraction down to three parties has rank two.
std::optional<TangentFlag> brank_two_type(const PureState& core, std::mt19937_64& rng, double tol) {
  const RankBackend nb = RankBackend::numeric(tol);
  int concise_trials = 0;
  for (int trial = 0; trial < 6; ++trial) {
    PureState t = core;
    while (t.parties() > 3) t = contract_mode(t.parties(), random_vec(rng, t.shape.back()), t);
    if (t.shape != Shape{2, 2, 2}) return std::nullopt;
    bool concise = true;
    for (int k = 1; k <= 3; ++k) concise = concise && numerical_rank(matricize(t, {k}), nb) == 2;
    if (!concise) continue;
    ++concise_trials;
    if (pencil_test(t, 1, rng) == PencilVerdict::rank_d) return TangentFlag::secant;
  }
  if (concise_trials == 0) return std::nullopt;
  return TangentFlag::tangent;
}

// A party whose two partners both have dimension k and which is itself at
// most k-dimensional.
std::optional<int> pencil_party(const PureState& core, int k) {
  for (int c = 1; c <= 3; ++c) {
    bool ok = core.dim(c) <= k;
    for (int j = 1; j <= 3; ++j)
      if (j != c) ok = ok && core.dim(j) == k;
    if (ok) return c;
  }
  return std::nullopt;
}

std::optional<int> shape_k_upper(const Shape& dims) {
  if (dims == Shape{2, 2, 2}) return 2;
  if (dims == Shape{2, 2, 2, 2}) return 4;
  if (dims == Shape{3, 3, 3}) return 5;
  if (dims.size() == 2) return std::min(dims[0], dims[1]);
  return std::nullopt;
}

void lower_upper(std::optional<int>& ku, int v) { ku = ku ? std::min(*ku, v) : v; }

}  // namespace

ClassificationReport classify(const PureState& s, const ClassifyOptions& opt) {
  if (s.is_zero()) fail("ZeroTensor", "classification of the zero tensor");
  if (s.parties() < 2) fail("BadParams", "classification needs at least two parties");
  ClassificationReport rep;
  rep.n = s.parties();
  rep.dims = s.shape;
  const int n = rep.n;
  const double tol = opt.backend.is_exact() ? 1e-10 : opt.backend.tol;
  std::mt19937_64 rng(opt.seed);

  rep.separability = separability(s, opt.backend);
  const MultirankSignature one = multirank(s, 1, opt.backend);
  rep.one_multirank = one.canonical(n);
  if (n >= 4) rep.two_multirank = multirank(s, 2, opt.backend).canonical(n);
  rep.k_lower = max_flattening_rank(s, opt.backend);
  rep.certificates.push_back("flattening");
  if (s.shape == Shape{3, 3, 3}) {
    rep.koszul_index = koszul_secant_index(s, opt.backend);
    if (*rep.koszul_index > rep.k_lower) {
      rep.k_lower = *rep.koszul_index;
      rep.certificates.push_back("koszul");
    }
  }
  rep.k_upper = shape_k_upper(s.shape);
  if (s.shape == Shape{2, 2, 2}) rep.three_qubit_class = classify_3qubit(s);

  std::vector<const TableRow*> rows;
  if (auto t = table_for_shape(s.shape)) {
    rep.table = table_name(*t);
    for (const auto& row : table_rows(*t))
      if (row.one_multirank == rep.one_multirank && (!rep.two_multirank || row.two_multirank == *rep.two_multirank) &&
          row.k >= rep.k_lower)
        rows.push_back(&row);
    if (!rows.empty()) {
      int kmax = 0;
      for (auto* r : rows) kmax = std::max(kmax, r->k);
      lower_upper(rep.k_upper, kmax);
    }
  }

  TangentFlag flag = TangentFlag::unknown;
  const PureState core = concise_core(s, tol);
  if (rep.k_lower == 1) {
    flag = TangentFlag::secant;
    lower_upper(rep.k_upper, 1);
  } else if (core.parties() == 2) {
    flag = TangentFlag::secant;
    lower_upper(rep.k_upper, rep.k_lower);
    rep.certificates.push_back("matrix_rank");
  } else if (rep.k_lower == 2) {
    lower_upper(rep.k_upper, 2);
    rep.certificates.push_back("flattening_minors");
    if (auto f = brank_two_type(core, rng, tol)) {
      flag = *f;
      rep.certificates.push_back("pencil");
    }
  } else if (core.parties() == 3 && pencil_party(core, rep.k_lower)) {
    switch (pencil_test(core, *pencil_party(core, rep.k_lower), rng)) {
      case PencilVerdict::rank_d:
        flag = TangentFlag::secant;
        lower_upper(rep.k_upper, rep.k_lower);
        rep.certificates.push_back("pencil");
        break;
      case PencilVerdict::tangent_brank_d:
        flag = TangentFlag::tangent;
        lower_upper(rep.k_upper, rep.k_lower);
        rep.certificates.push_back("pencil");
        break;
      case PencilVerdict::none: break;
    }
  }
  if (flag == TangentFlag::unknown && rep.k_upper && rep.k_lower == *rep.k_upper) {
    // Largest possible rank for the shape equals the border rank.
    if ((s.shape == Shape{2, 2, 2, 2} && rep.k_lower == 4) || (s.shape == Shape{3, 3, 3} && rep.k_lower == 5)) {
      flag = TangentFlag::secant;
      rep.certificates.push_back("max_rank");
    }
  }
  if (flag == TangentFlag::unknown && opt.use_rank_certificates && core.parties() >= 2) {
    RankOptions ro;
    ro.backend = RankBackend::numeric(tol);
    RankCertificate rc = rank_bounds(core, ro);
    if (rc.upper > rep.k_lower && opt.use_als) {
      AlsOptions ao;
      ao.restarts = 16;
      ao.iters = 3000;
      ao.seed = opt.seed;
      if (als_upper_bound(core, rep.k_lower, ao)) {
        rc.upper = rep.k_lower;
        rc.upper_provenance = "als_fit";
      }
    }
    lower_upper(rep.k_upper, rc.upper);
    if (rc.upper <= rep.k_lower) {
      flag = TangentFlag::secant;
      rep.certificates.push_back("rank_upper:" + rc.upper_provenance);
    } else if (rep.k_upper && rc.lower > *rep.k_upper) {
      flag = TangentFlag::tangent;
      rep.certificates.push_back("rank_lower:" + rc.lower_provenance);
    }
  }
  rep.tangent_flag = flag;

  std::set<std::string> subs;
  const TableRow* pick = nullptr;
  for (auto* r : rows) {
    if (r->k < rep.k_lower || (rep.k_upper && r->k > *rep.k_upper)) continue;
    if (flag != TangentFlag::unknown && r->k > 1 && r->tangent != (flag == TangentFlag::tangent)) continue;
    rep.compatible_rows.push_back(r->key);
    subs.insert(r->subfamily);
    pick = r;
  }
  if (subs.size() == 1) {
    rep.family_label = *subs.begin();
    rep.family = family_name(pick->k, pick->tangent);
  } else if (rep.k_upper && rep.k_lower == *rep.k_upper && flag != TangentFlag::unknown) {
    rep.family = family_name(rep.k_lower, flag == TangentFlag::tangent);
  }
  return rep;
}

ClassificationReport classify_4qubit(const PureState& s, const ClassifyOptions& opt) {
  if (s.shape != Shape{2, 2, 2, 2}) fail("WrongShape", "four qubits expected");
  ClassificationReport rep = classify(s, opt);
  const auto triple = multirank(s, 2, opt.backend).canonical_ranks(4);
  if (two_multirank_constraint(triple[0], triple[1], triple[2]) == TripleStatus::forbidden)
    fail("ConstraintViolation", "two-multirank " + signature_str(triple));
  return rep;
}

ClassificationReport classify_3qutrit(const PureState& s, const ClassifyOptions& opt) {
  if (s.shape != Shape{3, 3, 3}) fail("WrongShape", "three qutrits expected");
  return classify(s, opt);
}

}  // namespace qgeo
