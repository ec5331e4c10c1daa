#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "qgeo/errors.hpp"
#include "qgeo/rank_lab.hpp"
#include "qgeo/zoo.hpp"

namespace qgeo {

Shape CPDecomposition::shape() const {
  Shape s;
  for (const auto& f : factors) s.push_back(static_cast<int>(f.rows()));
  return s;
}

namespace {

void check_dec(const CPDecomposition& dec) {
  if (dec.factors.empty()) fail("ShapeMismatch", "decomposition without factors");
  for (const auto& f : dec.factors)
    if (f.cols() != dec.weights.size())
      fail("ShapeMismatch", "factor has " + std::to_string(f.cols()) + " columns for " +
                                std::to_string(dec.weights.size()) + " weights");
}

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd r(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) r.segment(i * b.size(), b.size()) = a(i) * b;
  return r;
}

CPDecomposition empty_dec(const Shape& shape, int r) {
  CPDecomposition d;
  for (int k : shape) d.factors.push_back(Eigen::MatrixXcd::Zero(k, r));
  d.weights = Eigen::VectorXcd::Zero(r);
  return d;
}

cd root_of_unity(long long p, long long r) { return std::polar(1.0, 2.0 * M_PI * double(p % r) / double(r)); }

CPDecomposition w_dec(int d, int n) {
  CPDecomposition dec = empty_dec(Shape(n, d), n);
  for (int p = 0; p < n; ++p) {
    for (int k = 0; k < n; ++k) dec.factors[k](k == p ? 1 : 0, p) = 1.0;
    dec.weights(p) = 1.0;
  }
  return dec;
}

// D^2_n on span{|0>, |j>} inside C^d.
CPDecomposition dicke2_dec(int d, int n, int j) {
  const int r = n - 1;
  CPDecomposition dec = empty_dec(Shape(n, d), r);
  for (int p = 0; p < r; ++p) {
    for (int k = 0; k < n; ++k) {
      dec.factors[k](0, p) = 1.0;
      dec.factors[k](j, p) = root_of_unity(p, r);
    }
    dec.weights(p) = root_of_unity(-2LL * p + 2LL * r, r) / double(r);
  }
  return dec;
}

}  // namespace

PureState cp_reconstruct(const CPDecomposition& dec) {
  check_dec(dec);
  const Shape shape = dec.shape();
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(shape_size(shape));
  for (int p = 0; p < dec.terms(); ++p) {
    Eigen::VectorXcd v = dec.factors[0].col(p);
    for (std::size_t k = 1; k < dec.factors.size(); ++k) v = kron(v, dec.factors[k].col(p));
    amps += dec.weights(p) * v;
  }
  return make_tensor(shape, amps);
}

double relative_residual(const CPDecomposition& dec, const PureState& s) {
  const PureState r = cp_reconstruct(dec);
  if (r.shape != s.shape) fail("ShapeMismatch", "decomposition shape differs from state shape");
  const double n = s.norm();
  const double diff = (r.amps - s.amps).norm();
  return n == 0.0 ? diff : diff / n;
}

CPDecomposition concat(const CPDecomposition& a, const CPDecomposition& b) {
  check_dec(a);
  check_dec(b);
  if (a.shape() != b.shape()) fail("ShapeMismatch", "concatenating decompositions of different shapes");
  CPDecomposition c;
  for (std::size_t k = 0; k < a.factors.size(); ++k) {
    Eigen::MatrixXcd f(a.factors[k].rows(), a.terms() + b.terms());
    f << a.factors[k], b.factors[k];
    c.factors.push_back(f);
  }
  c.weights.resize(a.terms() + b.terms());
  c.weights << a.weights, b.weights;
  return c;
}

CPDecomposition transform(const std::vector<LocalOperator>& ops, const CPDecomposition& dec) {
  check_dec(dec);
  if (ops.size() != dec.factors.size()) fail("PartyCountMismatch", "one operator per party expected");
  CPDecomposition out = dec;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].cols() != dec.factors[k].rows()) fail("DimMismatch", "operator for party " + std::to_string(k + 1));
    out.factors[k] = ops[k] * dec.factors[k];
  }
  return out;
}

SubstitutionResult substitution_step(const PureState& s, int mode, int keep_dim, const CPDecomposition& dec,
                                     const std::optional<Eigen::MatrixXcd>& keep) {
  if (mode < 1 || mode > s.parties()) fail("BadMode", "mode " + std::to_string(mode));
  const int d = s.dim(mode);
  if (keep_dim < 0 || keep_dim > d) fail("BadParams", "keep_dim out of range");
  const RankBackend backend = RankBackend::numeric();
  if (numerical_rank(matricize(s, {mode}), backend) != d) fail("NotConcise", "party " + std::to_string(mode));
  if (dec.shape() != s.shape || relative_residual(dec, s) > 1e-8)
    fail("BadDecomposition", "decomposition does not reconstruct the state");

  Eigen::MatrixXcd basis(d, d);
  if (keep) {
    if (keep->rows() != d || keep->cols() != keep_dim) fail("BadParams", "keep basis has the wrong size");
    basis.leftCols(keep_dim) = *keep;
  } else {
    basis.leftCols(keep_dim) = Eigen::MatrixXcd::Identity(d, keep_dim);
  }
  int have = keep_dim;
  std::vector<int> chosen;
  const Eigen::MatrixXcd& u = dec.factors[mode - 1];
  for (int p = 0; p < dec.terms() && have < d; ++p) {
    basis.col(have) = u.col(p);
    if (numerical_rank(basis.leftCols(have + 1), backend) == have + 1) {
      chosen.push_back(p);
      ++have;
    }
  }
  if (have < d) fail("NotConcise", "summand vectors do not complete the kept subspace");

  Eigen::MatrixXcd sel = Eigen::MatrixXcd::Zero(d, d);
  sel.topLeftCorner(keep_dim, keep_dim).setIdentity();
  SubstitutionResult res;
  res.projection = basis * sel * basis.inverse();
  res.projected = apply_on(mode, res.projection, s);
  res.zeroed_terms = chosen;
  const int r = dec.terms() - static_cast<int>(chosen.size());
  res.remaining = empty_dec(s.shape, r);
  for (int p = 0, q = 0; p < dec.terms(); ++p) {
    if (std::find(chosen.begin(), chosen.end(), p) != chosen.end()) continue;
    for (int k = 0; k < s.parties(); ++k)
      res.remaining.factors[k].col(q) = k == mode - 1 ? Eigen::VectorXcd(res.projection * dec.factors[k].col(p))
                                                      : Eigen::VectorXcd(dec.factors[k].col(p));
    res.remaining.weights(q) = dec.weights(p);
    ++q;
  }
  return res;
}

DecompositionKind parse_decomposition_kind(const std::string& name) {
  std::string k = name;
  std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::tolower(c); });
  if (k == "w") return DecompositionKind::W;
  if (k == "n") return DecompositionKind::N;
  if (k == "l" || k == "l_roots_of_unity") return DecompositionKind::L_roots_of_unity;
  if (k == "dicke2" || k == "dicke2_roots_of_unity") return DecompositionKind::Dicke2_roots_of_unity;
  if (k == "ghz") return DecompositionKind::GHZ;
  if (k == "mprime" || k == "mprime_composite") return DecompositionKind::MPrime_composite;
  if (k == "m" || k == "m_composite") return DecompositionKind::M_composite;
  fail("UnknownKind", name);
}

CPDecomposition support_decomposition(const PureState& s) {
  std::vector<Eigen::Index> nz;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s.amps(i) != cd(0)) nz.push_back(i);
  CPDecomposition dec = empty_dec(s.shape, static_cast<int>(nz.size()));
  for (std::size_t p = 0; p < nz.size(); ++p) {
    const Index idx = multi_index(s.shape, nz[p]);
    for (int k = 0; k < s.parties(); ++k) dec.factors[k](idx[k], p) = 1.0;
    dec.weights(p) = s.amps(nz[p]);
  }
  return dec;
}

CPDecomposition minimal_decomposition(DecompositionKind kind, int d, int n) {
  if (d < 2 || n < 2) fail("UnsupportedParams", "need d >= 2 and n >= 2");
  switch (kind) {
    case DecompositionKind::W:
      return w_dec(d, n);
    case DecompositionKind::GHZ:
      return support_decomposition(ghz(d, n));
    case DecompositionKind::N:
      return support_decomposition(n_state(d, n));
    case DecompositionKind::L_roots_of_unity: {
      const int r = (n - 1) * (d - 1) + 1;
      CPDecomposition dec = empty_dec(Shape(n, d), r);
      for (int p = 0; p < r; ++p) {
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < d; ++j) dec.factors[k](j, p) = root_of_unity(1LL * p * j, r);
        dec.weights(p) = root_of_unity(-1LL * p * (d - 1) + 1LL * r * d, r) / double(r);
      }
      return dec;
    }
    case DecompositionKind::Dicke2_roots_of_unity:
      if (n < 4) fail("UnsupportedParams", "the roots-of-unity construction of D^2_n needs n >= 4");
      return dicke2_dec(2, n, 1);
    case DecompositionKind::MPrime_composite: {
      if (n < 4) fail("UnsupportedParams", "the composite construction needs n >= 4");
      CPDecomposition w = w_dec(d, n);
      if (d > 2) {
        // W on span{|0>, |d-1>}
        for (int k = 0; k < n; ++k) w.factors[k].row(d - 1).swap(w.factors[k].row(1));
      }
      CPDecomposition dec = w;
      for (int j = 1; j <= d - 2; ++j) dec = concat(dicke2_dec(d, n, j), dec);
      return dec;
    }
    case DecompositionKind::M_composite: {
      if (n < 4) fail("UnsupportedParams", "the composite construction needs n >= 4");
      const LocalOperator inv = m_to_mprime_basis(d).inverse();
      return transform(std::vector<LocalOperator>(n, inv), minimal_decomposition(DecompositionKind::MPrime_composite, d, n));
    }
  }
  fail("UnsupportedParams", "unknown decomposition kind");
}

CPDecomposition d3_111_decomposition() {
  const double w[4][3] = {{1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}};
  CPDecomposition dec = empty_dec({3, 3, 3}, 4);
  for (int p = 0; p < 4; ++p) {
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) dec.factors[k](j, p) = w[p][j];
    dec.weights(p) = 0.25;
  }
  return dec;
}

long long direct_sum_bound(long long t_rank, const Shape& p_dims) { return t_rank + persistent_lower_bound(p_dims); }

namespace {

bool hypercubic(const Shape& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [&](int d) { return d == s[0]; });
}

// Scalar c with s = c * ref, if any.
std::optional<cd> proportional(const PureState& s, const PureState& ref, double tol = 1e-12) {
  if (s.shape != ref.shape) return std::nullopt;
  const cd c = ref.amps.dot(s.amps) / ref.amps.squaredNorm();
  if ((s.amps - c * ref.amps).norm() > tol * std::max(1.0, s.norm())) return std::nullopt;
  return c;
}

struct Named {
  std::string name;
  std::function<PureState()> make;
  std::function<CPDecomposition()> dec;
};

std::vector<Named> named_candidates(const Shape& shape) {
  std::vector<Named> out;
  if (!hypercubic(shape) || shape.size() < 2) return out;
  const int d = shape[0], n = static_cast<int>(shape.size());
  out.push_back({"GHZ", [=] { return ghz(d, n); }, [=] { return minimal_decomposition(DecompositionKind::GHZ, d, n); }});
  out.push_back({"W", [=] { return w_state(n, d); }, [=] { return w_dec(d, n); }});
  out.push_back({"L", [=] { return l_state(d, n); },
                 [=] { return minimal_decomposition(DecompositionKind::L_roots_of_unity, d, n); }});
  out.push_back({"N", [=] { return n_state(d, n); }, [=] { return minimal_decomposition(DecompositionKind::N, d, n); }});
  out.push_back({"N'", [=] { return nprime_state(d, n); }, [=] { return support_decomposition(nprime_state(d, n)); }});
  if (n >= 4 && d >= 3) {
    out.push_back({"M'", [=] { return mprime_state(d, n); },
                   [=] { return minimal_decomposition(DecompositionKind::MPrime_composite, d, n); }});
    out.push_back({"M", [=] { return m_state(d, n); },
                   [=] { return minimal_decomposition(DecompositionKind::M_composite, d, n); }});
  }
  if (n >= 4 && d == 2)
    out.push_back({"Dicke2", [=] { return dicke(n, 2); },
                   [=] { return minimal_decomposition(DecompositionKind::Dicke2_roots_of_unity, d, n); }});
  if (d == 3 && n == 3)
    out.push_back({"D3_111", [] { return dicke_qudit(3, {1, 1, 1}); }, [] { return d3_111_decomposition(); }});
  return out;
}

struct Bound {
  int value = 0;
  std::string provenance;
};

void raise(Bound& b, int value, const std::string& prov) {
  if (value > b.value) b = {value, prov};
}

// Head/step split of a block pyramidal tensor with U_k the first a_k basis
// vectors and V_k the rest; a direct sum is the case without cross blocks.
struct PyramidSplit {
  PureState head, step;
};

std::optional<PyramidSplit> pyramid_at(const PureState& s, const std::vector<int>& a) {
  const int n = s.parties();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s.amps(i) == cd(0)) continue;
    const Index idx = multi_index(s.shape, i);
    if (idx[n - 1] >= a[n - 1]) continue;
    for (int k = 0; k < n; ++k)
      if (idx[k] >= a[k]) return std::nullopt;
  }
  Shape hs(n), ps(n);
  for (int k = 0; k < n; ++k) {
    hs[k] = a[k];
    ps[k] = s.shape[k] - a[k];
  }
  PyramidSplit out{zero_state(hs), zero_state(ps)};
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s.amps(i) == cd(0)) continue;
    Index idx = multi_index(s.shape, i);
    bool head = true, step = true;
    for (int k = 0; k < n; ++k) {
      head = head && idx[k] < a[k];
      step = step && idx[k] >= a[k];
    }
    if (head) out.head.amps(flat_index(hs, idx)) = s.amps(i);
    if (step) {
      for (int k = 0; k < n; ++k) idx[k] -= a[k];
      out.step.amps(flat_index(ps, idx)) = s.amps(i);
    }
  }
  if (out.head.is_zero() || out.step.is_zero()) return std::nullopt;
  return out;
}

bool certified_persistent(const PureState& p, const RankBackend& backend) {
  if (p.parties() == 2) return p.shape[0] == p.shape[1] && numerical_rank(matricize(p, {1}), backend) == p.shape[0];
  if (!hypercubic(p.shape) || p.is_zero()) return false;
  return persistence_structural(p).persistent();
}

RankCertificate rank_bounds_impl(const PureState& s, const RankOptions& opt, int depth);

std::optional<int> pyramid_bound(const PureState& s, const RankOptions& opt, int depth) {
  const int n = s.parties();
  if (n < 2 || depth > 3) return std::nullopt;
  std::optional<int> best;
  const Shape& sh = s.shape;
  for (int last = n; last >= 1; --last) {
    // Move `last` to the final slot; the other parties keep their order.
    std::vector<int> perm;
    for (int k = 1; k <= n; ++k)
      if (k != last) perm.push_back(k);
    perm.push_back(last);
    for (int flip = 0; flip < 2; ++flip) {
      PureState t = permute_parties(perm, s);
      if (flip) {
        std::vector<LocalOperator> rev;
        for (int d : t.shape) rev.push_back(LocalOperator::Identity(d, d).rowwise().reverse());
        t = apply_local(rev, t);
      }
      std::vector<int> a(n, 1);
      bool done = std::any_of(sh.begin(), sh.end(), [](int d) { return d < 2; });
      while (!done) {
        if (auto split = pyramid_at(t, a); split && certified_persistent(split->step, opt.backend)) {
          const int head = rank_bounds_impl(split->head, opt, depth + 1).lower;
          const int v = static_cast<int>(direct_sum_bound(head, split->step.shape));
          if (!best || v > *best) best = v;
        }
        int k = 0;
        while (k < n && ++a[k] >= t.shape[k]) a[k++] = 1;
        done = k == n;
      }
    }
  }
  return best;
}

std::optional<GhzProductResult> detect_ghz_product(const PureState& s) {
  const int n = s.parties();
  if (n < 2) return std::nullopt;
  int g = 0;
  for (int d : s.shape) g = std::gcd(g, d);
  for (int d = 2; d <= g; ++d) {
    if (g % d) continue;
    Shape ps;
    for (int k : s.shape) ps.push_back(k / d);
    PureState p = zero_state(ps);
    for (Eigen::Index i = 0; i < p.size(); ++i) p.amps(i) = s.at(multi_index(ps, i));
    if (p.is_zero()) continue;
    const PureState prod = kronecker_product(ghz(d, n), p);
    if ((prod.amps - s.amps).norm() > 1e-12 * s.norm()) continue;
    try {
      return ghz_product_rank(d, p);
    } catch (const Error&) {
      continue;
    }
  }
  return std::nullopt;
}

// Unused basis vectors and one-dimensional parties do not change the rank;
// bounds are computed on the compressed tensor and the witness is lifted back.
std::optional<RankCertificate> compressed_bounds(const PureState& s, const RankOptions& opt, int depth) {
  const int n = s.parties();
  if (n < 2) return std::nullopt;
  std::vector<std::vector<int>> used(n);
  bool shrink = false;
  for (int p = 1; p <= n; ++p) {
    const Eigen::MatrixXcd m = matricize(s, {p});
    for (int i = 0; i < s.dim(p); ++i)
      if (m.row(i).squaredNorm() > 0.0) used[p - 1].push_back(i);
    const int u = static_cast<int>(used[p - 1].size());
    shrink = shrink || u < s.dim(p) || (u == 1 && n > 1);
  }
  if (!shrink) return std::nullopt;
  std::vector<LocalOperator> sel;
  Shape kept;
  for (int p = 0; p < n; ++p) {
    const int u = static_cast<int>(used[p].size());
    LocalOperator m = LocalOperator::Zero(u, s.dim(p + 1));
    for (int i = 0; i < u; ++i) m(i, used[p][i]) = 1.0;
    sel.push_back(m);
    if (u > 1) kept.push_back(u);
  }
  PureState t = apply_local(sel, s);
  t.shape = kept.empty() ? Shape{1} : kept;
  RankOptions inner = opt;
  inner.candidates.clear();
  RankCertificate cert = rank_bounds_impl(t, inner, depth);
  if (cert.witness) {
    const CPDecomposition& w = *cert.witness;
    const int r = w.terms();
    CPDecomposition lifted;
    lifted.weights = w.weights;
    int q = 0;
    for (int p = 0; p < n; ++p) {
      Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(s.dim(p + 1), r);
      if (used[p].size() > 1 || (kept.empty() && p == 0)) {
        for (std::size_t i = 0; i < used[p].size(); ++i) f.row(used[p][i]) = w.factors[q].row(i);
        ++q;
      } else {
        f.row(used[p][0]).setOnes();
      }
      lifted.factors.push_back(f);
    }
    cert.witness_residual = relative_residual(lifted, s);
    cert.witness = std::move(lifted);
  }
  for (const auto& dec : opt.candidates) {
    if (dec.shape() != s.shape || dec.terms() >= cert.upper) continue;
    const double res = relative_residual(dec, s);
    if (res < 1e-10) {
      cert.upper = dec.terms();
      cert.upper_provenance = "explicit_decomposition";
      cert.witness = dec;
      cert.witness_residual = res;
    }
  }
  cert.notes.push_back("compressed to " + signature_str(t.shape));
  return cert;
}

RankCertificate rank_bounds_impl(const PureState& s, const RankOptions& opt, int depth) {
  if (s.is_zero()) fail("ZeroTensor", "rank of the zero tensor");
  RankCertificate cert;
  const int n = s.parties();
  if (auto c = compressed_bounds(s, opt, depth)) return *c;
  if (n == 1) {
    cert.lower = cert.upper = 1;
    cert.lower_provenance = "conciseness";
    cert.upper_provenance = "definition_terms";
    cert.witness = support_decomposition(s);
    return cert;
  }

  Bound lo;
  int concise_best = 0;
  for (int p = 1; p <= n; ++p) {
    const int r = numerical_rank(matricize(s, {p}), opt.backend);
    if (r == s.dim(p)) concise_best = std::max(concise_best, r);
    raise(lo, r, r == s.dim(p) ? "conciseness" : "flattening");
  }
  if (concise_best == lo.value) lo.provenance = "conciseness";
  raise(lo, max_flattening_rank(s, opt.backend), "flattening");
  if (s.shape == Shape{3, 3, 3}) raise(lo, koszul_secant_index(s, opt.backend), "koszul");
  if (hypercubic(s.shape)) {
    const auto v = persistence_structural(s);
    if (v.persistent()) {
      raise(lo, static_cast<int>(persistent_lower_bound(s.shape)), "persistence");
      cert.notes.push_back("persistent via " + v.route);
      if (lo.value < persistent_lower_bound(s.shape)) fail("InternalError", "persistence bound lost");
    }
  }
  if (auto v = pyramid_bound(s, opt, depth)) raise(lo, *v, "direct_sum");
  const auto gp = depth == 0 ? detect_ghz_product(s) : std::nullopt;
  if (gp) {
    raise(lo, static_cast<int>(gp->rank), "ghz_product");
    cert.notes.push_back("ghz_product bound " + std::to_string(gp->rank));
  }

  struct Upper {
    int value;
    std::string provenance;
    CPDecomposition dec;
    double residual;
  };
  std::vector<Upper> ups;
  {
    CPDecomposition sup = support_decomposition(s);
    ups.push_back({sup.terms(), "definition_terms", sup, 0.0});
  }
  for (const auto& nm : named_candidates(s.shape)) {
    const auto c = proportional(s, nm.make());
    if (!c) continue;
    CPDecomposition dec = nm.dec();
    dec.weights *= *c;
    const double res = relative_residual(dec, s);
    if (res < 1e-10) {
      ups.push_back({dec.terms(), "explicit_decomposition", dec, res});
      cert.notes.push_back("recognized " + nm.name);
    }
  }
  if (gp)
    ups.push_back({gp->decomposition.terms(), "explicit_decomposition", gp->decomposition,
                   relative_residual(gp->decomposition, s)});
  for (const auto& dec : opt.candidates) {
    if (dec.shape() != s.shape) continue;
    const double res = relative_residual(dec, s);
    if (res < 1e-10) ups.push_back({dec.terms(), "explicit_decomposition", dec, res});
  }
  auto best = std::min_element(ups.begin(), ups.end(), [](const Upper& a, const Upper& b) { return a.value < b.value; });
  cert.upper = best->value;
  cert.upper_provenance = best->provenance;
  cert.witness = best->dec;
  cert.witness_residual = best->residual;

  if (opt.use_als && depth == 0)
    for (int r = std::max(1, lo.value); r < cert.upper; ++r)
      if (auto fit = als_upper_bound(s, r, opt.als)) {
        cert.upper = r;
        cert.upper_provenance = "als_fit";
        cert.witness_residual = relative_residual(*fit, s);
        cert.witness = std::move(*fit);
        break;
      }

  cert.lower = lo.value;
  cert.lower_provenance = lo.provenance;
  if (cert.lower > cert.upper) fail("InternalError", "lower bound exceeds upper bound");
  return cert;
}

}  // namespace

RankCertificate rank_bounds(const PureState& s, const RankOptions& opt) { return rank_bounds_impl(s, opt, 0); }

GhzProductResult ghz_product_rank(int d, const PureState& p) {
  if (d < 1) fail("BadParams", "d must be positive");
  if (p.parties() < 2 || p.is_zero() || !certified_persistent(p, RankBackend::numeric()))
    fail("NotCertifiedMinimalPersistent", "persistence is not certified");
  const RankCertificate c = rank_bounds(p);
  const long long plb = persistent_lower_bound(p.shape);
  if (c.upper != plb) fail("NotCertifiedMinimalPersistent", "no decomposition reaching the persistent bound");
  const int n = p.parties();
  GhzProductResult out;
  out.rank = d * plb;
  const CPDecomposition& q = *c.witness;
  const int r = d * q.terms();
  for (int k = 0; k < n; ++k) out.decomposition.factors.push_back(Eigen::MatrixXcd::Zero(d * p.dim(k + 1), r));
  out.decomposition.weights = Eigen::VectorXcd::Zero(r);
  for (int j = 0; j < d; ++j)
    for (int t = 0; t < q.terms(); ++t) {
      const int col = j * q.terms() + t;
      for (int k = 0; k < n; ++k) {
        const Eigen::VectorXcd e = Eigen::VectorXcd::Unit(d, j);
        out.decomposition.factors[k].col(col) = kron(e, q.factors[k].col(t));
      }
      out.decomposition.weights(col) = q.weights(t);
    }
  return out;
}

double schmidt_rate_bound(const PureState& src, const PureState& dst) {
  if (src.parties() != dst.parties()) fail("PartyCountMismatch", "source and target party counts differ");
  const int n = src.parties();
  const RankBackend backend = RankBackend::numeric();
  double best = 0.0;
  for (int ell = 1; ell <= n / 2; ++ell)
    for (const auto& part : enumerate_partitions(n, ell)) {
      const int rs = numerical_rank(matricize(src, part), backend);
      const int rd = numerical_rank(matricize(dst, part), backend);
      if (rs == 1 && rd == 1) continue;
      if (rs == 1) fail("RankOneCut", "source has Schmidt rank one across " + partition_str(part));
      best = std::max(best, std::log(double(rd)) / std::log(double(rs)));
    }
  return best;
}

}  // namespace qgeo
