#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qgeo/errors.hpp"
#include "qgeo/exact.hpp"
#include "qgeo/rank_lab.hpp"

namespace qgeo {

std::string to_string(PersistenceVerdict::Kind k) {
  switch (k) {
    case PersistenceVerdict::Kind::persistent_structural: return "persistent_structural";
    case PersistenceVerdict::Kind::persistent_randomized: return "persistent_randomized";
    case PersistenceVerdict::Kind::not_persistent: return "not_persistent";
    case PersistenceVerdict::Kind::unknown: return "unknown";
  }
  return "unknown";
}

std::vector<bool> is_concise(const PureState& s, const RankBackend& backend) {
  if (s.is_zero()) fail("ZeroTensor", "conciseness of the zero tensor");
  std::vector<bool> out(s.parties());
  if (s.parties() == 1) {
    out[0] = s.shape[0] == 1;
    return out;
  }
  for (int p = 1; p <= s.parties(); ++p) out[p - 1] = numerical_rank(matricize(s, {p}), backend) == s.dim(p);
  return out;
}

long long persistent_lower_bound(const Shape& dims) {
  if (dims.size() < 2) fail("BadDims", "need at least two parties");
  long long b = 1;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) b += dims[k] - 1;
  return b;
}

namespace {

using exact::GaussRat;
using exact::Poly;

bool hypercubic(const Shape& s) {
  return std::all_of(s.begin(), s.end(), [&](int d) { return d == s[0]; });
}

bool support_theorem(const PureState& s) {
  const int n = s.parties();
  const int d = s.shape[0];
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s.amps(i) == cd(0)) continue;
    const Index idx = multi_index(s.shape, i);
    if (std::accumulate(idx.begin(), idx.end(), 0) >= d) return false;
  }
  // |0..0 j 0..0 (d-j-1)> with j placed on any of the first n-1 parties
  for (int pos = 0; pos + 1 < n; ++pos)
    for (int j = 0; j < d; ++j) {
      Index idx(n, 0);
      idx[pos] = j;
      idx[n - 1] += d - j - 1;
      if (s.at(idx) == cd(0)) return false;
    }
  return true;
}

// Exact coefficients of <e| T + a <e'| T for the two qubit basis covectors,
// as functions of a sampled at the given points.
std::vector<GaussRat> pencil_at(const std::vector<GaussRat>& t, int e, const GaussRat& a) {
  const std::size_t half = t.size() / 2;
  std::vector<GaussRat> c(half);
  const std::size_t off_e = e * half, off_o = (1 - e) * half;
  for (std::size_t k = 0; k < half; ++k) c[k] = t[off_e + k] + a * t[off_o + k];
  return c;
}

bool constant_nonzero(const Poly& p) { return exact::degree(p) == 0; }

GaussRat det2(const GaussRat& a, const GaussRat& b, const GaussRat& c, const GaussRat& d) {
  return a * d - b * c;
}

// Every contraction <f|T with <f|e> = 1 is 1-concise (three qubits) or
// in the W class (four qubits), checked exactly through polynomials in a.
bool pencil_route(const PureState& s) {
  const int n = s.parties();
  if (s.shape[0] != 2 || (n != 3 && n != 4)) return false;
  if (!exact::representable(Eigen::MatrixXcd(s.amps))) return false;
  if (exact::rank(matricize(s, {1})) != 2) return false;
  std::vector<GaussRat> t(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) t[i] = exact::to_gauss(s.amps(i));
  std::vector<GaussRat> xs;
  for (int k = 0; k <= 4; ++k) xs.emplace_back(k);

  for (int e = 0; e < 2; ++e) {
    bool ok = true;
    if (n == 3) {
      std::vector<GaussRat> ys;
      for (int k = 0; k <= 2; ++k) {
        const auto c = pencil_at(t, e, xs[k]);
        ys.push_back(det2(c[0], c[1], c[2], c[3]));
      }
      ok = constant_nonzero(exact::interpolate({xs.begin(), xs.begin() + 3}, ys));
    } else {
      for (int k = 0; k <= 4 && ok; ++k)
        ok = exact::hyperdeterminant(pencil_at(t, e, xs[k])).is_zero();
      // Each one-party flattening of the 2x2x2 contraction must keep rank 2.
      for (int party = 0; party < 3 && ok; ++party) {
        std::vector<std::vector<GaussRat>> minors(6);
        for (int k = 0; k <= 2; ++k) {
          const auto c = pencil_at(t, e, xs[k]);
          // rows: index of `party`, columns: the other two indices
          GaussRat m[2][4];
          for (int idx = 0; idx < 8; ++idx) {
            const int b[3] = {(idx >> 2) & 1, (idx >> 1) & 1, idx & 1};
            int col = 0;
            for (int q = 0; q < 3; ++q)
              if (q != party) col = 2 * col + b[q];
            m[b[party]][col] = c[idx];
          }
          int w = 0;
          for (int c1 = 0; c1 < 4; ++c1)
            for (int c2 = c1 + 1; c2 < 4; ++c2) minors[w++].push_back(det2(m[0][c1], m[0][c2], m[1][c1], m[1][c2]));
        }
        Poly g;
        for (auto& ys : minors) g = exact::poly_gcd(g, exact::interpolate({xs.begin(), xs.begin() + 3}, ys));
        ok = constant_nonzero(g);
      }
    }
    if (ok) return true;
  }
  return false;
}

Eigen::VectorXcd random_vector(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = cd(g(rng), g(rng));
  return v;
}

struct Search {
  PersistenceOptions opt;
  std::mt19937_64 rng;
  double ref = 1.0;
  int max_depth = 0;

  RankBackend backend() const { return RankBackend::numeric(opt.tol); }

  bool zero(const PureState& t) const { return t.norm() <= opt.tol * ref; }

  bool concise1(const PureState& t) const {
    return numerical_rank(matricize(t, {1}), backend()) == t.shape[0];
  }

  std::vector<PureState> slices(const PureState& t, const Eigen::MatrixXcd& basis) const {
    const Eigen::MatrixXcd dual = basis.inverse();
    std::vector<PureState> out;
    for (Eigen::Index j = 0; j < dual.rows(); ++j) out.push_back(contract_mode(1, dual.row(j).transpose(), t));
    return out;
  }

  // Covectors g with <g|T> rank deficient, for three-party T with a qubit
  // first party and square slices.
  std::optional<Eigen::MatrixXcd> pencil_basis(const PureState& t) {
    if (t.parties() != 3 || t.shape[0] != 2 || t.shape[1] != t.shape[2]) return std::nullopt;
    const int m = t.shape[1];
    const Eigen::VectorXcd u = random_vector(rng, 2), v = random_vector(rng, 2);
    auto mat = [&](const Eigen::VectorXcd& f) { return matricize(contract_mode(1, f, t), {1}); };
    // p(x) = det(<u + x v| T), sampled at m+1 points on the unit circle.
    Eigen::MatrixXcd vand(m + 1, m + 1);
    Eigen::VectorXcd vals(m + 1);
    for (int k = 0; k <= m; ++k) {
      const cd x = std::polar(1.0, 2.0 * M_PI * k / (m + 1));
      for (int p = 0; p <= m; ++p) vand(k, p) = std::pow(x, p);
      vals(k) = mat(u + x * v).determinant();
    }
    const Eigen::VectorXcd coef = vand.partialPivLu().solve(vals);
    const double scale = coef.cwiseAbs().maxCoeff();
    Eigen::MatrixXcd basis(2, 2);
    if (scale < 1e-12) {
      basis = Eigen::MatrixXcd::Identity(2, 2);  // every contraction is degenerate
      return basis;
    }
    if (std::abs(coef(m)) < 1e-9 * scale) return std::nullopt;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) comp(i, m - 1) = -coef(i) / coef(m);
    const Eigen::VectorXcd roots = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(comp).eigenvalues();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        if (std::abs(roots(i) - roots(j)) < 1e-6) continue;
        Eigen::MatrixXcd dual(2, 2);
        dual.row(0) = (u + roots(i) * v).transpose();
        dual.row(1) = (u + roots(j) * v).transpose();
        return Eigen::MatrixXcd(dual.inverse());
      }
    return std::nullopt;
  }

  // Certain non-persistence of t (used on slices during refutation).
  bool refuted(const PureState& t, int depth) {
    max_depth = std::max(max_depth, depth);
    if (zero(t)) return true;
    if (t.parties() == 1) return false;
    if (!concise1(t)) return true;
    if (t.parties() == 2) return false;
    return refuting_basis(t, depth).has_value();
  }

  std::optional<Eigen::MatrixXcd> refuting_basis(const PureState& t, int depth) {
    const int d = t.shape[0];
    std::vector<Eigen::MatrixXcd> cands;
    cands.push_back(Eigen::MatrixXcd::Identity(d, d));
    Eigen::MatrixXcd dft(d, d);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) dft(j, k) = std::polar(1.0, 2.0 * M_PI * j * k / d);
    cands.push_back(dft);
    if (auto p = pencil_basis(t)) cands.push_back(*p);
    const int tries = depth == 0 ? opt.refutation_tries : std::min(opt.refutation_tries, 4);
    for (int k = 0; k < tries; ++k) {
      Eigen::MatrixXcd b(d, d);
      for (int c = 0; c < d; ++c) b.col(c) = random_vector(rng, d);
      cands.push_back(b);
    }
    for (const auto& b : cands) {
      bool all = true;
      for (const auto& sl : slices(t, b))
        if (!refuted(sl, depth + 1)) {
          all = false;
          break;
        }
      if (all) return b;
    }
    return std::nullopt;
  }

  bool positive(const PureState& t, int depth) {
    max_depth = std::max(max_depth, depth);
    if (t.parties() == 1) return !zero(t);
    if (!concise1(t)) return false;
    if (t.parties() == 2) return true;
    const int d = t.shape[0];
    const int extra = depth == 0 ? opt.trials : std::min(opt.trials, 2);
    const int contractions = depth == 0 ? opt.contractions : std::min(opt.contractions, 4);
    std::vector<Eigen::VectorXcd> es;
    for (int k = 0; k < d; ++k) es.push_back(Eigen::VectorXcd::Unit(d, k));
    for (int k = 0; k < extra; ++k) es.push_back(random_vector(rng, d));
    for (std::size_t ci = 0; ci < es.size(); ++ci) {
      const Eigen::VectorXcd& e = es[ci];
      std::vector<Eigen::VectorXcd> fs;
      if (static_cast<int>(ci) < d) fs.push_back(Eigen::VectorXcd::Unit(d, static_cast<int>(ci)));
      for (int k = 0; k < contractions; ++k) {
        const Eigen::VectorXcd g = random_vector(rng, d);
        const cd ge = (g.transpose() * e)(0);
        fs.push_back(g + (1.0 - ge) * e.conjugate() / e.squaredNorm());
      }
      bool ok = true;
      for (const auto& f : fs)
        if (!positive(contract_mode(1, f, t), depth + 1)) {
          ok = false;
          break;
        }
      if (ok) return true;
    }
    return false;
  }
};

}  // namespace

PersistenceVerdict persistence_structural(const PureState& s) {
  if (!hypercubic(s.shape) || s.parties() < 2) fail("WrongShape", "structural test needs shape [d,...,d]");
  if (s.is_zero()) fail("ZeroTensor", "persistence of the zero tensor");
  PersistenceVerdict v;
  v.depth = s.parties() - 2;
  if (support_theorem(s)) {
    v.kind = PersistenceVerdict::Kind::persistent_structural;
    v.route = "support";
  } else if (pencil_route(s)) {
    v.kind = PersistenceVerdict::Kind::persistent_structural;
    v.route = "pencil";
  }
  return v;
}

PersistenceVerdict persistence_randomized(const PureState& s, const PersistenceOptions& opt) {
  if (s.parties() < 2) fail("WrongShape", "persistence needs at least two parties");
  PersistenceVerdict v;
  v.trials = opt.trials;
  v.seed = opt.seed;
  if (s.is_zero()) {
    v.kind = PersistenceVerdict::Kind::not_persistent;
    v.route = "zero";
    v.witness_basis = Eigen::MatrixXcd::Identity(s.shape[0], s.shape[0]);
    return v;
  }
  Search search{opt, std::mt19937_64(opt.seed), s.norm()};
  if (!search.concise1(s)) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matricize(s, {1}), Eigen::ComputeFullU);
    v.kind = PersistenceVerdict::Kind::not_persistent;
    v.route = "not_concise";
    v.witness_basis = svd.matrixU();
    return v;
  }
  if (s.parties() == 2) {
    v.kind = PersistenceVerdict::Kind::persistent_randomized;
    v.route = "concise_matrix";
    return v;
  }
  if (auto b = search.refuting_basis(s, 0)) {
    v.kind = PersistenceVerdict::Kind::not_persistent;
    v.route = "refuting_basis";
    v.witness_basis = *b;
    v.depth = search.max_depth;
    return v;
  }
  if (search.positive(s, 0)) {
    v.kind = PersistenceVerdict::Kind::persistent_randomized;
    v.route = "random_contractions";
  }
  v.depth = search.max_depth;
  return v;
}

}  // namespace qgeo
