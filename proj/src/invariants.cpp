#include "qgeo/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgeo/errors.hpp"

namespace qgeo {

namespace {

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_alpha(const std::vector<int>& alpha) {
  if (alpha.empty()) fail("BadAlpha", "empty exponent list");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 1) fail("BadAlpha", "exponents must be positive");
    if (i && alpha[i] < alpha[i - 1]) fail("BadAlpha", "exponents must be sorted ascending");
  }
}

}  // namespace

namespace {

// rho = W W^dagger. The square roots of the eigenvalues of rho * tilde(rho)
// are the singular values of W^T (sy x sy) W, which avoids taking square
// roots of round-off sized eigenvalues.
double concurrence_from_factor(const Eigen::MatrixXcd& w) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  const Eigen::MatrixXcd tau = w.transpose() * yy * w;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(tau).singularValues();
  double c = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index i = 1; i < std::min<Eigen::Index>(sv.size(), 4); ++i) c -= sv(i);
  return std::max(0.0, c);
}

}  // namespace

double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) fail("WrongDim", "two-qubit density matrix expected");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9) fail("NotDensityMatrix", "not Hermitian");
  if (std::abs(rho.trace() - cd(1.0)) > 1e-9) fail("NotDensityMatrix", "trace is not 1");
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()));
  const Eigen::Vector4d ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-9) fail("NotDensityMatrix", "not positive semidefinite");
  std::vector<int> keep;
  for (int i = 0; i < 4; ++i)
    if (ev(i) > 1e-13 * ev.maxCoeff()) keep.push_back(i);
  Eigen::MatrixXcd w(4, keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) w.col(k) = es.eigenvectors().col(keep[k]) * std::sqrt(ev(keep[k]));
  return concurrence_from_factor(w);
}

double generalized_concurrence(const PureState& s, const Partition& cut) {
  check_partition(cut, s.parties());
  if (s.is_zero()) fail("ZeroTensor", "concurrence of the zero state");
  const PureState u = (1.0 / s.norm()) * s;
  const DensityMatrix rho = partial_trace(u, cut);
  const double purity = (rho * rho).trace().real();
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

ThreeQubitInvariants three_qubit_invariants(const PureState& s) {
  if (s.shape != Shape{2, 2, 2}) fail("WrongShape", "three-qubit state expected");
  if (s.is_zero()) fail("ZeroTensor", "tangle of the zero state");
  const PureState u = (1.0 / s.norm()) * s;
  ThreeQubitInvariants r;
  // each two-qubit marginal is M M^dagger for the matching flattening
  r.c_ab = concurrence_from_factor(matricize(u, {1, 2}));
  r.c_ac = concurrence_from_factor(matricize(u, {1, 3}));
  r.c_bc = concurrence_from_factor(matricize(u, {2, 3}));
  r.c_a_bc = generalized_concurrence(u, {1});
  const double tau = r.c_a_bc * r.c_a_bc - r.c_ab * r.c_ab - r.c_ac * r.c_ac;
  r.tau = std::clamp(tau, 0.0, 1.0);
  return r;
}

double tangle_3qubit(const PureState& s) { return three_qubit_invariants(s).tau; }

FormulaResult generic_rank(const std::vector<int>& dims) {
  if (dims.size() < 3) fail("BadDims", "need at least three parties");
  for (int d : dims)
    if (d < 2) fail("BadDims", "every dimension must be at least 2");
  long long prod = 1, sum = 1;
  for (int d : dims) prod *= d, sum += d - 1;
  FormulaResult r{ceil_div(prod, sum), false, true, "expected rank"};
  std::vector<int> s(dims);
  std::sort(s.rbegin(), s.rend());
  if (s.size() == 3 && s == std::vector<int>{4, 4, 3}) {
    r.exceptional = true;
    r.note = "exception 4x4x3";
  } else if (s.size() == 3 && s[2] == 3 && s[0] == s[1] && s[0] % 2 == 1 && s[0] >= 3) {
    r.exceptional = true;
    r.note = "exception (2i+1)x(2i+1)x3";
  } else if (s.size() == 4 && s[2] == 2 && s[3] == 2 && s[0] == s[1] && s[0] >= 3) {
    r.exceptional = true;
    r.note = "exception (i+2)x(i+2)x2x2";
  }
  if (r.exceptional) ++r.value;
  return r;
}

FormulaResult tripartite_generic_rank(int d) {
  if (d < 2) fail("BadDims", "d must be at least 2");
  const long long d3 = static_cast<long long>(d) * d * d;
  FormulaResult r{ceil_div(d3, 3LL * d - 2), false, false, "ceil(d^3/(3d-2))"};
  if (d == 3) {
    r.value = 5;
    r.exceptional = true;
    r.note = "exception d=3";
  }
  return r;
}

long long qubit_family_count(int n) {
  if (n < 2) fail("BadDims", "n must be at least 2");
  return ceil_div(1LL << n, n + 1);
}

FormulaResult expected_secant_dim(int k, const std::vector<int>& dims) {
  if (k < 1) fail("BadDims", "k must be positive");
  if (dims.empty()) fail("BadDims", "empty dimension list");
  long long s = 0, prod = 1;
  for (int d : dims) {
    if (d < 1) fail("BadDims", "dimensions must be positive");
    s += d - 1;
    prod *= d;
  }
  FormulaResult r{std::min(k * s + k - 1, prod - 1), false, false, "min(ks+k-1, N-1)"};
  if (k == 3 && dims == std::vector<int>{2, 2, 2, 2}) {
    r.value = 13;
    r.exceptional = true;
    r.note = "defective third secant of four qubits";
  }
  return r;
}

FormulaResult symmetric_generic_rank(int n, int d) {
  if (n < 2 || d < 2) fail("BadDims", "need n >= 2 and d >= 2");
  if (n == 2) return {d, true, false, "quadrics: rank d"};
  FormulaResult r{ceil_div(binom(n + d - 1, n), d), false, false, "ceil(C(n+d-1,n)/d)"};
  const std::vector<std::pair<int, int>> ex{{3, 5}, {4, 3}, {4, 4}, {4, 5}};
  if (std::find(ex.begin(), ex.end(), std::make_pair(n, d)) != ex.end()) {
    ++r.value;
    r.exceptional = true;
    r.note = "exception (" + std::to_string(n) + "," + std::to_string(d) + ")";
  }
  return r;
}

long long waring_rank_monomial(const std::vector<int>& alpha) {
  check_alpha(alpha);
  long long r = 1;
  for (std::size_t i = 1; i < alpha.size(); ++i) r *= alpha[i] + 1;
  return r;
}

FormulaResult waring_brank_monomial(const std::vector<int>& alpha) {
  check_alpha(alpha);
  long long r = 1;
  for (std::size_t i = 0; i + 1 < alpha.size(); ++i) r *= alpha[i] + 1;
  return {r, false, true, "skips the largest exponent"};
}

std::pair<int, int> dicke_rank_brank(int n, int l) {
  if (n < 2 || l < 1 || l > n - 1) fail("BadL", "need 1 <= l <= n-1");
  if (2 * l > n) l = n - l;
  return {n - l + 1, l + 1};
}

}  // namespace qgeo
