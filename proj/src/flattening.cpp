#include "qgeo/flattening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgeo/errors.hpp"
#include "qgeo/exact.hpp"

namespace qgeo {

std::string partition_str(const Partition& p) {
  std::string s = "(";
  const bool wide = std::any_of(p.begin(), p.end(), [](int v) { return v > 9; });
  for (std::size_t i = 0; i < p.size(); ++i) s += (wide && i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

std::string signature_str(const std::vector<int>& ranks) {
  const bool wide = std::any_of(ranks.begin(), ranks.end(), [](int v) { return v > 9; });
  std::string s = "(";
  for (std::size_t i = 0; i < ranks.size(); ++i) s += (wide && i ? "," : "") + std::to_string(ranks[i]);
  return s + ")";
}

std::vector<Partition> enumerate_partitions(int n, int ell) {
  if (ell < 1 || ell > n - 1) fail("BadEll", "ell must lie in 1..n-1");
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == ell) {
      out.push_back(cur);
      return;
    }
    for (int p = start; p <= n; ++p) {
      cur.push_back(p);
      self(self, p + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

void check_partition(const Partition& p, int n) {
  if (p.empty() || static_cast<int>(p.size()) >= n) fail("BadPartition", "need 1 <= |I| <= n-1");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 1 || p[i] > n) fail("BadPartition", "party out of range");
    if (i && p[i] <= p[i - 1]) fail("BadPartition", "parties must be strictly increasing");
  }
}

Eigen::MatrixXcd matricize(const PureState& s, const Partition& rows) {
  const int n = s.parties();
  check_partition(rows, n);
  Partition perm(rows);
  for (int p = 1; p <= n; ++p)
    if (!std::binary_search(rows.begin(), rows.end(), p)) perm.push_back(p);
  const PureState t = permute_parties(perm, s);
  Eigen::Index r = 1;
  for (int p : rows) r *= s.shape[p - 1];
  using RowMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMat>(t.amps.data(), r, t.size() / r);
}

int numerical_rank(const Eigen::MatrixXcd& m, const RankBackend& backend) {
  if (m.size() == 0) fail("EmptyMatrix", "rank of an empty matrix");
  if (backend.is_exact()) return exact::rank(m);
  if (!(backend.tol > 0)) fail("BadTolerance", "tolerance must be positive");
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = backend.tol * sv(0) * std::sqrt(static_cast<double>(std::max(m.rows(), m.cols())));
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

int MultirankSignature::at(const Partition& p) const {
  for (const auto& [q, r] : ranks)
    if (q == p) return r;
  fail("BadPartition", partition_str(p) + " not in signature");
}

std::vector<int> MultirankSignature::canonical_ranks(int n) const {
  std::vector<int> out;
  for (const auto& [p, r] : ranks) {
    if (2 * ell == n && p.front() != 1) continue;
    out.push_back(r);
  }
  return out;
}

std::string MultirankSignature::canonical(int n) const { return signature_str(canonical_ranks(n)); }

int MultirankSignature::max_rank() const {
  int m = 0;
  for (const auto& pr : ranks) m = std::max(m, pr.second);
  return m;
}

MultirankSignature multirank(const PureState& s, int ell, const RankBackend& backend) {
  MultirankSignature sig;
  sig.ell = ell;
  for (const auto& p : enumerate_partitions(s.parties(), ell))
    sig.ranks.emplace_back(p, numerical_rank(matricize(s, p), backend));
  return sig;
}

int max_flattening_rank(const PureState& s, const RankBackend& backend) {
  int best = 0;
  for (int ell = 1; ell <= s.parties() / 2; ++ell)
    best = std::max(best, multirank(s, ell, backend).max_rank());
  if (s.parties() == 1) best = s.is_zero() ? 0 : 1;
  return best;
}

Eigen::MatrixXcd koszul_flattening_3qutrit(const PureState& s) {
  if (s.shape != Shape{3, 3, 3}) fail("WrongShape", "Koszul flattening needs shape [3,3,3]");
  auto slice = [&](int k) {
    Eigen::Matrix3cd c;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c(i, j) = s.amps(9 * k + 3 * i + j);
    return c;
  };
  const Eigen::Matrix3cd c0 = slice(0), c1 = slice(1), c2 = slice(2);
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(9, 9);
  f.block<3, 3>(0, 3) = c0;
  f.block<3, 3>(0, 6) = -c1;
  f.block<3, 3>(3, 0) = -c0;
  f.block<3, 3>(3, 6) = c2;
  f.block<3, 3>(6, 0) = c1;
  f.block<3, 3>(6, 3) = -c2;
  return f;
}

int koszul_rank(const PureState& s, const RankBackend& backend) {
  return numerical_rank(koszul_flattening_3qutrit(s), backend);
}

int koszul_secant_index(const PureState& s, const RankBackend& backend) {
  return (koszul_rank(s, backend) + 1) / 2;
}

std::vector<double> schmidt_coefficients(const PureState& s) {
  if (s.parties() != 2) fail("NotBipartite", "Schmidt coefficients need two parties");
  if (s.is_zero()) fail("ZeroTensor", "zero state has no Schmidt coefficients");
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matricize(s, {1}));
  const Eigen::VectorXd sv = svd.singularValues();
  const double total = sv.squaredNorm();
  std::vector<double> out(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) out[i] = sv(i) * sv(i) / total;
  return out;
}

bool majorizes(std::vector<double> x, std::vector<double> y) {
  const std::size_t len = std::max(x.size(), y.size());
  x.resize(len, 0.0);
  y.resize(len, 0.0);
  for (const auto* v : {&x, &y}) {
    const double sum = std::accumulate(v->begin(), v->end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-9) fail("NotDistribution", "entries must sum to 1");
    for (double e : *v)
      if (e < -1e-12) fail("NotDistribution", "negative entry");
  }
  std::sort(x.rbegin(), x.rend());
  std::sort(y.rbegin(), y.rend());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < len; ++k) {
    sx += x[k];
    sy += y[k];
    if (sx > sy + 1e-12) return false;
  }
  return true;
}

bool nielsen_convertible(const PureState& src, const PureState& dst) {
  return majorizes(schmidt_coefficients(src), schmidt_coefficients(dst));
}

}  // namespace qgeo
