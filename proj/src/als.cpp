#include <cmath>
#include <random>

#include "qgeo/errors.hpp"
#include "qgeo/rank_lab.hpp"

namespace qgeo {

namespace {

// Rows follow the column order of matricize(s, {k+1}): remaining parties in
// increasing order, the last one varying fastest.
Eigen::MatrixXcd khatri_rao_except(const std::vector<Eigen::MatrixXcd>& a, std::size_t skip) {
  const Eigen::Index r = a[0].cols();
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Ones(1, r);
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (m == skip) continue;
    Eigen::MatrixXcd next(z.rows() * a[m].rows(), r);
    for (Eigen::Index i = 0; i < z.rows(); ++i)
      for (Eigen::Index j = 0; j < a[m].rows(); ++j)
        next.row(i * a[m].rows() + j) = z.row(i).cwiseProduct(a[m].row(j));
    z = std::move(next);
  }
  return z;
}

}  // namespace

std::optional<CPDecomposition> als_upper_bound(const PureState& s, int r, const AlsOptions& opt) {
  if (r < 1) fail("BadParams", "r must be at least 1");
  const double tnorm = s.norm();
  if (tnorm == 0.0) {
    CPDecomposition dec;
    for (int d : s.shape) dec.factors.push_back(Eigen::MatrixXcd::Zero(d, r));
    dec.weights = Eigen::VectorXcd::Zero(r);
    return dec;
  }
  const int n = s.parties();
  std::vector<Eigen::MatrixXcd> unfold;
  for (int k = 1; k <= n; ++k) unfold.push_back(n == 1 ? Eigen::MatrixXcd(s.amps) : matricize(s, {k}));

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g;
  for (int restart = 0; restart < opt.restarts; ++restart) {
    std::vector<Eigen::MatrixXcd> a;
    for (int d : s.shape) {
      Eigen::MatrixXcd m(d, r);
      for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cd(g(rng), g(rng));
      a.push_back(m);
    }
    double res = 1.0, checkpoint = 1.0;
    for (int it = 0; it < opt.iters; ++it) {
      for (int k = 0; k < n; ++k) {
        const Eigen::MatrixXcd z = khatri_rao_except(a, k);
        Eigen::MatrixXcd gram = z.transpose() * z.conjugate();
        const double reg = 1e-14 * std::max(1.0, gram.diagonal().real().maxCoeff());
        gram.diagonal().array() += reg;
        a[k] = (unfold[k] * z.conjugate()) * gram.inverse();
        if (k == n - 1) res = (unfold[k] - a[k] * z.transpose()).norm() / tnorm;
      }
      if (res < opt.residual_target * 1e-3) break;
      if (it % 200 == 199) {
        if (res > 0.999 * checkpoint && res > 1e-4) break;  // stalled far from a fit
        checkpoint = res;
      }
    }
    CPDecomposition dec;
    dec.weights = Eigen::VectorXcd::Ones(r);
    for (int k = 0; k < n; ++k) {
      Eigen::MatrixXcd f = a[k];
      for (int p = 0; p < r; ++p) {
        const double c = f.col(p).norm();
        if (c > 0) f.col(p) /= c;
        dec.weights(p) *= c;
      }
      dec.factors.push_back(f);
    }
    if (dec.weights.cwiseAbs().maxCoeff() > opt.norm_cap * tnorm) continue;
    if (relative_residual(dec, s) < opt.residual_target) return dec;
  }
  return std::nullopt;
}

}  // namespace qgeo
