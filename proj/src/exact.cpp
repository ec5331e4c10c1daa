#include "qgeo/exact.hpp"

#include <cmath>
#include <cstdint>

#include "qgeo/errors.hpp"

namespace qgeo::exact {

namespace {

// Exact integer value of x * 2^bits; the caller guarantees integrality.
Int scaled_int(double x, int bits) {
  if (x == 0.0) return 0;
  int e = 0;
  const double m = std::frexp(std::fabs(x), &e);
  Int r = static_cast<std::int64_t>(std::ldexp(m, 53));
  const int shift = e - 53 + bits;
  if (shift >= 0)
    r <<= shift;
  else
    r >>= -shift;
  return x < 0 ? Int(-r) : r;
}

GaussInt gmul(const GaussInt& a, const GaussInt& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussInt gsub(const GaussInt& a, const GaussInt& b) { return {a.re - b.re, a.im - b.im}; }

// Division that must be exact in Z[i] (Bareiss guarantees it).
GaussInt gdiv_exact(const GaussInt& a, const GaussInt& b) {
  const Int n = b.re * b.re + b.im * b.im;
  const Int re = a.re * b.re + a.im * b.im;
  const Int im = a.im * b.re - a.re * b.im;
  if (re % n != 0 || im % n != 0) fail("InternalError", "inexact Bareiss division");
  return {re / n, im / n};
}

std::vector<std::vector<GaussInt>> to_gauss_int(const Eigen::MatrixXcd& m) {
  if (!representable(m)) fail("ExactModeOnInexactInput", "matrix has non-dyadic entries");
  std::vector<std::vector<GaussInt>> a(m.rows(), std::vector<GaussInt>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      a[i][j] = {scaled_int(m(i, j).real(), kFracBits), scaled_int(m(i, j).imag(), kFracBits)};
  return a;
}

// Bareiss elimination in place; returns rank and the last pivot (the
// determinant up to sign for a full-rank square matrix).
int bareiss(std::vector<std::vector<GaussInt>>& a, GaussInt& last_pivot, int& sign) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  GaussInt prev{1, 0};
  std::size_t r = 0;
  sign = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i][j] = gdiv_exact(gsub(gmul(a[r][c], a[i][j]), gmul(a[i][c], a[r][j])), prev);
      a[i][c] = {0, 0};
    }
    prev = a[r][c];
    ++r;
  }
  last_pivot = prev;
  return static_cast<int>(r);
}

}  // namespace

std::complex<double> GaussRat::to_complex() const {
  return {static_cast<double>(re), static_cast<double>(im)};
}

GaussRat operator+(const GaussRat& a, const GaussRat& b) { return {a.re + b.re, a.im + b.im}; }
GaussRat operator-(const GaussRat& a, const GaussRat& b) { return {a.re - b.re, a.im - b.im}; }
GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }
GaussRat operator*(const GaussRat& a, const GaussRat& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
GaussRat operator/(const GaussRat& a, const GaussRat& b) {
  const Rat n = b.norm();
  if (n == 0) fail("DivisionByZero", "Gaussian rational division by zero");
  const GaussRat num = a * b.conj();
  return {num.re / n, num.im / n};
}
bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }

bool representable(double x) {
  if (!std::isfinite(x)) return false;
  const double y = std::ldexp(x, kFracBits);
  return std::isfinite(y) && std::floor(y) == y;
}

bool representable(std::complex<double> z) { return representable(z.real()) && representable(z.imag()); }

bool representable(const Eigen::MatrixXcd& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!representable(m.data()[i])) return false;
  return true;
}

GaussRat to_gauss(std::complex<double> z) {
  if (!representable(z)) fail("ExactModeOnInexactInput", "value is not a dyadic rational");
  const Int den = Int(1) << kFracBits;
  return {Rat(scaled_int(z.real(), kFracBits), den), Rat(scaled_int(z.imag(), kFracBits), den)};
}

int rank(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0;
  auto a = to_gauss_int(m);
  GaussInt piv;
  int sign = 1;
  return bareiss(a, piv, sign);
}

GaussRat determinant(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) fail("NotSquare", "determinant of a non-square matrix");
  if (m.rows() == 0) return GaussRat(1);
  auto a = to_gauss_int(m);
  GaussInt piv;
  int sign = 1;
  if (bareiss(a, piv, sign) < m.rows()) return GaussRat(0);
  // Every entry was scaled by 2^kFracBits, so the determinant carries
  // a factor 2^(kFracBits * n).
  const Rat scale(Int(1), Int(1) << (kFracBits * static_cast<int>(m.rows())));
  return {Rat(piv.re) * scale * sign, Rat(piv.im) * scale * sign};
}

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int degree(const Poly& p) {
  Poly q = p;
  trim(q);
  return static_cast<int>(q.size()) - 1;
}

Poly interpolate(const std::vector<GaussRat>& xs, const std::vector<GaussRat>& ys) {
  // Newton divided differences, then expansion into the monomial basis.
  const std::size_t n = xs.size();
  std::vector<GaussRat> coef = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  Poly p{coef[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    Poly next(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] = next[i + 1] + p[i];
      next[i] = next[i] - p[i] * xs[k];
    }
    next[0] = next[0] + coef[k];
    p = std::move(next);
  }
  trim(p);
  return p;
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    while (a.size() >= b.size() && !a.empty()) {
      const GaussRat f = a.back() / b.back();
      const std::size_t off = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[off + i] = a[off + i] - f * b[i];
      a.pop_back();
      trim(a);
    }
    std::swap(a, b);
  }
  if (!a.empty()) {
    const GaussRat lead = a.back();
    for (auto& c : a) c = c / lead;
  }
  return a;
}

GaussRat hyperdeterminant(const std::vector<GaussRat>& c) {
  if (c.size() != 8) fail("WrongShape", "hyperdeterminant needs 8 coefficients");
  const auto& a000 = c[0];
  const auto& a001 = c[1];
  const auto& a010 = c[2];
  const auto& a011 = c[3];
  const auto& a100 = c[4];
  const auto& a101 = c[5];
  const auto& a110 = c[6];
  const auto& a111 = c[7];
  GaussRat sq = a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 +
                a010 * a010 * a101 * a101 + a100 * a100 * a011 * a011;
  GaussRat cross = a000 * a111 * a011 * a100 + a000 * a111 * a101 * a010 +
                   a000 * a111 * a110 * a001 + a011 * a100 * a101 * a010 +
                   a011 * a100 * a110 * a001 + a101 * a010 * a110 * a001;
  GaussRat quad = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
  return sq - GaussRat(2) * cross + GaussRat(4) * quad;
}

}  // namespace qgeo::exact
