#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace qgeo::exact {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct GaussInt {
  Int re, im;
  bool is_zero() const { return re == 0 && im == 0; }
};

struct GaussRat {
  Rat re, im;
  GaussRat() = default;
  GaussRat(Rat r, Rat i = 0) : re(std::move(r)), im(std::move(i)) {}
  bool is_zero() const { return re == 0 && im == 0; }
  GaussRat conj() const { return {re, -im}; }
  Rat norm() const { return re * re + im * im; }
  std::complex<double> to_complex() const;
};

GaussRat operator+(const GaussRat& a, const GaussRat& b);
GaussRat operator-(const GaussRat& a, const GaussRat& b);
GaussRat operator-(const GaussRat& a);
GaussRat operator*(const GaussRat& a, const GaussRat& b);
GaussRat operator/(const GaussRat& a, const GaussRat& b);
bool operator==(const GaussRat& a, const GaussRat& b);

// A double is accepted as exact when it is a dyadic rational with at most
// kFracBits fractional bits; that covers every integer and half-integer
// amplitude the named states use.
inline constexpr int kFracBits = 32;
bool representable(double x);
bool representable(std::complex<double> z);
bool representable(const Eigen::MatrixXcd& m);

// Throws ExactModeOnInexactInput when the value is not representable.
GaussRat to_gauss(std::complex<double> z);

// Rank and determinant by fraction-free (Bareiss) elimination over the
// Gaussian integers after clearing the common power-of-two denominator.
int rank(const Eigen::MatrixXcd& m);
GaussRat determinant(const Eigen::MatrixXcd& m);

// Dense univariate polynomials over Q(i), coefficients low to high degree.
using Poly = std::vector<GaussRat>;
void trim(Poly& p);
int degree(const Poly& p);  // -1 for the zero polynomial
Poly interpolate(const std::vector<GaussRat>& xs, const std::vector<GaussRat>& ys);
Poly poly_gcd(Poly a, Poly b);

// Cayley hyperdeterminant of a 2x2x2 array given in row-major order.
GaussRat hyperdeterminant(const std::vector<GaussRat>& c);

}  // namespace qgeo::exact
