#pragma once

#include <map>
#include <string>
#include <vector>

#include "qgeo/tensor.hpp"

namespace qgeo {

// Laurent polynomial in the formal variable delta, where eps = delta^q.
struct LaurentScalar {
  std::map<int, cd> coeffs;  // exponent -> coefficient, no stored zeros

  LaurentScalar() = default;
  LaurentScalar(cd c, int exponent = 0);

  bool is_zero() const { return coeffs.empty(); }
  cd eval(double delta) const;
};

LaurentScalar operator+(const LaurentScalar& a, const LaurentScalar& b);
LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b);

struct LaurentOperator {
  int rows = 0, cols = 0;
  std::vector<LaurentScalar> entries;  // row-major
  int eps_power = 1;

  LaurentOperator() = default;
  LaurentOperator(int r, int c, int q = 1);
  static LaurentOperator constant(const Eigen::MatrixXcd& m, int q = 1);
  static LaurentOperator diagonal(const std::vector<LaurentScalar>& d, int q = 1);

  LaurentScalar& at(int i, int j) { return entries[i * cols + j]; }
  const LaurentScalar& at(int i, int j) const { return entries[i * cols + j]; }
  // Coefficient matrices by exponent of delta.
  std::map<int, Eigen::MatrixXcd> by_exponent() const;
  Eigen::MatrixXcd eval(double delta) const;
};

LaurentOperator operator*(const LaurentOperator& a, const LaurentOperator& b);

using LaurentTensor = std::map<int, PureState>;  // exponent of delta -> coefficient tensor

LaurentTensor laurent_apply(const std::vector<LaurentOperator>& ops, const LaurentScalar& scale, const PureState& s);

struct DegenerationWitness {
  std::string name;
  std::string source_kind, target_kind;
  PureState source, target;
  std::vector<LaurentOperator> operators;
  LaurentScalar global_scale = LaurentScalar(1.0);
  int expected_order = 0;  // in delta
  bool printed = true;     // false for entries extrapolated beyond the printed formulas
};

struct DegenerationReport {
  bool ok = false;
  int lowest_order = 0;
  bool lowest_term_matches_target = false;
  int error_degree = 0;
  bool exact = false;  // compared with zero tolerance
  double deviation = 0.0;
  std::string message;
};

DegenerationReport verify_degeneration(const DegenerationWitness& w);

// Entries: ghz_to_w, x4_to_w, m4_to_w, ghz_to_l, l_to_m, m_to_n, l_to_n,
// ghz_to_mprime, ghz_to_nprime, ghz2_to_x3, ghz2_to_y3, sep_to_dicke.
// Params: d, n, m as needed.
DegenerationWitness catalog_witness(const std::string& name, const std::map<std::string, int>& params = {});
std::vector<std::string> catalog_names();

DegenerationWitness identity_witness(const PureState& s);
// Applies `second` after `first`; the source of `second` must be the target of `first`.
DegenerationWitness compose(const DegenerationWitness& first, const DegenerationWitness& second);

// Relative distance to the target of the rescaled operators at each eps.
std::vector<double> numeric_limit_deviations(const DegenerationWitness& w, const std::vector<double>& eps_grid);
double numeric_limit_check(const DegenerationWitness& w, const std::vector<double>& eps_grid);

}  // namespace qgeo
