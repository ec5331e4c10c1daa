#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qgeo {

using cd = std::complex<double>;
using Shape = std::vector<int>;
using Index = std::vector<int>;
using LocalOperator = Eigen::MatrixXcd;
using DensityMatrix = Eigen::MatrixXcd;

// Dense order-n tensor. Amplitudes are stored row-major with the last party
// index varying fastest. States are never normalized implicitly.
struct PureState {
  Shape shape;
  Eigen::VectorXcd amps;

  int parties() const { return static_cast<int>(shape.size()); }
  int dim(int party) const { return shape.at(party - 1); }  // 1-based
  Eigen::Index size() const { return amps.size(); }
  cd at(const Index& idx) const;
  double norm() const { return amps.norm(); }
  bool is_zero(double tol = 0.0) const;
  // All real and imaginary parts are integers.
  bool is_gaussian_integer() const;
};

PureState make_tensor(Shape shape, const std::vector<cd>& amps);
PureState make_tensor(Shape shape, Eigen::VectorXcd amps);
PureState zero_state(Shape shape);
PureState basis_state(Shape shape, const Index& idx);

// Flat offset of a multi-index and its inverse.
Eigen::Index flat_index(const Shape& shape, const Index& idx);
Index multi_index(const Shape& shape, Eigen::Index flat);
Eigen::Index shape_size(const Shape& shape);

PureState tensor_product(const PureState& a, const PureState& b);
PureState kronecker_product(const PureState& a, const PureState& b);
PureState direct_sum(const PureState& a, const PureState& b);
PureState apply_local(const std::vector<LocalOperator>& ops, const PureState& s);
// Applies a single operator on one party (1-based) and leaves the others alone.
PureState apply_on(int party, const LocalOperator& op, const PureState& s);
PureState contract_mode(int mode, const Eigen::VectorXcd& f, const PureState& s);
// New party k is old party perm[k-1]; perm is 1-based.
PureState permute_parties(const std::vector<int>& perm, const PureState& s);
DensityMatrix partial_trace(const PureState& s, const std::vector<int>& keep);

PureState operator+(const PureState& a, const PureState& b);
PureState operator-(const PureState& a, const PureState& b);
PureState operator*(cd c, const PureState& a);

// max |a - b| over amplitudes; throws ShapeMismatch when shapes differ.
double max_abs_diff(const PureState& a, const PureState& b);

}  // namespace qgeo
