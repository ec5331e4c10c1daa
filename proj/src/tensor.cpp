#include "qgeo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qgeo/errors.hpp"

namespace qgeo {

namespace {

std::string shape_str(const Shape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

void check_shape(const Shape& shape) {
  if (shape.empty()) fail("EmptyShape", "a state needs at least one party");
  for (int d : shape)
    if (d < 1) fail("ShapeMismatch", "dimensions must be positive, got " + shape_str(shape));
}

// Product of dimensions of parties [from, to) (0-based).
Eigen::Index span(const Shape& s, int from, int to) {
  Eigen::Index p = 1;
  for (int i = from; i < to; ++i) p *= s[i];
  return p;
}

}  // namespace

Eigen::Index shape_size(const Shape& shape) { return span(shape, 0, static_cast<int>(shape.size())); }

Eigen::Index flat_index(const Shape& shape, const Index& idx) {
  if (idx.size() != shape.size()) fail("ShapeMismatch", "index length differs from party count");
  Eigen::Index f = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= shape[i]) fail("ShapeMismatch", "index out of range");
    f = f * shape[i] + idx[i];
  }
  return f;
}

Index multi_index(const Shape& shape, Eigen::Index flat) {
  Index idx(shape.size());
  for (std::size_t i = shape.size(); i-- > 0;) {
    idx[i] = static_cast<int>(flat % shape[i]);
    flat /= shape[i];
  }
  return idx;
}

cd PureState::at(const Index& idx) const { return amps(flat_index(shape, idx)); }

bool PureState::is_zero(double tol) const {
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if (std::abs(amps(i)) > tol) return false;
  return true;
}

bool PureState::is_gaussian_integer() const {
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if (std::floor(amps(i).real()) != amps(i).real() || std::floor(amps(i).imag()) != amps(i).imag())
      return false;
  return true;
}

PureState make_tensor(Shape shape, Eigen::VectorXcd amps) {
  check_shape(shape);
  if (amps.size() != shape_size(shape))
    fail("ShapeMismatch", "shape " + shape_str(shape) + " needs " + std::to_string(shape_size(shape)) +
                              " amplitudes, got " + std::to_string(amps.size()));
  return PureState{std::move(shape), std::move(amps)};
}

PureState make_tensor(Shape shape, const std::vector<cd>& amps) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
  return make_tensor(std::move(shape), std::move(v));
}

PureState zero_state(Shape shape) {
  check_shape(shape);
  const auto n = shape_size(shape);
  return PureState{std::move(shape), Eigen::VectorXcd::Zero(n)};
}

PureState basis_state(Shape shape, const Index& idx) {
  PureState s = zero_state(std::move(shape));
  s.amps(flat_index(s.shape, idx)) = 1.0;
  return s;
}

PureState tensor_product(const PureState& a, const PureState& b) {
  Shape shape = a.shape;
  shape.insert(shape.end(), b.shape.begin(), b.shape.end());
  Eigen::VectorXcd amps(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) amps.segment(i * b.size(), b.size()) = a.amps(i) * b.amps;
  return PureState{std::move(shape), std::move(amps)};
}

PureState kronecker_product(const PureState& a, const PureState& b) {
  Shape sa = a.shape, sb = b.shape;
  const std::size_t n = std::max(sa.size(), sb.size());
  sa.resize(n, 1);
  sb.resize(n, 1);
  Shape shape(n);
  for (std::size_t i = 0; i < n; ++i) shape[i] = sa[i] * sb[i];
  PureState out = zero_state(shape);
  Index ka(n), kb(n), k(n);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.amps(i) == cd(0)) continue;
    const Index ia = multi_index(sa, i);
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      if (b.amps(j) == cd(0)) continue;
      const Index ib = multi_index(sb, j);
      for (std::size_t p = 0; p < n; ++p) k[p] = ia[p] * sb[p] + ib[p];
      out.amps(flat_index(shape, k)) += a.amps(i) * b.amps(j);
    }
  }
  return out;
}

PureState direct_sum(const PureState& a, const PureState& b) {
  if (a.parties() != b.parties())
    fail("PartyCountMismatch", std::to_string(a.parties()) + " vs " + std::to_string(b.parties()));
  Shape shape(a.shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) shape[i] = a.shape[i] + b.shape[i];
  PureState out = zero_state(shape);
  for (Eigen::Index i = 0; i < a.size(); ++i) out.amps(flat_index(shape, multi_index(a.shape, i))) = a.amps(i);
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    Index idx = multi_index(b.shape, j);
    for (std::size_t p = 0; p < idx.size(); ++p) idx[p] += a.shape[p];
    out.amps(flat_index(shape, idx)) = b.amps(j);
  }
  return out;
}

PureState apply_on(int party, const LocalOperator& op, const PureState& s) {
  if (party < 1 || party > s.parties()) fail("BadMode", "party " + std::to_string(party));
  const int k = party - 1;
  const int d = s.shape[k];
  if (op.cols() != d)
    fail("DimMismatch", "operator on party " + std::to_string(party) + " has " + std::to_string(op.cols()) +
                            " columns, party dimension is " + std::to_string(d));
  const Eigen::Index left = span(s.shape, 0, k);
  const Eigen::Index right = span(s.shape, k + 1, s.parties());
  const Eigen::Index rows = op.rows();
  Shape shape = s.shape;
  shape[k] = static_cast<int>(rows);
  Eigen::VectorXcd out(left * rows * right);
  using RowMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (Eigen::Index l = 0; l < left; ++l) {
    Eigen::Map<const RowMat> in(s.amps.data() + l * d * right, d, right);
    Eigen::Map<RowMat> dst(out.data() + l * rows * right, rows, right);
    dst.noalias() = op * in;
  }
  return PureState{std::move(shape), std::move(out)};
}

PureState apply_local(const std::vector<LocalOperator>& ops, const PureState& s) {
  if (static_cast<int>(ops.size()) != s.parties())
    fail("DimMismatch", "need one operator per party, got " + std::to_string(ops.size()));
  for (int i = 0; i < s.parties(); ++i)
    if (ops[i].cols() != s.shape[i])
      fail("DimMismatch", "operator on party " + std::to_string(i + 1) + " has wrong column count");
  PureState out = s;
  for (int i = 0; i < s.parties(); ++i) out = apply_on(i + 1, ops[i], out);
  return out;
}

PureState contract_mode(int mode, const Eigen::VectorXcd& f, const PureState& s) {
  if (mode < 1 || mode > s.parties()) fail("BadMode", "mode " + std::to_string(mode));
  if (f.size() != s.shape[mode - 1])
    fail("BadLength", "covector length " + std::to_string(f.size()) + " for dimension " +
                          std::to_string(s.shape[mode - 1]));
  PureState r = apply_on(mode, f.transpose(), s);
  if (r.parties() == 1) return r;  // order-0 results stay as a one-entry vector
  r.shape.erase(r.shape.begin() + (mode - 1));
  return r;
}

PureState permute_parties(const std::vector<int>& perm, const PureState& s) {
  const int n = s.parties();
  if (static_cast<int>(perm.size()) != n) fail("NotAPermutation", "wrong length");
  std::vector<int> seen(n, 0);
  for (int p : perm) {
    if (p < 1 || p > n || seen[p - 1]++) fail("NotAPermutation", "entries must be 1..n once each");
  }
  Shape shape(n);
  for (int k = 0; k < n; ++k) shape[k] = s.shape[perm[k] - 1];
  PureState out = zero_state(shape);
  Index dst(n);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const Index src = multi_index(s.shape, i);
    for (int k = 0; k < n; ++k) dst[k] = src[perm[k] - 1];
    out.amps(flat_index(shape, dst)) = s.amps(i);
  }
  return out;
}

DensityMatrix partial_trace(const PureState& s, const std::vector<int>& keep) {
  const int n = s.parties();
  if (keep.empty() || static_cast<int>(keep.size()) > n) fail("BadPartition", "kept party set is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 1 || keep[i] > n) fail("BadPartition", "party out of range");
    if (i && keep[i] <= keep[i - 1]) fail("BadPartition", "parties must be strictly increasing");
  }
  std::vector<int> perm(keep);
  for (int p = 1; p <= n; ++p)
    if (!std::binary_search(keep.begin(), keep.end(), p)) perm.push_back(p);
  const PureState t = permute_parties(perm, s);
  Eigen::Index rows = 1;
  for (int p : keep) rows *= s.shape[p - 1];
  const Eigen::Index cols = t.size() / rows;
  using RowMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> m(t.amps.data(), rows, cols);
  return m * m.adjoint();
}

PureState operator+(const PureState& a, const PureState& b) {
  if (a.shape != b.shape) fail("ShapeMismatch", shape_str(a.shape) + " vs " + shape_str(b.shape));
  return PureState{a.shape, a.amps + b.amps};
}

PureState operator-(const PureState& a, const PureState& b) {
  if (a.shape != b.shape) fail("ShapeMismatch", shape_str(a.shape) + " vs " + shape_str(b.shape));
  return PureState{a.shape, a.amps - b.amps};
}

PureState operator*(cd c, const PureState& a) { return PureState{a.shape, c * a.amps}; }

double max_abs_diff(const PureState& a, const PureState& b) {
  if (a.shape != b.shape) fail("ShapeMismatch", shape_str(a.shape) + " vs " + shape_str(b.shape));
  return a.size() ? (a.amps - b.amps).cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace qgeo
