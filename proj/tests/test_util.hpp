#pragma once

#include <functional>
#include <random>
#include <string>

#include "qgeo/errors.hpp"
#include "qgeo/tensor.hpp"

namespace qt {

using qgeo::cd;

inline std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const qgeo::Error& e) {
    return e.code();
  }
  return "";
}

inline cd gauss(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

inline qgeo::PureState random_state(const qgeo::Shape& shape, std::mt19937_64& rng) {
  Eigen::VectorXcd a(qgeo::shape_size(shape));
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = gauss(rng);
  return qgeo::make_tensor(shape, a);
}

inline Eigen::MatrixXcd random_matrix(int r, int c, std::mt19937_64& rng) {
  Eigen::MatrixXcd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = gauss(rng);
  return m;
}

// Random local operators, one per party, all invertible with probability one.
inline std::vector<qgeo::LocalOperator> random_slocc(const qgeo::Shape& shape, std::mt19937_64& rng) {
  std::vector<qgeo::LocalOperator> ops;
  for (int d : shape) ops.push_back(random_matrix(d, d, rng));
  return ops;
}

// Sum of `terms` random product states.
inline qgeo::PureState random_rank(const qgeo::Shape& shape, int terms, std::mt19937_64& rng) {
  qgeo::PureState s = qgeo::zero_state(shape);
  for (int t = 0; t < terms; ++t) {
    qgeo::PureState p = qgeo::make_tensor({1}, std::vector<cd>{1.0});
    bool first = true;
    for (int d : shape) {
      Eigen::VectorXcd v(d);
      for (int i = 0; i < d; ++i) v(i) = gauss(rng);
      qgeo::PureState f = qgeo::make_tensor({d}, v);
      p = first ? f : qgeo::tensor_product(p, f);
      first = false;
    }
    s = s + p;
  }
  return s;
}

// Amplitude at a bit string such as "0110".
inline cd amp(const qgeo::PureState& s, const std::string& digits) {
  qgeo::Index idx;
  for (char c : digits) idx.push_back(c - '0');
  return s.at(idx);
}

}  // namespace qt
