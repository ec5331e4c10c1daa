#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qgeo/tensor.hpp"

namespace qgeo {

// Strictly increasing 1-based party indices; the complement is implied.
using Partition = std::vector<int>;

std::string partition_str(const Partition& p);  // "(12)"

struct RankBackend {
  enum class Mode { numeric, exact };
  Mode mode = Mode::numeric;
  double tol = 1e-10;

  static RankBackend numeric(double tol = 1e-10) { return {Mode::numeric, tol}; }
  static RankBackend exact() { return {Mode::exact, 1e-10}; }
  bool is_exact() const { return mode == Mode::exact; }
};

std::vector<Partition> enumerate_partitions(int n, int ell);
void check_partition(const Partition& p, int n);
Eigen::MatrixXcd matricize(const PureState& s, const Partition& rows);
int numerical_rank(const Eigen::MatrixXcd& m, const RankBackend& backend);

struct MultirankSignature {
  int ell = 1;
  std::vector<std::pair<Partition, int>> ranks;  // every C(n, ell) partition

  int at(const Partition& p) const;
  // Drops complements (for ell = n/2 only partitions containing party 1
  // remain) and keeps lexicographic order.
  std::vector<int> canonical_ranks(int n) const;
  std::string canonical(int n) const;  // e.g. "(244)"
  int max_rank() const;
};

std::string signature_str(const std::vector<int>& ranks);

MultirankSignature multirank(const PureState& s, int ell, const RankBackend& backend);

// Largest flattening rank over all bipartitions with at most n/2 parties on
// the row side.
int max_flattening_rank(const PureState& s, const RankBackend& backend);

Eigen::MatrixXcd koszul_flattening_3qutrit(const PureState& s);
int koszul_rank(const PureState& s, const RankBackend& backend);
int koszul_secant_index(const PureState& s, const RankBackend& backend);

std::vector<double> schmidt_coefficients(const PureState& s);
// True iff x is majorized by y.
bool majorizes(std::vector<double> x, std::vector<double> y);
bool nielsen_convertible(const PureState& src, const PureState& dst);

}  // namespace qgeo
