#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qgeo/flattening.hpp"
#include "qgeo/tensor.hpp"

namespace qgeo {

struct FormulaResult {
  long long value = 0;
  bool exceptional = false;
  bool conjecture = false;  // value relies on an unproven statement
  std::string note;
};

double wootters_concurrence(const DensityMatrix& rho);
double generalized_concurrence(const PureState& s, const Partition& cut);

struct ThreeQubitInvariants {
  double c_ab = 0, c_ac = 0, c_bc = 0;  // C_AB traces out party 3, and so on
  double c_a_bc = 0;
  double tau = 0;
};
ThreeQubitInvariants three_qubit_invariants(const PureState& s);
double tangle_3qubit(const PureState& s);

FormulaResult generic_rank(const std::vector<int>& dims);
FormulaResult tripartite_generic_rank(int d);
long long qubit_family_count(int n);
FormulaResult expected_secant_dim(int k, const std::vector<int>& dims);
FormulaResult symmetric_generic_rank(int n, int d);
long long waring_rank_monomial(const std::vector<int>& alpha);
FormulaResult waring_brank_monomial(const std::vector<int>& alpha);
std::pair<int, int> dicke_rank_brank(int n, int l);

}  // namespace qgeo
