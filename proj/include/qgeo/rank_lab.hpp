#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgeo/flattening.hpp"
#include "qgeo/tensor.hpp"

namespace qgeo {

// T = sum_p weights[p] * factors[0].col(p) (x) ... (x) factors[n-1].col(p)
struct CPDecomposition {
  std::vector<Eigen::MatrixXcd> factors;  // party k: d_k x r
  Eigen::VectorXcd weights;

  int terms() const { return static_cast<int>(weights.size()); }
  Shape shape() const;
};

PureState cp_reconstruct(const CPDecomposition& dec);
// ||reconstruct(dec) - s|| / ||s||
double relative_residual(const CPDecomposition& dec, const PureState& s);
CPDecomposition concat(const CPDecomposition& a, const CPDecomposition& b);
// Applies local operators to every factor.
CPDecomposition transform(const std::vector<LocalOperator>& ops, const CPDecomposition& dec);

std::vector<bool> is_concise(const PureState& s, const RankBackend& backend);

struct PersistenceVerdict {
  enum class Kind { persistent_structural, persistent_randomized, not_persistent, unknown };
  Kind kind = Kind::unknown;
  int depth = 0;
  std::string route;               // which test decided
  Eigen::MatrixXcd witness_basis;  // columns e_j, set for not_persistent
  int trials = 0;
  std::uint64_t seed = 0;

  bool persistent() const {
    return kind == Kind::persistent_structural || kind == Kind::persistent_randomized;
  }
};

std::string to_string(PersistenceVerdict::Kind k);

PersistenceVerdict persistence_structural(const PureState& s);

struct PersistenceOptions {
  int trials = 16;          // random candidate vectors |e>
  int contractions = 8;     // random <f| per candidate and level
  int refutation_tries = 64;
  std::uint64_t seed = 7;
  double tol = 1e-8;
};
PersistenceVerdict persistence_randomized(const PureState& s, const PersistenceOptions& opt = {});

long long persistent_lower_bound(const Shape& dims);

struct SubstitutionResult {
  LocalOperator projection;        // onto V' along the span of the chosen summand vectors
  PureState projected;             // projection applied on `mode`
  std::vector<int> zeroed_terms;   // indices of summands sent to zero
  CPDecomposition remaining;       // decomposition of the projected tensor
};
// `keep` spans V' (columns); defaults to the first keep_dim standard basis vectors.
SubstitutionResult substitution_step(const PureState& s, int mode, int keep_dim, const CPDecomposition& dec,
                                     const std::optional<Eigen::MatrixXcd>& keep = std::nullopt);

enum class DecompositionKind { W, N, L_roots_of_unity, Dicke2_roots_of_unity, GHZ, MPrime_composite, M_composite };
DecompositionKind parse_decomposition_kind(const std::string& name);
CPDecomposition minimal_decomposition(DecompositionKind kind, int d, int n);
CPDecomposition d3_111_decomposition();
CPDecomposition support_decomposition(const PureState& s);

struct AlsOptions {
  int restarts = 32;
  int iters = 3000;
  double norm_cap = 1e3;
  std::uint64_t seed = 1;
  double residual_target = 1e-8;
};
std::optional<CPDecomposition> als_upper_bound(const PureState& s, int r, const AlsOptions& opt = {});

struct RankCertificate {
  int lower = 0;
  std::string lower_provenance;  // conciseness, flattening, koszul, persistence, direct_sum, ghz_product
  int upper = 0;
  std::string upper_provenance;  // definition_terms, explicit_decomposition, als_fit
  std::optional<CPDecomposition> witness;
  double witness_residual = 0.0;
  std::vector<std::string> notes;

  bool exact() const { return lower == upper; }
};

struct RankOptions {
  RankBackend backend = RankBackend::numeric();
  bool use_als = false;
  AlsOptions als;
  std::vector<CPDecomposition> candidates;
};
RankCertificate rank_bounds(const PureState& s, const RankOptions& opt = {});

long long direct_sum_bound(long long t_rank, const Shape& p_dims);

struct GhzProductResult {
  long long rank = 0;
  CPDecomposition decomposition;
};
GhzProductResult ghz_product_rank(int d, const PureState& p);

// Largest log(rank_S(dst)) / log(rank_S(src)) over bipartitions S.
double schmidt_rate_bound(const PureState& src, const PureState& dst);

}  // namespace qgeo
