#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgeo/flattening.hpp"
#include "qgeo/zoo.hpp"

namespace qgeo {

enum class TangentFlag { secant, tangent, unknown };
std::string to_string(TangentFlag f);

struct TableRow {
  std::string key;        // exemplar key in the zoo
  std::string subfamily;  // row label as printed in the table
  int k = 1;              // secant index of the family column
  bool tangent = false;   // tau_k column
  std::string one_multirank, two_multirank;  // computed from the exemplar
};

std::string family_name(int k, bool tangent);  // "Segre", "sigma3", "tau2"
const std::vector<TableRow>& table_rows(Table t);
std::optional<Table> table_for_shape(const Shape& dims);

struct ClassifyOptions {
  RankBackend backend = RankBackend::numeric();
  bool use_rank_certificates = true;
  bool use_als = true;
  std::uint64_t seed = 11;
};

struct ClassificationReport {
  int n = 0;
  Shape dims;
  std::vector<std::vector<int>> separability;  // maximal product factors, 1-based parties
  std::string one_multirank;
  std::optional<std::string> two_multirank;
  int k_lower = 0;
  std::optional<int> k_upper;
  TangentFlag tangent_flag = TangentFlag::unknown;
  std::optional<std::string> family;        // e.g. "tau2"
  std::optional<std::string> family_label;  // table row
  std::optional<std::string> table;
  std::vector<std::string> compatible_rows;
  std::optional<std::string> three_qubit_class;
  std::optional<int> koszul_index;
  std::vector<std::string> certificates;
};

ClassificationReport classify(const PureState& s, const ClassifyOptions& opt = {});

// Decision by the zero pattern of (C_BC, C_AC, C_AB, tau) with tolerance 1e-9;
// returns one of Sep, B1, B2, B3, W, GHZ.
std::string classify_3qubit(const PureState& s);

ClassificationReport classify_4qubit(const PureState& s, const ClassifyOptions& opt = {});
ClassificationReport classify_3qutrit(const PureState& s, const ClassifyOptions& opt = {});

enum class TripleStatus { achievable, forbidden };
TripleStatus two_multirank_constraint(int a, int b, int c);

std::vector<std::vector<int>> separability(const PureState& s, const RankBackend& backend);

}  // namespace qgeo
