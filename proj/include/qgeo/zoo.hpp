#pragma once

#include <map>
#include <string>
#include <vector>

#include "qgeo/tensor.hpp"

namespace qgeo {

// Named state constructors. Every state is unnormalized and, unless the
// definition itself carries a fractional or complex prefactor, has integer
// amplitudes.
PureState ghz(int d, int n);
PureState ghz_zeta(int d, int n, int zeta);  // |0..0> + ... + |zeta..zeta>
// |beta alpha...alpha> summed over positions; alpha=0, beta=1 by default.
PureState w_state(int n, int d = 2, int alpha = 0, int beta = 1);
PureState dicke(int n, int l);
PureState dicke_qudit(int n, const std::vector<int>& excitation);
PureState bell(int which = 1);  // 1: Phi+, 2: Phi-, 3: Psi+, 4: Psi-
PureState cluster4(int i);
PureState l_state(int d, int n);
PureState m_state(int d, int n);
PureState mprime_state(int d, int n);
PureState n_state(int d, int n);
PureState nprime_state(int d, int n);
PureState y_state(int n);
PureState x3(int alpha = 0, int beta = 1, int gamma = 2);
PureState g3();
// alpha|0^n> + beta|0^r 1^(n-r)> + gamma|1^r 0^(n-r)> + delta|1^n>
PureState g_nr(int n, int r, cd alpha = 1.0, cd beta = 1.0, cd gamma = 1.0, cd delta = 2.0);
PureState m_nr(int n, int r);  // GHZ_n + |0^r 1^(n-r)>
PureState n_nt(int n, int t);  // W_n + |1^t 0^(n-t)>
PureState m4(cd alpha = 1.0, cd beta = 1.0, cd gamma = 1.0);
PureState x4();  // W_4 + |1111>
PureState nonsymmetric_persistent(cd alpha = 1.0, cd beta = 1.0, int sign = 1);
PureState separable_curve(int n, cd eps);  // (|0> + eps|1>)^{(x)n}
// |G3> + t (|1>+|2>)(|0>+|2>)(|0>+|1>)
PureState g3_pencil(cd t);

// Change of basis taking M(d,n) to M'(d,n) on every party.
LocalOperator m_to_mprime_basis(int d);

struct StateKind {
  std::string name;
  std::map<std::string, cd> params;
  std::vector<int> excitation;

  int get_int(const std::string& key, int fallback) const;
  cd get(const std::string& key, cd fallback) const;
};

// Dispatches on the lowercase kind name: ghz, ghz_zeta, w, dicke,
// dicke_qudit, bell, cluster4, l, m, mprime, n, nprime, y, x3, x4, g3,
// g3_pencil, g_nr, m_nr, n_nt, m4, nonsymmetric, separable_curve.
PureState make_named(const StateKind& kind);

enum class Table { T2_1, T4_1, T5_1, T5_2, T5qubit };
Table parse_table(const std::string& name);
std::string table_name(Table t);
PureState exemplar(Table table, const std::string& row_key);
std::vector<std::string> exemplar_rows(Table table);

}  // namespace qgeo
