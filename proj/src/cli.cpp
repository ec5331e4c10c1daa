#include "qgeo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgeo/classifier.hpp"
#include "qgeo/degeneration.hpp"
#include "qgeo/errors.hpp"
#include "qgeo/flattening.hpp"
#include "qgeo/invariants.hpp"
#include "qgeo/rank_lab.hpp"
#include "qgeo/state_io.hpp"
#include "qgeo/zoo.hpp"

namespace qgeo::cli {

namespace {

using nlohmann::json;

double default_tol() {
  const char* v = std::getenv("QGEO_TOL");
  if (!v || !*v) return 1e-10;
  char* end = nullptr;
  const double t = std::strtod(v, &end);
  if (*end != '\0' || !(t > 0.0)) fail("BadParams", std::string("QGEO_TOL is not a positive number: ") + v);
  return t;
}

json cjson(cd z) { return json::array({z.real(), z.imag()}); }

json matrix_columns(const Eigen::MatrixXcd& m) {
  json cols = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    json col = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(cjson(m(r, c)));
    cols.push_back(col);
  }
  return cols;
}

json dec_json(const CPDecomposition& dec) {
  json w = json::array();
  for (Eigen::Index p = 0; p < dec.weights.size(); ++p) w.push_back(cjson(dec.weights(p)));
  json f = json::array();
  for (const auto& m : dec.factors) f.push_back(matrix_columns(m));
  return {{"terms", dec.terms()}, {"weights", w}, {"factors", f}};
}

json cert_json(const RankCertificate& c) {
  json j = {{"lower", c.lower},
            {"lower_provenance", c.lower_provenance},
            {"upper", c.upper},
            {"upper_provenance", c.upper_provenance},
            {"exact", c.exact()},
            {"witness_residual", c.witness_residual},
            {"notes", c.notes}};
  if (c.witness) j["witness"] = dec_json(*c.witness);
  return j;
}

json verdict_json(const PersistenceVerdict& v) {
  json j = {{"verdict", to_string(v.kind)}, {"route", v.route}, {"depth", v.depth}};
  if (v.kind == PersistenceVerdict::Kind::persistent_randomized || v.kind == PersistenceVerdict::Kind::not_persistent) {
    j["trials"] = v.trials;
    j["seed"] = v.seed;
  }
  if (v.witness_basis.size() > 0) j["witness_basis"] = matrix_columns(v.witness_basis);
  return j;
}

json report_json(const ClassificationReport& r) {
  json j = {{"n", r.n},
            {"dims", r.dims},
            {"separability", r.separability},
            {"one_multirank", r.one_multirank},
            {"k_lower", r.k_lower},
            {"tangent_flag", to_string(r.tangent_flag)},
            {"compatible_rows", r.compatible_rows},
            {"certificates", r.certificates}};
  auto opt = [&](const char* key, const auto& v) { j[key] = v ? json(*v) : json(nullptr); };
  opt("two_multirank", r.two_multirank);
  opt("k_upper", r.k_upper);
  opt("family", r.family);
  opt("family_label", r.family_label);
  opt("table", r.table);
  opt("three_qubit_class", r.three_qubit_class);
  opt("koszul_index", r.koszul_index);
  return j;
}

json formula_json(const FormulaResult& f) {
  return {{"value", f.value}, {"exceptional", f.exceptional}, {"conjecture", f.conjecture}, {"note", f.note}};
}

json degeneration_json(const DegenerationReport& r) {
  return {{"ok", r.ok},
          {"lowest_order", r.lowest_order},
          {"lowest_term_matches_target", r.lowest_term_matches_target},
          {"error_degree", r.error_degree},
          {"exact", r.exact},
          {"deviation", r.deviation},
          {"message", r.message}};
}

cd parse_scalar(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    fail("BadParams", "not a number: " + text);
  }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

struct Global {
  bool exact = false;
  std::uint64_t seed = 0;
  bool seed_set = false;

  RankBackend backend() const { return exact ? RankBackend::exact() : RankBackend::numeric(default_tol()); }
  std::uint64_t seed_or(std::uint64_t fallback) const { return seed_set ? seed : fallback; }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qgeo: multipartite state geometry toolkit", "qgeo"};
  app.require_subcommand(1);
  Global g;
  app.add_flag("--exact", g.exact, "use the exact rank backend");
  app.add_option("--seed", g.seed, "seed for randomized operations")->each([&](const std::string&) { g.seed_set = true; });

  // make
  auto* make = app.add_subcommand("make", "construct a named state");
  std::string kind, table, row, out_path;
  int d = 0, n = 0, l = -1, idx = -1, r_param = -1, t_param = -1;
  std::vector<std::string> params;
  std::vector<int> excitation;
  make->add_option("--state", kind, "ghz, w, dicke, l, m, mprime, n, nprime, cluster4, x3, g3, exemplar, ...")->required();
  make->add_option("--d", d);
  make->add_option("--n", n);
  make->add_option("--l", l);
  make->add_option("--i", idx);
  make->add_option("--r", r_param);
  make->add_option("--t", t_param);
  make->add_option("--param", params, "key=value (value: re or re,im)");
  make->add_option("--excitation", excitation)->delimiter(',');
  make->add_option("--table", table);
  make->add_option("--row", row);
  make->add_option("--out", out_path);

  // multirank
  auto* mr = app.add_subcommand("multirank", "flattening ranks and canonical signatures");
  std::string state_path;
  std::vector<int> ells{1};
  mr->add_option("state", state_path)->required();
  mr->add_option("--ell", ells)->delimiter(',');

  // classify
  auto* cl = app.add_subcommand("classify", "classification report");
  bool show_table = false, brief = false, no_als = false;
  cl->add_option("state", state_path)->required();
  cl->add_flag("--table", show_table, "print the matched table coordinates");
  cl->add_flag("--brief", brief, "one summary line instead of JSON");
  cl->add_flag("--no-als", no_als, "skip ALS rank certificates");

  // rank
  auto* rk = app.add_subcommand("rank", "rank certificates");
  rk->require_subcommand(1);
  auto* rb = rk->add_subcommand("bounds", "certified rank bounds");
  bool use_als = false;
  int restarts = 32, iters = 3000, als_r = 0;
  double norm_cap = 1e3;
  rb->add_option("state", state_path)->required();
  rb->add_flag("--als", use_als, "search for smaller decompositions with ALS");
  rb->add_option("--restarts", restarts);
  rb->add_option("--iters", iters);
  auto* rd = rk->add_subcommand("decompose", "explicit minimal decomposition");
  std::string dec_kind;
  rd->add_option("--kind", dec_kind)->required();
  rd->add_option("--d", d);
  rd->add_option("--n", n);
  auto* ra = rk->add_subcommand("als", "CP fit at a fixed number of terms");
  ra->add_option("state", state_path)->required();
  ra->add_option("--r", als_r)->required();
  ra->add_option("--restarts", restarts);
  ra->add_option("--iters", iters);
  ra->add_option("--norm-cap", norm_cap);

  // persistence
  auto* ps = app.add_subcommand("persistence", "persistence verdicts");
  PersistenceOptions popt;
  bool structural_only = false;
  ps->add_option("state", state_path)->required();
  ps->add_option("--trials", popt.trials);
  ps->add_option("--contractions", popt.contractions);
  ps->add_option("--refutations", popt.refutation_tries);
  ps->add_flag("--structural", structural_only, "skip the randomized test");

  // degenerate
  auto* dg = app.add_subcommand("degenerate", "catalog degenerations");
  std::string dname;
  int m_param = -1;
  bool verify = false, list = false;
  std::vector<double> eps_grid;
  dg->add_option("--name", dname);
  dg->add_option("--d", d);
  dg->add_option("--n", n);
  dg->add_option("--m", m_param);
  dg->add_flag("--verify", verify);
  dg->add_flag("--list", list);
  dg->add_option("--numeric", eps_grid)->delimiter(',');

  // formulas
  auto* fm = app.add_subcommand("formulas", "closed-form counts and ranks");
  std::string fname;
  std::vector<int> fargs;
  fm->add_option("name", fname)->required();
  fm->add_option("--args", fargs)->delimiter(',');

  // schmidt
  auto* sc = app.add_subcommand("schmidt", "Schmidt coefficients and rate bounds");
  std::string dst_path;
  sc->add_option("state", state_path)->required();
  sc->add_option("target", dst_path);

  // global flags may also follow the verb
  std::function<void(CLI::App*)> fall = [&](CLI::App* a) {
    for (auto* sub : a->get_subcommands({})) {
      sub->fallthrough();
      fall(sub);
    }
  };
  fall(&app);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*make) {
      PureState s;
      if (kind == "exemplar") {
        if (table.empty() || row.empty()) fail("BadParams", "exemplar needs --table and --row");
        s = exemplar(parse_table(table), row);
      } else {
        StateKind k;
        k.name = kind;
        k.excitation = excitation;
        auto put = [&](const char* key, int v, bool set) {
          if (set) k.params[key] = static_cast<double>(v);
        };
        put("d", d, d > 0);
        put("n", n, n > 0);
        put("l", l, l >= 0);
        put("i", idx, idx >= 0);
        put("r", r_param, r_param >= 0);
        put("t", t_param, t_param >= 0);
        for (const auto& p : params) {
          const auto eq = p.find('=');
          if (eq == std::string::npos) fail("BadParams", "--param expects key=value: " + p);
          k.params[p.substr(0, eq)] = parse_scalar(p.substr(eq + 1));
        }
        s = make_named(k);
      }
      if (out_path.empty())
        out << state_to_json(s).dump() << "\n";
      else
        write_state(out_path, s);
      return 0;
    }

    if (*mr) {
      const PureState s = read_state(state_path);
      for (int ell : ells) {
        const MultirankSignature sig = multirank(s, ell, g.backend());
        for (const auto& [part, rank] : sig.ranks) out << partition_str(part) << " -> " << rank << "\n";
        out << "signature " << sig.canonical(s.parties()) << "\n";
      }
      return 0;
    }

    if (*cl) {
      const PureState s = read_state(state_path);
      ClassifyOptions opt;
      opt.backend = g.backend();
      opt.use_als = !no_als;
      opt.seed = g.seed_or(opt.seed);
      const ClassificationReport rep = s.shape == Shape{2, 2, 2, 2} ? classify_4qubit(s, opt) : classify(s, opt);
      if (brief) {
        out << "family=" << rep.family.value_or("undetermined");
        if (rep.three_qubit_class) out << ", 3qubit=" << *rep.three_qubit_class;
        out << "\n";
      } else {
        emit(out, report_json(rep));
      }
      if (show_table) {
        out << "table=" << rep.table.value_or("none") << " rows=";
        for (std::size_t i = 0; i < rep.compatible_rows.size(); ++i) out << (i ? "," : "") << rep.compatible_rows[i];
        out << " label=" << rep.family_label.value_or("undetermined") << "\n";
      }
      return 0;
    }

    if (*rk) {
      if (*rb) {
        const PureState s = read_state(state_path);
        RankOptions opt;
        opt.backend = g.backend();
        opt.use_als = use_als;
        opt.als.restarts = restarts;
        opt.als.iters = iters;
        opt.als.seed = g.seed_or(opt.als.seed);
        emit(out, cert_json(rank_bounds(s, opt)));
        return 0;
      }
      if (*rd) {
        const DecompositionKind k = parse_decomposition_kind(dec_kind);
        const int dd = d > 0 ? d : 2, nn = n > 0 ? n : 3;
        const CPDecomposition dec = minimal_decomposition(k, dd, nn);
        json j = {{"kind", dec_kind}, {"d", dd}, {"n", nn}, {"decomposition", dec_json(dec)}};
        std::optional<PureState> ref;
        switch (k) {
          case DecompositionKind::W: ref = w_state(nn, 2); break;
          case DecompositionKind::N: ref = n_state(dd, nn); break;
          case DecompositionKind::L_roots_of_unity: ref = l_state(dd, nn); break;
          case DecompositionKind::GHZ: ref = ghz(dd, nn); break;
          case DecompositionKind::MPrime_composite: ref = mprime_state(dd, nn); break;
          case DecompositionKind::M_composite: ref = m_state(dd, nn); break;
          case DecompositionKind::Dicke2_roots_of_unity: break;
        }
        if (ref && ref->shape == dec.shape()) j["residual"] = relative_residual(dec, *ref);
        emit(out, j);
        return 0;
      }
      if (*ra) {
        const PureState s = read_state(state_path);
        AlsOptions opt;
        opt.restarts = restarts;
        opt.iters = iters;
        opt.norm_cap = norm_cap;
        opt.seed = g.seed_or(opt.seed);
        const auto fit = als_upper_bound(s, als_r, opt);
        json j = {{"r", als_r}, {"found", fit.has_value()}, {"restarts", restarts}, {"seed", opt.seed}};
        if (fit) {
          j["residual"] = relative_residual(*fit, s);
          j["decomposition"] = dec_json(*fit);
        }
        emit(out, j);
        return fit ? 0 : 1;
      }
    }

    if (*ps) {
      const PureState s = read_state(state_path);
      popt.seed = g.seed_or(popt.seed);
      json j;
      const PersistenceVerdict sv = persistence_structural(s);
      j["structural"] = verdict_json(sv);
      bool persistent = sv.persistent();
      if (!structural_only) {
        const PersistenceVerdict rv = persistence_randomized(s, popt);
        j["randomized"] = verdict_json(rv);
        persistent = persistent || rv.persistent();
      }
      if (persistent) j["rank_lower_bound"] = persistent_lower_bound(s.shape);
      emit(out, j);
      return 0;
    }

    if (*dg) {
      if (list) {
        for (const auto& name : catalog_names()) out << name << "\n";
        return 0;
      }
      if (dname.empty()) fail("BadParams", "degenerate needs --name or --list");
      std::map<std::string, int> p;
      if (d > 0) p["d"] = d;
      if (n > 0) p["n"] = n;
      if (m_param >= 0) p["m"] = m_param;
      const DegenerationWitness w = catalog_witness(dname, p);
      json j = {{"name", w.name},
                {"source", w.source_kind},
                {"target", w.target_kind},
                {"expected_order", w.expected_order},
                {"printed", w.printed}};
      bool ok = true;
      if (verify) {
        const DegenerationReport rep = verify_degeneration(w);
        ok = rep.ok;
        j["verify"] = degeneration_json(rep);
        const double rate = schmidt_rate_bound(w.source, w.target);
        const bool rate_one = rep.ok && std::fabs(rate - 1.0) < 1e-12;
        j["schmidt_rate_bound"] = rate;
        j["rate_one"] = rate_one;
        j["conversion"] = rate_one ? w.source_kind + " -> " + w.target_kind + " by asymptotic SLOCC at rate 1"
                                   : std::string("no rate-one certificate");
      }
      if (!eps_grid.empty()) j["numeric"] = {{"eps", eps_grid}, {"deviation", numeric_limit_deviations(w, eps_grid)}};
      emit(out, j);
      return ok ? 0 : 1;
    }

    if (*fm) {
      auto need = [&](std::size_t k) {
        if (fargs.size() < k) fail("BadParams", fname + " needs " + std::to_string(k) + " arguments");
      };
      json j;
      if (fname == "generic_rank") {
        j = formula_json(generic_rank(fargs));
      } else if (fname == "tripartite_generic_rank") {
        need(1);
        j = formula_json(tripartite_generic_rank(fargs[0]));
      } else if (fname == "qubit_family_count") {
        need(1);
        j = {{"value", qubit_family_count(fargs[0])}};
      } else if (fname == "expected_secant_dim") {
        need(2);
        j = formula_json(expected_secant_dim(fargs[0], std::vector<int>(fargs.begin() + 1, fargs.end())));
      } else if (fname == "symmetric_generic_rank") {
        need(2);
        j = formula_json(symmetric_generic_rank(fargs[0], fargs[1]));
      } else if (fname == "waring_rank") {
        j = {{"value", waring_rank_monomial(fargs)}};
      } else if (fname == "waring_brank") {
        j = formula_json(waring_brank_monomial(fargs));
      } else if (fname == "dicke_rank_brank") {
        need(2);
        const auto [rank, brank] = dicke_rank_brank(fargs[0], fargs[1]);
        j = {{"rank", rank}, {"border_rank", brank}};
      } else {
        fail("UnknownFormula", fname);
      }
      j["name"] = fname;
      j["args"] = fargs;
      emit(out, j);
      return 0;
    }

    if (*sc) {
      const PureState s = read_state(state_path);
      json j;
      if (s.parties() == 2) j["schmidt_coefficients"] = schmidt_coefficients(s);
      json ranks = json::object();
      const RankBackend backend = g.backend();
      for (int ell = 1; ell <= s.parties() / 2; ++ell)
        for (const auto& part : enumerate_partitions(s.parties(), ell))
          ranks[partition_str(part)] = numerical_rank(matricize(s, part), backend);
      j["schmidt_ranks"] = ranks;
      if (!dst_path.empty()) {
        const PureState t = read_state(dst_path);
        j["schmidt_rate_bound"] = schmidt_rate_bound(s, t);
        if (s.parties() == 2 && t.parties() == 2) j["nielsen_convertible"] = nielsen_convertible(s, t);
      }
      emit(out, j);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == "InternalError" ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qgeo::cli
