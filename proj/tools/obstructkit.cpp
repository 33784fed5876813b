// obstructkit command-line driver.
//
// Exit codes: 0 ok, 1 parse/usage, 2 hypothesis gate, 3 numerical
// inconsistency, 4 audit bound violation.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "obstructkit/obstructkit.hpp"

namespace ok = obstructkit;
using ok::io::Json;

namespace {

enum Exit { kOk = 0, kParse = 1, kHypothesis = 2, kNumerical = 3, kBound = 4 };

int exit_code_for(ok::ErrorKind kind) {
  switch (kind) {
    case ok::ErrorKind::Parse:
    case ok::ErrorKind::InvalidArgument:
    case ok::ErrorKind::InvalidSize:
    case ok::ErrorKind::InvalidFamily:
      return kParse;
    case ok::ErrorKind::NumericalInconsistency:
    case ok::ErrorKind::Overflow:
      return kNumerical;
    case ok::ErrorKind::BoundViolation:
      return kBound;
    default:
      return kHypothesis;
  }
}

struct Globals {
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::string out;
  std::string format = "json";
  bool timings = false;
  std::map<std::string, double> tol;

  ok::Tolerances tolerances() const {
    ok::Tolerances t = ok::default_tolerances();
    if (auto it = tol.find("spectral"); it != tol.end()) t.spectral_per_dim = it->second;
    if (auto it = tol.find("singularity"); it != tol.end()) t.singularity = it->second;
    if (auto it = tol.find("unitarity"); it != tol.end()) t.unitarity = it->second;
    return t;
  }
  double get(const std::string& name, double fallback) const {
    const auto it = tol.find(name);
    return it == tol.end() ? fallback : it->second;
  }
};

const std::vector<std::string> kTolNames{"spectral", "singularity", "unitarity", "residue", "gap", "bound_scale"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ok::Error(ok::ErrorKind::Parse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Inline JSON, or @path for a file.
Json json_arg(const std::string& text) {
  return ok::io::parse_text(!text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text);
}

void emit(const Globals& g, const Json& j) {
  const std::string text = ok::io::dump(j);
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw ok::Error(ok::ErrorKind::Parse, "cannot write '" + g.out + "'");
  f << text;
}

/// Exact fraction from "a/b", or nullopt for decimal input.
std::optional<ok::Fraction> parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::nullopt;
  try {
    return ok::Fraction::make(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw ok::Error(ok::ErrorKind::Parse, "bad fraction '" + s + "'");
  } catch (const std::out_of_range&) {
    throw ok::Error(ok::ErrorKind::Parse, "fraction out of range '" + s + "'");
  }
}

double parse_phase(const std::string& s) {
  if (auto f = parse_fraction(s)) return f->value();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ok::Error(ok::ErrorKind::Parse, "bad phase '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

// ---- gen ----

struct GenArgs {
  std::string family;
  double delta = 0.5;
  int k = 1;
  int n = 7;
  int genus = 2;
  bool nonorientable = false;
  bool honest = false;
  int dim = 3;
  double eta = 0.01;
  std::string base = "z2";
};

Json cmd_gen(const Globals& g, const GenArgs& a) {
  ok::CounterRng rng(g.seed);
  const ok::Tolerances tol = g.tolerances();
  if (a.family == "voiculescu" || a.family == "clock-shift") {
    auto [u, v] = a.family == "voiculescu" ? ok::voiculescu_pair(a.delta, a.k) : ok::clock_shift(a.n);
    return ok::io::to_json(ok::QuasiRep(ok::free_abelian_presentation(2), {u, v}, ok::Flavor::Unitary,
                                        ok::NormalForm::Abelian, tol));
  }
  if (a.family == "surface") {
    if (!a.honest) throw ok::Error(ok::ErrorKind::InvalidArgument, "gen surface currently needs --honest");
    const ok::Presentation p = ok::surface_presentation(a.genus, !a.nonorientable);
    if (a.dim < 1) throw ok::Error(ok::ErrorKind::InvalidArgument, "--dim must be positive");
    return ok::io::to_json(
        ok::QuasiRep(p, ok::random_surface_rep(a.genus, !a.nonorientable, a.dim, rng), ok::Flavor::Unitary, ok::NormalForm::Free, tol));
  }
  if (a.family == "perturbed") {
    if (a.dim < 1) throw ok::Error(ok::ErrorKind::InvalidArgument, "--dim must be positive");
    if (!(a.eta >= 0.0)) throw ok::Error(ok::ErrorKind::InvalidArgument, "--eta must be nonnegative");
    std::optional<ok::QuasiRep> honest;
    if (a.base == "z2") {
      honest.emplace(ok::free_abelian_presentation(2), ok::random_commuting_unitaries(a.dim, 2, rng), ok::Flavor::Unitary,
                     ok::NormalForm::Abelian, tol);
    } else if (a.base == "surface") {
      honest.emplace(ok::surface_presentation(a.genus, true), ok::random_surface_rep(a.genus, true, a.dim, rng),
                     ok::Flavor::Unitary, ok::NormalForm::Free, tol);
    } else {
      throw ok::Error(ok::ErrorKind::InvalidArgument, "--base must be z2 or surface");
    }
    const auto set = ok::symmetric_generating_set(honest->presentation().num_generators());
    return ok::io::to_json(ok::perturbed_quasi_rep(*honest, set, a.eta, rng));
  }
  throw ok::Error(ok::ErrorKind::InvalidArgument, "unknown family '" + a.family + "'");
}

// ---- invariants ----

struct InvariantArgs {
  std::string input;
  std::string relator;
  double unitarize_eps = 0.0;
};

Json cmd_invariants(const Globals& g, const InvariantArgs& a) {
  const ok::Tolerances tol = g.tolerances();
  ok::QuasiRep phi = ok::io::quasi_rep_from_json(ok::io::parse_text(read_file(a.input)), tol);
  const ok::Presentation& pres = phi.presentation();
  const auto set = ok::symmetric_generating_set(pres.num_generators());
  Json out;
  out["defect"] = ok::io::to_json(ok::defect(phi, set), pres);
  if (a.unitarize_eps != 0.0) {
    if (!(a.unitarize_eps > 0.0 && a.unitarize_eps < 1.0)) {
      throw ok::Error(ok::ErrorKind::InvalidArgument, "--unitarize needs 0 < eps < 1", a.unitarize_eps);
    }
    phi = ok::unitarize(phi, set, a.unitarize_eps);
    out["unitarized_defect"] = ok::io::to_json(ok::defect(phi, set), pres);
  }

  std::optional<ok::GroupWord> relator;
  if (!a.relator.empty()) {
    relator = pres.parse(a.relator);
  } else {
    for (const auto& r : pres.relators()) {
      if (ok::in_commutator_subgroup(r, pres.num_generators())) {
        relator = r;
        break;
      }
    }
  }
  if (!relator) {
    out["winding"] = nullptr;
    return out;
  }
  const ok::CommutatorDecomposition d = ok::commutator_decompose(*relator, pres.num_generators());
  Json pairs = Json::array();
  for (const auto& [x, y] : d.pairs) pairs.push_back(Json::array({pres.format(x), pres.format(y)}));
  out["relator"] = pres.format(*relator);
  out["decomposition"] = std::move(pairs);
  if (phi.flavor() != ok::Flavor::Unitary) {
    throw ok::Error(ok::ErrorKind::NotUnitary,
                    "winding needs unitary values; pass --unitarize EPS to unitarize first");
  }
  ok::WindingOptions wopt;
  wopt.residue_tol = g.get("residue", wopt.residue_tol);
  out["winding"] = ok::io::to_json(ok::winding_class(phi, d, wopt));
  return out;
}

// ---- audit ----

struct AuditArgs {
  std::vector<std::string> suites;
  std::string replay;
};

int cmd_audit(const Globals& g, const AuditArgs& a) {
  ok::AuditOptions opt;
  opt.seed = g.seed;
  opt.trials = g.trials;
  opt.bound_scale = g.get("bound_scale", 1.0);
  if (!(opt.bound_scale > 0.0)) throw ok::Error(ok::ErrorKind::InvalidArgument, "--tol.bound_scale must be positive");
  std::vector<ok::Suite> suites;
  for (const auto& s : ok::audit_suites()) {
    if (a.suites.empty() || std::find(a.suites.begin(), a.suites.end(), s.name) != a.suites.end()) suites.push_back(s);
  }
  if (suites.size() != (a.suites.empty() ? ok::audit_suites().size() : a.suites.size())) {
    throw ok::Error(ok::ErrorKind::InvalidArgument, "unknown suite name");
  }

  if (!a.replay.empty()) {
    const auto colon = a.replay.rfind(':');
    if (colon == std::string::npos) throw ok::Error(ok::ErrorKind::Parse, "--replay expects SUITE:TRIAL");
    const std::string name = a.replay.substr(0, colon);
    std::size_t trial = 0;
    try {
      trial = std::stoull(a.replay.substr(colon + 1));
    } catch (const std::exception&) {
      throw ok::Error(ok::ErrorKind::Parse, "--replay expects SUITE:TRIAL");
    }
    for (const auto& s : ok::audit_suites()) {
      if (s.name != name) continue;
      const ok::TrialOutcome r = ok::run_trial(s, opt.seed, trial, opt.bound_scale);
      emit(g, Json{{"suite", s.name},
                   {"seed", opt.seed},
                   {"trial", trial},
                   {"trial_key", ok::trial_key(opt.seed, s, trial)},
                   {"bound_scale", opt.bound_scale},
                   {"passed", r.passed},
                   {"ratio", r.ratio},
                   {"detail", r.detail}});
      return r.passed ? kOk : kBound;
    }
    throw ok::Error(ok::ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
  }

  bool passed = true;
  Json reports = Json::array();
  for (const auto& s : suites) {
    const ok::SuiteReport r = ok::run_suite(s, opt);
    passed = passed && r.passed;
    reports.push_back(ok::io::to_json(r, g.timings));
  }
  emit(g, Json{{"seed", opt.seed},
               {"trials", opt.trials},
               {"bound_scale", opt.bound_scale},
               {"passed", passed},
               {"suites", std::move(reports)}});
  return passed ? kOk : kBound;
}

// ---- eta ----

struct EtaArgs {
  std::string q;
  std::string phases;
  std::string method = "closed";
  long n = 0;
  int order = 4;
};

Json cmd_eta(const EtaArgs& a) {
  if (a.method != "closed" && a.method != "abel") {
    throw ok::Error(ok::ErrorKind::InvalidArgument, "--method must be closed or abel");
  }
  const bool abel = a.method == "abel";
  if (a.q.empty() == a.phases.empty()) throw ok::Error(ok::ErrorKind::InvalidArgument, "give exactly one of --q, --phases");

  if (!a.q.empty()) {
    const std::optional<ok::Fraction> exact = parse_fraction(a.q);
    const ok::CharacterTwist tw(parse_phase(a.q));
    ok::EtaResult r = ok::rho_character(tw);
    if (abel) {
      const double rho = r.rho_mod_z;
      r = ok::eta_character_abel(tw, ok::default_t_ladder(), a.order);
      r.rho_mod_z = rho;  // ρ uses the exact trivial-character data; η is the regularized value
    }
    if (exact) r.rho_exact = ok::rho_character_exact(*exact);
    return ok::io::to_json(r);
  }

  std::vector<double> phases;
  std::vector<ok::Fraction> exact;
  bool all_exact = true;
  for (const auto& tok : split(a.phases, ',')) {
    const double q = parse_phase(tok);
    ok::CharacterTwist check(q);
    phases.push_back(q);
    if (auto f = parse_fraction(tok)) {
      exact.push_back(*f);
    } else {
      all_exact = false;
    }
  }
  ok::EtaResult r;
  if (abel) {
    r = ok::eta_spectrum_abel(phases, ok::default_t_ladder(), a.order);
  } else {
    r.method = ok::EtaMethod::ClosedForm;
    for (double q : phases) {
      const ok::EtaResult e = ok::eta_character_closed(ok::CharacterTwist(q));
      r.eta += e.eta;
      r.kernel_dim += e.kernel_dim;
    }
  }
  r.rho_mod_z = ok::rho_loop(phases);
  if (all_exact) r.rho_exact = ok::rho_loop_exact(exact);
  Json j = ok::io::to_json(r);
  if (a.n > 0) {
    std::optional<std::int64_t> zn;
    if (all_exact) zn = ok::rho_loop_zn(exact, a.n);
    j["rho_Zn"] = zn ? Json(*zn) : Json(nullptr);
    j["n"] = a.n;
  }
  return j;
}

// ---- homology ----

struct HomologyArgs {
  std::string what;
  std::string matrix;
  std::string j;
  int sign = 1;
  std::string family;
  int genus = 1;
  bool nonorientable = false;
  int bs_n = 1;
  int bs_m = 1;
};

Json cmd_homology(const HomologyArgs& a) {
  auto matrix = [&] {
    if (a.matrix.empty()) throw ok::Error(ok::ErrorKind::InvalidArgument, "--matrix is required");
    return ok::io::int_matrix_from_json(json_arg(a.matrix));
  };
  if (a.what == "fbc") return ok::io::to_json(ok::free_by_cyclic_h2(matrix()));
  if (a.what == "mapping-torus") return ok::io::to_json(ok::mapping_torus_surface_h2(a.sign, matrix()));
  if (a.what == "snf") {
    const ok::SmithForm f = ok::smith_normal_form(matrix());
    Json diag = Json::array();
    for (const auto& x : f.diagonal) diag.push_back(x.str());
    return Json{{"u", ok::io::to_json(f.u)}, {"d", ok::io::to_json(f.d)}, {"v", ok::io::to_json(f.v)}, {"invariant_factors", diag}};
  }
  if (a.what == "symplectic") {
    const ok::IntMatrix m = matrix();
    ok::IntMatrix j;
    if (a.j.empty()) {
      if (m.rows() % 2 != 0) throw ok::Error(ok::ErrorKind::InvalidSize, "default J needs even size");
      j = ok::IntMatrix(m.rows(), m.rows());
      for (std::size_t i = 0; i < m.rows(); i += 2) {
        j(i, i + 1) = 1;
        j(i + 1, i) = -1;
      }
    } else {
      j = ok::io::int_matrix_from_json(json_arg(a.j));
    }
    return Json{{"symplectic", ok::symplectic_check(m, j)}};
  }
  if (a.what == "obstruction") {
    Json out;
    if (a.family == "surface") {
      out["count"] = ok::obstruction_count(ok::SurfaceFamily{a.genus, !a.nonorientable});
    } else if (a.family == "bs") {
      out["count"] = ok::obstruction_count(ok::BaumslagSolitarFamily{a.bs_n, a.bs_m});
      if (std::abs(a.bs_n) != std::abs(a.bs_m)) {
        out["note"] = "BS(n,m) with |n| != |m| is not residually finite; the count is the H2 rank but no stability statement applies";
      }
    } else if (a.family == "fbc") {
      out["count"] = ok::obstruction_count(ok::FreeByCyclicFamily{matrix()});
    } else {
      throw ok::Error(ok::ErrorKind::InvalidArgument, "--family must be surface, bs or fbc");
    }
    return out;
  }
  throw ok::Error(ok::ErrorKind::InvalidArgument, "unknown homology computation '" + a.what + "'");
}

// ---- pairing ----

Json cmd_pairing(const Globals& g, const std::string& input, bool with_projection) {
  ok::PairingInput in = ok::io::pairing_input_from_json(ok::io::parse_text(read_file(input)));
  in.gap_tol = g.get("gap", in.gap_tol);
  const ok::PairingResult r = ok::pairing(in, g.tolerances());
  Json j = ok::io::to_json(r);
  if (with_projection) j["projection"] = ok::io::to_json(r.projection);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"obstructkit: almost-commuting matrices, winding obstructions, eta invariants and homology counts"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "master seed for every randomized step");
  app.add_option("--trials", g.trials, "trials per audit suite");
  app.add_option("--out", g.out, "write JSON here instead of stdout");
  app.add_option("--format", g.format, "output format (json)")->check(CLI::IsMember({"json"}));
  app.add_flag("--timings", g.timings, "include wall-clock timings in audit reports");
  for (const auto& name : kTolNames) {
    app.add_option_function<double>("--tol." + name, [&g, name](double v) { g.tol[name] = v; },
                                    "tolerance override: " + name);
  }

  GenArgs gen;
  auto* sgen = app.add_subcommand("gen", "generate quasi-representation JSON");
  sgen->add_option("family", gen.family, "voiculescu | clock-shift | surface | perturbed")->required();
  sgen->add_option("--delta", gen.delta, "commutator bound for voiculescu");
  sgen->add_option("--k", gen.k, "winding number for voiculescu");
  sgen->add_option("--n", gen.n, "clock/shift size");
  sgen->add_option("--genus", gen.genus, "surface genus");
  sgen->add_flag("--nonorientable", gen.nonorientable, "non-orientable surface");
  sgen->add_flag("--honest", gen.honest, "honest representation");
  sgen->add_option("--dim", gen.dim, "matrix size");
  sgen->add_option("--eta", gen.eta, "perturbation size");
  sgen->add_option("--base", gen.base, "perturbed base group: z2 | surface");

  InvariantArgs inv;
  auto* sinv = app.add_subcommand("invariants", "defect and winding of a quasi-representation file");
  sinv->add_option("input", inv.input, "QuasiRep JSON file")->required();
  sinv->add_option("--relator", inv.relator, "commutator-subgroup word to evaluate (default: first such relator)");
  sinv->add_option("--unitarize", inv.unitarize_eps, "unitarize on the generating set with this eps first");

  AuditArgs aud;
  auto* saud = app.add_subcommand("audit", "randomized bound-audit suites");
  saud->add_option("--suite", aud.suites, "restrict to these suites");
  saud->add_option("--replay", aud.replay, "re-run one trial, SUITE:TRIAL");

  EtaArgs eta;
  auto* seta = app.add_subcommand("eta", "eta and rho invariants of circle characters");
  seta->add_option("--q", eta.q, "character phase in [0,1), decimal or a/b");
  seta->add_option("--phases", eta.phases, "comma-separated phases of a loop's image");
  seta->add_option("--method", eta.method, "closed | abel");
  seta->add_option("--n", eta.n, "also report rho in Z/n when exact");
  seta->add_option("--order", eta.order, "Richardson order for abel");

  HomologyArgs hom;
  auto* shom = app.add_subcommand("homology", "integer homology computations");
  shom->add_option("what", hom.what, "fbc | mapping-torus | snf | symplectic | obstruction")->required();
  shom->add_option("--matrix", hom.matrix, "integer matrix JSON (or @file)");
  shom->add_option("--j", hom.j, "symplectic form JSON (default: standard)");
  shom->add_option("--sign", hom.sign, "orientation sign for mapping-torus");
  shom->add_option("--family", hom.family, "surface | bs | fbc for obstruction");
  shom->add_option("--genus", hom.genus, "surface genus");
  shom->add_flag("--nonorientable", hom.nonorientable, "non-orientable surface");
  shom->add_option("--bs-n", hom.bs_n, "Baumslag-Solitar n");
  shom->add_option("--bs-m", hom.bs_m, "Baumslag-Solitar m");

  std::string pairing_input;
  bool with_projection = false;
  auto* spair = app.add_subcommand("pairing", "controlled K-pairing index");
  spair->add_option("input", pairing_input, "PairingInput JSON file")->required();
  spair->add_flag("--projection", with_projection, "include the spectral projection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (sgen->parsed()) {
      emit(g, cmd_gen(g, gen));
    } else if (sinv->parsed()) {
      emit(g, cmd_invariants(g, inv));
    } else if (saud->parsed()) {
      return cmd_audit(g, aud);
    } else if (seta->parsed()) {
      emit(g, cmd_eta(eta));
    } else if (shom->parsed()) {
      emit(g, cmd_homology(hom));
    } else if (spair->parsed()) {
      emit(g, cmd_pairing(g, pairing_input, with_projection));
    }
  } catch (const ok::Error& e) {
    std::cerr << "error: " << e.what();
    if (e.measured()) std::cerr << " (measured " << *e.measured() << ")";
    std::cerr << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return kOk;
}
