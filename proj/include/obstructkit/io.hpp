#pragma once

// JSON encodings for matrices, presentations, quasi-representations and
// reports. Key order is fixed (ordered_json) so identical inputs give
// byte-identical output.

#include <string>
#include <vector>

#include <json.hpp>

#include "obstructkit/audit.hpp"
#include "obstructkit/error.hpp"
#include "obstructkit/eta.hpp"
#include "obstructkit/homology.hpp"
#include "obstructkit/matcore.hpp"
#include "obstructkit/projops.hpp"
#include "obstructkit/quasirep.hpp"
#include "obstructkit/winding.hpp"
#include "obstructkit/words.hpp"

namespace obstructkit::io {

using Json = nlohmann::ordered_json;

namespace detail {

template <class F>
auto parse_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed ") + what + ": " + e.what());
  }
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace detail

// ---- matrices ----

inline Json to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidSize, "matrix encoding is for square matrices");
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", m.rows()}, {"entries", std::move(rows)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  return detail::parse_guard("matrix", [&] {
    const long n = detail::field(j, "dim").get<long>();
    const Json& rows = detail::field(j, "entries");
    if (n < 1 || !rows.is_array() || static_cast<long>(rows.size()) != n) {
      throw Error(ErrorKind::Parse, "matrix entries do not match dim");
    }
    ComplexMatrix m(n, n);
    for (long i = 0; i < n; ++i) {
      const Json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<long>(row.size()) != n) throw Error(ErrorKind::Parse, "ragged matrix row");
      for (long k = 0; k < n; ++k) {
        const Json& z = row[static_cast<std::size_t>(k)];
        if (z.is_number()) {
          m(i, k) = Complex(z.get<double>(), 0.0);
        } else {
          if (!z.is_array() || z.size() != 2) throw Error(ErrorKind::Parse, "entry must be [re, im]");
          m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
        }
      }
    }
    return m;
  });
}

inline Json to_json(const std::vector<ComplexMatrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

inline std::vector<ComplexMatrix> matrices_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Parse, "expected an array of matrices");
  std::vector<ComplexMatrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

// ---- presentations ----

inline Json to_json(const Presentation& p) {
  Json rel = Json::array();
  for (const auto& r : p.relators()) rel.push_back(p.format(r));
  return Json{{"generators", p.generator_names()}, {"relators", std::move(rel)}};
}

inline Presentation presentation_from_json(const Json& j) {
  return detail::parse_guard("presentation", [&] {
    const auto names = detail::field(j, "generators").get<std::vector<std::string>>();
    Presentation bare(names, {});
    std::vector<GroupWord> relators;
    if (j.contains("relators")) {
      for (const auto& r : j.at("relators")) relators.push_back(bare.parse(r.get<std::string>()));
    }
    return Presentation(names, std::move(relators));
  });
}

// ---- quasi-representations ----

inline std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::General: return "general";
    case Flavor::Unitary: return "unitary";
    case Flavor::UcpCompression: return "ucp-compression";
  }
  return "general";
}

inline Flavor flavor_from_string(const std::string& s) {
  if (s == "general") return Flavor::General;
  if (s == "unitary") return Flavor::Unitary;
  if (s == "ucp-compression" || s == "ucp") return Flavor::UcpCompression;
  throw Error(ErrorKind::Parse, "unknown flavor '" + s + "'");
}

inline Json to_json(const QuasiRep& phi) {
  Json j{{"presentation", to_json(phi.presentation())},
         {"flavor", to_string(phi.flavor())},
         {"normal_form", phi.normal_form() == NormalForm::Free ? "free" : "abelian"}};
  if (phi.compression()) {
    j["compression"] = Json{{"big_images", to_json(phi.compression()->big_rep)},
                            {"projection", to_json(phi.compression()->projection)}};
    return j;
  }
  j["images"] = to_json(phi.images());
  if (!phi.values().empty() || phi.extension() != Extension::WordProduct) {
    j["extension"] = phi.extension() == Extension::WordProduct ? "word-product" : "identity";
    Json values = Json::array();
    for (const auto& [w, m] : phi.values()) {
      values.push_back(Json{{"word", phi.presentation().format(w)}, {"matrix", to_json(m)}});
    }
    j["values"] = std::move(values);
  }
  return j;
}

inline QuasiRep quasi_rep_from_json(const Json& j, const Tolerances& tol = default_tolerances()) {
  return detail::parse_guard("quasi-representation", [&] {
    Presentation pres = presentation_from_json(detail::field(j, "presentation"));
    const NormalForm nf = j.value("normal_form", std::string("free")) == "abelian" ? NormalForm::Abelian : NormalForm::Free;
    if (j.contains("compression")) {
      const Json& c = j.at("compression");
      const ComplexMatrix p = matrix_from_json(detail::field(c, "projection"));
      return compress(pres, matrices_from_json(detail::field(c, "big_images")), p, tol).rep;
    }
    const Flavor flavor = flavor_from_string(j.value("flavor", std::string("general")));
    if (flavor == Flavor::UcpCompression) {
      throw Error(ErrorKind::Parse, "ucp-compression flavor needs a 'compression' block");
    }
    QuasiRep phi(pres, matrices_from_json(detail::field(j, "images")), flavor, nf, tol);
    if (j.contains("values") || j.contains("extension")) {
      std::map<GroupWord, ComplexMatrix> table;
      for (const auto& v : j.value("values", Json::array())) {
        table[pres.parse(detail::field(v, "word").get<std::string>())] = matrix_from_json(detail::field(v, "matrix"));
      }
      const std::string ext = j.value("extension", std::string("word-product"));
      if (ext != "word-product" && ext != "identity") throw Error(ErrorKind::Parse, "unknown extension '" + ext + "'");
      phi = phi.with_values(table, ext == "identity" ? Extension::Identity : Extension::WordProduct);
    }
    return phi;
  });
}

// ---- reports ----

inline Json to_json(const WindingReport& r) {
  return Json{{"winding", r.winding},
              {"min_clearance", r.min_clearance},
              {"samples_used", r.samples_used},
              {"eigenvalue_method", r.eigenvalue_method},
              {"path_method", r.path_method},
              {"agreement", r.agreement},
              {"distance_to_identity", r.distance_to_identity},
              {"eigenvalue_residue", r.eigenvalue_residue},
              {"normalized_from_reversed", r.normalized_from_reversed}};
}

inline Json to_json(const DefectReport& r, const Presentation& p) {
  Json pairs = Json::array();
  for (const auto& d : r.pair_defects) {
    pairs.push_back(Json{{"s", p.format(d.s)}, {"t", p.format(d.t)}, {"defect", d.value}});
  }
  return Json{{"max_defect", r.max_defect}, {"unitarity_defect", r.unitarity_defect}, {"pairs", std::move(pairs)}};
}

inline Json to_json(const EtaResult& r) {
  Json j{{"eta", r.eta},
         {"kernel_dim", r.kernel_dim},
         {"rho_mod_Z", r.rho_mod_z},
         {"method", to_string(r.method)},
         {"extrapolation_error", r.extrapolation_error}};
  if (r.rho_exact) j["rho_exact"] = std::to_string(r.rho_exact->num) + "/" + std::to_string(r.rho_exact->den);
  return j;
}

inline Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const BigInt& v = m(i, k);
      // exact: small values as numbers, larger ones as decimal strings
      if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        row.push_back(static_cast<std::int64_t>(v));
      } else {
        row.push_back(v.str());
      }
    }
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

inline BigInt big_from_json(const Json& v) {
  if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
  if (v.is_string()) return BigInt(v.get<std::string>());
  throw Error(ErrorKind::Parse, "integer matrix entries must be integers");
}

/// Accepts {"rows","cols","entries"} or a bare nested array.
inline IntMatrix int_matrix_from_json(const Json& j) {
  return detail::parse_guard("integer matrix", [&] {
    const Json& rows = j.is_array() ? j : detail::field(j, "entries");
    if (!rows.is_array() || rows.empty()) throw Error(ErrorKind::Parse, "integer matrix needs at least one row");
    std::vector<std::vector<BigInt>> data;
    for (const auto& r : rows) {
      if (!r.is_array()) throw Error(ErrorKind::Parse, "integer matrix rows must be arrays");
      std::vector<BigInt> row;
      for (const auto& v : r) row.push_back(big_from_json(v));
      data.push_back(std::move(row));
    }
    IntMatrix m = IntMatrix::from_rows(data);
    if (j.is_object()) {
      if ((j.contains("rows") && j.at("rows").get<std::size_t>() != m.rows()) ||
          (j.contains("cols") && j.at("cols").get<std::size_t>() != m.cols())) {
        throw Error(ErrorKind::Parse, "integer matrix dims disagree with entries");
      }
    }
    return m;
  });
}

inline Json to_json(const AbelianGroup& g) {
  Json torsion = Json::array();
  for (const auto& t : g.torsion) torsion.push_back(t.str());
  return Json{{"group", g.render()}, {"free_rank", g.free_rank}, {"torsion", std::move(torsion)}};
}

inline Json to_json(const PairingInput& in) {
  return Json{{"b", to_json(in.b)}, {"q", to_json(in.q)}, {"N", in.n}, {"k", in.k}, {"gap_tol", in.gap_tol}};
}

inline PairingInput pairing_input_from_json(const Json& j) {
  return detail::parse_guard("pairing input", [&] {
    PairingInput in;
    in.b = matrix_from_json(detail::field(j, "b"));
    in.q = matrix_from_json(detail::field(j, "q"));
    in.n = detail::field(j, "N").get<Index>();
    in.k = detail::field(j, "k").get<Index>();
    in.gap_tol = j.value("gap_tol", 0.05);
    return in;
  });
}

inline Json to_json(const PairingResult& r) {
  return Json{{"index", r.index}, {"rank", r.rank}, {"gap", r.gap}, {"idempotency_defect", r.idempotency_defect}};
}

inline Json to_json(const SuiteReport& s, bool timings) {
  Json failures = Json::array();
  for (const auto& f : s.failures) {
    failures.push_back(Json{{"trial", f.trial}, {"trial_key", f.trial_key}, {"ratio", f.ratio}, {"detail", f.detail}});
  }
  Json j{{"suite", s.name},
         {"constant", s.constant},
         {"trials", s.trials},
         {"passed", s.passed},
         {"violations", s.violations},
         {"worst_ratio", s.worst_ratio},
         {"failures", std::move(failures)}};
  if (timings) j["seconds"] = s.seconds;
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace obstructkit::io
