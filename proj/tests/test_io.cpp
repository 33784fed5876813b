#include <gtest/gtest.h>

#include "obstructkit/io.hpp"
#include "obstructkit/random.hpp"

using namespace obstructkit;
using io::Json;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Io, MatrixRoundTrip) {
  CounterRng rng(1);
  const ComplexMatrix m = random_ginibre(3, 3, rng);
  const Json j = io::to_json(m);
  EXPECT_EQ(j["dim"], 3);
  EXPECT_EQ(j["entries"][1][2][0].get<double>(), m(1, 2).real());
  const ComplexMatrix back = io::matrix_from_json(io::parse_text(io::dump(j)));
  EXPECT_EQ(back, m);  // shortest round-trip formatting is exact
}

TEST(Io, MatrixParseErrors) {
  EXPECT_EQ(kind_of([] { io::matrix_from_json(Json{{"dim", 2}, {"entries", Json::array()}}); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::matrix_from_json(Json{{"entries", Json::array()}}); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::matrix_from_json(io::parse_text(R"({"dim":1,"entries":[[[1]]]})")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::parse_text("{not json"); }), ErrorKind::Parse);
  EXPECT_EQ(io::matrix_from_json(io::parse_text(R"({"dim":1,"entries":[[2.5]]})"))(0, 0), Complex(2.5, 0));
}

TEST(Io, PresentationRoundTrip) {
  const Presentation p = surface_presentation(2, true);
  const Json j = io::to_json(p);
  EXPECT_EQ(io::dump(j), io::dump(Json::parse(R"({"generators":["a","b","c","d"],"relators":["abABcdCD"]})")));
  const Presentation back = io::presentation_from_json(j);
  EXPECT_EQ(back.relators(), p.relators());
  EXPECT_EQ(kind_of([] { io::presentation_from_json(Json{{"generators", {"a"}}, {"relators", {"ab"}}}); }),
            ErrorKind::Parse);
}

TEST(Io, QuasiRepRoundTrip) {
  CounterRng rng(2);
  const QuasiRep honest(free_abelian_presentation(2), random_commuting_unitaries(2, 2, rng), Flavor::Unitary,
                        NormalForm::Abelian);
  const auto s = symmetric_generating_set(2);
  const QuasiRep pert = perturbed_quasi_rep(honest, s, 0.01, rng);
  for (const QuasiRep* phi : {&honest, &pert}) {
    const std::string text = io::dump(io::to_json(*phi));
    const QuasiRep back = io::quasi_rep_from_json(io::parse_text(text));
    EXPECT_EQ(io::dump(io::to_json(back)), text);
    EXPECT_EQ(back.flavor(), phi->flavor());
    EXPECT_NEAR(defect(back, s).max_defect, defect(*phi, s).max_defect, 1e-15);
  }
}

TEST(Io, CompressionRoundTrip) {
  CounterRng rng(3);
  const Presentation pres = surface_presentation(2, true);
  const CompressionResult c = compress(pres, random_genus2_rep(4, rng), random_projection(4, 2, rng));
  const std::string text = io::dump(io::to_json(c.rep));
  const QuasiRep back = io::quasi_rep_from_json(io::parse_text(text));
  EXPECT_EQ(back.flavor(), Flavor::UcpCompression);
  EXPECT_EQ(io::dump(io::to_json(back)), text);
  EXPECT_TRUE(approx_equal(back.evaluate(pres.parse("abA")), c.rep.evaluate(pres.parse("abA")), 1e-12));
}

TEST(Io, QuasiRepValidationPropagates) {
  Json j = io::to_json(QuasiRep(free_abelian_presentation(1), {identity(2)}, Flavor::Unitary));
  j["images"][0] = io::to_json(ComplexMatrix(2.0 * identity(2)));
  EXPECT_EQ(kind_of([&] { io::quasi_rep_from_json(j); }), ErrorKind::InvalidMatrix);
  j["flavor"] = "nonsense";
  EXPECT_EQ(kind_of([&] { io::quasi_rep_from_json(j); }), ErrorKind::Parse);
}

TEST(Io, IntMatrix) {
  const IntMatrix m{{1, -2}, {3, 4}};
  const Json j = io::to_json(m);
  EXPECT_EQ(io::dump(j), io::dump(Json::parse(R"({"rows":2,"cols":2,"entries":[[1,-2],[3,4]]})")));
  EXPECT_EQ(io::int_matrix_from_json(j), m);
  EXPECT_EQ(io::int_matrix_from_json(Json::parse("[[1,-2],[3,4]]")), m);
  IntMatrix big(1, 1);
  big(0, 0) = BigInt("1000000000000000000000000");
  EXPECT_EQ(io::int_matrix_from_json(io::to_json(big)), big);
  EXPECT_EQ(kind_of([] { io::int_matrix_from_json(Json::parse("[[1.5]]")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::int_matrix_from_json(Json::parse(R"({"rows":3,"cols":1,"entries":[[1]]})")); }),
            ErrorKind::Parse);
}

TEST(Io, PairingInputRoundTrip) {
  PairingInput in{ComplexMatrix::Zero(4, 4), identity(2), 2, 1, 0.07};
  const PairingInput back = io::pairing_input_from_json(io::parse_text(io::dump(io::to_json(in))));
  EXPECT_EQ(back.n, 2);
  EXPECT_EQ(back.k, 1);
  EXPECT_EQ(back.gap_tol, 0.07);
  EXPECT_EQ(back.b, in.b);
}

TEST(Io, ReportsHaveAllFields) {
  const Json w = io::to_json(WindingReport{});
  for (const char* key : {"winding", "min_clearance", "samples_used", "eigenvalue_method", "path_method", "agreement"}) {
    EXPECT_TRUE(w.contains(key)) << key;
  }
  const Json e = io::to_json(rho_character(CharacterTwist(0.25)));
  EXPECT_EQ(e["rho_mod_Z"], 0.75);
  EXPECT_EQ(e["method"], "closed-form");
  EXPECT_EQ(io::to_json(AbelianGroup{0, {2}})["group"], "Z/2");
}
