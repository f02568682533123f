#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qshape/cli.hpp"

using namespace qshape;
namespace fs = std::filesystem;

namespace {

Rationals QQ;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out, err;
};

/// Run the binary with stdout and stderr captured.
Run shell(const std::string& args, const std::string& env = "") {
  static int n = 0;
  const auto dir = fs::temp_directory_path();
  const auto out = dir / ("qshape_out_" + std::to_string(++n)), err = dir / ("qshape_err_" + std::to_string(n));
  const std::string cmd = env + " " + QSHAPE_BIN + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Run r{WEXITSTATUS(status), slurp(out), slurp(err)};
  fs::remove(out);
  fs::remove(err);
  return r;
}

std::string example(const std::string& name) { return std::string(QSHAPE_EXAMPLES) + "/" + name; }

cli::Report run(const std::string& src, cli::Options o) { return cli::run(o, src); }

cli::Options command(const std::string& c) {
  cli::Options o;
  o.command = c;
  return o;
}

/// Equal hom dimensions between all pairs of objects with matching labels.
template <class F>
bool same_category(const KCategory<F>& a, const KCategory<F>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t p = 0; p < a.size(); ++p)
    for (std::size_t q = 0; q < a.size(); ++q) {
      auto bp = b.find(a.label(p)), bq = b.find(a.label(q));
      if (!bp || !bq || a.dim(p, q) != b.dim(*bp, *bq)) return false;
    }
  return true;
}

}  // namespace

TEST(Parse, ComplexesFromRelation) {
  auto w = dsl::parse("category { kind = linear relation = d;d }");
  auto a = build_category(QQ, w.category.spec(), -4, 4);
  auto b = build_category(QQ, QuiverSpec::complexes(), -4, 4);
  EXPECT_TRUE(same_category(*a, *b));
}

TEST(Parse, NComplexRelationImplied) {
  auto w = dsl::parse("category { kind = nlinear(N=3) }");
  auto a = build_category(QQ, w.category.spec(), -5, 5);
  auto b = build_category(QQ, QuiverSpec::nlinear(3), -5, 5);
  EXPECT_TRUE(same_category(*a, *b));
  auto q0 = *a->find("0"), q2 = *a->find("-2"), q3 = *a->find("-3");
  EXPECT_EQ(a->dim(q0, q2), 1u);
  EXPECT_EQ(a->dim(q0, q3), 0u);
}

TEST(Parse, DimOnlyRepIsStalk) {
  auto w = dsl::parse("category { kind = linear relation = d;d }\nrep X { at 0: dim 1 }");
  dsl::Realized<Rationals> r(QQ, w, -3, 3);
  auto x = r.rep("X");
  auto s = r.qa().stalk(*r.Q()->find("0"));
  EXPECT_TRUE(find_isomorphism(x, s).has_value());
}

TEST(Parse, CompositionIsLeftToRight) {
  const char* src = R"(category {
  kind = finite
  objects = 1, 2, 3
  arrow a: 1 -> 2
  arrow b: 2 -> 3
  relation = a;b
})";
  auto w = dsl::parse(src);
  auto Q = build_category(QQ, w.category.spec());
  EXPECT_EQ(Q->dim(*Q->find("1"), *Q->find("3")), 0u);
  EXPECT_EQ(Q->dim(*Q->find("1"), *Q->find("2")), 1u);
  auto bad = dsl::parse(std::string(src).replace(std::string(src).find("a;b"), 3, "b;a"));
  EXPECT_THROW(build_category(QQ, bad.category.spec()), std::exception);
}

TEST(Parse, RoundTripOnExamples) {
  for (const auto& e : fs::directory_iterator(QSHAPE_EXAMPLES)) {
    if (e.path().extension() != ".qs") continue;
    SCOPED_TRACE(e.path().filename().string());
    auto w = dsl::parse(slurp(e.path()));
    const auto text = dsl::print(w);
    auto again = dsl::parse(text);
    EXPECT_TRUE(again == w);
    EXPECT_EQ(dsl::print(again), text);
  }
}

TEST(Parse, RoundTripOnGeneratedWorkspaces) {
  std::mt19937 rng(11);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int trial = 0; trial < 60; ++trial) {
    std::ostringstream s;
    if (pick(0, 1)) s << (pick(0, 1) ? "field = Q\n" : "field = Fp(7)\n");
    s << "category { kind = linear relation = " << (pick(0, 1) ? "d;d" : "2*d;d") << " }\n";
    const int reps = pick(1, 3);
    for (int r = 0; r < reps; ++r) {
      s << "rep X" << r << " {\n";
      const int lo = pick(-3, 2), len = pick(1, 3);
      std::vector<int> dims;
      for (int d = lo; d < lo + len; ++d) {
        dims.push_back(pick(1, 2));
        s << "  at " << d << ": dim " << dims.back() << "\n";
      }
      for (int k = 1; k < len; ++k) {
        s << "  d@" << lo + k << ": [";
        for (int i = 0; i < dims[k - 1]; ++i) {
          s << (i ? ", " : "") << "[";
          for (int j = 0; j < dims[k]; ++j) s << (j ? ", " : "") << pick(-3, 3) << (pick(0, 3) ? "" : "/2");
          s << "]";
        }
        s << "]\n";
      }
      s << "}\n";
    }
    s << "rep S = stalk(" << pick(-2, 2) << ")\n";
    s << "mor f: X0 -> X0 = id\nmor g: S -> X0 = zero\n";
    auto w = dsl::parse(s.str());
    const auto text = dsl::print(w);
    auto again = dsl::parse(text);
    ASSERT_TRUE(again == w) << s.str() << "\n---\n" << text;
    EXPECT_EQ(dsl::print(again), text);
  }
}

TEST(Parse, ErrorsCarryLocations) {
  try {
    dsl::parse("category {\n  kind = linear\n  relation = d;\n}");
    FAIL();
  } catch (const dsl::ParseError& e) {
    EXPECT_EQ(e.pos.line, 4);
    EXPECT_EQ(e.pos.col, 1);
    EXPECT_FALSE(e.expected.empty());
  }
  try {
    dsl::parse("category { kind = linear }\nrep X { at 0: dim 1 }\nmor f: X -> Y = id");
    FAIL();
  } catch (const dsl::SourceError& e) {
    EXPECT_EQ(e.pos.line, 3);
    EXPECT_NE(std::string(e.what()).find("Y"), std::string::npos);
  }
  try {
    dsl::parse("category { kind = linear }\nrep X { at 0: dim 1 }\nrep X { at 1: dim 1 }");
    FAIL();
  } catch (const dsl::SourceError& e) {
    EXPECT_EQ(e.pos.line, 3);
  }
  EXPECT_THROW(dsl::parse("rep X { at 0: dim 1 }"), dsl::SourceError);
  EXPECT_THROW(dsl::parse("category { kind = wobbly }"), dsl::ParseError);
}

TEST(Parse, InadmissibleAndIllFormedInputsAreLocated) {
  const std::string cat = "category { kind = linear relation = d;d }\n";
  auto located = [&](const std::string& src, int line) {
    try {
      auto w = dsl::parse(src);
      dsl::Realized<Rationals> r(QQ, w, -3, 3);
      ADD_FAILURE() << src;
    } catch (const dsl::SourceError& e) {
      EXPECT_EQ(e.pos.line, line) << e.what();
    }
  };
  located(cat + "algebra {\n  objects = 0\n  arrow e: 0 -> 0\n}", 2);
  located(cat + "rep X {\n  at 0: dim 1\n  at 1: dim 2\n  d@1: [[1, 0], [0, 1]]\n}", 5);
  located(cat + "rep X {\n  at 0: dim 1\n  at 1: dim 1\n  at 2: dim 1\n  d@1: [[1]]\n  d@2: [[1]]\n}", 2);
  located(cat + "rep X = stalk(9)", 2);
  located(cat + "rep X = stalk(0)\nrep Y = stalk(1)\nmor f: X -> Y {\n  at 0: [[1]]\n}", 5);
}

TEST(Run, ValidateComplexes) {
  auto o = command("validate");
  o.window = "-3..3";
  auto r = run(slurp(example("cpx.qs")), o);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.json["all_pass"].get<bool>());
  EXPECT_EQ(r.json["nilpotence_degree"], 2);
  ASSERT_FALSE(r.json["serre_map"].empty());
  for (const auto& [k, v] : r.json["serre_map"].items()) EXPECT_EQ(v.get<int>(), std::stoi(k) - 1);
}

TEST(Run, ValidateFailsWithWitness) {
  auto r = run(slurp(example("finite_noserre.qs")), command("validate"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(r.json["checks"]["serre"]["pass"].get<bool>());
  EXPECT_FALSE(r.json["checks"]["serre"]["witness"].get<std::string>().empty());
}

TEST(Run, HomologyShape) {
  auto o = command("homology");
  o.rep = "stalk1";
  o.q = "1";
  o.i = 1;
  auto r = run(slurp(example("disk.qs")), o);
  std::vector<std::string> keys;
  for (const auto& [k, v] : r.json.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"q", "i", "variance", "dim", "A_action"}));
  EXPECT_EQ(r.json["q"], 1);
  EXPECT_EQ(r.json["variance"], "cohom");
  o.tor = true;
  EXPECT_EQ(run(slurp(example("disk.qs")), o).json["variance"], "tor");
}

TEST(Run, HomologyOfAStalkIsOneDimensionalSomewhere) {
  std::size_t total = 0;
  for (int q = -2; q <= 3; ++q) {
    auto o = command("homology");
    o.rep = "stalk0";
    o.q = std::to_string(q);
    o.i = 1;
    total += run(slurp(example("disk.qs")), o).json["dim"].get<std::size_t>();
  }
  EXPECT_EQ(total, 1u);
}

TEST(Run, Predicates) {
  const auto src = slurp(example("disk.qs"));
  auto o = command("is-exact");
  o.rep = "disk";
  auto r = run(src, o);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.json["verdict"], true);
  EXPECT_TRUE(r.json.contains("witness"));
  o.rep = "stalk0";
  r = run(src, o);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(r.json["witness"].is_null());

  auto w = command("is-weq");
  w.mor = "one";
  EXPECT_EQ(run(src, w).exit_code, 0);
  w.mor = "q";
  EXPECT_EQ(run(src, w).exit_code, 2);
  w.mor = "z";
  EXPECT_EQ(run(src, w).exit_code, 2);
}

TEST(Run, SuspendPeriodicity) {
  auto o = command("suspend");
  o.rep = "stalk0";
  o.power = 6;
  auto r = run(slurp(example("cyclic3.qs")), o);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.text().find("stably isomorphic to stalk0: true"), std::string::npos);
  EXPECT_EQ(r.json["stably_isomorphic_to_source"], true);
  o.power = 1;
  r = run(slurp(example("cyclic3.qs")), o);
  EXPECT_EQ(r.json["stably_isomorphic_to_source"], false);
  EXPECT_EQ(r.json["dims"], Json::parse(R"({"1":1})"));
}

TEST(Run, ExtStableAndDerivedHom) {
  const auto src = slurp(example("disk.qs"));
  auto o = command("ext");
  o.from = "stalk1";
  o.to = "stalk0";
  o.i = 1;
  EXPECT_EQ(run(src, o).json["dim"], 1);
  o.from = "stalk0";
  o.to = "stalk1";
  EXPECT_EQ(run(src, o).json["dim"], 0);
  auto s = command("stable-hom");
  s.from = s.to = "disk";
  EXPECT_EQ(run(src, s).json["dim"], 0);
  s.from = s.to = "stalk0";
  EXPECT_EQ(run(src, s).json["dim"], 1);
  s.command = "dq-hom";
  EXPECT_EQ(run(src, s).json["dim"], 1);
}

TEST(Run, ConeClassifyPerfectResolve) {
  const auto src = slurp(example("disk.qs"));
  auto c = command("cone");
  c.mor = "one";
  auto r = run(src, c);
  EXPECT_EQ(r.json["stably_zero"], true);
  EXPECT_EQ(r.json["legs_stably_zero"], true);

  auto k = command("classify");
  k.mor = "one";
  r = run(src, k);
  for (const char* f : {"weq", "cof", "fib", "trivial_cof", "trivial_fib"}) EXPECT_EQ(r.json[f], true) << f;
  k.mor = "z";
  k.structure = "injective";
  EXPECT_EQ(run(src, k).json["weq"], false);
  k.structure = "sideways";
  EXPECT_THROW(run(src, k), cli::UsageError);

  auto p = command("perfect");
  p.rep = "disk";
  EXPECT_EQ(run(src, p).exit_code, 0);

  auto v = command("resolve");
  v.rep = "disk";
  v.degree = 2;
  r = run(src, v);
  EXPECT_EQ(r.json["layers"].size(), 3u);
  EXPECT_EQ(r.json["length"], 0);
}

TEST(Run, FieldPrecedence) {
  auto o = command("validate");
  o.field = "Fp(0)";
  EXPECT_THROW(run(slurp(example("cpx.qs")), o), cli::UsageError);
  o.field = "R";
  EXPECT_THROW(run(slurp(example("cpx.qs")), o), cli::UsageError);
  o.field = "Fp(4)";
  EXPECT_ANY_THROW(run(slurp(example("cpx.qs")), o));
  o.field = "Fp(3)";
  EXPECT_EQ(run(slurp(example("dual.qs")), o).exit_code, 0);
}

TEST(Run, WindowPolicy) {
  auto o = command("validate");
  auto r = run(slurp(example("disk.qs")), o);
  const int lo = r.json["window"][0], hi = r.json["window"][1];
  EXPECT_LE(lo, 0 - 2 * 4);
  EXPECT_GE(hi, 1 + 2 * 4);
  o.window = "-2..2";
  EXPECT_EQ(run(slurp(example("disk.qs")), o).json["window"], Json::parse("[-2,2]"));
  o.window = "2..-2";
  EXPECT_THROW(run(slurp(example("disk.qs")), o), cli::UsageError);
  o.window = "-2..2";
  o.command = "is-exact";
  o.rep = "disk";
  EXPECT_THROW(run("category { kind = linear relation = d;d }\nrep disk = stalk(5)", o), dsl::SourceError);
}

TEST(Binary, ExitCodesAndStreams) {
  auto r = shell("is-exact " + example("disk.qs") + " --rep disk");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict: true"), std::string::npos);
  r = shell("is-exact " + example("disk.qs") + " --rep stalk0");
  EXPECT_EQ(r.code, 2);
  r = shell("is-exact " + example("disk.qs") + " --rep nobody");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("command line"), std::string::npos);
  r = shell("frobnicate " + example("disk.qs"));
  EXPECT_EQ(r.code, 1);
  r = shell("--format json suspend " + example("cyclic3.qs") + " --rep stalk0 --power 6");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["stably_isomorphic_to_source"], true);
}

TEST(Binary, SourceErrorsNameFileLineAndColumn) {
  const auto bad = fs::temp_directory_path() / "qshape_bad.qs";
  std::ofstream(bad) << "category {\n  kind = linear\n  relation = d;d\n}\nrep X {\n  at 0: dim 1\n  at 0 dim 2\n}\n";
  auto r = shell("validate " + bad.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(bad.string() + ":7:8:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("expected"), std::string::npos);
  fs::remove(bad);
}

TEST(Binary, JsonIsDeterministic) {
  for (const auto& args : std::vector<std::string>
       {"validate " + example("za3.qs"), "suspend " + example("cyclic3.qs") + " --rep stalk0 --power 3",
        "cone " + example("disk.qs") + " --mor q", "classify " + example("dual.qs") + " --mor incl --structure injective",
        "--full stable-hom " + example("dual.qs") + " --from simple --to free"}) {
    auto a = shell("--format json " + args), b = shell("--format json " + args);
    EXPECT_EQ(a.code, b.code) << args;
    EXPECT_FALSE(a.out.empty()) << args << a.err;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Binary, FieldFromEnvironment) {
  const auto bad = fs::temp_directory_path() / "qshape_half.qs";
  std::ofstream(bad) << "category { kind = linear relation = d;d }\nrep X {\n  at 0: dim 1\n  at 1: dim 1\n  d@1: [[1/3]]\n}\n";
  EXPECT_EQ(shell("is-exact " + bad.string() + " --rep X").code, 0);
  auto r = shell("is-exact " + bad.string() + " --rep X", "QSHAPE_FIELD='Fp(3)'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":5:"), std::string::npos) << r.err;
  EXPECT_EQ(shell("--field Q is-exact " + bad.string() + " --rep X", "QSHAPE_FIELD='Fp(3)'").code, 0);
  fs::remove(bad);
}
