#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "drivebound/common/error.hpp"
#include "drivebound/stl/parse.hpp"
#include "drivebound/stl/robustness.hpp"
#include "drivebound/stl/trace.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace drivebound;
using namespace drivebound::stl;

namespace {

Trace constant_trace(std::size_t n, double v, Light light = Light::Green, double d0 = 100.0) {
  Trace tr;
  tr.dt = 0.1;
  for (std::size_t k = 0; k < n; ++k) {
    tr.d_x.push_back(d0);
    tr.v_x.push_back(v);
    tr.t_el.push_back(1.0);
    tr.l_q.push_back(light == Light::Red ? std::min(12.0, d0) : 0.0);
    tr.s_tl.push_back(light);
    tr.u.push_back(0.0);
  }
  return tr;
}

}  // namespace

TEST_CASE("parse: always over a predicate") {
  Formula f = parse("alw_[0,3] (v_x < 25.5)");
  Formula expected = Formula::always(0, 3, Formula::pred("v_x", Cmp::Lt, Rhs::number(25.5)));
  CHECK(f == expected);
}

TEST_CASE("parse: implication with declared parameter") {
  Formula f = parse("param nu; (s_TL == R) => (v_x < nu)");
  Formula expected =
      Formula::implies(Formula::pred("s_TL", Cmp::Eq, Rhs::label(Light::Red)),
                       Formula::pred("v_x", Cmp::Lt, Rhs::parameter("nu")));
  CHECK(f == expected);
  CHECK(f.parameters() == std::set<std::string>{"nu"});
}

TEST_CASE("parse: inverted interval is rejected") {
  CHECK_THROWS_WITH_AS(parse("ev_[2,1] (v_x > 0)"), doctest::Contains("inverted interval"),
                       ParseError);
}

TEST_CASE("parse: negative interval bound is rejected") {
  CHECK_THROWS_WITH_AS(parse("alw_[-1,2] (v_x > 0)"), doctest::Contains("negative interval"),
                       ParseError);
}

TEST_CASE("parse: unknown signal reports position") {
  try {
    parse("alw_[0,3]\n (vx < 25.5)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 3);
    CHECK(std::string(e.what()).find("unknown signal name 'vx'") != std::string::npos);
  }
}

TEST_CASE("parse: undeclared identifier on rhs") {
  CHECK_THROWS_AS(parse("v_x < nu"), ParseError);
  CHECK_NOTHROW(parse("param nu; v_x < nu"));
}

TEST_CASE("parse: label misuse") {
  CHECK_THROWS_AS(parse("v_x < G"), ParseError);
  CHECK_THROWS_AS(parse("s_TL < R"), ParseError);
  CHECK_THROWS_AS(parse("s_TL == 1"), ParseError);
}

TEST_CASE("parse: until and operator precedence") {
  Formula f = parse("(v_x > 0) until_[0,1] (d_x < 5) and true");
  // 'until' binds tighter than 'and'
  CHECK(f.kind() == Formula::Kind::And);
  CHECK(f.left().kind() == Formula::Kind::Until);

  Formula g = parse("true => true => true");
  CHECK(g.kind() == Formula::Kind::Implies);
  CHECK(g.right().kind() == Formula::Kind::Implies);  // right-associative
}

TEST_CASE("robustness: always over constant speed") {
  Trace tr = constant_trace(31, 20.0);
  Formula f = parse("alw_[0,2] (v_x < 25.5)");
  CHECK(robustness(f, tr, 0) == doctest::Approx(5.5));
}

TEST_CASE("robustness: boundary predicate is exactly zero") {
  Trace tr = constant_trace(1, 10.0);
  Formula f = parse("v_x >= 10");
  CHECK(robustness(f, tr, 0) == 0.0);
}

TEST_CASE("robustness: eventually on a ramp") {
  // v_x(t) = t sampled at 10 Hz; max over [0,1] of v_x - 5 = -4.
  Trace tr = constant_trace(20, 0.0);
  for (std::size_t k = 0; k < tr.size(); ++k) tr.v_x[k] = 0.1 * static_cast<double>(k);
  Formula f = parse("ev_[0,1] (v_x > 5)");
  CHECK(robustness(f, tr, 0) == doctest::Approx(-4.0));
}

TEST_CASE("robustness: until of constant operands is min of the constants") {
  Trace tr = constant_trace(11, 0.0);
  // lhs robustness a = 3 (v_x < 3 on v=0), rhs robustness b = 2.
  Formula f = parse("(v_x < 3) until_[0,1] (v_x < 2)");
  CHECK(robustness(f, tr, 0) == doctest::Approx(2.0));
}

TEST_CASE("satisfies: direct Boolean checks") {
  Trace tr = constant_trace(31, 20.0);
  CHECK(satisfies(parse("v_x < 25.5"), tr, 0));
  tr.v_x[15] = 26.0;
  CHECK_FALSE(satisfies(parse("alw_[0,3] (v_x < 25.5)"), tr, 0));
}

TEST_CASE("robustness: unbound parameter is an error") {
  Trace tr = constant_trace(5, 1.0);
  Formula f = parse("param nu; v_x < nu");
  CHECK_THROWS_AS(robustness(f, tr, 0), EvalError);
  CHECK(robustness(f, tr, 0, {{"nu", 2.0}}) == doctest::Approx(1.0));
}

TEST_CASE("robustness: window beyond trace end is an error, not a default") {
  Trace tr = constant_trace(5, 1.0);  // duration 0.4 s
  Formula f = parse("alw_[1,2] (v_x > 0)");
  CHECK_THROWS_AS(robustness(f, tr, 0), EvalError);
  CHECK_THROWS_AS(satisfies(f, tr, 0), EvalError);
  // Clipped (partially covered) window is fine.
  CHECK_NOTHROW(robustness(parse("alw_[0,2] (v_x > 0)"), tr, 0));
}

TEST_CASE("property: sign consistency between robustness and Boolean semantics") {
  std::mt19937_64 rng(7001);
  int checked = 0;
  for (int i = 0; i < 800; ++i) {
    Trace tr = testgen::random_trace(rng, 50);
    Formula f = testgen::random_formula(rng, 4, tr.duration());
    double rho = robustness(f, tr, 0);
    bool sat = satisfies(f, tr, 0);
    if (rho > 0) CHECK(sat);
    if (rho < 0) CHECK_FALSE(sat);
    ++checked;
  }
  CHECK(checked == 800);
}

TEST_CASE("property: robustness equals brute-force recursion") {
  std::mt19937_64 rng(7002);
  for (int i = 0; i < 500; ++i) {
    Trace tr = testgen::random_trace(rng, 20);
    Formula f = testgen::random_formula(rng, 4, tr.duration());
    double expected = oracle::rob(f, tr, 0, {});
    double got = robustness(f, tr, 0);
    CHECK(got == expected);
    CHECK(satisfies(f, tr, 0) == oracle::sat(f, tr, 0, {}));
  }
}

TEST_CASE("property: negation duality and De Morgan forms") {
  std::mt19937_64 rng(7003);
  for (int i = 0; i < 300; ++i) {
    Trace tr = testgen::random_trace(rng, 30);
    Formula a = testgen::random_formula(rng, 3, tr.duration());
    Formula b = testgen::random_formula(rng, 3, tr.duration());
    double ra = robustness(a, tr, 0);
    double rb = robustness(b, tr, 0);
    CHECK(robustness(Formula::negation(a), tr, 0) == -ra);
    CHECK(robustness(Formula::disj(a, b), tr, 0) == std::max(ra, rb));
    CHECK(robustness(Formula::implies(a, b), tr, 0) == std::max(-ra, rb));
  }
}

TEST_CASE("property: parse/print round-trip") {
  std::mt19937_64 rng(7004);
  for (int i = 0; i < 400; ++i) {
    Formula f = testgen::random_formula(rng, 4, 5.0);
    Formula g = parse(f.str());
    CHECK(f == g);
  }
  // Parameters survive the round-trip via the emitted header.
  Formula p = parse("param nu, delta; (d_x > delta) => (v_x < nu)");
  CHECK(parse(p.str()) == p);
}

TEST_CASE("trace CSV: write/read round-trip") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "db_test_stl_csv";
  fs::create_directories(dir);
  std::mt19937_64 rng(7005);
  Trace tr = testgen::random_trace(rng, 40);
  tr.label = TraceLabel::Human;
  std::string path = (dir / "t.csv").string();
  write_trace_csv(tr, path);
  Trace back = read_trace_csv(path);
  REQUIRE(back.size() == tr.size());
  CHECK(back.dt == doctest::Approx(tr.dt).epsilon(1e-9));
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(back.v_x[k] == doctest::Approx(tr.v_x[k]).epsilon(1e-6));
    CHECK(back.d_x[k] == doctest::Approx(tr.d_x[k]).epsilon(1e-6));
    CHECK(back.u[k] == doctest::Approx(tr.u[k]).epsilon(1e-6));
    CHECK(back.s_tl[k] == tr.s_tl[k]);
  }
  fs::remove_all(dir);
}

TEST_CASE("trace CSV: malformed inputs are rejected") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "db_test_stl_badcsv";
  fs::create_directories(dir);

  auto write_file = [&](const char* name, const char* body) {
    std::ofstream out(dir / name);
    out << body;
    return (dir / name).string();
  };

  std::string bad_light = write_file("bad_light.csv",
                                     "t,d_x,v_x,t_el,l_q,s_TL,u\n"
                                     "0,100,10,1,0,B,0\n");
  CHECK_THROWS_WITH_AS(read_trace_csv(bad_light), doctest::Contains("s_TL"), IoError);

  std::string bad_dt = write_file("bad_dt.csv",
                                  "t,d_x,v_x,t_el,l_q,s_TL,u\n"
                                  "0,100,10,1,0,G,0\n"
                                  "0.1,100,10,1,0,G,0\n"
                                  "0.25,100,10,1,0,G,0\n");
  CHECK_THROWS_WITH_AS(read_trace_csv(bad_dt), doctest::Contains("non-uniform"), IoError);

  std::string bad_range = write_file("bad_range.csv",
                                     "t,d_x,v_x,t_el,l_q,s_TL,u\n"
                                     "0,100,-1,1,0,G,0\n");
  CHECK_THROWS_AS(read_trace_csv(bad_range), IoError);

  CHECK_THROWS_AS(read_trace_csv((dir / "missing.csv").string()), MissingInputError);
  fs::remove_all(dir);
}
