#include "doctest.h"
#include "mrs/engine.hpp"

using namespace mrs;

namespace {

Mrs naturals_mod2() {
  auto n = make_naturals();
  return Mrs(n, {{n->parse("2"), n->parse("0")}});
}

Mrs powerset_example() {
  // a in U gives U -> U + {c}; {b,c} -> {a,b,c}.
  auto p = make_powerset({"a", "b", "c"});
  std::vector<Rule> rules;
  for (const auto& u : p->enumerate(0)) {
    const auto m = PowersetBackend::mask(u);
    if (m & 1) rules.push_back({u, PowersetBackend::set(m | 4)});
  }
  rules.push_back({p->parse("{b,c}"), p->parse("{a,b,c}")});
  return Mrs(p, rules);
}

}  // namespace

TEST_CASE("one step on naturals") {
  auto s = naturals_mod2();
  auto r = proper_successors(s, s.parse("5"));
  REQUIRE(r.elements.size() == 1);
  CHECK(s.print(r.elements[0]) == "3");
  CHECK(proper_successors(s, s.parse("1")).elements.empty());
}

TEST_CASE("normal forms on naturals") {
  auto s = naturals_mod2();
  for (int n = 0; n <= 30; ++n) CHECK(normal_form(s, s.parse(std::to_string(n))).value ==
                                      s.parse(std::to_string(n % 2)));
  auto nf = normal_form(s, s.parse("7"));
  CHECK(nf.trace.steps.size() == 3);
  CHECK_FALSE(validate_trace(s, nf.trace));
  CHECK(is_irreducible(s, s.parse("1")) == Tri::True);
  CHECK(is_irreducible(s, s.parse("2")) == Tri::False);
  CHECK(check_noetherian(s).ok());
  CHECK_FALSE(check_noetherian(s).bounded);
}

TEST_CASE("degenerate rules are inert") {
  auto n = make_naturals();
  Mrs s(n, {{n->parse("0"), n->parse("0")}});
  CHECK(is_irreducible(s, n->parse("0")) == Tri::True);
  CHECK(one_step(s, n->parse("0")).elements.size() == 1);
}

TEST_CASE("powerset example is terminating and confluent") {
  auto s = powerset_example();
  auto nf = normal_form(s, s.parse("{a}"));
  CHECK(s.print(nf.value) == "{a,c}");
  auto succ = proper_successors(s, s.parse("{a}"));
  REQUIRE(succ.elements.size() == 1);
  CHECK(s.print(succ.elements[0]) == "{a,c}");
  auto n = check_noetherian(s);
  auto c = check_confluent(s);
  CHECK(n.ok());
  CHECK(c.ok());
  CHECK_FALSE(n.bounded);
  CHECK_FALSE(c.bounded);
}

TEST_CASE("free monoid cancellation system") {
  auto f = make_free({"a", "b"});
  Mrs s(f, {{f->parse("ab"), f->parse("_")}, {f->parse("ba"), f->parse("_")}});
  CHECK(check_noetherian(s).ok());
  Bounds b;
  b.size = 8;
  auto c = check_confluent(s, b);
  CHECK(c.ok());
  // Size-decreasing rules: the overlap aba settles confluence outright.
  CHECK_FALSE(c.bounded);
}

TEST_CASE("non-confluent system is refuted with a peak") {
  auto f = make_free({"a", "b", "c"});
  Mrs s(f, {{f->parse("ab"), f->parse("a")}, {f->parse("ab"), f->parse("b")}});
  auto c = check_confluent(s, Bounds{4});
  CHECK(c.refuted());
  REQUIRE(c.witness);
  CHECK(c.witness->kind == WitnessKind::Peak);
  for (const auto& t : c.witness->traces) CHECK_FALSE(validate_trace(s, t));
}

TEST_CASE("cycles are refuted with a replayable witness") {
  auto f = make_free({"a", "b"});
  Mrs s(f, {{f->parse("a"), f->parse("b")}, {f->parse("b"), f->parse("a")}});
  auto v = check_noetherian(s, Bounds{3});
  REQUIRE(v.refuted());
  const auto& t = v.witness->traces.at(0);
  CHECK(t.steps.size() == 2);
  CHECK(s.print(t.from) == "a");
  CHECK_FALSE(validate_trace(s, t));
}

TEST_CASE("reachability") {
  auto s = naturals_mod2();
  auto r = reaches(s, s.parse("4"), s.parse("0"));
  REQUIRE(r.trace);
  CHECK(r.trace->steps.size() == 2);
  CHECK_FALSE(validate_trace(s, *r.trace));
  CHECK(reaches(s, s.parse("3"), s.parse("3")).trace->steps.empty());

  auto f = make_free({"a", "b"});
  Mrs t(f, {{f->parse("ab"), f->parse("_")}});
  auto none = reaches(t, f->parse("ba"), f->parse("_"));
  CHECK_FALSE(none.trace);
  CHECK(none.definitive);
}

TEST_CASE("equivalence") {
  auto s = naturals_mod2();
  auto cert = certify(s);
  auto e = equivalent(s, s.parse("5"), s.parse("3"), {}, &cert);
  REQUIRE(e.status == Tri::True);
  CHECK_FALSE(validate_trace(s, *e.trace));
  CHECK(e.trace->steps.size() == 3);
  CHECK(equivalent(s, s.parse("4"), s.parse("1"), {}, &cert).status == Tri::False);
  auto search = equivalent(s, s.parse("5"), s.parse("3"));
  REQUIRE(search.status == Tri::True);
  CHECK_FALSE(validate_trace(s, *search.trace));

  auto n = make_naturals();
  Mrs empty(n, {});
  CHECK(equivalent(empty, n->parse("2"), n->parse("0")).status == Tri::False);
}

TEST_CASE("trace validator rejects forged steps") {
  auto s = naturals_mod2();
  auto nf = normal_form(s, s.parse("4"));
  auto forged = nf.trace;
  forged.steps[0].after = s.parse("1");
  CHECK(validate_trace(s, forged));
  auto bad_ctx = nf.trace;
  bad_ctx.steps[0].ctx.left = s.parse("1");
  CHECK(validate_trace(s, bad_ctx));
}

TEST_CASE("budget exhaustion carries the partial trace") {
  auto f = make_free({"a"});
  Mrs s(f, {{f->parse("a"), f->parse("aa")}});
  Bounds b;
  b.steps = 5;
  try {
    (void)normal_form(s, f->parse("a"), b);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.partial().steps.size() == 5);
  }
}
