#include "doctest.h"
#include "mrs/gett.hpp"
#include "mrs/irreducibles.hpp"

using namespace mrs;

namespace {

Mrs naturals(std::vector<std::pair<int, int>> rules) {
  auto n = make_naturals();
  std::vector<Rule> rs;
  for (auto [a, b] : rules) rs.push_back({n->parse(std::to_string(a)), n->parse(std::to_string(b))});
  return Mrs(n, rs);
}

Mrs powerset_with_redundant_rule() {
  auto p = make_powerset({"a", "b"});
  return Mrs(p, {{p->parse("{a}"), p->parse("{}")},
                 {p->parse("{b}"), p->parse("{}")},
                 {p->parse("{a,b}"), p->parse("{}")},
                 {p->parse("{a}"), p->parse("{a}")}});
}

}  // namespace

TEST_CASE("type 1 over the naturals") {
  auto s = naturals({{2, 0}});
  auto n = s.backend_ptr();
  auto r = apply_type1(s, n->parse("4"), n->parse("0"));
  CHECK(r.after.rules().size() == 2);
  REQUIRE(r.move.certificate);
  CHECK(r.move.certificate->size() == 2);
  auto t = certificate_trace(s, n->parse("4"), *r.move.certificate);
  REQUIRE(t);
  CHECK(t->to == n->parse("0"));
  CHECK(check_preservation(s, r.move, r.after).ok());

  auto refl = apply_type1(s, n->parse("3"), n->parse("3"));
  REQUIRE(refl.move.certificate);
  CHECK(refl.move.certificate->empty());
  CHECK(check_preservation(s, refl.move, refl.after).ok());

  CHECK_THROWS_AS(apply_type1(s, n->parse("1"), n->parse("0")), Refused);
}

TEST_CASE("type 2 over the naturals") {
  auto s = naturals({{2, 0}, {4, 0}});
  auto n = s.backend_ptr();
  auto r = apply_type2(s, {n->parse("4"), n->parse("0")});
  REQUIRE(r.after.rules().size() == 1);
  CHECK(r.after.print(r.after.rules()[0]) == "2 -> 0");
  REQUIRE(r.move.certificate);
  CHECK(r.move.certificate->size() == 2);
  for (const auto& st : *r.move.certificate) CHECK(st.rule == 0);

  auto lone = naturals({{2, 0}});
  CHECK_THROWS_AS(apply_type2(lone, {n->parse("2"), n->parse("0")}), Refused);
}

TEST_CASE("type 2 removing a redundant powerset rule") {
  auto s = powerset_with_redundant_rule();
  auto r = apply_type2(s, s.rules()[2]);
  CHECK(r.after.rules().size() == 3);
  CHECK(check_preservation(s, r.move, r.after).ok());
  auto d = apply_type2(r.after, r.after.rules()[2]);
  CHECK(d.move.certificate->empty());
}

TEST_CASE("type 3") {
  auto f = make_free({"a", "b"});
  Mrs s(f, {});
  auto r = apply_type3(s, "v", f->parse("ab"));
  const Backend& p = r.after.backend();
  CHECK(r.after.rules().size() == 1);
  CHECK(r.after.print(r.after.rules()[0]) == "v -> ab");
  CHECK(p.print(p.op(p.parse("va"), p.parse("b"))) == "vab");
  CHECK(check_preservation(s, r.move, r.after).ok());
  CHECK_THROWS_AS(apply_type3(s, "a", f->parse("b")), Refused);

  Mrs t(make_table(trivial_monoid()), {});
  auto rt = apply_type3(t, "v", t.backend().identity());
  CHECK(rt.after.backend().kind() == BackendKind::Free);
  CHECK(rt.after.print(rt.after.rules()[0]) == "v -> _");
}

TEST_CASE("type 4 on the naturals") {
  auto s = naturals({{2, 0}});
  auto r = apply_type4(s, s.rules());
  CHECK(r.after.rules().empty());
  CHECK(r.after.backend().finite());
  CHECK(r.after.backend().enumerate(0).size() == 2);
  CHECK(check_preservation(s, r.move, r.after).ok());
}

TEST_CASE("script text round trip") {
  const std::string text =
      "# comment\n"
      "add 4 -> 0\n"
      "  step -> 1 2 _\n"
      "  step -> 1 _ _\n"
      "add 3 -> 3\n"
      "  refl\n"
      "remove 4 -> 0\n"
      "adjoin v -> 1\n"
      "collapse { 2 -> 0 }\n"
      "collapse { }\n";
  auto sc = parse_script(text);
  REQUIRE(sc.moves.size() == 6);
  CHECK(sc.moves[0].certificate->size() == 2);
  CHECK(sc.moves[1].certificate->empty());
  CHECK_FALSE(sc.moves[2].certificate);
  CHECK(sc.moves[5].subset.empty());
  CHECK(parse_script(print_script(sc)) == sc);

  CHECK_THROWS_AS(parse_script("add ab ->\n"), ParseError);
  CHECK_THROWS_AS(parse_script("  refl\n"), ParseError);
  CHECK_THROWS_AS(parse_script("merge a -> b\n"), ParseError);
  try {
    parse_script("add 1 -> 1\n  step -> 0 _ _\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("replay") {
  auto s = naturals({{2, 0}});
  auto empty = replay_script(s, {});
  CHECK(empty.verdict.ok());
  CHECK(empty.final_system == s);

  auto sc = parse_script(
      "add 4 -> 0\n  step -> 1 2 0\n  step -> 1 0 0\n"
      "remove 2 -> 0\n  step -> 1 0 0\n");
  auto r = replay_script(s, sc);
  CHECK(r.verdict.refuted());
  REQUIRE(r.failed_at);
  CHECK(*r.failed_at == 1);
  CHECK(r.completed.moves.size() == 1);

  auto ok = replay_script(s, parse_script("add 4 -> 0\n  step -> 1 2 0\n  step -> 1 0 0\n"
                                          "remove 4 -> 0\n  step -> 1 2 0\n  step -> 1 0 0\n"),
                          {}, {false, true});
  CHECK(ok.verdict.ok());
  CHECK(ok.final_system == s);
  CHECK(ok.trail.size() == 2);

  auto missing = parse_script("add 4 -> 0\n");
  CHECK(replay_script(s, missing).verdict.refuted());
  CHECK(replay_script(s, missing, {}, {true, false}).verdict.ok());
}
