#include "doctest.h"
#include "mrs/presentation.hpp"
#include "mrs/tietze.hpp"

using namespace mrs;

namespace {

// {1, x, 0} with x*x = 0 and 0 absorbing.
FiniteMonoid nilpotent3() {
  return FiniteMonoid({"1", "x", "0"}, 0, {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}});
}

std::size_t count(const GettScript& s, MoveType t) {
  std::size_t n = 0;
  for (const auto& m : s.moves) n += m.type == t;
  return n;
}

Mrs powerset_example() {
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

TEST_CASE("presentation script for Z2") {
  const auto z2 = cyclic_group(2);
  const auto sc = presentation_script(z2);
  CHECK(count(sc, MoveType::Adjoin) == 1);
  CHECK(count(sc, MoveType::Add) == 5);
  CHECK(count(sc, MoveType::Remove) == 1);
  CHECK(count(sc, MoveType::Collapse) == 1);
  CHECK(parse_script(print_script(sc)) == sc);

  auto r = replay_script(Mrs(make_table(z2), {}), sc);
  REQUIRE(r.verdict.ok());
  std::string why;
  CHECK_MESSAGE(same_up_to_renaming(r.final_system, g_of_monoid(z2).mrs, &why), why);
}

TEST_CASE("presentation script for the trivial monoid") {
  const auto t = trivial_monoid();
  const auto sc = presentation_script(t);
  CHECK(sc.moves.size() == 1);
  CHECK(sc.moves[0].type == MoveType::Add);
  CHECK(sc.moves[0].lhs == sc.moves[0].rhs);
  auto r = replay_script(Mrs(make_table(t), {}), sc);
  REQUIRE(r.verdict.ok());
  CHECK(same_up_to_renaming(r.final_system, g_of_monoid(t).mrs));
}

TEST_CASE("presentation script for a nilpotent monoid") {
  const auto m = nilpotent3();
  const auto sc = presentation_script(m);
  CHECK(count(sc, MoveType::Add) == 9 + 2);
  auto r = replay_script(Mrs(make_table(m), {}), sc);
  REQUIRE(r.verdict.ok());
  std::string why;
  CHECK_MESSAGE(same_up_to_renaming(r.final_system, g_of_monoid(m).mrs, &why), why);
}

TEST_CASE("presentation scripts for every monoid of order three") {
  for (const auto& m : enumerate_monoids(3)) {
    auto r = replay_script(Mrs(make_table(m), {}), presentation_script(m));
    CHECK(r.verdict.ok());
    CHECK(same_up_to_renaming(r.final_system, g_of_monoid(m).mrs));
  }
}

TEST_CASE("path from G(Z2) to the table") {
  const auto z2 = cyclic_group(2);
  const auto a = g_of_monoid(z2).mrs;
  const Mrs b(make_table(z2), {});
  const auto rep = tietze_path(a, b, std::nullopt, presentation_bounds(z2));
  CHECK_MESSAGE(rep.replay.ok(), rep.replay.reason);
  CHECK_MESSAGE(rep.final_matches, rep.detail);
  REQUIRE(rep.stages.size() == 5);
  for (const auto& s : rep.stages) CHECK(s.preserves_irreducibles.value_or(true));
  CHECK(parse_script(print_script(rep.script)) == rep.script);
}

TEST_CASE("path from a system to itself") {
  const auto m = nilpotent3();
  const Mrs b(make_table(m), {});
  const auto rep = tietze_path(b, b);
  CHECK_MESSAGE(rep.replay.ok(), rep.replay.reason);
  CHECK(rep.final_matches);
  CHECK(rep.stages[0].moves == 1);
}

TEST_CASE("path from the powerset system to its irreducibles") {
  const auto a = powerset_example();
  const auto ia = monoid_of_irreducibles(a);
  const Mrs b(make_table(ia.table), {});
  const auto rep = tietze_path(a, b);
  CHECK_MESSAGE(rep.replay.ok(), rep.replay.reason);
  CHECK_MESSAGE(rep.final_matches, rep.detail);
}

TEST_CASE("path from the irreducibles back to the powerset system") {
  const auto b = powerset_example();
  const Mrs a(make_table(monoid_of_irreducibles(b).table), {});
  const auto rep = tietze_path(a, b);
  CHECK_MESSAGE(rep.replay.ok(), rep.replay.reason);
  CHECK_MESSAGE(rep.final_matches, rep.detail);
}

TEST_CASE("path refusals") {
  const Mrs a(make_table(cyclic_group(2)), {});
  const Mrs b(make_table(cyclic_group(3)), {});
  CHECK_THROWS_AS(tietze_path(a, b), Refused);
  CHECK_THROWS_AS(tietze_path(a, a, MonoidMap{0, 0}), Refused);
}
