#include "doctest.h"
#include "mrs/presentation.hpp"

using namespace mrs;

namespace {

Mrs naturals_mod(int k) {
  auto n = make_naturals();
  return Mrs(n, {{n->parse(std::to_string(k)), n->parse("0")}});
}

}  // namespace

TEST_CASE("G(Z2)") {
  auto g = g_of_monoid(cyclic_group(2));
  CHECK(g.free().letters() == std::vector<std::string>{"1"});
  std::vector<std::string> rules;
  for (const auto& r : g.mrs.rules()) rules.push_back(g.mrs.print(r.lhs) + "->" + g.mrs.print(r.rhs));
  CHECK(rules == std::vector<std::string>{"_->_", "1->1", "11->_"});
  CHECK(g.nu(0) == Element{});
  CHECK(g.eval(g.mrs.parse("111")) == 1);
}

TEST_CASE("letters fall back to generated names") {
  auto m = rename(cyclic_group(3), {"e", "a", "ab"});
  auto g = g_of_monoid(m);
  CHECK(g.free().letters() == std::vector<std::string>{"g1", "g2"});
}

TEST_CASE("unit identity on all small monoids") {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& m : enumerate_monoids(n)) {
      std::string why;
      CHECK_MESSAGE(check_unit_identity(m, &why), why);
    }
  CHECK(check_unit_identity(cyclic_group(5)));
}

TEST_CASE("keeping the identity as a letter breaks the unit") {
  auto g = naive_g(cyclic_group(2));
  auto im = monoid_of_irreducibles(g, presentation_bounds(cyclic_group(2)));
  CHECK(im.table.order() == 3);
  CHECK_FALSE(find_isomorphism(im.table, cyclic_group(2)));
}

TEST_CASE("counit evaluates words") {
  auto a = naturals_mod(5);
  auto ia = monoid_of_irreducibles(a);
  auto gia = g_of_monoid(ia.table);
  auto eps = counit(a, ia, gia);
  CHECK(a.print(eps(gia.mrs.parse("1111"))) == "4");
  CHECK(a.print(eps(gia.mrs.parse("34"))) == "7");
  CHECK(check_mrs_hom(eps).verdict.ok());
}

TEST_CASE("triangle identities") {
  auto r = check_triangles(naturals_mod(3), cyclic_group(4), 4);
  CHECK_MESSAGE(r.ok(), r.detail);
  for (const auto& m : enumerate_monoids(3)) CHECK(check_triangles(naturals_mod(2), m, 3).ok());
}

TEST_CASE("hom equivalence") {
  auto z2 = make_table(cyclic_group(2));
  Mrs a(z2, {});
  auto r = check_hom_equivalence(cyclic_group(2), a);
  CHECK(r.monoid_homs == 2);
  CHECK(r.classes == 2);
  CHECK(r.bijective);

  auto pw = make_powerset({"a", "b", "c"});
  Mrs b(pw, {{pw->parse("{a}"), pw->parse("{a,c}")}, {pw->parse("{b,c}"), pw->parse("{a,b,c}")}});
  for (const auto& m : enumerate_monoids(3)) {
    auto rep = check_hom_equivalence(m, b);
    CHECK_MESSAGE(rep.bijective, rep.detail);
  }
  CHECK_THROWS_AS(check_hom_equivalence(cyclic_group(2), naturals_mod(2)), Refused);
}

TEST_CASE("counit is natural") {
  auto mod6 = naturals_mod(6), mod3 = naturals_mod(3);
  CHECK(counit_naturality(MrsHom::from_naturals(mod6, mod3, mod3.parse("1"))));
  CHECK(counit_naturality(MrsHom::from_naturals(mod6, mod6, mod6.parse("5"))));
}
