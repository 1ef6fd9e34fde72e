#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mrs/format.hpp"
#include "mrs/irreducibles.hpp"
#include "mrs/presentation.hpp"

using namespace mrs;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in, path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::set<std::string> irreducible_names(const Mrs& s) {
  std::set<std::string> out;
  for (const auto& e : irreducible_elements(s).elements) out.insert(s.print(e));
  return out;
}

// Forward chaining to a fixed point.
std::uint64_t horn_oracle(const HornTheorySpec& t, std::uint64_t d) {
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [g, c] : t.sequents)
      if ((g & d) == g && (c & ~d)) {
        d |= c;
        changed = true;
      }
  }
  return d;
}

std::uint64_t nf_mask(const Mrs& s, std::uint64_t d) {
  return PowersetBackend::mask(normal_form(s, PowersetBackend::set(d)).value);
}

}  // namespace

TEST_CASE("system files round trip") {
  for (const char* f : {"fixtures/naturals_mod2.mrs", "fixtures/powerset.mrs", "fixtures/cancel.mrs",
                        "fixtures/four_letter.mrs", "fixtures/z2.mrs", "fixtures/g_z2.mrs"}) {
    CAPTURE(f);
    const Mrs s = parse_mrs(slurp(f));
    CHECK(parse_mrs(print_mrs(s)) == s);
  }
  auto g = g_of_monoid(parse_table(slurp("fixtures/nilpotent3.table"))).mrs;
  CHECK(parse_mrs(print_mrs(g)) == g);

  auto f = make_free({"a", "b"});
  Mrs prod(free_product_adjoin(make_table(cyclic_group(2)), {"v"}), {});
  CHECK(parse_mrs(print_mrs(prod)) == prod);
  Mrs bic(make_bicyclic("p", "q"), {});
  CHECK(parse_mrs(print_mrs(bic)) == bic);
}

TEST_CASE("malformed system files") {
  try {
    parse_mrs("monoid free letters = a b\nrules\n  ab ->\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_mrs("monoid free letters = a b\nrules\n  ac -> _\n"), ParseError);
  CHECK_THROWS_AS(parse_mrs("monoid groups\n"), ParseError);
  CHECK_THROWS_AS(parse_mrs("rules\n"), ParseError);
  CHECK_THROWS_AS(parse_mrs("monoid free letters = a ab\n"), ParseError);
}

TEST_CASE("table files") {
  const auto m = parse_table(slurp("fixtures/nilpotent3.table"));
  CHECK(m.order() == 3);
  CHECK(m.name(m.mul(1, 1)) == "0");
  CHECK(parse_table(print_table(m)) == m);
  try {
    parse_table(slurp("fixtures/bad_assoc.table"));
    FAIL("expected a refusal");
  } catch (const Refused& e) {
    CHECK(std::string(e.what()).find("not associative at (x, x, x)") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_table("table elements = 1 x ; identity = 1\n  1*1=1 1*x=x x*1=x\n"), ParseError);
}

TEST_CASE("map files") {
  const auto z2 = parse_table(slurp("fixtures/z2.table"));
  const auto f = parse_map(slurp("fixtures/z2_identity.map"), z2, z2);
  CHECK(f == MonoidMap{0, 1});
  CHECK(parse_map(print_map(f, z2, z2), z2, z2) == f);
  CHECK_THROWS_AS(parse_map("map 0 -> 0\n", z2, z2), ParseError);
  CHECK_THROWS_AS(parse_map("map 0 -> 2\nmap 1 -> 0\n", z2, z2), ParseError);
}

TEST_CASE("closure rules") {
  const auto d = gen_closure_rules(parse_topology(slurp("fixtures/discrete.top")));
  for (const auto& r : d.rules()) CHECK(r.lhs == r.rhs);
  CHECK(irreducible_names(d) == std::set<std::string>{"{}", "{a}", "{b}", "{a,b}"});

  const auto ind = gen_closure_rules(parse_topology(slurp("fixtures/indiscrete.top")));
  CHECK(irreducible_names(ind) == std::set<std::string>{"{}", "{a,b}"});

  const auto s = gen_closure_rules(parse_topology(slurp("fixtures/sierpinski.top")));
  CHECK(s.print(normal_form(s, s.backend().parse("{a}")).value) == "{a,b}");
  CHECK(irreducible_names(s) == std::set<std::string>{"{}", "{b}", "{a,b}"});

  TopologySpec bad{{"a", "b"}, {0, 1, 2}};
  try {
    validate_topology(bad);
    FAIL("expected a refusal");
  } catch (const Refused& e) {
    CHECK(std::string(e.what()).find("is not open") != std::string::npos);
  }
  TopologySpec no_union{{"a", "b"}, {0, 1, 2, 3}};
  no_union.opens = {0, 1, 2};
  CHECK_THROWS_AS(gen_closure_rules(no_union), Refused);
}

TEST_CASE("closed sets are the irreducibles on every space of at most three points") {
  std::size_t spaces = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::uint64_t full = (1ULL << n) - 1;
    std::vector<std::uint64_t> middle;
    for (std::uint64_t u = 1; u < full; ++u) middle.push_back(u);
    for (std::uint64_t pick = 0; pick < (1ULL << middle.size()); ++pick) {
      TopologySpec t;
      for (std::size_t i = 0; i < n; ++i) t.base.push_back(std::string(1, static_cast<char>('a' + i)));
      t.opens = {0, full};
      for (std::size_t k = 0; k < middle.size(); ++k)
        if (pick >> k & 1) t.opens.push_back(middle[k]);
      try {
        validate_topology(t);
      } catch (const Refused&) {
        continue;
      }
      ++spaces;
      const Mrs s = gen_closure_rules(t);
      std::set<std::uint64_t> closed, irr;
      for (auto o : t.opens) closed.insert(full & ~o);
      for (const auto& e : irreducible_elements(s).elements) irr.insert(PowersetBackend::mask(e));
      CHECK(irr == closed);
    }
  }
  // 1 + 4 + 29 topologies on 1, 2, 3 points.
  CHECK(spaces == 34);
}

TEST_CASE("Horn rules") {
  const auto chain = gen_horn_rules(parse_horn(slurp("fixtures/chain.horn")));
  CHECK(chain.print(normal_form(chain, chain.backend().parse("{p}")).value) == "{p,q,r}");
  const auto pq = gen_horn_rules(parse_horn(slurp("fixtures/pq.horn")));
  CHECK(irreducible_names(pq) == std::set<std::string>{"{}", "{q}", "{p,q}"});
  CHECK(certify(pq).ok());
  const auto empty = gen_horn_rules(parse_horn("horn atoms = p q\n"));
  CHECK(irreducible_names(empty).size() == 4);
  const auto axiom = parse_horn("horn atoms = p q\n|- p\n{p} |- {q}\n");
  CHECK(axiom.sequents[0] == std::pair<std::uint64_t, std::uint64_t>{0, 1});
  CHECK_THROWS_AS(parse_horn("horn atoms = p\np |- z\n"), ParseError);
}

TEST_CASE("Horn closure is a closure operator on random theories") {
  std::mt19937 rng(20261016);
  for (int round = 0; round < 1000; ++round) {
    HornTheorySpec t;
    const std::size_t n = 1 + rng() % 4;
    for (std::size_t i = 0; i < n; ++i) t.atoms.push_back("p" + std::to_string(i));
    const std::uint64_t full = (1ULL << n) - 1;
    const std::size_t k = rng() % 5;
    for (std::size_t i = 0; i < k; ++i) t.sequents.emplace_back(rng() & full, rng() & full);
    const Mrs s = gen_horn_rules(t);
    REQUIRE(certify(s).ok());
    std::vector<std::uint64_t> nf(full + 1);
    for (std::uint64_t d = 0; d <= full; ++d) {
      nf[d] = nf_mask(s, d);
      CHECK(nf[d] == horn_oracle(t, d));
      CHECK((nf[d] & d) == d);
    }
    for (std::uint64_t d = 0; d <= full; ++d) {
      CHECK(nf[nf[d]] == nf[d]);
      for (std::uint64_t e = 0; e <= full; ++e)
        if ((d & e) == d) CHECK((nf[d] & nf[e]) == nf[d]);
    }
  }
}
