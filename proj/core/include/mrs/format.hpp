#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrs/engine.hpp"
#include "mrs/finite_monoid.hpp"

namespace mrs {

/// System files:
///
///   # comment
///   monoid table elements = 1 x 0 ; identity = 1
///     1*1=1 1*x=x ...
///   rules
///     x -> 0
///
/// The `monoid` line is the backend header; indented lines before `rules` are
/// its body. Headers: `free letters = ...`, `table elements = ... ; identity = e`,
/// `naturals`, `powerset base = ...`, `bicyclic letters = p q`,
/// `product [exact] letters = ... over <header>`,
/// `collapse by { l -> r ; ... } over <header>`.
Mrs parse_mrs(std::string_view text);
std::string print_mrs(const Mrs& mrs);

BackendPtr parse_backend(std::string_view header, const std::vector<std::string>& body,
                         std::size_t line = 0);

/// Table files hold the `table ...` header and `x*y=z` entries (any number per
/// line). A non-associative table is refused naming the failing triple.
FiniteMonoid parse_table(std::string_view text);
std::string print_table(const FiniteMonoid& m);

/// `map x -> y` lines as text pairs, in file order.
std::vector<std::pair<std::string, std::string>> parse_map_lines(std::string_view text);

/// `map x -> y` lines between named elements of two tables.
MonoidMap parse_map(std::string_view text, const FiniteMonoid& from, const FiniteMonoid& to);
std::string print_map(const MonoidMap& f, const FiniteMonoid& from, const FiniteMonoid& to);

/// Finite space: `topology base = a b`, then `open {..}` lines.
struct TopologySpec {
  std::vector<std::string> base;
  std::vector<std::uint64_t> opens;  // bit i for base[i]
};

/// Horn theory: `horn atoms = p q r`, then sequents `p, q |- r` (`|- r` for an
/// empty premise).
struct HornTheorySpec {
  std::vector<std::string> atoms;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sequents;  // premise, conclusion
};

TopologySpec parse_topology(std::string_view text);
HornTheorySpec parse_horn(std::string_view text);

/// Throws Refused naming the first violated axiom (missing set or a pair whose
/// union or intersection is not open).
void validate_topology(const TopologySpec& spec);

/// Powerset-union carrier over the base with one rule U -> cl(U) per subset.
Mrs gen_closure_rules(const TopologySpec& spec);
std::uint64_t closure(const TopologySpec& spec, std::uint64_t u);

/// Powerset-union carrier over the atoms with one rule (G, G u D) per sequent.
Mrs gen_horn_rules(const HornTheorySpec& spec);

}  // namespace mrs
