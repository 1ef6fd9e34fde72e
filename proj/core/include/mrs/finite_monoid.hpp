#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mrs {

/// Explicit multiplication table with named elements.
class FiniteMonoid {
 public:
  FiniteMonoid() = default;
  // Throws UsageError on a malformed table, naming the failing element or triple.
  FiniteMonoid(std::vector<std::string> names, std::size_t identity,
               std::vector<std::vector<std::size_t>> table);

  // Returns a diagnostic, or nullopt when the table is a monoid.
  static std::optional<std::string> validate(const std::vector<std::string>& names,
                                             std::size_t identity,
                                             const std::vector<std::vector<std::size_t>>& table);

  std::size_t order() const { return names_.size(); }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t x, std::size_t y) const { return table_[x][y]; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<std::size_t>>& table() const { return table_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  friend bool operator==(const FiniteMonoid&, const FiniteMonoid&) = default;

 private:
  std::vector<std::string> names_;
  std::size_t identity_ = 0;
  std::vector<std::vector<std::size_t>> table_;
};

using MonoidMap = std::vector<std::size_t>;

bool is_homomorphism(const FiniteMonoid& a, const FiniteMonoid& b, const MonoidMap& f);

/// Brute-force bijection search; first isomorphism a -> b in lexicographic order.
std::optional<MonoidMap> find_isomorphism(const FiniteMonoid& a, const FiniteMonoid& b);

/// All monoid homomorphisms a -> b, by brute force over images of a generating set.
std::vector<MonoidMap> enumerate_homomorphisms(const FiniteMonoid& a, const FiniteMonoid& b);

/// A small generating set, chosen greedily in element order.
std::vector<std::size_t> generating_set(const FiniteMonoid& m);

/// Every associative table on {0..n-1} with identity 0; names are "1", "x1", "x2", ...
std::vector<FiniteMonoid> enumerate_monoids(std::size_t order);

FiniteMonoid cyclic_group(std::size_t n);
FiniteMonoid trivial_monoid();

/// Same table with elements renamed; names must stay distinct.
FiniteMonoid rename(const FiniteMonoid& m, const std::vector<std::string>& names);

}  // namespace mrs
