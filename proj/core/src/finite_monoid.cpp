#include "mrs/finite_monoid.hpp"

#include <algorithm>
#include <set>

#include "mrs/element.hpp"

namespace mrs {

FiniteMonoid::FiniteMonoid(std::vector<std::string> names, std::size_t identity,
                           std::vector<std::vector<std::size_t>> table)
    : names_(std::move(names)), identity_(identity), table_(std::move(table)) {
  if (auto err = validate(names_, identity_, table_)) throw UsageError(*err);
}

std::optional<std::string> FiniteMonoid::validate(const std::vector<std::string>& names,
                                                  std::size_t identity,
                                                  const std::vector<std::vector<std::size_t>>& t) {
  const std::size_t n = names.size();
  if (n == 0) return "empty carrier";
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != n) return "duplicate element name";
  if (identity >= n) return "identity is not a declared element";
  if (t.size() != n) return "table has wrong number of rows";
  for (std::size_t i = 0; i < n; ++i) {
    if (t[i].size() != n) return "row " + names[i] + " has wrong length";
    for (std::size_t j = 0; j < n; ++j)
      if (t[i][j] >= n) return "entry " + names[i] + "*" + names[j] + " is undeclared";
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (t[identity][x] != x || t[x][identity] != x)
      return "identity law fails at " + names[x];
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        std::size_t l = t[t[x][y]][z], r = t[x][t[y][z]];
        if (l != r)
          return "not associative at (" + names[x] + ", " + names[y] + ", " + names[z] + "): (" +
                 names[x] + "*" + names[y] + ")*" + names[z] + " = " + names[l] + " but " +
                 names[x] + "*(" + names[y] + "*" + names[z] + ") = " + names[r];
      }
  return std::nullopt;
}

std::optional<std::size_t> FiniteMonoid::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

bool is_homomorphism(const FiniteMonoid& a, const FiniteMonoid& b, const MonoidMap& f) {
  if (f.size() != a.order()) return false;
  if (f[a.identity()] != b.identity()) return false;
  for (std::size_t x = 0; x < a.order(); ++x)
    for (std::size_t y = 0; y < a.order(); ++y)
      if (f[a.mul(x, y)] != b.mul(f[x], f[y])) return false;
  return true;
}

namespace {

constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

bool partial_consistent(const FiniteMonoid& a, const FiniteMonoid& b, const MonoidMap& f,
                        std::size_t last) {
  for (std::size_t y = 0; y < a.order(); ++y) {
    if (f[y] == kUnset) continue;
    for (auto [p, q] : {std::pair{last, y}, std::pair{y, last}}) {
      std::size_t r = a.mul(p, q);
      if (f[r] != kUnset && f[r] != b.mul(f[p], f[q])) return false;
    }
  }
  return true;
}

bool search_iso(const FiniteMonoid& a, const FiniteMonoid& b, MonoidMap& f,
                std::vector<bool>& used, std::size_t x) {
  if (x == a.order()) return true;
  if (f[x] != kUnset) return search_iso(a, b, f, used, x + 1);
  for (std::size_t y = 0; y < b.order(); ++y) {
    if (used[y]) continue;
    f[x] = y;
    used[y] = true;
    if (partial_consistent(a, b, f, x) && search_iso(a, b, f, used, x + 1)) return true;
    used[y] = false;
    f[x] = kUnset;
  }
  return false;
}

}  // namespace

std::optional<MonoidMap> find_isomorphism(const FiniteMonoid& a, const FiniteMonoid& b) {
  if (a.order() != b.order()) return std::nullopt;
  MonoidMap f(a.order(), kUnset);
  std::vector<bool> used(b.order(), false);
  f[a.identity()] = b.identity();
  used[b.identity()] = true;
  if (!search_iso(a, b, f, used, 0)) return std::nullopt;
  return f;
}

std::vector<std::size_t> generating_set(const FiniteMonoid& m) {
  std::vector<std::size_t> gens;
  std::vector<bool> reached(m.order(), false);
  reached[m.identity()] = true;
  auto close = [&] {
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t x = 0; x < m.order(); ++x) {
        if (!reached[x]) continue;
        for (auto g : gens) {
          std::size_t p = m.mul(x, g);
          if (!reached[p]) reached[p] = grew = true;
        }
      }
    }
  };
  for (std::size_t x = 0; x < m.order(); ++x) {
    if (reached[x]) continue;
    gens.push_back(x);
    reached[x] = true;
    close();
  }
  return gens;
}

std::vector<MonoidMap> enumerate_homomorphisms(const FiniteMonoid& a, const FiniteMonoid& b) {
  // Every element of a is a word in the generators; a map is fixed by generator
  // images, extended along the words found by a breadth-first closure.
  const auto gens = generating_set(a);
  std::vector<std::pair<std::size_t, std::size_t>> how(a.order(), {kUnset, kUnset});
  std::vector<std::size_t> order{a.identity()};
  std::vector<bool> seen(a.order(), false);
  seen[a.identity()] = true;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      std::size_t p = a.mul(order[i], gens[gi]);
      if (!seen[p]) {
        seen[p] = true;
        how[p] = {order[i], gi};
        order.push_back(p);
      }
    }
  std::vector<MonoidMap> out;
  std::vector<std::size_t> img(gens.size(), 0);
  while (true) {
    MonoidMap f(a.order(), kUnset);
    f[a.identity()] = b.identity();
    for (std::size_t i = 1; i < order.size(); ++i) {
      auto [prev, gi] = how[order[i]];
      f[order[i]] = b.mul(f[prev], img[gi]);
    }
    if (is_homomorphism(a, b, f)) out.push_back(f);
    std::size_t k = 0;
    while (k < img.size() && ++img[k] == b.order()) img[k++] = 0;
    if (k == img.size()) break;
  }
  return out;
}

std::vector<FiniteMonoid> enumerate_monoids(std::size_t n) {
  std::vector<std::string> names{"1"};
  for (std::size_t i = 1; i < n; ++i) names.push_back("x" + std::to_string(i));
  std::vector<FiniteMonoid> out;
  if (n == 0) return out;
  const std::size_t free_cells = (n - 1) * (n - 1);
  std::vector<std::size_t> cells(free_cells, 0);
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      t[0][i] = i;
      t[i][0] = i;
    }
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 1; j < n; ++j) t[i][j] = cells[(i - 1) * (n - 1) + (j - 1)];
    if (!FiniteMonoid::validate(names, 0, t)) out.emplace_back(names, 0, t);
    std::size_t k = 0;
    while (k < cells.size() && ++cells[k] == n) cells[k++] = 0;
    if (k == cells.size()) break;
  }
  return out;
}

FiniteMonoid cyclic_group(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  }
  return FiniteMonoid(names, 0, t);
}

FiniteMonoid trivial_monoid() { return FiniteMonoid({"e"}, 0, {{0}}); }

FiniteMonoid rename(const FiniteMonoid& m, const std::vector<std::string>& names) {
  return FiniteMonoid(names, m.identity(), m.table());
}

}  // namespace mrs
