#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <set>

#include "mrs/backend.hpp"
#include "text_util.hpp"

namespace mrs {

std::string Backend::signature() const {
  std::string s = header();
  for (const auto& line : body()) {
    s += '\n';
    s += line;
  }
  return s;
}

bool Backend::admissible(const Element& a, const Element& s, const FactorPair& p) const {
  return op3(p.left, s, p.right) == a;
}

bool same_backend(const Backend& a, const Backend& b) {
  return &a == &b || a.signature() == b.signature();
}

bool valid_letter(std::string_view name) {
  if (name.empty() || name == "_") return false;
  if (name.find("->") != std::string_view::npos) return false;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    if (c == '.' || c == '^' || c == ';' || c == '#' || c == '*' || c == '=') return false;
  }
  return true;
}

bool prefix_free(const std::vector<std::string>& letters) {
  std::vector<std::string> sorted = letters;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].compare(0, sorted[i - 1].size(), sorted[i - 1]) == 0) return false;
  return true;
}

// ---- free monoid -----------------------------------------------------------

FreeBackend::FreeBackend(std::vector<std::string> letters) : letters_(std::move(letters)) {
  for (const auto& l : letters_)
    if (!valid_letter(l)) throw UsageError("invalid letter name '" + l + "'");
  if (!prefix_free(letters_)) throw UsageError("letters must be distinct and prefix-free");
}

Element FreeBackend::op(const Element& x, const Element& y) const {
  Element r = x;
  r.v.insert(r.v.end(), y.v.begin(), y.v.end());
  return r;
}

FactorResult FreeBackend::factorizations(const Element& a, const Element& s,
                                         const FactorBudget& budget) const {
  FactorResult out;
  if (s.v.size() > a.v.size()) return out;
  for (std::size_t i = 0; i + s.v.size() <= a.v.size(); ++i) {
    if (!std::equal(s.v.begin(), s.v.end(), a.v.begin() + static_cast<std::ptrdiff_t>(i))) continue;
    if (out.pairs.size() == budget.max_pairs) {
      out.truncated = true;
      break;
    }
    Element x(std::vector<std::int64_t>(a.v.begin(), a.v.begin() + static_cast<std::ptrdiff_t>(i)));
    Element y(std::vector<std::int64_t>(a.v.begin() + static_cast<std::ptrdiff_t>(i + s.v.size()),
                                        a.v.end()));
    out.pairs.push_back({std::move(x), std::move(y)});
  }
  return out;
}

std::vector<Element> FreeBackend::enumerate(std::size_t size_bound) const {
  std::vector<Element> out{Element{}};
  if (letters_.empty()) return out;
  std::size_t layer_start = 0;
  for (std::size_t len = 1; len <= size_bound; ++len) {
    std::size_t layer_end = out.size();
    for (std::size_t i = layer_start; i < layer_end; ++i)
      for (std::size_t l = 0; l < letters_.size(); ++l) {
        Element e = out[i];
        e.v.push_back(static_cast<std::int64_t>(l));
        out.push_back(std::move(e));
      }
    layer_start = layer_end;
  }
  return out;
}

bool FreeBackend::contains(const Element& x) const {
  return std::all_of(x.v.begin(), x.v.end(), [&](std::int64_t l) {
    return l >= 0 && static_cast<std::size_t>(l) < letters_.size();
  });
}

std::string FreeBackend::print(const Element& x) const {
  if (x.v.empty()) return "_";
  std::string s;
  for (auto l : x.v) s += letters_.at(static_cast<std::size_t>(l));
  return s;
}

std::optional<std::size_t> FreeBackend::letter_index(std::string_view name) const {
  for (std::size_t i = 0; i < letters_.size(); ++i)
    if (letters_[i] == name) return i;
  return std::nullopt;
}

Element FreeBackend::parse(std::string_view text) const {
  text = detail::trim(text);
  if (text == "_") return {};
  if (text.empty()) throw ParseError("empty word (write _ for the identity)");
  Element e;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t best = letters_.size(), best_len = 0;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      const auto& l = letters_[i];
      if (l.size() > best_len && text.compare(pos, l.size(), l) == 0) {
        best = i;
        best_len = l.size();
      }
    }
    if (best == letters_.size())
      throw ParseError("unknown letter at '" + std::string(text.substr(pos)) + "'", 0, pos + 1);
    e.v.push_back(static_cast<std::int64_t>(best));
    pos += best_len;
  }
  return e;
}

std::string FreeBackend::header() const {
  std::string s = "free letters =";
  for (const auto& l : letters_) s += " " + l;
  return s;
}

// ---- finite table ----------------------------------------------------------

Element TableBackend::op(const Element& x, const Element& y) const {
  return at(m_.mul(index(x), index(y)));
}

FactorResult TableBackend::factorizations(const Element& a, const Element& s,
                                          const FactorBudget& budget) const {
  FactorResult out;
  const std::size_t ai = index(a), si = index(s);
  for (std::size_t x = 0; x < m_.order(); ++x) {
    const std::size_t xs = m_.mul(x, si);
    for (std::size_t y = 0; y < m_.order(); ++y) {
      if (m_.mul(xs, y) != ai) continue;
      if (out.pairs.size() == budget.max_pairs) {
        out.truncated = true;
        return out;
      }
      out.pairs.push_back({at(x), at(y)});
    }
  }
  return out;
}

std::vector<Element> TableBackend::enumerate(std::size_t) const {
  std::vector<Element> out;
  for (std::size_t i = 0; i < m_.order(); ++i) out.push_back(at(i));
  return out;
}

bool TableBackend::contains(const Element& x) const {
  return x.v.size() == 1 && x.v[0] >= 0 && static_cast<std::size_t>(x.v[0]) < m_.order();
}

std::string TableBackend::print(const Element& x) const { return m_.name(index(x)); }

Element TableBackend::parse(std::string_view text) const {
  text = detail::trim(text);
  auto i = m_.index_of(std::string(text));
  if (!i) throw ParseError("unknown table element '" + std::string(text) + "'");
  return at(*i);
}

std::string TableBackend::header() const {
  std::string s = "table elements =";
  for (const auto& n : m_.names()) s += " " + n;
  s += " ; identity = " + m_.name(m_.identity());
  return s;
}

std::vector<std::string> TableBackend::body() const {
  std::vector<std::string> lines;
  for (std::size_t x = 0; x < m_.order(); ++x)
    for (std::size_t y = 0; y < m_.order(); ++y)
      lines.push_back(m_.name(x) + "*" + m_.name(y) + "=" + m_.name(m_.mul(x, y)));
  return lines;
}

// ---- additive naturals -----------------------------------------------------

Element NaturalsBackend::op(const Element& x, const Element& y) const {
  return value(x.v.at(0) + y.v.at(0));
}

FactorResult NaturalsBackend::factorizations(const Element& a, const Element& s,
                                             const FactorBudget& budget) const {
  FactorResult out;
  const std::int64_t av = a.v.at(0), sv = s.v.at(0);
  if (sv > av) return out;
  for (std::int64_t k = 0; k <= av - sv; ++k) {
    if (out.pairs.size() == budget.max_pairs) {
      out.truncated = true;
      break;
    }
    out.pairs.push_back({value(k), value(av - sv - k)});
  }
  return out;
}

std::vector<Element> NaturalsBackend::enumerate(std::size_t size_bound) const {
  std::vector<Element> out;
  for (std::size_t n = 0; n <= size_bound; ++n) out.push_back(value(static_cast<std::int64_t>(n)));
  return out;
}

std::string NaturalsBackend::print(const Element& x) const { return std::to_string(x.v.at(0)); }

Element NaturalsBackend::parse(std::string_view text) const {
  text = detail::trim(text);
  std::int64_t n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || n < 0)
    throw ParseError("expected a natural number, got '" + std::string(text) + "'");
  return value(n);
}

// ---- powerset under union --------------------------------------------------

PowersetBackend::PowersetBackend(std::vector<std::string> base) : base_(std::move(base)) {
  if (base_.size() > 62) throw UsageError("powerset base set is limited to 62 atoms");
  std::set<std::string> seen;
  for (const auto& a : base_) {
    if (a.empty() || a.find_first_of("{},; \t") != std::string::npos)
      throw UsageError("invalid atom name '" + a + "'");
    if (!seen.insert(a).second) throw UsageError("duplicate atom '" + a + "'");
  }
}

Element PowersetBackend::op(const Element& x, const Element& y) const {
  return set(mask(x) | mask(y));
}

std::size_t PowersetBackend::size(const Element& x) const {
  return static_cast<std::size_t>(std::popcount(mask(x)));
}

FactorResult PowersetBackend::factorizations(const Element& a, const Element& s,
                                             const FactorBudget& budget) const {
  // Union is commutative and idempotent, so the right context is absorbed into
  // the left one: x ranges over supersets of a \ s inside a.
  FactorResult out;
  const std::uint64_t am = mask(a), sm = mask(s);
  if (sm & ~am) return out;
  const std::uint64_t rest = am & ~sm, free = am & sm;
  std::uint64_t sub = 0;
  while (true) {
    if (out.pairs.size() == budget.max_pairs) {
      out.truncated = true;
      break;
    }
    out.pairs.push_back({set(rest | sub), set(0)});
    if (sub == free) break;
    sub = (sub - free) & free;
  }
  return out;
}

std::vector<Element> PowersetBackend::enumerate(std::size_t) const {
  std::vector<Element> out;
  const std::uint64_t n = std::uint64_t{1} << base_.size();
  for (std::uint64_t m = 0; m < n; ++m) out.push_back(set(m));
  return out;
}

bool PowersetBackend::contains(const Element& x) const {
  return x.v.size() == 1 && (mask(x) >> base_.size()) == 0;
}

std::string PowersetBackend::print(const Element& x) const {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (!(mask(x) >> i & 1)) continue;
    if (!first) s += ",";
    s += base_[i];
    first = false;
  }
  return s + "}";
}

Element PowersetBackend::parse(std::string_view text) const {
  text = detail::trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw ParseError("expected a set literal like {a,b}, got '" + std::string(text) + "'");
  std::uint64_t m = 0;
  for (auto part : detail::split(text.substr(1, text.size() - 2), ',')) {
    part = detail::trim(part);
    if (part.empty()) continue;
    auto it = std::find(base_.begin(), base_.end(), part);
    if (it == base_.end()) throw ParseError("unknown atom '" + std::string(part) + "'");
    m |= std::uint64_t{1} << (it - base_.begin());
  }
  return set(m);
}

std::string PowersetBackend::header() const {
  std::string s = "powerset base =";
  for (const auto& a : base_) s += " " + a;
  return s;
}

BackendPtr make_free(std::vector<std::string> letters) {
  return std::make_shared<FreeBackend>(std::move(letters));
}
BackendPtr make_table(FiniteMonoid m) { return std::make_shared<TableBackend>(std::move(m)); }
BackendPtr make_naturals() { return std::make_shared<NaturalsBackend>(); }
BackendPtr make_powerset(std::vector<std::string> base) {
  return std::make_shared<PowersetBackend>(std::move(base));
}

}  // namespace mrs
