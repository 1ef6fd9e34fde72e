#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "mrs/backend.hpp"
#include "text_util.hpp"

namespace mrs {

namespace {

struct Token {
  std::int64_t letter;  // -1 for a component syllable
  Element comp;
  friend bool operator==(const Token&, const Token&) = default;
};

}  // namespace

FreeProductBackend::FreeProductBackend(BackendPtr component, std::vector<std::string> letters,
                                       ProductMatching matching)
    : component_(std::move(component)), letters_(std::move(letters)), matching_(matching) {
  std::set<std::string> seen;
  for (const auto& l : letters_) {
    if (!valid_letter(l)) throw UsageError("invalid letter name '" + l + "'");
    if (!seen.insert(l).second) throw UsageError("duplicate letter '" + l + "'");
    if (!is_fresh_letter(*component_, l))
      throw UsageError("letter '" + l + "' collides with an element of the component monoid");
  }
}

std::vector<FreeProductBackend::Syllable> FreeProductBackend::decode(const Element& x) const {
  std::vector<Syllable> out;
  std::size_t i = 0;
  while (i < x.v.size()) {
    if (x.v[i] == 0) {
      auto len = static_cast<std::size_t>(x.v.at(i + 1));
      Syllable s;
      s.comp = Element(std::vector<std::int64_t>(x.v.begin() + static_cast<std::ptrdiff_t>(i + 2),
                                                 x.v.begin() + static_cast<std::ptrdiff_t>(i + 2 + len)));
      out.push_back(std::move(s));
      i += 2 + len;
    } else {
      out.push_back(Syllable{x.v.at(i + 1), x.v.at(i + 2), {}});
      i += 3;
    }
  }
  return out;
}

Element FreeProductBackend::encode(const std::vector<Syllable>& in) const {
  const Element e = component_->identity();
  std::vector<Syllable> st;
  for (const auto& s : in) {
    if (s.letter < 0) {
      if (s.comp == e) continue;
      if (!st.empty() && st.back().letter < 0) {
        Element merged = component_->op(st.back().comp, s.comp);
        st.pop_back();
        if (merged != e) st.push_back(Syllable{-1, 0, std::move(merged)});
      } else {
        st.push_back(s);
      }
    } else {
      if (s.exp == 0) continue;
      if (!st.empty() && st.back().letter == s.letter) {
        st.back().exp += s.exp;
      } else {
        st.push_back(Syllable{s.letter, s.exp, {}});
      }
    }
  }
  Element out;
  for (const auto& s : st) {
    if (s.letter < 0) {
      out.v.push_back(0);
      out.v.push_back(static_cast<std::int64_t>(s.comp.v.size()));
      out.v.insert(out.v.end(), s.comp.v.begin(), s.comp.v.end());
    } else {
      out.v.push_back(1);
      out.v.push_back(s.letter);
      out.v.push_back(s.exp);
    }
  }
  return out;
}

Element FreeProductBackend::embed(const Element& c) const { return encode({Syllable{-1, 0, c}}); }

Element FreeProductBackend::letter(std::size_t i, std::int64_t exp) const {
  return encode({Syllable{static_cast<std::int64_t>(i), exp, {}}});
}

Element FreeProductBackend::op(const Element& x, const Element& y) const {
  auto sx = decode(x);
  auto sy = decode(y);
  sx.insert(sx.end(), sy.begin(), sy.end());
  return encode(sx);
}

std::size_t FreeProductBackend::size(const Element& x) const {
  std::size_t n = 0;
  for (const auto& s : decode(x))
    n += s.letter < 0 ? 1 + component_->size(s.comp) : static_cast<std::size_t>(s.exp);
  return n;
}

bool FreeProductBackend::contains(const Element& x) const {
  try {
    auto syl = decode(x);
    for (const auto& s : syl) {
      if (s.letter < 0 && !component_->contains(s.comp)) return false;
      if (s.letter >= static_cast<std::int64_t>(letters_.size()) || (s.letter >= 0 && s.exp < 1))
        return false;
    }
    return encode(syl) == x;
  } catch (const std::exception&) {
    return false;
  }
}

namespace {

std::vector<Token> tokens_of(const std::vector<FreeProductBackend::Syllable>& syl) {
  std::vector<Token> t;
  for (const auto& s : syl) {
    if (s.letter < 0) {
      t.push_back(Token{-1, s.comp});
    } else {
      for (std::int64_t k = 0; k < s.exp; ++k) t.push_back(Token{s.letter, {}});
    }
  }
  return t;
}

std::vector<FreeProductBackend::Syllable> syllables_of(std::vector<Token>::const_iterator b,
                                                       std::vector<Token>::const_iterator e) {
  std::vector<FreeProductBackend::Syllable> out;
  for (auto it = b; it != e; ++it) out.push_back({it->letter, it->letter < 0 ? 0 : 1, it->comp});
  return out;
}

}  // namespace

FactorResult FreeProductBackend::aligned_factorizations(const Element& a, const Element& s) const {
  FactorResult out;
  const auto ta = tokens_of(decode(a));
  const auto ts = tokens_of(decode(s));
  if (ts.size() > ta.size()) return out;
  for (std::size_t i = 0; i + ts.size() <= ta.size(); ++i) {
    auto at = ta.begin() + static_cast<std::ptrdiff_t>(i);
    if (!std::equal(ts.begin(), ts.end(), at)) continue;
    out.pairs.push_back({encode(syllables_of(ta.begin(), at)),
                         encode(syllables_of(at + static_cast<std::ptrdiff_t>(ts.size()), ta.end()))});
  }
  return out;
}

bool FreeProductBackend::admissible(const Element& a, const Element& s,
                                    const FactorPair& p) const {
  if (matching_ == ProductMatching::Exact) return op3(p.left, s, p.right) == a;
  auto t = tokens_of(decode(p.left));
  auto ts = tokens_of(decode(s));
  auto ty = tokens_of(decode(p.right));
  t.insert(t.end(), ts.begin(), ts.end());
  t.insert(t.end(), ty.begin(), ty.end());
  return t == tokens_of(decode(a));
}

FactorResult FreeProductBackend::splits(const Element& a, const FactorBudget& budget) const {
  FactorResult out;
  const auto A = decode(a);
  const Element e = component_->identity();
  auto units = component_->factorizations(e, e, budget);
  out.truncated = units.truncated;
  std::vector<std::pair<Element, Element>> unit_pairs;
  for (auto& fp : units.pairs)
    if (fp.left != e) unit_pairs.emplace_back(fp.left, fp.right);

  std::vector<std::pair<std::vector<Syllable>, std::vector<Syllable>>> base;
  auto slice = [&](std::size_t from, std::size_t to) {
    return std::vector<Syllable>(A.begin() + static_cast<std::ptrdiff_t>(from),
                                 A.begin() + static_cast<std::ptrdiff_t>(to));
  };
  for (std::size_t i = 0; i <= A.size(); ++i) base.emplace_back(slice(0, i), slice(i, A.size()));
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].letter < 0) {
      auto inner = component_->factorizations(A[i].comp, e, budget);
      out.truncated = out.truncated || inner.truncated;
      for (auto& fp : inner.pairs) {
        auto p = slice(0, i);
        p.push_back(Syllable{-1, 0, fp.left});
        auto q = slice(i + 1, A.size());
        q.insert(q.begin(), Syllable{-1, 0, fp.right});
        base.emplace_back(std::move(p), std::move(q));
      }
    } else {
      for (std::int64_t j = 1; j < A[i].exp; ++j) {
        auto p = slice(0, i);
        p.push_back(Syllable{A[i].letter, j, {}});
        auto q = slice(i + 1, A.size());
        q.insert(q.begin(), Syllable{A[i].letter, A[i].exp - j, {}});
        base.emplace_back(std::move(p), std::move(q));
      }
    }
  }
  std::set<std::pair<Element, Element>> seen;
  auto emit = [&](const std::vector<Syllable>& p, const std::vector<Syllable>& q) {
    Element pe = encode(p), qe = encode(q);
    if (op(pe, qe) != a || !seen.emplace(pe, qe).second) return;
    if (out.pairs.size() == budget.max_pairs) {
      out.truncated = true;
      return;
    }
    out.pairs.push_back({std::move(pe), std::move(qe)});
  };
  for (const auto& [p, q] : base) {
    emit(p, q);
    // A unit pair g*h = 1 inserted at the junction cancels after merging.
    for (const auto& [g, h] : unit_pairs) {
      auto p2 = p;
      p2.push_back(Syllable{-1, 0, g});
      auto q2 = q;
      q2.insert(q2.begin(), Syllable{-1, 0, h});
      emit(p2, q2);
    }
  }
  return out;
}

FactorResult FreeProductBackend::exact_factorizations(const Element& a, const Element& s,
                                                      const FactorBudget& budget) const {
  // x*s*y = a  iff  (x*s, y) splits a and (x, s) splits x*s.
  FactorResult out;
  auto outer = splits(a, budget);
  out.truncated = outer.truncated;
  std::set<std::pair<Element, Element>> seen;
  for (const auto& [p, q] : outer.pairs) {
    auto inner = splits(p, budget);
    out.truncated = out.truncated || inner.truncated;
    for (const auto& [x, r] : inner.pairs) {
      if (r != s || !seen.emplace(x, q).second) continue;
      if (out.pairs.size() == budget.max_pairs) {
        out.truncated = true;
        return out;
      }
      out.pairs.push_back({x, q});
    }
  }
  return out;
}

FactorResult FreeProductBackend::factorizations(const Element& a, const Element& s,
                                                const FactorBudget& budget) const {
  if (matching_ == ProductMatching::Aligned) {
    auto r = aligned_factorizations(a, s);
    if (r.pairs.size() > budget.max_pairs) {
      r.pairs.resize(budget.max_pairs);
      r.truncated = true;
    }
    return r;
  }
  return exact_factorizations(a, s, budget);
}

std::vector<Element> FreeProductBackend::enumerate(std::size_t size_bound) const {
  const Element e = component_->identity();
  std::vector<std::pair<std::size_t, Element>> comps;
  if (size_bound >= 1) {
    for (auto& c : component_->enumerate(size_bound - 1)) {
      if (c == e) continue;
      std::size_t sz = 1 + component_->size(c);
      if (sz <= size_bound) comps.emplace_back(sz, std::move(c));
    }
  }
  std::vector<Element> out;
  std::vector<Syllable> cur;
  // last: -2 nothing, -1 component, >= 0 letter index
  auto rec = [&](auto&& self, std::size_t used, std::int64_t last) -> void {
    out.push_back(encode(cur));
    if (last != -1) {
      for (const auto& [sz, c] : comps) {
        if (used + sz > size_bound) continue;
        cur.push_back(Syllable{-1, 0, c});
        self(self, used + sz, -1);
        cur.pop_back();
      }
    }
    for (std::size_t l = 0; l < letters_.size(); ++l) {
      if (static_cast<std::int64_t>(l) == last) continue;
      for (std::size_t n = 1; used + n <= size_bound; ++n) {
        cur.push_back(Syllable{static_cast<std::int64_t>(l), static_cast<std::int64_t>(n), {}});
        self(self, used + n, static_cast<std::int64_t>(l));
        cur.pop_back();
      }
    }
  };
  rec(rec, 0, -2);
  std::stable_sort(out.begin(), out.end(), [&](const Element& x, const Element& y) {
    return size(x) < size(y);
  });
  return out;
}

std::optional<std::size_t> FreeProductBackend::letter_index(std::string_view name) const {
  for (std::size_t i = 0; i < letters_.size(); ++i)
    if (letters_[i] == name) return i;
  return std::nullopt;
}

std::string FreeProductBackend::print(const Element& x) const {
  auto syl = decode(x);
  if (syl.empty()) return "_";
  std::string s;
  for (std::size_t i = 0; i < syl.size(); ++i) {
    if (i) s += ".";
    if (syl[i].letter < 0) {
      s += component_->print(syl[i].comp);
    } else {
      s += letters_.at(static_cast<std::size_t>(syl[i].letter));
      if (syl[i].exp != 1) s += "^" + std::to_string(syl[i].exp);
    }
  }
  return s;
}

Element FreeProductBackend::parse(std::string_view text) const {
  text = detail::trim(text);
  if (text == "_") return {};
  if (text.empty()) throw ParseError("empty free-product literal (write _ for the identity)");
  std::vector<Syllable> syl;
  for (auto piece : detail::split(text, '.')) {
    piece = detail::trim(piece);
    if (piece == "_") continue;
    std::string_view name = piece;
    std::int64_t exp = 1;
    if (auto caret = piece.rfind('^'); caret != std::string_view::npos) {
      name = piece.substr(0, caret);
      auto digits = piece.substr(caret + 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exp);
      if (ec != std::errc() || ptr != digits.data() + digits.size() || exp < 0)
        throw ParseError("bad exponent in '" + std::string(piece) + "'");
    }
    if (auto l = letter_index(name)) {
      syl.push_back(Syllable{static_cast<std::int64_t>(*l), exp, {}});
    } else if (name.size() != piece.size()) {
      throw ParseError("exponent on a non-letter syllable '" + std::string(piece) + "'");
    } else {
      syl.push_back(Syllable{-1, 0, component_->parse(piece)});
    }
  }
  return encode(syl);
}

std::string FreeProductBackend::header() const {
  std::string s = "product ";
  if (matching_ == ProductMatching::Exact) s += "exact ";
  s += "letters =";
  for (const auto& l : letters_) s += " " + l;
  return s + " over " + component_->header();
}

bool is_fresh_letter(const Backend& base, const std::string& name) {
  if (!valid_letter(name)) return false;
  if (auto* f = dynamic_cast<const FreeBackend*>(&base)) {
    auto letters = f->letters();
    letters.push_back(name);
    return prefix_free(letters);
  }
  if (auto* p = dynamic_cast<const FreeProductBackend*>(&base)) {
    if (p->letter_index(name)) return false;
    return is_fresh_letter(*p->component(), name);
  }
  try {
    base.parse(name);
    return false;
  } catch (const std::exception&) {
    return true;
  }
}

BackendPtr free_product_adjoin(const BackendPtr& base, const std::vector<std::string>& fresh,
                               ProductMatching matching) {
  std::set<std::string> seen;
  for (const auto& l : fresh) {
    if (!seen.insert(l).second) throw UsageError("letter '" + l + "' adjoined twice");
    if (!is_fresh_letter(*base, l)) throw UsageError("letter '" + l + "' is not fresh");
  }
  if (auto* f = dynamic_cast<const FreeBackend*>(base.get())) {
    auto letters = f->letters();
    letters.insert(letters.end(), fresh.begin(), fresh.end());
    return make_free(std::move(letters));
  }
  if (auto* p = dynamic_cast<const FreeProductBackend*>(base.get())) {
    auto letters = p->letters();
    letters.insert(letters.end(), fresh.begin(), fresh.end());
    return std::make_shared<FreeProductBackend>(p->component(), std::move(letters), p->matching());
  }
  // M * F_V is F_V when M is trivial.
  if (base->finite() && base->enumerate(0).size() == 1) return make_free(fresh);
  return std::make_shared<FreeProductBackend>(base, fresh, matching);
}

// ---- bicyclic --------------------------------------------------------------

BicyclicBackend::BicyclicBackend(std::string p, std::string q) : p_(std::move(p)), q_(std::move(q)) {
  if (!valid_letter(p_) || !valid_letter(q_) || !prefix_free({p_, q_}))
    throw UsageError("bicyclic generators must be distinct prefix-free letters");
}

Element BicyclicBackend::op(const Element& x, const Element& y) const {
  const std::int64_t k = std::min(x.v[1], y.v[0]);
  return pair(x.v[0] + y.v[0] - k, x.v[1] + y.v[1] - k);
}

std::size_t BicyclicBackend::size(const Element& x) const {
  return static_cast<std::size_t>(x.v[0] + x.v[1]);
}

FactorResult BicyclicBackend::factorizations(const Element& a, const Element& s,
                                             const FactorBudget& budget) const {
  // x = q^m1 p^n1, y = q^py p^qy. When n1 and py both exceed K, replacing them
  // by n1-1, py-1 keeps x*t*y fixed for every t of size < K, so only pairs with
  // min(n1, py) <= K are reported.
  FactorResult out;
  const std::int64_t m = a.v[0], n = a.v[1], c = s.v[0], d = s.v[1];
  const auto K = static_cast<std::int64_t>(std::max(size(s), budget.probe_size)) + 1;
  for (std::int64_t m1 = 0; m1 <= m; ++m1)
    for (std::int64_t n1 = 0; n1 <= n + K + c; ++n1) {
      const Element xs = op(pair(m1, n1), s);
      for (std::int64_t py = 0; py <= m + K + d; ++py) {
        if (std::min(n1, py) > K) continue;
        for (std::int64_t qy = 0; qy <= n; ++qy) {
          if (op(xs, pair(py, qy)) != a) continue;
          if (out.pairs.size() == budget.max_pairs) {
            out.truncated = true;
            return out;
          }
          out.pairs.push_back({pair(m1, n1), pair(py, qy)});
        }
      }
    }
  return out;
}

std::vector<Element> BicyclicBackend::enumerate(std::size_t size_bound) const {
  std::vector<Element> out;
  for (std::int64_t t = 0; t <= static_cast<std::int64_t>(size_bound); ++t)
    for (std::int64_t m = 0; m <= t; ++m) out.push_back(pair(m, t - m));
  return out;
}

bool BicyclicBackend::contains(const Element& x) const {
  return x.v.size() == 2 && x.v[0] >= 0 && x.v[1] >= 0;
}

std::string BicyclicBackend::print(const Element& x) const {
  if (x.v[0] == 0 && x.v[1] == 0) return "_";
  std::string s;
  for (std::int64_t i = 0; i < x.v[0]; ++i) s += q_;
  for (std::int64_t i = 0; i < x.v[1]; ++i) s += p_;
  return s;
}

Element BicyclicBackend::parse(std::string_view text) const {
  text = detail::trim(text);
  if (text == "_") return identity();
  if (text.empty()) throw ParseError("empty word (write _ for the identity)");
  Element acc = identity();
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text.compare(pos, p_.size(), p_) == 0) {
      acc = op(acc, pair(0, 1));
      pos += p_.size();
    } else if (text.compare(pos, q_.size(), q_) == 0) {
      acc = op(acc, pair(1, 0));
      pos += q_.size();
    } else {
      throw ParseError("unknown letter at '" + std::string(text.substr(pos)) + "'", 0, pos + 1);
    }
  }
  return acc;
}

std::string BicyclicBackend::header() const { return "bicyclic letters = " + p_ + " " + q_; }

BackendPtr make_bicyclic(std::string p, std::string q) {
  return std::make_shared<BicyclicBackend>(std::move(p), std::move(q));
}

}  // namespace mrs
