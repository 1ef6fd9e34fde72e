#include "mrs/collapse.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mrs/irreducibles.hpp"

namespace mrs {

std::string to_string(CollapseStrategy s) {
  switch (s) {
    case CollapseStrategy::Unchanged: return "unchanged";
    case CollapseStrategy::Bicyclic: return "bicyclic";
    case CollapseStrategy::LetterSubstitution: return "letter substitution";
    case CollapseStrategy::Table: return "table";
    case CollapseStrategy::Lazy: return "lazy";
  }
  return "?";
}

// ---- lazy backend ----------------------------------------------------------

CollapseBackend::CollapseBackend(Mrs j_system, Bounds bounds)
    : j_(std::move(j_system)), bounds_(bounds) {
  identity_ = normalize(base().identity());
  for (const auto& e : base().enumerate(bounds_.context))
    if (is_irreducible(j_, e, bounds_) == Tri::True) contexts_.push_back(e);
}

Element CollapseBackend::normalize(const Element& x) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = nf_.find(x); it != nf_.end()) return it->second;
  }
  Element n = normal_form(j_, x, bounds_).value;
  std::lock_guard lock(mu_);
  nf_.emplace(x, n);
  return n;
}

Element CollapseBackend::op(const Element& x, const Element& y) const {
  return normalize(base().op(x, y));
}

FactorResult CollapseBackend::factorizations(const Element& a, const Element& s,
                                             const FactorBudget& budget) const {
  FactorResult out;
  out.truncated = true;
  for (const auto& x : contexts_) {
    if (base().size(x) > budget.context_size) continue;
    const Element xs = op(x, s);
    for (const auto& y : contexts_) {
      if (base().size(y) > budget.context_size) continue;
      if (op(xs, y) != a) continue;
      if (out.pairs.size() >= budget.max_pairs) return out;
      out.pairs.push_back({x, y});
    }
  }
  return out;
}

std::vector<Element> CollapseBackend::enumerate(std::size_t size_bound) const {
  std::vector<Element> out;
  for (const auto& e : base().enumerate(size_bound))
    if (is_irreducible(j_, e, bounds_) == Tri::True) out.push_back(e);
  return out;
}

bool CollapseBackend::contains(const Element& x) const {
  return base().contains(x) && is_irreducible(j_, x, bounds_) == Tri::True;
}

Element CollapseBackend::parse(std::string_view text) const {
  Element e = base().parse(text);
  if (is_irreducible(j_, e, bounds_) != Tri::True)
    throw ParseError("'" + std::string(text) + "' is not J-irreducible");
  return e;
}

std::string CollapseBackend::header() const {
  std::string s = "collapse by {";
  for (std::size_t i = 0; i < j_.rules().size(); ++i)
    s += (i ? " ; " : " ") + j_.print(j_.rules()[i]);
  return s + " } over " + base().header();
}

// ---- strategies ------------------------------------------------------------

namespace {

void require_subset(const Mrs& mrs, const std::vector<Rule>& j) {
  for (const auto& r : j)
    if (!mrs.has_rule(r)) throw UsageError("rule " + mrs.print(r) + " is not in R");
}

std::optional<CollapsedSystem> try_bicyclic(const Mrs& jsys) {
  const auto* f = dynamic_cast<const FreeBackend*>(&jsys.backend());
  if (!f || f->letters().size() != 2 || jsys.rules().size() != 1) return std::nullopt;
  const Rule& r = jsys.rules()[0];
  if (r.rhs != Element{} || r.lhs.v.size() != 2 || r.lhs.v[0] == r.lhs.v[1]) return std::nullopt;
  const auto p = r.lhs.v[0];
  auto bic = std::make_shared<BicyclicBackend>(f->letters()[static_cast<std::size_t>(p)],
                                               f->letters()[static_cast<std::size_t>(1 - p)]);
  CollapsedSystem c;
  c.strategy = CollapseStrategy::Bicyclic;
  c.projection = [bic, p](const Element& w) {
    Element acc = bic->identity();
    for (auto l : w.v)
      acc = bic->op(acc, l == p ? BicyclicBackend::pair(0, 1) : BicyclicBackend::pair(1, 0));
    return acc;
  };
  c.mrs = Mrs(bic, {});
  return c;
}

std::optional<CollapsedSystem> try_letter_substitution(const Mrs& jsys) {
  const auto* fp = dynamic_cast<const FreeProductBackend*>(&jsys.backend());
  if (!fp || !fp->component()->finite() || !prefix_free(fp->letters())) return std::nullopt;
  std::map<Element, std::int64_t> letter_of;
  std::set<std::int64_t> used;
  for (const auto& r : jsys.rules()) {
    const auto l = fp->decode(r.lhs), t = fp->decode(r.rhs);
    if (l.size() != 1 || l[0].letter >= 0 || t.size() != 1 || t[0].letter < 0 || t[0].exp != 1)
      return std::nullopt;
    if (!letter_of.emplace(l[0].comp, t[0].letter).second || !used.insert(t[0].letter).second)
      return std::nullopt;
  }
  const Element id = fp->component()->identity();
  for (const auto& m : fp->component()->enumerate(0))
    if (m != id && !letter_of.count(m)) return std::nullopt;

  auto free = make_free(fp->letters());
  auto prod = std::static_pointer_cast<const FreeProductBackend>(jsys.backend_ptr());
  CollapsedSystem c;
  c.strategy = CollapseStrategy::LetterSubstitution;
  c.projection = [prod, letter_of](const Element& x) {
    std::vector<std::int64_t> word;
    for (const auto& s : prod->decode(x)) {
      if (s.letter < 0) word.push_back(letter_of.at(s.comp));
      else word.insert(word.end(), static_cast<std::size_t>(s.exp), s.letter);
    }
    return Element(std::move(word));
  };
  c.mrs = Mrs(free, {});
  return c;
}

std::optional<CollapsedSystem> try_table(const Mrs& jsys, const Bounds& bounds) {
  IrreducibleMonoid im;
  try {
    im = monoid_of_irreducibles(jsys, bounds);
  } catch (const Refused&) {
    return std::nullopt;
  }
  CollapsedSystem c;
  c.strategy = CollapseStrategy::Table;
  auto index = std::make_shared<std::unordered_map<Element, std::size_t, ElementHash>>();
  for (std::size_t i = 0; i < im.elements.size(); ++i) index->emplace(im.elements[i], i);
  c.projection = [jsys, bounds, index](const Element& x) {
    const Element n = normal_form(jsys, x, bounds).value;
    auto it = index->find(n);
    if (it == index->end()) throw Refused("J-normal form " + jsys.print(n) + " was not tabulated");
    return TableBackend::at(it->second);
  };
  c.mrs = Mrs(make_table(im.table), {});
  return c;
}

CollapsedSystem collapse_unchecked(const Mrs& mrs, const std::vector<Rule>& j, const Bounds& bounds) {
  CollapsedSystem c;
  if (j.empty()) {
    c.mrs = mrs;
    c.projection = [](const Element& x) { return x; };
    c.strategy = CollapseStrategy::Unchanged;
    c.subset = j;
    return c;
  }
  const Mrs jsys(mrs.backend_ptr(), j);
  std::optional<CollapsedSystem> found = try_bicyclic(jsys);
  if (!found) found = try_letter_substitution(jsys);
  if (!found) found = try_table(jsys, bounds);
  if (!found) {
    if (mrs.backend().finite())
      throw Refused("J-irreducibles of a finite carrier could not be tabulated", true);
    auto lazy = std::make_shared<CollapseBackend>(jsys, bounds);
    CollapsedSystem l;
    l.strategy = CollapseStrategy::Lazy;
    l.projection = [lazy](const Element& x) { return lazy->normalize(x); };
    l.mrs = Mrs(lazy, {});
    found = std::move(l);
  }
  c = std::move(*found);
  c.subset = j;
  std::vector<Rule> rj;
  for (const auto& r : mrs.rules())
    if (std::find(j.begin(), j.end(), r) == j.end())
      rj.push_back({c.projection(r.lhs), c.projection(r.rhs)});
  c.mrs = c.mrs.with_rules(std::move(rj));
  return c;
}

}  // namespace

Bounds fit_bounds(const Backend& m, Bounds bounds, std::size_t max_elements) {
  if (m.finite()) return bounds;
  for (std::size_t s = 1; s <= bounds.size; ++s)
    if (m.enumerate(s).size() > max_elements) {
      bounds.size = s - 1;
      break;
    }
  return bounds;
}

CheckVerdict check_confluent_subset(const Mrs& mrs, const std::vector<Rule>& j,
                                    const Bounds& bounds) {
  require_subset(mrs, j);
  if (j.empty()) return CheckVerdict::verified("empty subset");
  CheckVerdict v = check_confluent(Mrs(mrs.backend_ptr(), j), bounds);
  if (v.ok() && check_noetherian(mrs, bounds).ok())
    v.reason += v.reason.empty() ? "J inherits termination from R" : "; J inherits termination from R";
  return v;
}

CollapsedSystem collapse(const Mrs& mrs, const std::vector<Rule>& j, const Bounds& bounds,
                         bool check_subset) {
  if (check_subset) {
    const CheckVerdict v = check_confluent_subset(mrs, j, bounds);
    if (!v.ok()) throw Refused("J is not confluent: " + describe(v), !v.refuted());
  } else {
    require_subset(mrs, j);
  }
  return collapse_unchecked(mrs, j, bounds);
}

CheckVerdict check_coherent(const Mrs& mrs, const std::vector<Rule>& j, const Bounds& bounds) {
  const Bounds fb = fit_bounds(mrs.backend(), bounds);
  const CheckVerdict sub = check_confluent_subset(mrs, j, fb);
  if (sub.refuted()) {
    CheckVerdict v = sub;
    v.reason = "J is not confluent: " + sub.reason;
    return v;
  }
  if (!sub.ok()) return CheckVerdict::unknown(fb.size, "confluence of J: " + describe(sub));

  CollapsedSystem c;
  try {
    c = collapse_unchecked(mrs, j, bounds);
  } catch (const Refused& e) {
    return CheckVerdict::unknown(fb.size, std::string("collapse: ") + e.what());
  }
  const Bounds cb = fit_bounds(c.mrs.backend(), bounds);
  CheckVerdict n = check_noetherian(c.mrs, cb);
  if (n.refuted()) {
    n.reason = "A_J is not Noetherian: " + n.reason;
    return n;
  }
  CheckVerdict k = check_confluent(c.mrs, cb);
  if (k.refuted()) {
    k.reason = "A_J is not confluent: " + k.reason;
    return k;
  }
  if (!n.ok() || !k.ok())
    return CheckVerdict::unknown(cb.size, "A_J: noetherian " + describe(n) + "; confluent " + describe(k));

  std::size_t bound = 0;
  const CheckVerdict* parts[] = {&sub, &n, &k};
  for (const CheckVerdict* v : parts)
    if (v->bounded) bound = bound ? std::min(bound, v->bound) : v->bound;
  const std::string why = "strategy " + to_string(c.strategy);
  return bound ? CheckVerdict::verified_up_to(bound, why) : CheckVerdict::verified(why);
}

}  // namespace mrs
