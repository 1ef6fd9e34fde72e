#include "mrs/tietze.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mrs {

namespace {

// Emits moves against a running system so that certificates can name rule
// indices. Traces are constructed from the proofs, not searched for.
class Builder {
 public:
  Builder(Mrs start, Bounds bounds) : cur_(std::move(start)), bounds_(bounds) {}

  const Mrs& cur() const { return cur_; }
  GettScript& script() { return script_; }
  std::size_t size() const { return script_.moves.size(); }

  std::size_t rule(const Mrs& s, const Rule& r) const {
    auto i = s.rule_index(r);
    if (!i) throw std::logic_error("pipeline lost rule " + s.print(r));
    return *i;
  }

  void step(const Mrs& s, DerivationTrace& t, const Rule& r, const Element& x, const Element& y,
            Direction dir) const {
    push_step(s, t, rule(s, r), x, y, dir);
  }

  void add(const Rule& r, const DerivationTrace& t) {
    GettMove m;
    m.type = MoveType::Add;
    m.lhs = cur_.print(r.lhs);
    m.rhs = cur_.print(r.rhs);
    m.certificate = to_certificate(cur_, t);
    script_.moves.push_back(std::move(m));
    cur_ = cur_.with_rule(r);
  }

  // `derive` builds lhs ->* rhs in the system without the rule.
  template <class F>
  void remove(const Rule& r, F derive) {
    const Mrs rest = cur_.without_rule(r);
    DerivationTrace t = DerivationTrace::empty(r.lhs);
    derive(rest, t);
    GettMove m;
    m.type = MoveType::Remove;
    m.lhs = cur_.print(r.lhs);
    m.rhs = cur_.print(r.rhs);
    m.certificate = to_certificate(rest, t);
    script_.moves.push_back(std::move(m));
    cur_ = rest;
  }

  void adjoin(const std::string& v, const Element& a) {
    GettMove m;
    m.type = MoveType::Adjoin;
    m.lhs = v;
    m.rhs = cur_.print(a);
    script_.moves.push_back(std::move(m));
    cur_ = adjoin_letter(cur_, v, a);
  }

  CollapsedSystem collapse_by(const std::vector<Rule>& j) {
    GettMove m;
    m.type = MoveType::Collapse;
    for (const auto& r : j) m.subset.emplace_back(cur_.print(r.lhs), cur_.print(r.rhs));
    script_.moves.push_back(std::move(m));
    CollapsedSystem c = collapse(cur_, j, bounds_, false);
    cur_ = c.mrs;
    return c;
  }

 private:
  Mrs cur_;
  Bounds bounds_;
  GettScript script_;
};

Element letter_of(const Backend& b, const std::optional<std::string>& name) {
  if (!name) return b.identity();
  if (auto* f = dynamic_cast<const FreeBackend*>(&b)) return f->letter(*f->letter_index(*name));
  auto& fp = dynamic_cast<const FreeProductBackend&>(b);
  return fp.letter(*fp.letter_index(*name));
}

// Letter names m' for the non-identity elements, fresh over `base` and
// prefix-free as a set; u1, u2, ... when the primed names do not qualify.
std::vector<std::string> lemma_letters(const Backend& base, const std::vector<Element>& elems) {
  std::vector<std::string> out;
  for (const auto& m : elems) out.push_back(base.print(m) + "'");
  const auto ok = [&](const std::vector<std::string>& names) {
    return prefix_free(names) && std::all_of(names.begin(), names.end(), [&](const std::string& n) {
             return is_fresh_letter(base, n);
           });
  };
  if (ok(out)) return out;
  for (std::size_t shift = 0;; ++shift) {
    out.clear();
    for (std::size_t i = 0; i < elems.size(); ++i)
      out.push_back(std::string(shift + 1, 'u') + std::to_string(i + 1));
    if (ok(out)) return out;
  }
}

struct Lemma {
  std::vector<Element> elements;                 // carrier of the component, enumeration order
  std::vector<std::optional<std::string>> name;  // letter per element, none for the identity
};

// The presentation lemma on (C, *, {}) with C finite. Leaves the builder at
// the free monoid on the letters with the pair rules.
Lemma run_lemma(Builder& bld) {
  const BackendPtr comp = bld.cur().backend_ptr();
  if (!bld.cur().rules().empty()) throw std::logic_error("lemma starts from an empty rule set");
  Lemma lm;
  lm.elements = comp->enumerate(0);
  const Element e = comp->identity();
  std::vector<Element> nonid;
  for (const auto& m : lm.elements)
    if (m != e) nonid.push_back(m);
  const auto letters = lemma_letters(*comp, nonid);
  for (std::size_t i = 0, k = 0; i < lm.elements.size(); ++i)
    lm.name.push_back(lm.elements[i] == e ? std::nullopt : std::optional(letters[k++]));
  const auto index = [&](const Element& m) {
    return static_cast<std::size_t>(std::find(lm.elements.begin(), lm.elements.end(), m) -
                                    lm.elements.begin());
  };

  for (std::size_t i = 0; i < lm.elements.size(); ++i) {
    if (!lm.name[i]) continue;
    const auto* fp = dynamic_cast<const FreeProductBackend*>(&bld.cur().backend());
    bld.adjoin(*lm.name[i], fp ? fp->embed(lm.elements[i]) : lm.elements[i]);
  }

  const Backend& p = bld.cur().backend();
  const auto* fp = dynamic_cast<const FreeProductBackend*>(&p);
  const auto lw = [&](const Element& m) { return letter_of(p, lm.name[index(m)]); };
  const auto ce = [&](const Element& m) { return fp ? fp->embed(m) : p.identity(); };
  const Element id = p.identity();

  for (const auto& a : lm.elements)
    for (const auto& b : lm.elements) {
      const Element ab = comp->op(a, b);
      const Rule r{p.op(lw(a), lw(b)), lw(ab)};
      DerivationTrace t = DerivationTrace::empty(r.lhs);
      if (a != e) bld.step(bld.cur(), t, {lw(a), ce(a)}, id, lw(b), Direction::Forward);
      if (b != e) bld.step(bld.cur(), t, {lw(b), ce(b)}, a != e ? ce(a) : id, id, Direction::Forward);
      if (ab != e) bld.step(bld.cur(), t, {lw(ab), ce(ab)}, id, id, Direction::Backward);
      bld.add(r, t);
    }
  for (const auto& m : nonid) {
    DerivationTrace t = DerivationTrace::empty(ce(m));
    bld.step(bld.cur(), t, {lw(m), ce(m)}, id, id, Direction::Backward);
    bld.add({ce(m), lw(m)}, t);
  }
  for (const auto& m : nonid)
    bld.remove({lw(m), ce(m)}, [&](const Mrs& rest, DerivationTrace& t) {
      bld.step(rest, t, {ce(m), lw(m)}, id, id, Direction::Backward);
    });
  if (!nonid.empty()) {
    std::vector<Rule> j;
    for (const auto& m : nonid) j.push_back({ce(m), lw(m)});
    bld.collapse_by(j);
  }
  return lm;
}

std::string fresh_name(const Backend& base, const std::string& stem, const std::set<std::string>& taken) {
  const auto usable = [&](const std::string& n) { return !taken.count(n) && is_fresh_letter(base, n); };
  for (const std::string& c : {stem + "'", stem + "\"", "~" + stem})
    if (usable(c)) return c;
  for (std::size_t k = 1;; ++k)
    for (const char* p : {"t", "w", "z"})
      if (usable(p + std::to_string(k))) return p + std::to_string(k);
}

bool is_iso(const FiniteMonoid& a, const FiniteMonoid& b, const MonoidMap& f) {
  if (f.size() != a.order() || a.order() != b.order()) return false;
  std::vector<bool> hit(b.order(), false);
  for (auto x : f) {
    if (x >= b.order() || hit[x]) return false;
    hit[x] = true;
  }
  return is_homomorphism(a, b, f);
}

}  // namespace

GettScript presentation_script(const FiniteMonoid& m) {
  Builder bld(Mrs(make_table(m), {}), {});
  run_lemma(bld);
  return bld.script();
}

PipelineReport tietze_path(const Mrs& a, const Mrs& b, std::optional<MonoidMap> identification,
                           const Bounds& bounds) {
  if (!b.backend().finite()) throw Refused("target system needs a finite carrier");
  const IrreducibleMonoid ia = monoid_of_irreducibles(a, bounds);
  const IrreducibleMonoid ib = monoid_of_irreducibles(b, bounds);

  PipelineReport rep;
  if (identification) {
    if (!is_iso(ia.table, ib.table, *identification))
      throw Refused("identification is not an isomorphism I(A) -> I(B)");
    rep.identification = *identification;
  } else {
    MonoidMap by_name;
    for (std::size_t i = 0; i < ia.table.order(); ++i)
      if (auto j = ib.table.index_of(ia.table.name(i))) by_name.push_back(*j);
    if (is_iso(ia.table, ib.table, by_name)) {
      rep.identification = by_name;
    } else if (auto f = find_isomorphism(ia.table, ib.table)) {
      rep.identification = *f;
    } else {
      throw Refused("I(A) and I(B) are not isomorphic");
    }
  }
  const MonoidMap& sigma = rep.identification;

  Builder bld(a, bounds);
  const auto close_stage = [&](std::string name, std::size_t first) {
    rep.stages.push_back({std::move(name), first, bld.size() - first, bld.cur(), std::nullopt});
  };

  // (1) collapse by J = R.
  bld.collapse_by(a.rules());
  close_stage("collapse by J = R", 0);
  // Element of the collapsed carrier standing for irreducible i of A.
  std::vector<Element> m_of;
  for (std::size_t i = 0; i < ia.elements.size(); ++i)
    m_of.push_back(a.rules().empty() ? ia.elements[i] : TableBackend::at(i));

  // (2) presentation lemma, then a fresh letter for every other element of B.
  std::size_t first = bld.size();
  const Lemma lm = run_lemma(bld);
  const auto lemma_name = [&](const Element& m) {
    auto it = std::find(lm.elements.begin(), lm.elements.end(), m);
    return lm.name.at(static_cast<std::size_t>(it - lm.elements.begin()));
  };
  const Backend& bb = b.backend();
  const std::vector<Element> bel = bb.enumerate(0);
  MonoidMap sigma_inv(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma_inv[sigma[i]] = i;

  std::map<Element, std::optional<std::string>> word;  // B element -> letter, none for the empty word
  std::map<Element, Element> nf_b;
  std::map<Element, DerivationTrace> nf_trace;
  std::vector<Element> fresh;
  for (const auto& x : bel) {
    NormalForm n = normal_form(b, x, bounds);
    nf_b[x] = n.value;
    nf_trace[x] = n.trace;
    if (auto i = ib.index(x)) {
      word[x] = lemma_name(m_of[sigma_inv[*i]]);
    } else if (x == bb.identity()) {
      word[x] = std::nullopt;
    } else {
      fresh.push_back(x);
    }
  }
  std::set<std::string> taken;
  for (const auto& n : lm.name)
    if (n) taken.insert(*n);
  for (const auto& x : fresh) {
    const std::string v = fresh_name(bld.cur().backend(), bb.print(x), taken);
    taken.insert(v);
    bld.adjoin(v, letter_of(bld.cur().backend(), word.at(nf_b.at(x))));
    word[x] = v;
  }
  close_stage("presentation lemma and fresh letters W", first);

  const auto w = [&](const Element& x) { return letter_of(bld.cur().backend(), word.at(x)); };
  const auto is_fresh = [&](const Element& x) {
    return std::find(fresh.begin(), fresh.end(), x) != fresh.end();
  };
  const auto w_rule = [&](const Element& x) { return Rule{w(x), w(nf_b.at(x))}; };
  const auto empty = [&] { return bld.cur().backend().identity(); };

  // (3) add L.
  first = bld.size();
  for (const auto& r : b.rules()) {
    DerivationTrace t = DerivationTrace::empty(w(r.lhs));
    if (is_fresh(r.lhs)) bld.step(bld.cur(), t, w_rule(r.lhs), empty(), empty(), Direction::Forward);
    if (is_fresh(r.rhs)) bld.step(bld.cur(), t, w_rule(r.rhs), empty(), empty(), Direction::Backward);
    bld.add({w(r.lhs), w(r.rhs)}, t);
  }
  close_stage("add L", first);

  // (4) add R_B, remove R_M outside R_B, remove W.
  first = bld.size();
  const BackendPtr keep = bld.cur().backend_ptr();
  const Backend* cb = keep.get();
  const auto rb_rule = [&](const Element& x, const Element& y) {
    return Rule{cb->op(w(x), w(y)), w(bb.op(x, y))};
  };
  std::vector<Rule> rb;
  for (const auto& x : bel)
    for (const auto& y : bel) {
      const Rule r = rb_rule(x, y);
      if (std::find(rb.begin(), rb.end(), r) == rb.end()) rb.push_back(r);
      const Element nx = nf_b.at(x), ny = nf_b.at(y);
      DerivationTrace t = DerivationTrace::empty(r.lhs);
      if (is_fresh(x)) bld.step(bld.cur(), t, w_rule(x), empty(), w(y), Direction::Forward);
      if (is_fresh(y)) bld.step(bld.cur(), t, w_rule(y), w(nx), empty(), Direction::Forward);
      const Rule rm{cb->op(w(nx), w(ny)), w(nf_b.at(bb.op(nx, ny)))};
      if (rm.lhs != rm.rhs) bld.step(bld.cur(), t, rm, empty(), empty(), Direction::Forward);
      const Element xy = bb.op(x, y);
      if (is_fresh(xy)) bld.step(bld.cur(), t, w_rule(xy), empty(), empty(), Direction::Backward);
      bld.add(r, t);
    }

  // R_M in terms of B: the rule for (m1, m2) is w(s1) w(s2) -> w(nf(s1 s2)) with si = sigma(mi).
  std::vector<std::pair<Element, Element>> pairs_b;
  for (std::size_t i = 0; i < ia.elements.size(); ++i)
    for (std::size_t k = 0; k < ia.elements.size(); ++k)
      pairs_b.emplace_back(ib.elements[sigma[i]], ib.elements[sigma[k]]);
  for (const auto& [s1, s2] : pairs_b) {
    const Element s12 = bb.op(s1, s2);
    const Rule rm{cb->op(w(s1), w(s2)), w(nf_b.at(s12))};
    if (std::find(rb.begin(), rb.end(), rm) != rb.end() || !bld.cur().has_rule(rm)) continue;
    bld.remove(rm, [&](const Mrs& rest, DerivationTrace& t) {
      bld.step(rest, t, rb_rule(s1, s2), empty(), empty(), Direction::Forward);
      if (is_fresh(s12)) bld.step(rest, t, w_rule(s12), empty(), empty(), Direction::Forward);
    });
  }

  std::vector<Rule> l_words;
  for (const auto& r : b.rules()) l_words.push_back({w(r.lhs), w(r.rhs)});
  for (const auto& x : fresh) {
    // A rule of L can coincide with its W rule; it stays as part of L.
    if (std::find(l_words.begin(), l_words.end(), w_rule(x)) != l_words.end()) continue;
    bld.remove(w_rule(x), [&](const Mrs& rest, DerivationTrace& t) {
      const auto split = [&](const Element& p, const Element& q, const Element& l, const Element& r) {
        const Rule s = rb_rule(p, q);
        if (s.lhs != s.rhs) bld.step(rest, t, s, l, r, Direction::Backward);
      };
      const auto merge = [&](const Element& p, const Element& q, const Element& l, const Element& r) {
        const Rule s = rb_rule(p, q);
        if (s.lhs != s.rhs) bld.step(rest, t, s, l, r, Direction::Forward);
      };
      for (const auto& st : nf_trace.at(x).steps) {
        const Element& cx = st.ctx.left;
        const Element& cy = st.ctx.right;
        const Rule& lr = b.rules().at(st.rule);
        const Element xs = bb.op(cx, lr.lhs), xt = bb.op(cx, lr.rhs);
        split(xs, cy, empty(), empty());
        split(cx, lr.lhs, empty(), w(cy));
        bld.step(rest, t, {w(lr.lhs), w(lr.rhs)}, w(cx), w(cy), Direction::Forward);
        merge(cx, lr.rhs, empty(), w(cy));
        merge(xt, cy, empty(), empty());
      }
    });
  }
  close_stage("add R_B, remove R_M and W", first);

  // (5) collapse by J = R_B.
  first = bld.size();
  const CollapsedSystem fin = bld.collapse_by(rb);
  // Degenerate rules of L have the same words as degenerate rules of R_B and
  // vanish with J; they come back reflexively.
  for (const auto& r : b.rules()) {
    const Rule lw{letter_of(*cb, word.at(r.lhs)), letter_of(*cb, word.at(r.rhs))};
    if (lw.lhs != lw.rhs || std::find(rb.begin(), rb.end(), lw) == rb.end()) continue;
    const Element x = fin.projection(lw.lhs);
    if (!bld.cur().has_rule({x, x})) bld.add({x, x}, DerivationTrace::empty(x));
  }
  close_stage("collapse by J = R_B", first);
  rep.script = bld.script();

  // B -> final carrier through the words.
  std::map<Element, Element> phi;
  std::set<Element> image;
  for (const auto& x : bel) {
    phi[x] = fin.projection(letter_of(*cb, word.at(x)));
    image.insert(phi[x]);
  }
  const Mrs& out = bld.cur();
  bool ok = image.size() == bel.size() && out.backend().enumerate(0).size() == bel.size() &&
            phi.at(bb.identity()) == out.backend().identity();
  for (const auto& x : bel)
    for (const auto& y : bel) ok = ok && phi.at(bb.op(x, y)) == out.backend().op(phi.at(x), phi.at(y));
  std::set<std::pair<Element, Element>> mapped, have;
  for (const auto& r : b.rules()) mapped.emplace(phi.at(r.lhs), phi.at(r.rhs));
  for (const auto& r : out.rules()) have.emplace(r.lhs, r.rhs);
  rep.final_matches = ok && mapped == have;
  rep.detail = rep.final_matches ? "final system equals B under b -> word(b)"
                                 : "final system differs from B";

  ReplayResult rr = replay_script(a, rep.script, bounds);
  rep.replay = rr.verdict;
  if (rr.failed_at) {
    for (const auto& s : rep.stages)
      if (*rr.failed_at >= s.first_move && *rr.failed_at < s.first_move + s.moves)
        rep.replay.reason = "stage '" + s.name + "', " + rep.replay.reason;
  } else if (!(rr.final_system == out)) {
    rep.replay = CheckVerdict::unknown(bounds.size, "replay ended at a different system");
  }

  for (auto& s : rep.stages) {
    try {
      const IrreducibleMonoid is = monoid_of_irreducibles(s.system, fit_bounds(s.system.backend(), bounds));
      s.preserves_irreducibles = find_isomorphism(is.table, ia.table).has_value();
    } catch (const Refused&) {
    }
  }
  return rep;
}

bool same_up_to_renaming(const Mrs& x, const Mrs& y, std::string* why) {
  const auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const Backend& bx = x.backend();
  const Backend& by = y.backend();
  std::set<std::pair<Element, Element>> ry;
  for (const auto& r : y.rules()) ry.emplace(r.lhs, r.rhs);
  const auto matches = [&](const auto& map) {
    std::set<std::pair<Element, Element>> rx;
    for (const auto& r : x.rules()) rx.emplace(map(r.lhs), map(r.rhs));
    return rx == ry;
  };

  const bool trivial_x = bx.finite() && bx.enumerate(0).size() == 1;
  const bool trivial_y = by.finite() && by.enumerate(0).size() == 1;
  if (trivial_x && trivial_y) {
    const Element ey = by.identity();
    if (matches([&](const Element&) { return ey; })) return true;
    return fail("rule sets differ");
  }

  const auto* fx = dynamic_cast<const FreeBackend*>(&bx);
  const auto* fy = dynamic_cast<const FreeBackend*>(&by);
  if (fx && fy) {
    const std::size_t n = fx->letters().size();
    if (n != fy->letters().size()) return fail("alphabets have different sizes");
    if (n > 8) return fail("alphabet too large for the renaming search");
    std::vector<std::int64_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::int64_t>(i);
    do {
      const auto map = [&](const Element& e) {
        Element o = e;
        for (auto& l : o.v) l = perm[static_cast<std::size_t>(l)];
        return o;
      };
      if (matches(map)) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return fail("no letter bijection carries the rules onto each other");
  }

  const auto* tx = dynamic_cast<const TableBackend*>(&bx);
  const auto* ty = dynamic_cast<const TableBackend*>(&by);
  if (tx && ty) {
    if (tx->monoid().order() != ty->monoid().order()) return fail("tables have different orders");
    for (const auto& f : enumerate_homomorphisms(tx->monoid(), ty->monoid())) {
      if (!is_iso(tx->monoid(), ty->monoid(), f)) continue;
      const auto map = [&](const Element& e) { return TableBackend::at(f[TableBackend::index(e)]); };
      if (matches(map)) return true;
    }
    return fail("no table isomorphism carries the rules onto each other");
  }
  return fail("carriers are of different kinds");
}

}  // namespace mrs
