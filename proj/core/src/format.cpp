#include "mrs/format.hpp"

#include <map>
#include <set>

#include "mrs/backend.hpp"
#include "mrs/collapse.hpp"
#include "text_util.hpp"

namespace mrs {

namespace {

struct Line {
  std::size_t no;
  bool indented;
  std::string_view text;
};

std::vector<Line> lines_of(std::string_view text) {
  std::vector<Line> out;
  std::size_t no = 0;
  for (auto raw : detail::split(text, '\n')) {
    ++no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (detail::trim(raw).empty()) continue;
    out.push_back({no, std::isspace(static_cast<unsigned char>(raw.front())) != 0, detail::trim(raw)});
  }
  return out;
}

// "key = a b c" -> {a, b, c}
std::vector<std::string> list_after(std::string_view text, std::string_view key, std::size_t line) {
  const auto w = detail::words(text);
  if (w.size() < 2 || w[0] != key || w[1] != "=")
    throw ParseError("expected '" + std::string(key) + " = ...'", line, 1);
  return {w.begin() + 2, w.end()};
}

std::pair<std::string_view, std::string_view> split_rule(std::string_view text, std::size_t line) {
  const auto arrow = text.find("->");
  if (arrow == std::string_view::npos) throw ParseError("expected 'lhs -> rhs'", line, 1);
  const auto lhs = detail::trim(text.substr(0, arrow));
  const auto rhs = detail::trim(text.substr(arrow + 2));
  if (lhs.empty() || rhs.empty())
    throw ParseError("rule side missing in '" + std::string(detail::trim(text)) + "'", line,
                     lhs.empty() ? 1 : arrow + 3);
  return {lhs, rhs};
}

Element parse_element(const Backend& m, std::string_view text, std::size_t line) {
  try {
    return m.parse(text);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line, 1);
  } catch (const UsageError& e) {
    throw ParseError(e.what(), line, 1);
  }
}

FiniteMonoid table_from(std::string_view header, const std::vector<std::string>& entries,
                        std::size_t line) {
  const auto semi = header.find(';');
  if (semi == std::string_view::npos) throw ParseError("expected '; identity = e'", line, 1);
  const auto names = list_after(header.substr(0, semi), "elements", line);
  const auto id = list_after(header.substr(semi + 1), "identity", line);
  if (id.size() != 1) throw ParseError("expected one identity element", line, semi + 2);
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!idx.emplace(names[i], i).second) throw ParseError("duplicate element '" + names[i] + "'", line, 1);
  const auto find = [&](const std::string& n) {
    auto it = idx.find(n);
    if (it == idx.end()) throw ParseError("undeclared element '" + n + "'", line, 1);
    return it->second;
  };
  const std::size_t n = names.size();
  const std::size_t none = n;
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n, none));
  for (const auto& e : entries) {
    const auto star = e.find('*');
    const auto eq = e.rfind('=');
    if (star == std::string::npos || eq == std::string::npos || eq < star)
      throw ParseError("expected 'x*y=z', got '" + e + "'", line, 1);
    const auto x = find(e.substr(0, star)), y = find(e.substr(star + 1, eq - star - 1));
    if (t[x][y] != none) throw ParseError("entry " + names[x] + "*" + names[y] + " given twice", line, 1);
    t[x][y] = find(e.substr(eq + 1));
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (t[x][y] == none) throw ParseError("entry " + names[x] + "*" + names[y] + " missing", line, 1);
  if (auto why = FiniteMonoid::validate(names, find(id[0]), t)) throw Refused("table refused: " + *why);
  return FiniteMonoid(names, find(id[0]), t);
}

std::vector<std::string> entries_of(const std::vector<std::string>& body) {
  std::vector<std::string> out;
  for (const auto& l : body)
    for (auto& w : detail::words(l)) out.push_back(std::move(w));
  return out;
}

std::vector<std::string> table_rows(const FiniteMonoid& m) {
  std::vector<std::string> rows;
  for (std::size_t x = 0; x < m.order(); ++x) {
    std::string row;
    for (std::size_t y = 0; y < m.order(); ++y)
      row += (y ? " " : "") + m.name(x) + "*" + m.name(y) + "=" + m.name(m.mul(x, y));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::uint64_t parse_set(const PowersetBackend& p, std::string_view text, std::size_t line) {
  return PowersetBackend::mask(parse_element(p, text, line));
}

}  // namespace

BackendPtr parse_backend(std::string_view header, const std::vector<std::string>& body,
                         std::size_t line) {
  header = detail::trim(header);
  const auto w = detail::words(header);
  if (w.empty()) throw ParseError("missing monoid header", line, 1);
  const std::string_view rest = detail::trim(header.substr(w[0].size()));
  try {
    if (w[0] == "free") return make_free(list_after(rest, "letters", line));
    if (w[0] == "naturals") {
      if (w.size() != 1) throw ParseError("'naturals' takes no arguments", line, 1);
      return make_naturals();
    }
    if (w[0] == "powerset") return make_powerset(list_after(rest, "base", line));
    if (w[0] == "bicyclic") {
      const auto l = list_after(rest, "letters", line);
      if (l.size() != 2) throw ParseError("bicyclic takes two letters", line, 1);
      return make_bicyclic(l[0], l[1]);
    }
    if (w[0] == "table") return make_table(table_from(rest, entries_of(body), line));
    if (w[0] == "product") {
      const auto over = rest.find(" over ");
      if (over == std::string_view::npos) throw ParseError("expected '... over <monoid>'", line, 1);
      std::string_view spec = rest.substr(0, over);
      auto matching = ProductMatching::Aligned;
      if (detail::words(spec).at(0) == "exact") {
        matching = ProductMatching::Exact;
        spec = detail::trim(spec.substr(5));
      }
      auto comp = parse_backend(rest.substr(over + 6), body, line);
      return std::make_shared<FreeProductBackend>(comp, list_after(spec, "letters", line), matching);
    }
    if (w[0] == "collapse") {
      const auto open = rest.find('{');
      const auto close = rest.find(" } over ");
      if (detail::words(rest).at(0) != "by" || open == std::string_view::npos ||
          close == std::string_view::npos)
        throw ParseError("expected 'collapse by { ... } over <monoid>'", line, 1);
      auto base = parse_backend(rest.substr(close + 8), body, line);
      std::vector<Rule> j;
      const auto inner = detail::trim(rest.substr(open + 1, close - open - 1));
      if (!inner.empty())
        for (auto piece : detail::split(inner, ';')) {
          auto [l, r] = split_rule(piece, line);
          j.push_back({parse_element(*base, l, line), parse_element(*base, r, line)});
        }
      return std::make_shared<CollapseBackend>(Mrs(base, j), Bounds{});
    }
  } catch (const UsageError& e) {
    throw ParseError(e.what(), line, 1);
  }
  throw ParseError("unknown monoid '" + w[0] + "'", line, 1);
}

Mrs parse_mrs(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("empty system file", 1, 1);
  const auto& head = lines.front();
  if (head.indented || detail::words(head.text).at(0) != "monoid")
    throw ParseError("expected 'monoid <header>'", head.no, 1);
  std::size_t i = 1;
  std::vector<std::string> body;
  for (; i < lines.size() && lines[i].indented; ++i) body.emplace_back(lines[i].text);
  BackendPtr m = parse_backend(head.text.substr(6), body, head.no);
  std::vector<Rule> rules;
  if (i < lines.size()) {
    if (lines[i].text != "rules") throw ParseError("expected 'rules'", lines[i].no, 1);
    for (++i; i < lines.size(); ++i) {
      auto [l, r] = split_rule(lines[i].text, lines[i].no);
      rules.push_back({parse_element(*m, l, lines[i].no), parse_element(*m, r, lines[i].no)});
    }
  }
  return Mrs(m, std::move(rules));
}

std::string print_mrs(const Mrs& mrs) {
  std::string out = "monoid " + mrs.backend().header() + "\n";
  const Backend* b = &mrs.backend();
  while (true) {
    if (auto* fp = dynamic_cast<const FreeProductBackend*>(b)) {
      b = fp->component().get();
    } else if (auto* c = dynamic_cast<const CollapseBackend*>(b)) {
      b = &c->base();
    } else {
      break;
    }
  }
  if (auto* t = dynamic_cast<const TableBackend*>(b))
    for (const auto& row : table_rows(t->monoid())) out += "  " + row + "\n";
  out += "rules\n";
  for (const auto& r : mrs.rules()) out += "  " + mrs.print(r) + "\n";
  return out;
}

FiniteMonoid parse_table(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("empty table file", 1, 1);
  const auto& head = lines.front();
  if (detail::words(head.text).at(0) != "table")
    throw ParseError("expected 'table elements = ... ; identity = e'", head.no, 1);
  std::vector<std::string> body;
  for (std::size_t i = 1; i < lines.size(); ++i) body.emplace_back(lines[i].text);
  return table_from(detail::trim(head.text.substr(5)), entries_of(body), head.no);
}

std::string print_table(const FiniteMonoid& m) {
  std::string out = TableBackend(m).header() + "\n";
  for (const auto& row : table_rows(m)) out += "  " + row + "\n";
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_map_lines(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& l : lines_of(text)) {
    if (detail::words(l.text).at(0) != "map") throw ParseError("expected 'map x -> y'", l.no, 1);
    auto [x, y] = split_rule(l.text.substr(3), l.no);
    out.emplace_back(x, y);
  }
  return out;
}

MonoidMap parse_map(std::string_view text, const FiniteMonoid& from, const FiniteMonoid& to) {
  const std::size_t none = to.order();
  MonoidMap f(from.order(), none);
  for (const auto& l : lines_of(text)) {
    if (detail::words(l.text).at(0) != "map") throw ParseError("expected 'map x -> y'", l.no, 1);
    auto [x, y] = split_rule(l.text.substr(3), l.no);
    auto i = from.index_of(std::string(x));
    if (!i) throw ParseError("unknown source element '" + std::string(x) + "'", l.no, 5);
    auto k = to.index_of(std::string(y));
    if (!k) throw ParseError("unknown target element '" + std::string(y) + "'", l.no, 1);
    if (f[*i] != none) throw ParseError("'" + std::string(x) + "' mapped twice", l.no, 5);
    f[*i] = *k;
  }
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] == none) throw ParseError("no image for '" + from.name(i) + "'", 0, 0);
  return f;
}

std::string print_map(const MonoidMap& f, const FiniteMonoid& from, const FiniteMonoid& to) {
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) out += "map " + from.name(i) + " -> " + to.name(f[i]) + "\n";
  return out;
}

TopologySpec parse_topology(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || detail::words(lines[0].text).at(0) != "topology")
    throw ParseError("expected 'topology base = ...'", lines.empty() ? 1 : lines[0].no, 1);
  TopologySpec spec;
  spec.base = list_after(detail::trim(lines[0].text.substr(8)), "base", lines[0].no);
  PowersetBackend p(spec.base);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto w = detail::words(lines[i].text);
    if (w[0] != "open") throw ParseError("expected 'open {..}'", lines[i].no, 1);
    spec.opens.push_back(parse_set(p, detail::trim(lines[i].text.substr(4)), lines[i].no));
  }
  return spec;
}

HornTheorySpec parse_horn(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || detail::words(lines[0].text).at(0) != "horn")
    throw ParseError("expected 'horn atoms = ...'", lines.empty() ? 1 : lines[0].no, 1);
  HornTheorySpec spec;
  spec.atoms = list_after(detail::trim(lines[0].text.substr(4)), "atoms", lines[0].no);
  PowersetBackend p(spec.atoms);
  const auto side = [&](std::string_view s, std::size_t no) {
    s = detail::trim(s);
    if (!s.empty() && s.front() == '{') return parse_set(p, s, no);
    return parse_set(p, "{" + std::string(s) + "}", no);
  };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto turn = lines[i].text.find("|-");
    if (turn == std::string_view::npos) throw ParseError("expected 'premises |- conclusions'", lines[i].no, 1);
    spec.sequents.emplace_back(side(lines[i].text.substr(0, turn), lines[i].no),
                               side(lines[i].text.substr(turn + 2), lines[i].no));
  }
  return spec;
}

void validate_topology(const TopologySpec& spec) {
  PowersetBackend p(spec.base);
  const std::uint64_t full = spec.base.size() == 64 ? ~0ULL : (1ULL << spec.base.size()) - 1;
  const std::set<std::uint64_t> opens(spec.opens.begin(), spec.opens.end());
  const auto show = [&](std::uint64_t m) { return p.print(PowersetBackend::set(m)); };
  for (auto u : opens)
    if (u & ~full) throw Refused("open set outside the base");
  if (!opens.count(0)) throw Refused("the empty set is not open");
  if (!opens.count(full)) throw Refused("the base set " + show(full) + " is not open");
  for (auto u : opens)
    for (auto v : opens) {
      if (!opens.count(u | v))
        throw Refused("union of " + show(u) + " and " + show(v) + " is not open");
      if (!opens.count(u & v))
        throw Refused("intersection of " + show(u) + " and " + show(v) + " is not open");
    }
}

std::uint64_t closure(const TopologySpec& spec, std::uint64_t u) {
  const std::uint64_t full = (1ULL << spec.base.size()) - 1;
  std::uint64_t cl = full;
  for (auto o : spec.opens)
    if ((u & o) == 0) cl &= full & ~o;
  return cl;
}

Mrs gen_closure_rules(const TopologySpec& spec) {
  validate_topology(spec);
  auto p = make_powerset(spec.base);
  std::vector<Rule> rules;
  for (const auto& u : p->enumerate(0))
    rules.push_back({u, PowersetBackend::set(closure(spec, PowersetBackend::mask(u)))});
  return Mrs(p, std::move(rules));
}

Mrs gen_horn_rules(const HornTheorySpec& spec) {
  auto p = make_powerset(spec.atoms);
  std::vector<Rule> rules;
  for (auto [g, d] : spec.sequents) rules.push_back({PowersetBackend::set(g), PowersetBackend::set(g | d)});
  return Mrs(p, std::move(rules));
}

}  // namespace mrs
