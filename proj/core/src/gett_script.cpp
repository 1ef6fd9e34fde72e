#include <charconv>

#include "mrs/gett.hpp"
#include "text_util.hpp"

namespace mrs {

namespace {

std::pair<std::string, std::string> split_rule(std::string_view text, std::size_t line) {
  const auto arrow = text.find("->");
  if (arrow == std::string_view::npos) throw ParseError("expected 'lhs -> rhs'", line, 1);
  const auto lhs = detail::trim(text.substr(0, arrow));
  const auto rhs = detail::trim(text.substr(arrow + 2));
  if (lhs.empty() || rhs.empty())
    throw ParseError("rule side missing in '" + std::string(detail::trim(text)) + "'", line,
                     lhs.empty() ? 1 : arrow + 3);
  return {std::string(lhs), std::string(rhs)};
}

}  // namespace

GettScript parse_script(std::string_view text) {
  GettScript script;
  std::size_t lineno = 0;
  for (auto raw : detail::split(text, '\n')) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (detail::trim(raw).empty()) continue;
    const bool indented = std::isspace(static_cast<unsigned char>(raw.front()));
    const std::string_view line = detail::trim(raw);

    if (indented) {
      if (script.moves.empty()) throw ParseError("certificate line before any move", lineno, 1);
      GettMove& m = script.moves.back();
      const auto w = detail::words(line);
      if (w[0] == "refl" && w.size() == 1) {
        if (!m.certificate) m.certificate.emplace();
      } else if (w[0] == "step") {
        if (w.size() != 5 || (w[1] != "->" && w[1] != "<-"))
          throw ParseError("expected 'step -> N left right' or 'step <- N left right'", lineno, 1);
        std::size_t idx = 0;
        auto [ptr, ec] = std::from_chars(w[2].data(), w[2].data() + w[2].size(), idx);
        if (ec != std::errc() || ptr != w[2].data() + w[2].size() || idx == 0)
          throw ParseError("bad rule number '" + w[2] + "'", lineno, 1);
        if (!m.certificate) m.certificate.emplace();
        m.certificate->push_back(
            {w[1] == "->" ? Direction::Forward : Direction::Backward, idx - 1, w[3], w[4]});
      } else if (w[0] == "evidence") {
        m.evidence = std::string(detail::trim(line.substr(8)));
      } else {
        throw ParseError("unknown certificate line '" + std::string(line) + "'", lineno, 1);
      }
      continue;
    }

    const auto space = line.find_first_of(" \t");
    const std::string_view keyword = line.substr(0, space);
    const std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(space));
    GettMove m;
    if (keyword == "add" || keyword == "remove") {
      m.type = keyword == "add" ? MoveType::Add : MoveType::Remove;
      std::tie(m.lhs, m.rhs) = split_rule(rest, lineno);
    } else if (keyword == "adjoin") {
      m.type = MoveType::Adjoin;
      std::tie(m.lhs, m.rhs) = split_rule(rest, lineno);
    } else if (keyword == "collapse") {
      m.type = MoveType::Collapse;
      if (rest.size() < 2 || rest.front() != '{' || rest.back() != '}')
        throw ParseError("expected 'collapse { lhs -> rhs ; ... }'", lineno, space + 2);
      const auto inner = detail::trim(rest.substr(1, rest.size() - 2));
      if (!inner.empty())
        for (auto piece : detail::split(inner, ';')) m.subset.push_back(split_rule(piece, lineno));
    } else {
      throw ParseError("unknown move '" + std::string(keyword) + "'", lineno, 1);
    }
    script.moves.push_back(std::move(m));
  }
  return script;
}

std::string print_script(const GettScript& script) {
  std::string out;
  for (const auto& m : script.moves) {
    out += to_string(m.type);
    if (m.type == MoveType::Collapse) {
      out += " {";
      for (std::size_t i = 0; i < m.subset.size(); ++i)
        out += (i ? " ; " : " ") + m.subset[i].first + " -> " + m.subset[i].second;
      out += " }\n";
      if (!m.evidence.empty()) out += "  evidence " + m.evidence + "\n";
      continue;
    }
    out += " " + m.lhs + " -> " + m.rhs + "\n";
    if (!m.certificate) continue;
    if (m.certificate->empty()) out += "  refl\n";
    for (const auto& s : *m.certificate)
      out += std::string("  step ") + (s.dir == Direction::Forward ? "->" : "<-") + " " +
             std::to_string(s.rule + 1) + " " + s.left + " " + s.right + "\n";
  }
  return out;
}

}  // namespace mrs
