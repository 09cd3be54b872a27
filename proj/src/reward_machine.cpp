#include "noisy_rm/reward_machine.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

namespace noisy_rm {

namespace {

std::string at(SourcePos pos) {
  return "line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column);
}

[[noreturn]] void parse_fail(SourcePos pos, const std::string& msg) {
  throw RmParseError(at(pos) + ": " + msg, pos);
}

[[noreturn]] void validation_fail(SourcePos pos, const std::string& msg) {
  throw RmValidationError(at(pos) + ": " + msg, pos);
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (char c : s) {
    if (!is_ident_char(c)) return false;
  }
  return true;
}

// A slice of one source line that remembers where it starts.
struct Span {
  std::string_view text;
  SourcePos pos;

  [[nodiscard]] Span sub(std::size_t offset, std::size_t n = std::string_view::npos) const {
    return {text.substr(offset, n), {pos.line, pos.column + static_cast<int>(offset)}};
  }

  [[nodiscard]] Span trimmed() const {
    std::size_t b = 0;
    while (b < text.size() && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    std::size_t e = text.size();
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return sub(b, e - b);
  }
};

std::vector<Span> split_names(Span list) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < list.text.size()) {
    while (i < list.text.size() && std::isspace(static_cast<unsigned char>(list.text[i]))) ++i;
    const std::size_t b = i;
    while (i < list.text.size() && !std::isspace(static_cast<unsigned char>(list.text[i]))) ++i;
    if (i > b) out.push_back(list.sub(b, i - b));
  }
  return out;
}

class GuardParser {
 public:
  GuardParser(Span src, const std::map<std::string, int, std::less<>>& aps) : src_(src), aps_(aps) {}

  Guard parse() {
    Guard g = expr();
    skip_ws();
    if (i_ < src_.text.size()) fail("unexpected '" + std::string(1, src_.text[i_]) + "' in guard");
    return g;
  }

 private:
  void skip_ws() {
    while (i_ < src_.text.size() && std::isspace(static_cast<unsigned char>(src_.text[i_]))) ++i_;
  }

  bool accept(char c) {
    skip_ws();
    if (i_ < src_.text.size() && src_.text[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    parse_fail({src_.pos.line, src_.pos.column + static_cast<int>(i_)}, msg);
  }

  Guard expr() {
    Guard g = term();
    while (accept('|')) g = Guard::disjunction(std::move(g), term());
    return g;
  }

  Guard term() {
    Guard g = factor();
    while (accept('&')) g = Guard::conjunction(std::move(g), factor());
    return g;
  }

  Guard factor() {
    if (accept('!')) return Guard::negate(factor());
    if (accept('(')) {
      Guard g = expr();
      if (!accept(')')) fail("expected ')'");
      return g;
    }
    skip_ws();
    if (i_ >= src_.text.size()) fail("unexpected end of guard");
    if (!is_ident_start(src_.text[i_])) fail("unexpected '" + std::string(1, src_.text[i_]) + "' in guard");
    const std::size_t b = i_;
    while (i_ < src_.text.size() && is_ident_char(src_.text[i_])) ++i_;
    const std::string_view word = src_.text.substr(b, i_ - b);
    if (word == "true") return Guard::constant(true);
    if (word == "false") return Guard::constant(false);
    auto it = aps_.find(word);
    if (it == aps_.end()) {
      i_ = b;
      fail("undeclared proposition '" + std::string(word) + "'");
    }
    return Guard::prop(it->second);
  }

  Span src_;
  const std::map<std::string, int, std::less<>>& aps_;
  std::size_t i_ = 0;
};

struct RawEdge {
  Span src, dst, guard, reward;
  SourcePos pos;
};

double parse_reward(Span s) {
  const Span t = s.trimmed();
  double value = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    parse_fail(t.pos, "invalid reward '" + std::string(t.text) + "'");
  }
  return value;
}

}  // namespace

RmDocument parse_rm(std::string_view text) {
  RmDocument doc;
  std::vector<std::string> lines;
  {
    std::size_t b = 0;
    while (b <= text.size()) {
      std::size_t e = text.find('\n', b);
      if (e == std::string_view::npos) e = text.size();
      std::string line(text.substr(b, e - b));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      b = e + 1;
    }
  }

  bool seen_magic = false;
  std::optional<Span> aps_decl, states_decl, terminals_decl, init_decl;
  std::vector<RawEdge> raw_edges;

  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const Span span = Span{line, {static_cast<int>(n) + 1, 1}}.trimmed();
    if (span.text.empty()) continue;

    if (!seen_magic) {
      if (span.text != "rm") parse_fail(span.pos, "expected 'rm' header");
      seen_magic = true;
      continue;
    }

    if (auto arrow = span.text.find("->"); arrow != std::string_view::npos) {
      const std::size_t colon = span.text.find(':', arrow);
      if (colon == std::string_view::npos) parse_fail(span.pos, "expected ':' after edge target");
      const std::size_t comma = span.text.rfind(',');
      if (comma == std::string_view::npos || comma < colon) {
        parse_fail(span.sub(colon).pos, "expected ', <reward>' after guard");
      }
      raw_edges.push_back({span.sub(0, arrow).trimmed(), span.sub(arrow + 2, colon - arrow - 2).trimmed(),
                           span.sub(colon + 1, comma - colon - 1), span.sub(comma + 1), span.pos});
      continue;
    }

    const std::size_t colon = span.text.find(':');
    if (colon == std::string_view::npos) parse_fail(span.pos, "expected a declaration or an edge");
    const std::string_view key = span.sub(0, colon).trimmed().text;
    const Span value = span.sub(colon + 1);
    std::optional<Span>* slot = nullptr;
    if (key == "aps") slot = &aps_decl;
    else if (key == "states") slot = &states_decl;
    else if (key == "terminals") slot = &terminals_decl;
    else if (key == "init") slot = &init_decl;
    else parse_fail(span.pos, "unknown declaration '" + std::string(key) + "'");
    if (slot->has_value()) parse_fail(span.pos, "duplicate '" + std::string(key) + "' declaration");
    *slot = value;
  }

  if (!seen_magic) parse_fail({1, 1}, "empty document, expected 'rm' header");
  if (!states_decl) parse_fail({static_cast<int>(lines.size()), 1}, "missing 'states' declaration");
  if (!init_decl) parse_fail({static_cast<int>(lines.size()), 1}, "missing 'init' declaration");

  std::map<std::string, int, std::less<>> ap_index;
  if (aps_decl) {
    for (const Span& name : split_names(*aps_decl)) {
      if (!is_identifier(name.text) || name.text == "true" || name.text == "false") {
        parse_fail(name.pos, "invalid proposition name '" + std::string(name.text) + "'");
      }
      if (!ap_index.emplace(std::string(name.text), static_cast<int>(doc.aps.size())).second) {
        parse_fail(name.pos, "duplicate proposition '" + std::string(name.text) + "'");
      }
      doc.aps.emplace_back(name.text);
    }
  }

  std::map<std::string, RmStateId, std::less<>> state_index;
  auto declare = [&](const Span& name, std::vector<std::string>& into) {
    if (!is_identifier(name.text)) parse_fail(name.pos, "invalid state name '" + std::string(name.text) + "'");
    into.emplace_back(name.text);
    doc.declared_at.push_back(name.pos);
  };
  for (const Span& name : split_names(*states_decl)) declare(name, doc.states);
  if (terminals_decl) {
    for (const Span& name : split_names(*terminals_decl)) declare(name, doc.terminals);
  }
  // Terminal ids follow the non-terminal ones.
  for (std::size_t i = 0; i < doc.states.size(); ++i) {
    if (!state_index.emplace(doc.states[i], RmStateId{static_cast<std::uint32_t>(i)}).second) {
      parse_fail(doc.declared_at[i], "duplicate state '" + doc.states[i] + "'");
    }
  }
  for (std::size_t i = 0; i < doc.terminals.size(); ++i) {
    if (!state_index.emplace(doc.terminals[i], RmStateId{static_cast<std::uint32_t>(doc.states.size() + i)}).second) {
      parse_fail(doc.declared_at[doc.states.size() + i], "duplicate state '" + doc.terminals[i] + "'");
    }
  }
  if (doc.states.empty()) parse_fail(states_decl->pos, "at least one non-terminal state is required");

  auto resolve = [&](const Span& name) {
    auto it = state_index.find(name.text);
    if (it == state_index.end()) parse_fail(name.pos, "undeclared state '" + std::string(name.text) + "'");
    return it->second;
  };

  const auto init_names = split_names(*init_decl);
  if (init_names.size() != 1) parse_fail(init_decl->pos, "'init' takes exactly one state");
  if (!state_index.contains(init_names[0].text)) {
    parse_fail(init_names[0].pos, "initial state '" + std::string(init_names[0].text) + "' not declared");
  }
  doc.initial = resolve(init_names[0]);
  if (doc.initial.index >= doc.states.size()) parse_fail(init_names[0].pos, "initial state must be non-terminal");

  for (const RawEdge& raw : raw_edges) {
    RmEdge edge;
    edge.source = resolve(raw.src);
    edge.target = resolve(raw.dst);
    if (raw.guard.trimmed().text.empty()) parse_fail(raw.guard.pos, "empty guard");
    edge.guard = GuardParser(raw.guard, ap_index).parse();
    edge.reward = parse_reward(raw.reward);
    edge.pos = raw.pos;
    doc.edges.push_back(std::move(edge));
  }
  return doc;
}

RewardMachine validate_rm(RmDocument doc) {
  const int n_aps = static_cast<int>(doc.aps.size());
  if (n_aps > kMaxPropositions) {
    validation_fail({1, 1}, "too many propositions (" + std::to_string(n_aps) + " > " +
                                std::to_string(kMaxPropositions) + ")");
  }
  const std::size_t n_u = doc.states.size();
  if (n_u == 0) validation_fail({1, 1}, "no non-terminal states");
  if (doc.initial.index >= n_u) validation_fail({1, 1}, "initial state must be non-terminal");

  RewardMachine rm;
  const std::size_t n_sigma = std::size_t{1} << n_aps;
  rm.table_.resize(n_u * n_sigma);
  for (std::size_t u = 0; u < n_u; ++u) {
    for (std::size_t s = 0; s < n_sigma; ++s) {
      rm.table_[u * n_sigma + s] = {RmStateId{static_cast<std::uint32_t>(u)}, 0.0};
    }
  }

  auto format_sigma = [&](std::size_t s) {
    std::string out = "{";
    bool first = true;
    for (int p = 0; p < n_aps; ++p) {
      if ((s >> p) & 1U) {
        if (!first) out += ", ";
        out += doc.aps[static_cast<std::size_t>(p)];
        first = false;
      }
    }
    return out + "}";
  };
  auto state_name = [&](RmStateId id) {
    return id.index < n_u ? doc.states[id.index] : doc.terminals[id.index - n_u];
  };

  std::vector<TruthTable> covered(n_u, TruthTable(n_aps));
  // Edge index that claimed each (u, sigma); -1 if none.
  std::vector<int> owner(n_u * n_sigma, -1);
  for (std::size_t e = 0; e < doc.edges.size(); ++e) {
    const RmEdge& edge = doc.edges[e];
    if (edge.source.index >= n_u) {
      validation_fail(edge.pos, "edge leaves terminal state '" + state_name(edge.source) + "'");
    }
    if (edge.target.index >= doc.size()) validation_fail(edge.pos, "edge target out of range");
    if (edge.guard.max_prop() >= n_aps) validation_fail(edge.pos, "guard references undeclared proposition");
    const TruthTable fires = edge.guard.truth_table(n_aps);
    const std::size_t u = edge.source.index;
    for (std::size_t s = 0; s < n_sigma; ++s) {
      const PropSet sigma{static_cast<std::uint32_t>(s)};
      if (!fires.test(sigma)) continue;
      const int prev = owner[u * n_sigma + s];
      if (prev >= 0) {
        const RmEdge& other = doc.edges[static_cast<std::size_t>(prev)];
        validation_fail(edge.pos, "nondeterministic transitions from state '" + state_name(edge.source) +
                                      "' on " + format_sigma(s) + ": edges at line " +
                                      std::to_string(other.pos.line) + " and line " +
                                      std::to_string(edge.pos.line) + " both fire");
      }
      owner[u * n_sigma + s] = static_cast<int>(e);
      rm.table_[u * n_sigma + s] = {edge.target, edge.reward};
    }
    covered[u] |= fires;
  }

  for (std::size_t u = 0; u < n_u; ++u) {
    const RmStateId id{static_cast<std::uint32_t>(u)};
    rm.defaults_.push_back({id, Guard::otherwise(~covered[u]), id, 0.0,
                            u < doc.declared_at.size() ? doc.declared_at[u] : SourcePos{}});
  }

  std::vector<bool> reached(doc.size(), false);
  std::queue<std::size_t> frontier;
  reached[doc.initial.index] = true;
  frontier.push(doc.initial.index);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    if (u >= n_u) continue;
    for (std::size_t s = 0; s < n_sigma; ++s) {
      const std::size_t next = rm.table_[u * n_sigma + s].next.index;
      if (!reached[next]) {
        reached[next] = true;
        frontier.push(next);
      }
    }
  }
  for (std::size_t u = 0; u < doc.size(); ++u) {
    if (!reached[u]) {
      const SourcePos pos = u < doc.declared_at.size() ? doc.declared_at[u] : SourcePos{};
      validation_fail(pos, "state '" + state_name(RmStateId{static_cast<std::uint32_t>(u)}) +
                               "' is unreachable from the initial state");
    }
  }

  rm.doc_ = std::move(doc);
  return rm;
}

const std::string& RewardMachine::name(RmStateId u) const {
  if (u.index < doc_.states.size()) return doc_.states[u.index];
  return doc_.terminals.at(u.index - doc_.states.size());
}

std::optional<RmStateId> RewardMachine::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < size(); ++i) {
    const RmStateId id{static_cast<std::uint32_t>(i)};
    if (this->name(id) == name) return id;
  }
  return std::nullopt;
}

std::optional<int> RewardMachine::find_ap(std::string_view name) const {
  for (std::size_t i = 0; i < doc_.aps.size(); ++i) {
    if (doc_.aps[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

RewardMachine::Outcome RewardMachine::step(RmStateId u, PropSet sigma) const {
  if (u.index >= num_states()) {
    throw std::invalid_argument("cannot step reward machine from terminal or unknown state");
  }
  if (!sigma.fits(num_aps())) throw std::invalid_argument("assignment sets undeclared propositions");
  return table_[u.index * num_assignments() + sigma.index()];
}

PropSet RewardMachine::props(std::initializer_list<std::string_view> names) const {
  PropSet s;
  for (auto n : names) {
    auto idx = find_ap(n);
    if (!idx) throw std::invalid_argument("unknown proposition '" + std::string(n) + "'");
    s = s.with(*idx);
  }
  return s;
}

std::string RewardMachine::format(PropSet sigma) const {
  std::string out = "{";
  bool first = true;
  for (int p = 0; p < num_aps(); ++p) {
    if (sigma.contains(p)) {
      if (!first) out += ", ";
      out += doc_.aps[static_cast<std::size_t>(p)];
      first = false;
    }
  }
  return out + "}";
}

std::string to_rm_text(const RewardMachine& rm) {
  std::ostringstream out;
  auto join = [&](const char* key, const std::vector<std::string>& names) {
    out << key << ':';
    for (const auto& n : names) out << ' ' << n;
    out << '\n';
  };
  std::vector<std::string> states, terminals;
  for (std::size_t i = 0; i < rm.size(); ++i) {
    const RmStateId id{static_cast<std::uint32_t>(i)};
    (rm.is_terminal(id) ? terminals : states).push_back(rm.name(id));
  }
  out << "rm\n";
  join("aps", rm.aps());
  join("states", states);
  join("terminals", terminals);
  out << "init: " << rm.name(rm.initial()) << '\n';
  for (const RmEdge& e : rm.edges()) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.reward);
    out << rm.name(e.source) << " -> " << rm.name(e.target) << " : " << e.guard.to_string(rm.aps()) << " , "
        << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
  }
  return out.str();
}

RewardMachine load_rm(std::string_view text) { return validate_rm(parse_rm(text)); }

RewardMachine load_rm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open reward machine file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_rm(ss.str());
}

}  // namespace noisy_rm
