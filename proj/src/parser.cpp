#include "robta/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace robta {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

// ---------------------------------------------------------------- guards

enum class Tok { Ident, Int, Minus, Rel, And, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t col;  // 0-based offset into the guard text
};

struct GuardLexer {
  std::string_view s;
  std::size_t line, base;  // error position of s[0]

  [[noreturn]] void fail(std::size_t off, const std::string& msg) const { throw ParseError(line, base + off, msg); }

  std::vector<Token> run() const {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), i});
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j < s.size() && (s[j] == '.' || s[j] == '/')) fail(i, "non-integer guard constant");
        out.push_back({Tok::Int, std::string(s.substr(i, j - i)), i});
        i = j;
      } else if (c == '-') {
        out.push_back({Tok::Minus, "-", i});
        ++i;
      } else if (c == '&') {
        if (i + 1 >= s.size() || s[i + 1] != '&') fail(i, "expected '&&'");
        out.push_back({Tok::And, "&&", i});
        i += 2;
      } else if (c == '<' || c == '>' || c == '=') {
        std::size_t j = i + 1;
        if (j < s.size() && s[j] == '=') ++j;
        out.push_back({Tok::Rel, std::string(s.substr(i, j - i)), i});
        i = j;
      } else {
        fail(i, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
  }
};

struct Side {
  bool is_const = false;
  long value = 0;
  std::optional<ClockId> clock, minus;
  std::size_t col = 0;
};

class GuardParser {
 public:
  GuardParser(std::string_view text, const ClockSet& clocks, std::size_t line, std::size_t base)
      : lex_{text, line, base}, clocks_(clocks), toks_(lex_.run()) {}

  Guard parse() {
    Guard g;
    if (peek().kind == Tok::End) return g;
    if (peek().kind == Tok::Ident && peek().text == "true" && toks_[1].kind == Tok::End) return g;
    for (;;) {
      g.atoms.push_back(atom());
      if (peek().kind == Tok::End) break;
      expect(Tok::And, "expected '&&'");
    }
    return g;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  const Token& expect(Tok k, const char* msg) {
    if (peek().kind != k) lex_.fail(peek().col, msg);
    return next();
  }

  ClockId clock(const Token& t) {
    auto c = clocks_.find(t.text);
    if (!c) lex_.fail(t.col, "unknown clock '" + t.text + "'");
    return *c;
  }

  long integer(const Token& t) {
    try {
      return std::stol(t.text);
    } catch (const std::exception&) {
      lex_.fail(t.col, "guard constant out of range");
    }
  }

  Side side() {
    Side s;
    s.col = peek().col;
    if (peek().kind == Tok::Minus) {
      next();
      s.is_const = true;
      s.value = -integer(expect(Tok::Int, "expected integer after '-'"));
    } else if (peek().kind == Tok::Int) {
      s.is_const = true;
      s.value = integer(next());
    } else if (peek().kind == Tok::Ident) {
      s.clock = clock(next());
      if (peek().kind == Tok::Minus) {
        next();
        if (peek().kind != Tok::Ident) lex_.fail(peek().col, "expected clock after '-'");
        s.minus = clock(next());
      }
    } else {
      lex_.fail(peek().col, "expected clock or integer");
    }
    return s;
  }

  // Applies `term op k` to atom a.
  void bound(AtomicConstraint& a, const std::string& op, long k, std::size_t col) {
    auto set_upper = [&](bool strict) {
      if (a.upper) lex_.fail(col, "duplicate upper bound in atom");
      a.upper = ConstraintBound{k, strict};
    };
    auto set_lower = [&](bool strict) {
      if (a.lower) lex_.fail(col, "duplicate lower bound in atom");
      a.lower = ConstraintBound{k, strict};
    };
    if (op == "<") set_upper(true);
    else if (op == "<=") set_upper(false);
    else if (op == ">") set_lower(true);
    else if (op == ">=") set_lower(false);
    else {
      set_lower(false);
      set_upper(false);
    }
  }

  static std::string flip(const std::string& op) {
    if (op == "<") return ">";
    if (op == "<=") return ">=";
    if (op == ">") return "<";
    if (op == ">=") return "<=";
    return op;
  }

  AtomicConstraint atom() {
    std::vector<Side> sides{side()};
    std::vector<Token> ops;
    while (peek().kind == Tok::Rel) {
      ops.push_back(next());
      sides.push_back(side());
    }
    if (ops.empty()) lex_.fail(peek().col, "expected comparison operator");
    if (ops.size() > 2) lex_.fail(ops[2].col, "at most two comparisons per atom");
    for (auto& o : ops)
      if (o.text == "=") o.text = "==";

    auto make = [](const Side& t) {
      AtomicConstraint a;
      a.clock = *t.clock;
      a.minus = t.minus;
      return a;
    };

    if (ops.size() == 1) {
      const Side &l = sides[0], &r = sides[1];
      if (!l.is_const && !r.is_const)
        lex_.fail(l.col, "clock-to-clock comparison; diagonal atoms must be written x-y<k");
      if (l.is_const && r.is_const) lex_.fail(l.col, "atom mentions no clock");
      if (!l.is_const) {
        AtomicConstraint a = make(l);
        bound(a, ops[0].text, r.value, ops[0].col);
        return a;
      }
      AtomicConstraint a = make(r);
      bound(a, flip(ops[0].text), l.value, ops[0].col);
      return a;
    }

    if (!sides[0].is_const || sides[1].is_const || !sides[2].is_const)
      lex_.fail(sides[0].col, "chained atom must have the shape k < term < l");
    bool up0 = ops[0].text[0] == '<', up1 = ops[1].text[0] == '<';
    if (ops[0].text == "==" || ops[1].text == "==" || up0 != up1)
      lex_.fail(ops[1].col, "chained comparisons must point the same way");
    AtomicConstraint a = make(sides[1]);
    bound(a, flip(ops[0].text), sides[0].value, ops[0].col);
    bound(a, ops[1].text, sides[2].value, ops[1].col);
    if (a.lower && a.upper && a.lower->value > a.upper->value)
      lex_.fail(sides[0].col, "lower bound exceeds upper bound");
    return a;
  }

  GuardLexer lex_;
  const ClockSet& clocks_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- documents

struct Word {
  std::string text;
  bool quoted;
  std::size_t col;  // 1-based; for quoted words, column of the first character inside the quotes
};

std::vector<Word> split_line(std::string_view line, std::size_t lineno) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      std::size_t j = line.find('"', i + 1);
      if (j == std::string_view::npos) throw ParseError(lineno, i + 1, "unterminated string");
      out.push_back({std::string(line.substr(i + 1, j - i - 1)), true, i + 2});
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '"' &&
             line[j] != '#')
        ++j;
      out.push_back({std::string(line.substr(i, j - i)), false, i + 1});
      i = j;
    }
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

struct PendingEdge {
  std::size_t line;
  Word src, dst, guard;
  std::vector<Word> resets;
};

}  // namespace

Guard parse_guard(std::string_view text, const ClockSet& clocks) { return GuardParser(text, clocks, 1, 1).parse(); }

TimedAutomaton parse_automaton(std::string_view text) {
  std::optional<std::vector<std::string>> clock_names;
  std::optional<int> bound;
  std::optional<std::vector<Word>> declared_locations;
  std::optional<Word> init_loc;
  std::optional<Word> init_guard;
  std::size_t init_line = 0;
  std::optional<std::vector<Word>> buchi_words;
  std::vector<PendingEdge> edges;

  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++lineno;
    start = end + 1;

    auto words = split_line(line, lineno);
    if (words.empty()) continue;
    const Word& kw = words[0];
    auto args = std::vector<Word>(words.begin() + 1, words.end());
    auto need_plain = [&](const Word& w, const char* what) {
      if (w.quoted || !is_identifier(w.text)) throw ParseError(lineno, w.col, std::string("expected ") + what);
    };
    auto once = [&](bool already) {
      if (already) throw ParseError(lineno, kw.col, "duplicate '" + kw.text + "' declaration");
    };

    if (kw.quoted) throw ParseError(lineno, kw.col, "expected a keyword");
    if (kw.text == "clocks") {
      once(clock_names.has_value());
      if (args.empty()) throw ParseError(lineno, kw.col, "clocks needs at least one name");
      std::vector<std::string> names;
      for (const auto& w : args) {
        need_plain(w, "clock name");
        for (const auto& n : names)
          if (n == w.text) throw ParseError(lineno, w.col, "duplicate clock '" + w.text + "'");
        names.push_back(w.text);
      }
      clock_names = names;
    } else if (kw.text == "bound") {
      once(bound.has_value());
      if (args.size() != 1 || args[0].quoted) throw ParseError(lineno, kw.col, "bound takes one natural number");
      const auto& t = args[0].text;
      if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos || t.size() > 6)
        throw ParseError(lineno, args[0].col, "bound must be a positive integer");
      bound = std::stoi(t);
      if (*bound < 1) throw ParseError(lineno, args[0].col, "bound must be a positive integer");
    } else if (kw.text == "locations") {
      once(declared_locations.has_value());
      if (args.empty()) throw ParseError(lineno, kw.col, "locations needs at least one name");
      for (std::size_t i = 0; i < args.size(); ++i) {
        need_plain(args[i], "location name");
        for (std::size_t j = 0; j < i; ++j)
          if (args[j].text == args[i].text)
            throw ParseError(lineno, args[i].col, "duplicate location '" + args[i].text + "'");
      }
      declared_locations = args;
    } else if (kw.text == "init") {
      once(init_loc.has_value());
      if (args.empty() || args.size() > 2) throw ParseError(lineno, kw.col, "init takes a location and an optional guard");
      need_plain(args[0], "location name");
      init_loc = args[0];
      init_line = lineno;
      if (args.size() == 2) {
        if (!args[1].quoted) throw ParseError(lineno, args[1].col, "initial constraint must be quoted");
        init_guard = args[1];
      }
    } else if (kw.text == "buchi") {
      once(buchi_words.has_value());
      for (const auto& w : args) need_plain(w, "location name");
      buchi_words = args;
    } else if (kw.text == "edge") {
      if (args.size() < 3) throw ParseError(lineno, kw.col, "edge needs source, target and a quoted guard");
      need_plain(args[0], "source location");
      need_plain(args[1], "target location");
      if (!args[2].quoted) throw ParseError(lineno, args[2].col, "guard must be quoted");
      PendingEdge e{lineno, args[0], args[1], args[2], {}};
      if (args.size() > 3) {
        if (args[3].quoted || args[3].text != "reset") throw ParseError(lineno, args[3].col, "expected 'reset'");
        if (args.size() == 4) throw ParseError(lineno, args[3].col, "reset needs at least one clock");
        for (std::size_t i = 4; i < args.size(); ++i) {
          need_plain(args[i], "clock name");
          e.resets.push_back(args[i]);
        }
      }
      edges.push_back(std::move(e));
    } else {
      throw ParseError(lineno, kw.col, "unknown keyword '" + kw.text + "'");
    }
  }

  if (!clock_names) throw ParseError(lineno, 1, "missing 'clocks' declaration");
  if (!bound) throw ParseError(lineno, 1, "missing 'bound' declaration");
  if (!init_loc) throw ParseError(lineno, 1, "missing 'init' declaration");

  ClockSet clocks(*clock_names);
  std::vector<std::string> locations;
  std::map<std::string, LocationId> index;
  bool strict_locations = declared_locations.has_value();
  if (strict_locations)
    for (const auto& w : *declared_locations) {
      index[w.text] = locations.size();
      locations.push_back(w.text);
    }
  auto location = [&](const Word& w, std::size_t line) -> LocationId {
    auto it = index.find(w.text);
    if (it != index.end()) return it->second;
    if (strict_locations) throw ParseError(line, w.col, "unknown location '" + w.text + "'");
    index[w.text] = locations.size();
    locations.push_back(w.text);
    return locations.size() - 1;
  };

  LocationId initial = location(*init_loc, init_line);
  std::optional<Guard> init_constraint;
  if (init_guard) init_constraint = GuardParser(init_guard->text, clocks, init_line, init_guard->col).parse();

  std::vector<Edge> built;
  for (const auto& pe : edges) {
    Edge e;
    e.source = location(pe.src, pe.line);
    e.target = location(pe.dst, pe.line);
    e.guard = GuardParser(pe.guard.text, clocks, pe.line, pe.guard.col).parse();
    for (const auto& w : pe.resets) {
      auto c = clocks.find(w.text);
      if (!c) throw ParseError(pe.line, w.col, "unknown clock '" + w.text + "'");
      e.resets.push_back(*c);
    }
    built.push_back(std::move(e));
  }

  std::vector<LocationId> buchi;
  if (buchi_words)
    for (const auto& w : *buchi_words) {
      auto it = index.find(w.text);
      if (it == index.end()) throw ParseError(lineno, w.col, "unknown location '" + w.text + "' in buchi");
      buchi.push_back(it->second);
    }

  try {
    return TimedAutomaton(std::move(clocks), std::move(locations), *bound, std::move(built), initial,
                          std::move(init_constraint), std::move(buchi));
  } catch (const ModelError& e) {
    throw ParseError(lineno, 1, e.what());
  }
}

std::string print_automaton(const TimedAutomaton& a) {
  std::ostringstream os;
  os << "clocks";
  for (const auto& c : a.clocks().names()) os << ' ' << c;
  os << "\nbound " << a.bound() << "\nlocations";
  for (const auto& l : a.locations()) os << ' ' << l;
  os << "\ninit " << a.location_name(a.initial());
  if (a.initial_constraint()) os << " \"" << to_string(*a.initial_constraint(), a.clocks()) << '"';
  os << "\nbuchi";
  for (LocationId l : a.buchi_locations()) os << ' ' << a.location_name(l);
  os << '\n';
  for (const auto& e : a.edges()) {
    os << "edge " << a.location_name(e.source) << ' ' << a.location_name(e.target) << " \""
       << to_string(e.guard, a.clocks()) << '"';
    if (!e.resets.empty()) {
      os << " reset";
      for (ClockId c : e.resets) os << ' ' << a.clocks().name(c);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace robta
