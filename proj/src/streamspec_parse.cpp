#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "prodcheck/streamspec.hpp"

namespace prodcheck {

std::string Diagnostic::format(const std::string& file) const {
  const char* sev = severity == Severity::Error ? "error" : severity == Severity::Warning ? "warning" : "note";
  return file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + sev + ": " + message;
}

SymbolKind SymbolDecl::kind() const {
  if (!result.stream) return SymbolKind::DataSymbol;
  return streamArity() == 0 ? SymbolKind::StreamConstant : SymbolKind::StreamFunction;
}

std::size_t SymbolDecl::streamArity() const {
  std::size_t n = 0;
  for (const auto& a : args) n += a.stream;
  return n;
}

std::string SymbolDecl::sortString() const {
  std::string s;
  for (const auto& a : args) s += a.str() + " -> ";
  return s + result.str();
}

Term Term::variable(std::string n, SourceLoc l) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(n);
  t.loc = l;
  return t;
}

Term Term::app(std::string n, std::vector<Term> a, SourceLoc l) {
  Term t;
  t.kind = Kind::App;
  t.name = std::move(n);
  t.args = std::move(a);
  t.loc = l;
  return t;
}

Term Term::cons(Term head, Term tail, SourceLoc l) {
  Term t;
  t.kind = Kind::Cons;
  t.stream = true;
  t.args = {std::move(head), std::move(tail)};
  t.loc = l;
  return t;
}

std::string Term::str() const {
  switch (kind) {
    case Kind::Var: return name;
    case Kind::Cons: return head().str() + ":" + tail().str();
    case Kind::App: {
      if (args.empty()) return name;
      std::string s = name + "(";
      for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i].str();
      return s + ")";
    }
  }
  return {};
}

void Term::collectVars(std::vector<const Term*>& out) const {
  if (kind == Kind::Var) out.push_back(this);
  for (const auto& a : args) a.collectVars(out);
}

bool sameShape(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.name != b.name || a.stream != b.stream || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!sameShape(a.args[i], b.args[i])) return false;
  return true;
}

const SymbolDecl* Signature::find(std::string_view name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

std::vector<std::string> Signature::namesOf(SymbolKind k) const {
  std::vector<std::string> out;
  for (const auto& d : decls)
    if (d.kind() == k) out.push_back(d.name);
  return out;
}

std::vector<const Rule*> StreamSpec::rulesFor(std::string_view symbol) const {
  std::vector<const Rule*> out;
  for (const auto* layer : {&streamRules, &dataRules})
    for (const auto& r : *layer)
      if (r.root() == symbol) out.push_back(&r);
  return out;
}

std::set<std::string> StreamSpec::constructors() const {
  std::set<std::string> defined, out;
  for (const auto& r : dataRules) defined.insert(r.root());
  for (const auto& d : sig.decls)
    if (d.kind() == SymbolKind::DataSymbol && !defined.count(d.name)) out.insert(d.name);
  return out;
}

std::string StreamSpec::str() const {
  std::ostringstream os;
  std::vector<const SymbolDecl*> streams, data;
  for (const auto& d : sig.decls) (d.result.stream ? streams : data).push_back(&d);
  os << "Signature(\n";
  std::size_t printed = 0;
  auto group = [&](const char* title, const std::vector<const SymbolDecl*>& ds) {
    if (ds.empty()) return;
    os << "  -- " << title << " --\n";
    for (const auto* d : ds) {
      ++printed;
      os << "  " << d->name << " : " << d->sortString() << (printed < sig.decls.size() ? "," : "") << "\n";
    }
  };
  group("stream symbols", streams);
  if (!streams.empty() && !data.empty()) os << "\n";
  group("data symbols", data);
  os << ")\n";
  if (!streamRules.empty()) {
    os << "\n-- stream layer --\n";
    for (const auto& r : streamRules) os << r.str() << "\n";
  }
  if (!dataRules.empty()) {
    os << "\n-- data layer --\n";
    for (const auto& r : dataRules) os << r.str() << "\n";
  }
  return os.str();
}

bool sameSpec(const StreamSpec& a, const StreamSpec& b) {
  if (a.sig.decls.size() != b.sig.decls.size() || a.streamRules.size() != b.streamRules.size() ||
      a.dataRules.size() != b.dataRules.size())
    return false;
  // Declaration order is not significant once grouped by sort.
  for (const auto& d : a.sig.decls) {
    const SymbolDecl* e = b.sig.find(d.name);
    if (!e || !(e->args == d.args) || !(e->result == d.result)) return false;
  }
  auto sameRules = [](const std::vector<Rule>& x, const std::vector<Rule>& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!sameShape(x[i].lhs, y[i].lhs) || !sameShape(x[i].rhs, y[i].rhs)) return false;
    return true;
  };
  return sameRules(a.streamRules, b.streamRules) && sameRules(a.dataRules, b.dataRules);
}

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Colon, Equals, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto identChar = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; };
  while (i < src.size()) {
    const unsigned char c = src[i];
    SourceLoc loc{line, col};
    if (std::isspace(c)) {
      advance(1);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", loc});
      advance(2);
    } else if (identChar(c)) {
      std::size_t j = i;
      while (j < src.size() && identChar(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
    } else {
      Tok k;
      switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case ',': k = Tok::Comma; break;
        case ':': k = Tok::Colon; break;
        case '=': k = Tok::Equals; break;
        default: throw SpecError(loc, std::string("unexpected character '") + static_cast<char>(c) + "'");
      }
      out.push_back({k, std::string(1, static_cast<char>(c)), loc});
      advance(1);
    }
  }
  out.push_back({Tok::End, "end of input", {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  StreamSpec run() {
    StreamSpec spec;
    if (peek().kind == Tok::End) throw SpecError({1, 1}, "no stream constant declared");
    const Token& kw = next();
    if (kw.kind != Tok::Ident || kw.text != "Signature") throw SpecError(kw.loc, "expected 'Signature'");
    expect(Tok::LParen, "'('");
    if (peek().kind != Tok::RParen) {
      parseDecl(spec.sig);
      while (accept(Tok::Comma)) parseDecl(spec.sig);
    }
    expect(Tok::RParen, "')' closing the signature");
    bool anyStream = false;
    for (const auto& d : spec.sig.decls) anyStream |= d.result.stream;
    if (!anyStream) throw SpecError(kw.loc, "no stream constant declared");

    while (peek().kind != Tok::End) {
      Rule r;
      r.loc = peek().loc;
      r.lhs = parseTerm();
      expect(Tok::Equals, "'='");
      r.rhs = parseTerm();
      rules_.push_back(std::move(r));
    }
    for (auto& r : rules_) checkRule(spec, r);
    for (auto& r : rules_) {
      const SymbolDecl* d = spec.sig.find(r.root());
      (d->result.stream ? spec.streamRules : spec.dataRules).push_back(r);
    }
    checkPatterns(spec);
    return spec;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Rule> rules_;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) throw SpecError(peek().loc, std::string("expected ") + what + ", found '" + peek().text + "'");
    return next();
  }

  SortRef parseSort() {
    const Token& t = expect(Tok::Ident, "a sort");
    if (t.text == "stream" && peek().kind == Tok::LParen) {
      next();
      const Token& e = expect(Tok::Ident, "an element sort");
      expect(Tok::RParen, "')'");
      return {true, e.text};
    }
    return {false, t.text};
  }

  void parseDecl(Signature& sig) {
    std::vector<Token> names{expect(Tok::Ident, "a symbol name")};
    while (accept(Tok::Comma)) names.push_back(expect(Tok::Ident, "a symbol name"));
    expect(Tok::Colon, "':'");
    std::vector<SortRef> sorts{parseSort()};
    while (accept(Tok::Arrow)) sorts.push_back(parseSort());
    SortRef result = sorts.back();
    sorts.pop_back();
    for (const auto& n : names) {
      if (sig.find(n.text)) throw SpecError(n.loc, "symbol '" + n.text + "' declared twice");
      sig.decls.push_back({n.text, sorts, result, n.loc});
    }
  }

  Term parseTerm() {
    Term head = parsePrimary();
    if (peek().kind == Tok::Colon) {
      SourceLoc loc = next().loc;
      Term tail = parseTerm();
      return Term::cons(std::move(head), std::move(tail), loc);
    }
    return head;
  }

  Term parsePrimary() {
    if (accept(Tok::LParen)) {
      Term t = parseTerm();
      expect(Tok::RParen, "')'");
      return t;
    }
    const Token& id = expect(Tok::Ident, "a term");
    Term t = Term::app(id.text, {}, id.loc);
    if (accept(Tok::LParen)) {
      t.args.push_back(parseTerm());
      while (accept(Tok::Comma)) t.args.push_back(parseTerm());
      expect(Tok::RParen, "')'");
    } else {
      t.kind = Term::Kind::Var;  // may still turn out to be a nullary symbol
    }
    return t;
  }

  struct VarInfo {
    bool stream;
    SourceLoc loc;
  };

  static std::string sortWord(bool stream) { return stream ? "stream" : "data"; }

  void check(const Signature& sig, Term& t, bool wantStream, bool lhs, std::map<std::string, VarInfo>& vars) {
    if (t.kind == Term::Kind::Cons) {
      if (!wantStream) throw SpecError(t.loc, "sort clash: stream cons where a data term is expected");
      check(sig, t.args[0], false, lhs, vars);
      check(sig, t.args[1], true, lhs, vars);
      t.stream = true;
      return;
    }
    const SymbolDecl* d = sig.find(t.name);
    if (t.kind == Term::Kind::Var && d) t.kind = Term::Kind::App;
    if (t.kind == Term::Kind::App) {
      if (!d) throw SpecError(t.loc, "undeclared function symbol '" + t.name + "'");
      if (t.args.size() != d->args.size())
        throw SpecError(t.loc, "arity mismatch: '" + t.name + "' expects " + std::to_string(d->args.size()) +
                                   " argument(s), got " + std::to_string(t.args.size()));
      if (d->result.stream != wantStream)
        throw SpecError(t.loc, "sort clash: '" + t.name + "' has " + sortWord(d->result.stream) + " sort where " +
                                   sortWord(wantStream) + " is expected");
      for (std::size_t i = 0; i < t.args.size(); ++i) check(sig, t.args[i], d->args[i].stream, lhs, vars);
      t.stream = wantStream;
      return;
    }
    t.stream = wantStream;
    auto it = vars.find(t.name);
    if (lhs) {
      if (it != vars.end() && it->second.stream != wantStream)
        throw SpecError(t.loc, "sort clash: variable '" + t.name + "' used at both sorts");
      if (it == vars.end()) vars.emplace(t.name, VarInfo{wantStream, t.loc});
      return;
    }
    if (it == vars.end())
      throw SpecError(t.loc, std::string(wantStream ? "unbound stream variable" : "unbound variable") + " on rhs: '" +
                                 t.name + "'");
    if (it->second.stream != wantStream)
      throw SpecError(t.loc, "sort clash: variable '" + t.name + "' has " + sortWord(it->second.stream) +
                                 " sort where " + sortWord(wantStream) + " is expected");
  }

  void checkRule(const StreamSpec& spec, Rule& r) {
    if (r.lhs.kind == Term::Kind::Cons) throw SpecError(r.lhs.loc, "lhs must be headed by a defined symbol");
    const SymbolDecl* d = spec.sig.find(r.lhs.name);
    if (!d) {
      if (r.lhs.kind == Term::Kind::Var) throw SpecError(r.lhs.loc, "variable on lhs root: '" + r.lhs.name + "'");
      throw SpecError(r.lhs.loc, "undeclared function symbol '" + r.lhs.name + "'");
    }
    std::map<std::string, VarInfo> vars;
    check(spec.sig, r.lhs, d->result.stream, true, vars);
    check(spec.sig, r.rhs, d->result.stream, false, vars);
  }

  static void checkDataPattern(const Term& t, const std::set<std::string>& ctors) {
    if (t.kind == Term::Kind::Var) return;
    if (t.kind != Term::Kind::App || !ctors.count(t.name))
      throw SpecError(t.loc, "lhs is not a constructor pattern: '" + t.str() + "'");
    for (const auto& a : t.args) checkDataPattern(a, ctors);
  }

  static void checkStreamPattern(const Term& t, const std::set<std::string>& ctors) {
    if (t.kind == Term::Kind::Var) return;
    if (t.kind != Term::Kind::Cons)
      throw SpecError(t.loc, "stream argument pattern must be a cons pattern over a stream variable: '" + t.str() + "'");
    checkDataPattern(t.head(), ctors);
    checkStreamPattern(t.tail(), ctors);
  }

  static void checkPatterns(const StreamSpec& spec) {
    const auto ctors = spec.constructors();
    for (const auto* layer : {&spec.streamRules, &spec.dataRules})
      for (const auto& r : *layer) {
        for (const auto& a : r.lhs.args) {
          if (a.stream) checkStreamPattern(a, ctors);
          else checkDataPattern(a, ctors);
        }
      }
  }
};

}  // namespace

StreamSpec parseSpec(std::string_view text) { return Parser(text).run(); }

StreamSpec parseSpecFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError({0, 0}, "cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseSpec(ss.str());
}

}  // namespace prodcheck
