#include "prodcheck/translate.hpp"

#include <functional>

#include "prodcheck/solver.hpp"

namespace prodcheck {

GateTranslation translateSymbols(const StreamSpec& spec, const Classification& cls,
                                 const std::set<std::string>& symbols, const TranslateOptions& opts) {
  std::set<std::string> wanted = symbols;
  if (wanted.empty())
    for (const auto& [f, _] : cls.symbols) wanted.insert(f);

  EquationGenerator gen(spec, cls, opts.generator);
  std::vector<IOVar> roots;
  for (const auto& f : wanted) {
    const SymbolDecl* d = spec.sig.find(f);
    if (!d || d->kind() != SymbolKind::StreamFunction)
      throw std::invalid_argument("'" + f + "' is not a stream function");
    roots.push_back(IOVar::star(f));
    for (std::size_t i = 1; i <= d->streamArity(); ++i) roots.push_back(IOVar::arg(f, i, 0));
  }
  GateTranslation out;
  out.system = finitize(gen, roots, opts.finitizeCap);
  std::size_t k = 0;
  for (const auto& f : wanted) {
    const std::size_t arity = spec.sig.find(f)->streamArity();
    auto& rs = out.roots[f];
    rs.assign(out.system.roots.begin() + static_cast<std::ptrdiff_t>(k),
              out.system.roots.begin() + static_cast<std::ptrdiff_t>(k + 1 + arity));
    k += 1 + arity;
    Gate g;
    // the cap sequence has the form +^n or +^omega
    g.cap = interpret(solve(out.system, rs[0], opts.maxColumns), 0);
    for (std::size_t i = 1; i <= arity; ++i) g.args.push_back(solve(out.system, rs[i], opts.maxColumns));
    out.gates[f] = g;
  }
  return out;
}

ProdTerm translateConstant(const StreamSpec& spec, const GateTable& gates, const std::string& constant) {
  std::function<ProdTerm(const std::string&, std::set<std::string>&)> constantTerm;
  std::function<ProdTerm(const Term&, std::set<std::string>&)> rhsTerm = [&](const Term& t,
                                                                             std::set<std::string>& visited) {
    switch (t.kind) {
      case Term::Kind::Cons: return ProdTerm::peb(rhsTerm(t.tail(), visited));
      case Term::Kind::Var: throw std::invalid_argument("stream variable '" + t.name + "' in a constant rule");
      case Term::Kind::App: break;
    }
    const SymbolDecl* d = spec.sig.find(t.name);
    if (!d || !d->result.stream) throw std::invalid_argument("'" + t.name + "' is not a stream symbol");
    if (d->kind() == SymbolKind::StreamConstant) return constantTerm(t.name, visited);
    auto g = gates.find(t.name);
    if (g == gates.end()) throw std::invalid_argument("no gate for stream function '" + t.name + "'");
    std::vector<ProdTerm> args;
    for (std::size_t i = 0; i < d->args.size(); ++i)
      if (d->args[i].stream) args.push_back(rhsTerm(t.args[i], visited));
    return gateApply(g->second, args);
  };
  constantTerm = [&](const std::string& c, std::set<std::string>& visited) {
    if (visited.count(c)) return ProdTerm::var(c);
    const SymbolDecl* d = spec.sig.find(c);
    if (!d || d->kind() != SymbolKind::StreamConstant)
      throw std::invalid_argument("'" + c + "' is not a stream constant");
    std::vector<ProdTerm> parts;
    visited.insert(c);
    for (const auto* r : spec.rulesFor(c)) parts.push_back(rhsTerm(r->rhs, visited));
    visited.erase(c);
    if (parts.empty()) throw std::invalid_argument("stream constant '" + c + "' has no defining rule");
    return ProdTerm::mu(c, ProdTerm::meetAll(std::move(parts)));
  };
  std::set<std::string> visited;
  return constantTerm(constant, visited);
}

std::string describe(Context c) {
  switch (c) {
    case Context::AllPure: return "pure";
    case Context::AllFlat: return "flat";
    case Context::FriendlyNesting: return "friendly nesting";
  }
  return {};
}

std::string describe(Answer a) {
  switch (a) {
    case Answer::Productive: return "productive";
    case Answer::NotProductive: return "not productive";
    case Answer::NotDOProductive: return "not data-obliviously productive";
    case Answer::Unknown: return "unknown";
  }
  return {};
}

std::string Verdict::message() const {
  switch (answer) {
    case Answer::Productive: return "The specification of " + constant + " is productive.";
    case Answer::NotProductive: return constant + " is not productive (production = " + production.str() + ").";
    case Answer::NotDOProductive:
      return constant + " is not data-obliviously productive (production = " + production.str() + ").";
    case Answer::Unknown: return "Failed to prove productivity of " + constant + ".";
  }
  return {};
}

Analysis analyze(const StreamSpec& spec, const std::optional<std::string>& root, const TranslateOptions& opts) {
  Analysis a;
  a.classification = classify(spec);
  std::vector<std::string> constants;
  if (root) {
    const SymbolDecl* d = spec.sig.find(*root);
    if (!d || d->kind() != SymbolKind::StreamConstant)
      throw std::invalid_argument("'" + *root + "' is not a stream constant");
    constants.push_back(*root);
  } else {
    constants = spec.sig.namesOf(SymbolKind::StreamConstant);
  }

  std::map<std::string, std::set<std::string>> reach;
  std::set<std::string> needed;
  for (const auto& c : constants) {
    reach[c] = reachableFunctions(spec, c);
    needed.insert(reach[c].begin(), reach[c].end());
  }
  // without a root the gate table covers every function that can be translated
  if (!root)
    for (const auto& [f, k] : a.classification.symbols)
      if (k != SymbolClass::Unfriendly) needed.insert(f);
  if (!needed.empty()) a.translation = translateSymbols(spec, a.classification, needed, opts);

  for (const auto& c : constants) {
    Verdict v;
    v.constant = c;
    bool pure = true, flat = true;
    for (const auto& f : reach[c]) {
      SymbolClass k = a.classification.symbols.at(f);
      pure = pure && k == SymbolClass::Pure;
      flat = flat && (k == SymbolClass::Pure || k == SymbolClass::Flat);
    }
    v.context = pure ? Context::AllPure : flat ? Context::AllFlat : Context::FriendlyNesting;
    v.term = translateConstant(spec, a.translation.gates, c);
    v.trace = collapseTrace(v.term);
    const ProdTerm& last = v.trace.empty() ? v.term : v.trace.back().result;
    v.production = last.value();
    if (v.production.isTop()) v.answer = Answer::Productive;
    else if (v.context == Context::AllPure) v.answer = Answer::NotProductive;
    else if (v.context == Context::AllFlat) v.answer = Answer::NotDOProductive;
    else v.answer = Answer::Unknown;
    a.verdicts.push_back(std::move(v));
  }
  return a;
}

std::vector<Verdict> decide(const StreamSpec& spec, const TranslateOptions& opts) {
  return analyze(spec, std::nullopt, opts).verdicts;
}

}  // namespace prodcheck
