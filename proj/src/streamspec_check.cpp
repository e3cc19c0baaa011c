#include <algorithm>
#include <functional>
#include <optional>

#include "prodcheck/streamspec.hpp"

namespace prodcheck {

namespace {

bool overlaps(const Term& a, const Term& b) {
  if (a.kind == Term::Kind::Var || b.kind == Term::Kind::Var) return true;
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!overlaps(a.args[i], b.args[i])) return false;
  return true;
}

// Pattern-matrix exhaustiveness check. A column is typed by a SortRef; the
// stream sort has the single constructor cons.
class Exhaustiveness {
 public:
  Exhaustiveness(const StreamSpec& spec) : spec_(spec), ctors_(spec.constructors()) {}

  std::optional<std::vector<Term>> missing(const std::vector<std::vector<const Term*>>& rows,
                                           const std::vector<SortRef>& types) const {
    if (types.empty()) {
      if (rows.empty()) return std::vector<Term>{};
      return std::nullopt;
    }
    const SortRef& ty = types[0];
    std::vector<SortRef> rest(types.begin() + 1, types.end());
    std::set<std::string> heads;
    for (const auto& r : rows)
      if (r[0]->kind != Term::Kind::Var) heads.insert(r[0]->kind == Term::Kind::Cons ? ":" : r[0]->name);
    auto all = constructorsOf(ty);
    bool complete = !heads.empty() && all && std::all_of(all->begin(), all->end(), [&](const auto& c) {
      return heads.count(c.first);
    });
    if (complete) {
      for (const auto& [name, argTypes] : *all) {
        std::vector<std::vector<const Term*>> spec;
        for (const auto& r : rows) {
          std::vector<const Term*> row;
          if (r[0]->kind == Term::Kind::Var) {
            for (std::size_t i = 0; i < argTypes.size(); ++i) row.push_back(&wildcard());
          } else if ((r[0]->kind == Term::Kind::Cons ? ":" : r[0]->name) == name) {
            for (const auto& a : r[0]->args) row.push_back(&a);
          } else {
            continue;
          }
          row.insert(row.end(), r.begin() + 1, r.end());
          spec.push_back(std::move(row));
        }
        std::vector<SortRef> types2 = argTypes;
        types2.insert(types2.end(), rest.begin(), rest.end());
        if (auto w = missing(spec, types2)) {
          std::vector<Term> args(w->begin(), w->begin() + static_cast<std::ptrdiff_t>(argTypes.size()));
          Term head = name == ":" ? Term::cons(args[0], args[1]) : Term::app(name, args);
          std::vector<Term> out{head};
          out.insert(out.end(), w->begin() + static_cast<std::ptrdiff_t>(argTypes.size()), w->end());
          return out;
        }
      }
      return std::nullopt;
    }
    std::vector<std::vector<const Term*>> def;
    for (const auto& r : rows)
      if (r[0]->kind == Term::Kind::Var) def.emplace_back(r.begin() + 1, r.end());
    auto w = missing(def, rest);
    if (!w) return std::nullopt;
    Term head = hole(ty);
    if (!heads.empty() && all) {
      for (const auto& [name, argTypes] : *all)
        if (!heads.count(name)) {
          std::vector<Term> args;
          for (const auto& at : argTypes) args.push_back(hole(at));
          head = name == ":" ? Term::cons(args[0], args[1]) : Term::app(name, args);
          break;
        }
    }
    w->insert(w->begin(), head);
    return w;
  }

  static Term hole(const SortRef& s) {
    Term t = Term::variable(s.stream ? "sigma" : "_");
    t.stream = s.stream;
    return t;
  }

 private:
  const StreamSpec& spec_;
  std::set<std::string> ctors_;

  static const Term& wildcard() {
    static const Term w = Term::variable("_");
    return w;
  }

  using CtorList = std::vector<std::pair<std::string, std::vector<SortRef>>>;

  // nullopt for sorts whose constructors are unknown (e.g. sort variables)
  std::optional<CtorList> constructorsOf(const SortRef& s) const {
    if (s.stream) return CtorList{{":", {SortRef{false, s.name}, s}}};
    CtorList out;
    for (const auto& d : spec_.sig.decls)
      if (ctors_.count(d.name) && d.result.name == s.name) out.emplace_back(d.name, d.args);
    if (out.empty()) return std::nullopt;
    return out;
  }
};

}  // namespace

std::vector<Diagnostic> validate(const StreamSpec& spec) {
  std::vector<Diagnostic> out;
  for (const auto& d : spec.sig.decls) {
    if (d.kind() == SymbolKind::DataSymbol) continue;
    if (spec.rulesFor(d.name).empty())
      out.push_back({d.loc, Severity::Error,
                     std::string(d.kind() == SymbolKind::StreamConstant ? "stream constant" : "stream function") + " '" +
                         d.name + "' has no defining rule"});
  }
  for (const auto* layer : {&spec.streamRules, &spec.dataRules}) {
    for (const auto& r : *layer) {
      std::vector<const Term*> vars;
      r.lhs.collectVars(vars);
      std::set<std::string> seen;
      for (const auto* v : vars)
        if (!seen.insert(v->name).second)
          out.push_back({v->loc, Severity::Error,
                         "rule is not left-linear: variable '" + v->name + "' occurs more than once"});
    }
    for (std::size_t i = 0; i < layer->size(); ++i)
      for (std::size_t j = i + 1; j < layer->size(); ++j) {
        const Rule &a = (*layer)[i], &b = (*layer)[j];
        if (a.root() == b.root() && overlaps(a.lhs, b.lhs))
          out.push_back({b.loc, Severity::Error,
                         "overlapping rules for '" + a.root() + "' at lines " + std::to_string(a.loc.line) + " and " +
                             std::to_string(b.loc.line)});
      }
  }
  Exhaustiveness ex(spec);
  for (const auto& d : spec.sig.decls) {
    if (d.kind() != SymbolKind::StreamFunction) continue;
    auto rules = spec.rulesFor(d.name);
    if (rules.empty()) continue;
    std::vector<std::vector<const Term*>> rows;
    for (const auto* r : rules) {
      std::vector<const Term*> row;
      for (const auto& a : r->lhs.args) row.push_back(&a);
      rows.push_back(std::move(row));
    }
    if (auto w = ex.missing(rows, d.args))
      out.push_back({d.loc, Severity::Warning,
                     "non-exhaustive patterns for '" + d.name + "': no rule matches " + Term::app(d.name, *w).str()});
  }
  return out;
}

bool hasErrors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string describe(SymbolClass c) {
  switch (c) {
    case SymbolClass::Flat: return "flat";
    case SymbolClass::Pure: return "pure";
    case SymbolClass::FriendlyNesting: return "friendly nesting";
    case SymbolClass::Unfriendly: return "nesting (not friendly)";
  }
  return {};
}

std::string describe(Guardedness g) { return g == Guardedness::WeaklyGuarded ? "weakly guarded" : "unguarded"; }

bool RuleShape::sameShapeAs(const RuleShape& o) const {
  return cls == RuleClass::Flat && o.cls == RuleClass::Flat && consume == o.consume && produce == o.produce &&
         tailIsInput == o.tailIsInput && (tailIsInput ? input == o.input : callee == o.callee && feeds == o.feeds);
}

namespace {

// Splits d_1:...:d_n:rest into n and rest.
const Term& peelCons(const Term& t, std::size_t& n) {
  const Term* cur = &t;
  n = 0;
  while (cur->kind == Term::Kind::Cons) {
    ++n;
    cur = &cur->tail();
  }
  return *cur;
}

void streamFunctionsIn(const Term& t, const Signature& sig, std::set<std::string>& out) {
  if (t.kind == Term::Kind::App) {
    const SymbolDecl* d = sig.find(t.name);
    if (d && d->kind() == SymbolKind::StreamFunction) out.insert(t.name);
  }
  for (const auto& a : t.args) streamFunctionsIn(a, sig, out);
}

RuleShape shapeOf(const Rule& r, const SymbolDecl& decl, const Signature& sig) {
  RuleShape s;
  std::vector<std::string> inputs;
  for (std::size_t i = 0; i < decl.args.size(); ++i) {
    if (!decl.args[i].stream) continue;
    std::size_t n;
    const Term& v = peelCons(r.lhs.args[i], n);
    s.consume.push_back(n);
    inputs.push_back(v.name);
  }
  const Term& tail = peelCons(r.rhs, s.produce);
  auto inputIndex = [&](const Term& v) -> std::optional<std::size_t> {
    if (v.kind != Term::Kind::Var) return std::nullopt;
    auto it = std::find(inputs.begin(), inputs.end(), v.name);
    if (it == inputs.end()) return std::nullopt;
    return static_cast<std::size_t>(it - inputs.begin());
  };
  if (auto i = inputIndex(tail)) {
    s.tailIsInput = true;
    s.input = *i;
    return s;
  }
  const SymbolDecl* g = tail.kind == Term::Kind::App ? sig.find(tail.name) : nullptr;
  if (g && g->kind() == SymbolKind::StreamFunction) {
    s.callee = g->name;
    bool flat = true;
    for (std::size_t j = 0; j < g->args.size() && flat; ++j) {
      if (!g->args[j].stream) continue;
      std::size_t n;
      auto src = inputIndex(peelCons(tail.args[j], n));
      if (src) s.feeds.push_back({*src, n});
      else flat = false;
    }
    if (flat) return s;
  }
  s.cls = RuleClass::Nesting;
  s.feeds.clear();
  streamFunctionsIn(tail, sig, s.nestedSymbols);
  return s;
}

}  // namespace

Classification classify(const StreamSpec& spec) {
  Classification c;
  std::vector<std::string> functions = spec.sig.namesOf(SymbolKind::StreamFunction);
  std::map<std::string, std::set<std::string>> mentions;
  for (const auto& f : functions) {
    const SymbolDecl& d = *spec.sig.find(f);
    auto& rs = c.rules[f];
    for (const auto& r : spec.streamRules)
      if (r.root() == f) {
        rs.push_back(&r);
        c.shapes.emplace(&r, shapeOf(r, d, spec.sig));
        streamFunctionsIn(r.rhs, spec.sig, mentions[f]);
      }
  }

  // Friendly functions: every rule consumes at most one element per argument
  // and produces at least one, and all functions they call are friendly.
  for (const auto& f : functions) {
    bool ok = !c.rules[f].empty();
    for (const auto* r : c.rules[f]) {
      const RuleShape& s = c.shape(r);
      ok = ok && s.produce >= 1 && std::all_of(s.consume.begin(), s.consume.end(), [](std::size_t n) { return n <= 1; });
    }
    if (ok) c.friendly.insert(f);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& f : functions)
      if (c.friendly.count(f))
        for (const auto& g : mentions[f])
          if (!c.friendly.count(g)) {
            c.friendly.erase(f);
            changed = true;
            break;
          }
  }

  for (const auto& f : functions) {
    const auto& rs = c.rules[f];
    bool flat = std::all_of(rs.begin(), rs.end(), [&](const Rule* r) { return c.shape(r).cls == RuleClass::Flat; });
    SymbolClass cls;
    if (flat) {
      bool pure = !rs.empty() && std::all_of(rs.begin(), rs.end(), [&](const Rule* r) {
        return c.shape(r).sameShapeAs(c.shape(rs.front()));
      });
      cls = pure ? SymbolClass::Pure : SymbolClass::Flat;
    } else {
      cls = c.friendly.count(f) ? SymbolClass::FriendlyNesting : SymbolClass::Unfriendly;
    }
    c.symbols[f] = cls;
  }

  // f depends on g without producing anything first: f is unguarded when
  // such a chain can run forever.
  std::map<std::string, std::set<std::string>> silent;
  for (const auto& f : functions)
    for (const auto* r : c.rules[f]) {
      const RuleShape& s = c.shape(r);
      if (s.produce == 0 && !s.tailIsInput && !s.callee.empty()) silent[f].insert(s.callee);
    }
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::set<std::string> unguarded;
  std::function<bool(const std::string&)> visit = [&](const std::string& f) -> bool {
    int& st = state[f];
    if (st == 1) return true;
    if (st == 2) return unguarded.count(f) > 0;
    st = 1;
    bool bad = false;
    for (const auto& g : silent[f]) bad = visit(g) || bad;
    state[f] = 2;
    if (bad) unguarded.insert(f);
    return bad;
  };
  for (const auto& f : functions) visit(f);
  for (const auto& f : functions) c.guardedness[f] = unguarded.count(f) ? Guardedness::Unguarded : Guardedness::WeaklyGuarded;
  return c;
}

std::set<std::string> reachableFunctions(const StreamSpec& spec, const std::string& constant) {
  std::set<std::string> seen{constant}, functions;
  std::vector<std::string> work{constant};
  std::function<void(const Term&)> scan = [&](const Term& t) {
    if (t.kind == Term::Kind::App) {
      const SymbolDecl* d = spec.sig.find(t.name);
      if (d && d->result.stream && seen.insert(t.name).second) {
        work.push_back(t.name);
        if (d->kind() == SymbolKind::StreamFunction) functions.insert(t.name);
      }
    }
    for (const auto& a : t.args) scan(a);
  };
  while (!work.empty()) {
    std::string s = work.back();
    work.pop_back();
    for (const auto& r : spec.streamRules)
      if (r.root() == s) scan(r.rhs);
  }
  return functions;
}

}  // namespace prodcheck
