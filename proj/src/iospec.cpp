#include "prodcheck/iospec.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace prodcheck {

std::string IOVar::str() const {
  std::string s;
  switch (tag) {
    case Tag::Minus: s = "X_-"; break;
    case Tag::Plus: s = "X_+"; break;
    case Tag::Id: s = "X_id"; break;
    case Tag::Star: s = "X_{" + f + ",*}"; break;
    case Tag::StarRule: s = "X_{" + f + ",*," + std::to_string(rule + 1) + "}"; break;
    case Tag::Arg: s = "X_{" + f + "," + std::to_string(i) + "," + std::to_string(q) + "}"; break;
    case Tag::ArgRule:
      s = "X_{" + f + "," + std::to_string(i) + "," + std::to_string(q) + "," + std::to_string(rule + 1) + "}";
      break;
    case Tag::Named: s = f; break;
  }
  if (copy > 0) s += "#" + std::to_string(copy + 1);
  return s;
}

struct IOExpr::Node {
  Kind kind;
  IOVar var;
  std::vector<IOExpr> kids;
};

IOExpr::IOExpr() : node_(std::make_shared<const Node>(Node{Kind::Empty, {}, {}})) {}

IOExpr IOExpr::var(IOVar v) { return IOExpr(std::make_shared<const Node>(Node{Kind::Var, std::move(v), {}})); }
IOExpr IOExpr::minus(IOExpr e) { return IOExpr(std::make_shared<const Node>(Node{Kind::Minus, {}, {std::move(e)}})); }
IOExpr IOExpr::plus(IOExpr e) { return IOExpr(std::make_shared<const Node>(Node{Kind::Plus, {}, {std::move(e)}})); }
IOExpr IOExpr::inf(IOExpr a, IOExpr b) {
  return IOExpr(std::make_shared<const Node>(Node{Kind::Inf, {}, {std::move(a), std::move(b)}}));
}

IOExpr IOExpr::infAll(std::vector<IOExpr> es) {
  if (es.empty()) return var(IOVar::plus());
  IOExpr acc = es.back();
  for (std::size_t k = es.size() - 1; k-- > 0;) acc = inf(es[k], acc);
  return acc;
}

IOExpr IOExpr::prefixed(const std::string& w, IOExpr e) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) e = *it == '-' ? minus(e) : plus(e);
  return e;
}

IOExpr::Kind IOExpr::kind() const { return node_->kind; }
const IOVar& IOExpr::variable() const { return node_->var; }
const IOExpr& IOExpr::child() const { return node_->kids.at(0); }
const IOExpr& IOExpr::left() const { return node_->kids.at(0); }
const IOExpr& IOExpr::right() const { return node_->kids.at(1); }

std::size_t IOExpr::size() const {
  std::size_t n = 1;
  for (const auto& k : node_->kids) n += k.size();
  return n;
}

std::string IOExpr::str() const {
  switch (kind()) {
    case Kind::Empty: return "eps";
    case Kind::Var: return variable().str();
    case Kind::Minus: return "-" + child().str();
    case Kind::Plus: return "+" + child().str();
    case Kind::Inf: {
      std::string s = "(" + left().str();
      const IOExpr* cur = &right();
      for (; cur->kind() == Kind::Inf; cur = &cur->right()) s += " /\\ " + cur->left().str();
      return s + " /\\ " + cur->str() + ")";
    }
  }
  return {};
}

void IOExpr::collectVars(std::vector<IOVar>& out) const {
  if (kind() == Kind::Var) out.push_back(variable());
  for (const auto& k : node_->kids) k.collectVars(out);
}

bool operator==(const IOExpr& a, const IOExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.node_->kids.size() != b.node_->kids.size()) return false;
  if (a.kind() == IOExpr::Kind::Var && !(a.variable() == b.variable())) return false;
  for (std::size_t k = 0; k < a.node_->kids.size(); ++k)
    if (!(a.node_->kids[k] == b.node_->kids[k])) return false;
  return true;
}

const IOExpr& IOSpec::rhs(const IOVar& v) const {
  auto it = equations.find(v);
  if (it == equations.end()) throw std::out_of_range("no equation for " + v.str());
  return it->second;
}

std::string IOSpec::str() const {
  std::string s;
  for (const auto& [v, e] : equations) s += v.str() + " = " + e.str() + "\n";
  return s;
}

namespace {

void unguardedVars(const IOExpr& e, std::vector<IOVar>& out) {
  switch (e.kind()) {
    case IOExpr::Kind::Var: out.push_back(e.variable()); break;
    case IOExpr::Kind::Inf:
      unguardedVars(e.left(), out);
      unguardedVars(e.right(), out);
      break;
    default: break;
  }
}

}  // namespace

bool weaklyGuarded(const IOSpec& spec) {
  std::map<IOVar, int> state;  // 1 on stack, 2 done
  std::function<bool(const IOVar&)> acyclic = [&](const IOVar& v) {
    int& st = state[v];
    if (st == 1) return false;
    if (st == 2) return true;
    st = 1;
    std::vector<IOVar> next;
    unguardedVars(spec.rhs(v), next);
    for (const auto& w : next)
      if (!acyclic(w)) return false;
    state[v] = 2;
    return true;
  };
  for (const auto& [v, _] : spec.equations)
    if (!acyclic(v)) return false;
  return true;
}

std::string dumpSystem(const IOSpec& spec, const IOVar& root) {
  std::set<IOVar> bound;
  std::function<std::string(const IOVar&)> variable;
  std::function<std::string(const IOExpr&)> expr = [&](const IOExpr& e) -> std::string {
    switch (e.kind()) {
      case IOExpr::Kind::Empty: return "eps";
      case IOExpr::Kind::Var: return variable(e.variable());
      case IOExpr::Kind::Minus: return "-" + expr(e.child());
      case IOExpr::Kind::Plus: return "+" + expr(e.child());
      case IOExpr::Kind::Inf: {
        std::string s = "/\\ { " + expr(e.left());
        const IOExpr* cur = &e.right();
        for (; cur->kind() == IOExpr::Kind::Inf; cur = &cur->right()) s += ", " + expr(cur->left());
        return s + ", " + expr(*cur) + " }";
      }
    }
    return {};
  };
  variable = [&](const IOVar& v) -> std::string {
    if (!bound.insert(v).second) return v.str();
    return "mu " + v.str() + ". " + expr(spec.rhs(v));
  };
  return variable(root);
}

EquationGenerator::EquationGenerator(const StreamSpec& spec, const Classification& cls, GeneratorOptions opts)
    : spec_(spec), cls_(cls), opts_(opts) {}

const std::vector<const Rule*>& EquationGenerator::rulesOf(const std::string& f) const {
  auto it = cls_.rules.find(f);
  if (it == cls_.rules.end()) throw std::invalid_argument("'" + f + "' is not a stream function");
  auto sc = cls_.symbols.find(f);
  if (sc != cls_.symbols.end() && sc->second == SymbolClass::Unfriendly) {
    for (const auto* r : it->second)
      if (cls_.shape(r).cls == RuleClass::Nesting)
        throw NotTranslatable(r->loc, "'" + f + "' is not translatable: the nesting rule at line " +
                              std::to_string(r->loc.line) + " is not friendly: " + r->str());
    throw NotTranslatable(spec_.sig.find(f)->loc, "'" + f + "' is not translatable: it calls a stream function that is not friendly");
  }
  return it->second;
}

IOExpr EquationGenerator::starRule(const std::string&, const Rule* r) const {
  const RuleShape& s = cls_.shape(r);
  if (s.cls == RuleClass::Nesting)
    return IOExpr::var(opts_.nestingStarIdentity ? IOVar::id() : IOVar::plus());
  if (s.tailIsInput) return IOExpr::var(IOVar::plus());
  return IOExpr::prefixed(std::string(s.produce, '+'), IOExpr::var(IOVar::star(s.callee)));
}

IOExpr EquationGenerator::argRule(const std::string&, std::size_t i, std::uint64_t q, const Rule* r) const {
  const RuleShape& s = cls_.shape(r);
  const std::uint64_t u = s.consume.at(i - 1);
  const std::uint64_t p = u > q ? u - q : 0;
  const std::uint64_t rest = q > u ? q - u : 0;
  IOExpr body;
  if (s.cls == RuleClass::Nesting) {
    body = IOExpr::var(IOVar::id());
  } else if (s.tailIsInput) {
    body = s.input == i - 1 ? IOExpr::prefixed(std::string(rest, '+'), IOExpr::var(IOVar::id()))
                            : IOExpr::var(IOVar::plus());
  } else {
    std::vector<IOExpr> parts;
    for (std::size_t j = 0; j < s.feeds.size(); ++j)
      if (s.feeds[j].source == i - 1) parts.push_back(IOExpr::var(IOVar::arg(s.callee, j + 1, rest + s.feeds[j].prefix)));
    body = IOExpr::infAll(std::move(parts));
  }
  return IOExpr::prefixed(std::string(p, '-') + std::string(s.produce, '+'), body);
}

IOExpr EquationGenerator::equation(const IOVar& v) const {
  auto unguarded = [&](const std::string& f) {
    return cls_.guardedness.at(f) == Guardedness::Unguarded;
  };
  auto checkArg = [&](const std::string& f, std::size_t i) {
    const SymbolDecl* d = spec_.sig.find(f);
    if (i < 1 || i > d->streamArity())
      throw std::invalid_argument("argument " + std::to_string(i) + " out of range for '" + f + "'");
  };
  switch (v.tag) {
    case IOVar::Tag::Minus: return IOExpr::empty();
    case IOVar::Tag::Plus: return IOExpr::plus(IOExpr::var(IOVar::plus()));
    case IOVar::Tag::Id: return IOExpr::minus(IOExpr::plus(IOExpr::var(IOVar::id())));
    case IOVar::Tag::Star: {
      const auto& rules = rulesOf(v.f);
      if (unguarded(v.f)) return IOExpr::var(IOVar::minus());
      std::vector<IOExpr> parts;
      for (const auto* r : rules) parts.push_back(starRule(v.f, r));
      return IOExpr::infAll(std::move(parts));
    }
    case IOVar::Tag::StarRule: {
      const auto& rules = rulesOf(v.f);
      if (unguarded(v.f)) return IOExpr::var(IOVar::minus());
      return starRule(v.f, rules.at(v.rule));
    }
    case IOVar::Tag::Arg: {
      const auto& rules = rulesOf(v.f);
      checkArg(v.f, v.i);
      if (unguarded(v.f)) return IOExpr::var(IOVar::minus());
      std::vector<IOExpr> parts;
      for (const auto* r : rules) parts.push_back(argRule(v.f, v.i, v.q, r));
      return IOExpr::infAll(std::move(parts));
    }
    case IOVar::Tag::ArgRule: {
      const auto& rules = rulesOf(v.f);
      checkArg(v.f, v.i);
      if (unguarded(v.f)) return IOExpr::var(IOVar::minus());
      return argRule(v.f, v.i, v.q, rules.at(v.rule));
    }
    case IOVar::Tag::Named: break;
  }
  throw std::invalid_argument("no generated equation for " + v.str());
}

namespace {

class Finitizer {
 public:
  Finitizer(const EquationGenerator& gen, std::size_t cap) : gen_(gen), cap_(cap) {}

  IOSpec run(const std::vector<IOVar>& roots) {
    for (const auto& r : roots) out_.roots.push_back(resolveRoot(r.base()));
    return std::move(out_);
  }

 private:
  struct Frame {
    IOVar base;
    IOVar inst;
    std::size_t depth;
    std::size_t low;  // shallowest frame that the instance refers back to
    bool minus;       // the path to the occurrence being resolved has a '-'
  };

  const EquationGenerator& gen_;
  std::size_t cap_;
  IOSpec out_;
  std::map<IOVar, IOVar> clean_;  // context-free instances
  std::map<IOVar, std::uint32_t> copies_;
  std::vector<Frame> stack_;

  IOVar resolveRoot(const IOVar& v) {
    auto it = clean_.find(v);
    return it != clean_.end() ? it->second : expand(v);
  }

  IOVar expand(const IOVar& v) {
    if (out_.equations.size() >= cap_) throw FinitizeCapExceeded("finitization cap exceeded");
    IOVar inst = v;
    inst.copy = copies_[v]++;
    out_.equations.emplace(inst, IOExpr());
    const std::size_t depth = stack_.size();
    stack_.push_back({v, inst, depth, depth, false});
    IOExpr rhs = rewrite(gen_.equation(v), false);
    const Frame done = stack_.back();
    stack_.pop_back();
    out_.equations[inst] = rhs;
    if (done.low >= depth) clean_.emplace(v, inst);
    if (!stack_.empty()) stack_.back().low = std::min(stack_.back().low, done.low);
    return inst;
  }

  IOExpr rewrite(const IOExpr& e, bool minus) {
    switch (e.kind()) {
      case IOExpr::Kind::Empty: return e;
      case IOExpr::Kind::Var: return IOExpr::var(resolve(e.variable(), minus));
      case IOExpr::Kind::Minus: return IOExpr::minus(rewrite(e.child(), true));
      case IOExpr::Kind::Plus: return IOExpr::plus(rewrite(e.child(), minus));
      case IOExpr::Kind::Inf: {
        IOExpr l = rewrite(e.left(), minus);
        return IOExpr::inf(l, rewrite(e.right(), minus));
      }
    }
    return e;
  }

  IOVar resolve(const IOVar& k, bool minus) {
    stack_.back().minus = minus;
    auto refer = [&](const Frame& target) {
      stack_.back().low = std::min(stack_.back().low, target.depth);
      return target.inst;
    };
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
      if (it->base == k) return refer(*it);
    if (k.tag == IOVar::Tag::Arg) {
      for (auto it = stack_.rbegin(); it != stack_.rend() && !it->minus; ++it)
        if (it->base.tag == IOVar::Tag::Arg && it->base.f == k.f && it->base.i == k.i && it->base.q < k.q)
          return refer(*it);
    }
    if (auto it = clean_.find(k); it != clean_.end()) return it->second;
    return expand(k);
  }
};

}  // namespace

IOSpec finitize(const EquationGenerator& gen, const std::vector<IOVar>& roots, std::size_t cap) {
  return Finitizer(gen, cap).run(roots);
}

}  // namespace prodcheck
