#include "prodcheck/prodcalc.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>

namespace prodcheck {

struct ProdTerm::Node {
  Kind kind;
  CoNat value;
  std::string name;
  IOTerm io;
  std::vector<ProdTerm> kids;
};

namespace {

const IOTerm& pebbleTerm() {
  static const IOTerm t = normalize(IOTerm::rational("+", "-+"));
  return t;
}

}  // namespace

ProdTerm ProdTerm::src(CoNat k) { return ProdTerm(std::make_shared<const Node>(Node{Kind::Source, k, {}, {}, {}})); }

ProdTerm ProdTerm::var(std::string name) {
  return ProdTerm(std::make_shared<const Node>(Node{Kind::Var, {}, std::move(name), {}, {}}));
}

ProdTerm ProdTerm::peb(ProdTerm t) {
  return ProdTerm(std::make_shared<const Node>(Node{Kind::Pebble, {}, {}, {}, {std::move(t)}}));
}

ProdTerm ProdTerm::box(const IOTerm& s, ProdTerm t) {
  return ProdTerm(std::make_shared<const Node>(Node{Kind::Box, {}, {}, normalize(s), {std::move(t)}}));
}

ProdTerm ProdTerm::mu(std::string name, ProdTerm body) {
  return ProdTerm(std::make_shared<const Node>(Node{Kind::Mu, {}, std::move(name), {}, {std::move(body)}}));
}

ProdTerm ProdTerm::meet(ProdTerm a, ProdTerm b) {
  return ProdTerm(std::make_shared<const Node>(Node{Kind::Meet, {}, {}, {}, {std::move(a), std::move(b)}}));
}

ProdTerm ProdTerm::meetAll(std::vector<ProdTerm> ts) {
  if (ts.empty()) throw std::invalid_argument("meet of an empty list");
  ProdTerm acc = ts.back();
  for (std::size_t i = ts.size() - 1; i-- > 0;) acc = meet(ts[i], acc);
  return acc;
}

ProdTerm::Kind ProdTerm::kind() const { return node_->kind; }
CoNat ProdTerm::value() const { return node_->value; }
const std::string& ProdTerm::name() const { return node_->name; }
const IOTerm& ProdTerm::io() const { return node_->io; }
const ProdTerm& ProdTerm::child() const { return node_->kids.at(0); }
const ProdTerm& ProdTerm::left() const { return node_->kids.at(0); }
const ProdTerm& ProdTerm::right() const { return node_->kids.at(1); }

std::size_t ProdTerm::size() const {
  std::size_t n = 1;
  for (const auto& k : node_->kids) n += k.size();
  return n;
}

std::string ProdTerm::str() const {
  switch (kind()) {
    case Kind::Source: return "src(" + value().str() + ")";
    case Kind::Var: return name();
    case Kind::Pebble: return "peb(" + child().str() + ")";
    case Kind::Box: return "box[" + io().str() + "](" + child().str() + ")";
    case Kind::Mu: return "mu " + name() + ". " + child().str();
    case Kind::Meet: return "meet(" + left().str() + ", " + right().str() + ")";
  }
  return {};
}

bool operator==(const ProdTerm& a, const ProdTerm& b) {
  if (a.node_ == b.node_) return true;
  const auto &x = *a.node_, &y = *b.node_;
  if (x.kind != y.kind || x.kids.size() != y.kids.size()) return false;
  switch (x.kind) {
    case ProdTerm::Kind::Source:
      if (!(x.value == y.value)) return false;
      break;
    case ProdTerm::Kind::Var:
    case ProdTerm::Kind::Mu:
      if (x.name != y.name) return false;
      break;
    case ProdTerm::Kind::Box:
      if (!(x.io == y.io)) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!(x.kids[i] == y.kids[i])) return false;
  return true;
}

namespace {

void collectFree(const ProdTerm& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind()) {
    case ProdTerm::Kind::Source: return;
    case ProdTerm::Kind::Var:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case ProdTerm::Kind::Pebble:
    case ProdTerm::Kind::Box: collectFree(t.child(), bound, out); return;
    case ProdTerm::Kind::Mu: {
      bool fresh = bound.insert(t.name()).second;
      collectFree(t.child(), bound, out);
      if (fresh) bound.erase(t.name());
      return;
    }
    case ProdTerm::Kind::Meet:
      collectFree(t.left(), bound, out);
      collectFree(t.right(), bound, out);
      return;
  }
}

bool occursFree(const std::string& x, const ProdTerm& t) {
  std::set<std::string> bound, out;
  collectFree(t, bound, out);
  return out.count(x) > 0;
}

}  // namespace

std::set<std::string> freeVariables(const ProdTerm& t) {
  std::set<std::string> bound, out;
  collectFree(t, bound, out);
  return out;
}

std::string Gate::str() const {
  std::string s = "[" + cap.str() + "](";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + args[i].str();
  return s + ")";
}

ProdTerm gateApply(const Gate& g, const std::vector<ProdTerm>& args) {
  if (args.size() != g.args.size()) throw std::invalid_argument("gate arity mismatch");
  std::vector<ProdTerm> parts;
  if (g.cap.isFinite()) parts.push_back(ProdTerm::src(g.cap));
  for (std::size_t i = 0; i < args.size(); ++i) parts.push_back(ProdTerm::box(g.args[i], args[i]));
  if (parts.empty()) return ProdTerm::src(CoNat::top());
  return ProdTerm::meetAll(std::move(parts));
}

std::string ruleName(CollapseRule r) { return "C" + std::to_string(static_cast<int>(r) + 1); }

namespace {

using Kind = ProdTerm::Kind;

// Applies a collapse rule at the root of t, if one matches.
std::optional<CollapseStep> rootStep(const ProdTerm& t) {
  switch (t.kind()) {
    case Kind::Pebble: return CollapseStep{CollapseRule::C1, ProdTerm::box(pebbleTerm(), t.child())};
    case Kind::Box: {
      const ProdTerm& c = t.child();
      if (c.kind() == Kind::Box) return CollapseStep{CollapseRule::C2, ProdTerm::box(compose(t.io(), c.io()), c.child())};
      if (c.kind() == Kind::Meet)
        return CollapseStep{CollapseRule::C3, ProdTerm::meet(ProdTerm::box(t.io(), c.left()), ProdTerm::box(t.io(), c.right()))};
      if (c.kind() == Kind::Source) return CollapseStep{CollapseRule::C8, ProdTerm::src(interpret(t.io(), c.value()))};
      return std::nullopt;
    }
    case Kind::Mu: {
      const ProdTerm& b = t.child();
      const std::string& x = t.name();
      if (b.kind() == Kind::Var && b.name() == x) return CollapseStep{CollapseRule::C9, ProdTerm::src(0)};
      if (b.kind() == Kind::Box && b.child().kind() == Kind::Var && b.child().name() == x)
        return CollapseStep{CollapseRule::C6, ProdTerm::src(leastFixedPoint(b.io()))};
      if (!occursFree(x, b)) return CollapseStep{CollapseRule::C5, b};
      if (b.kind() == Kind::Meet)
        return CollapseStep{CollapseRule::C4, ProdTerm::meet(ProdTerm::mu(x, b.left()), ProdTerm::mu(x, b.right()))};
      return std::nullopt;
    }
    case Kind::Meet:
      if (t.left().kind() == Kind::Source && t.right().kind() == Kind::Source)
        return CollapseStep{CollapseRule::C7, ProdTerm::src(min(t.left().value(), t.right().value()))};
      return std::nullopt;
    default: return std::nullopt;
  }
}

using Path = std::vector<int>;

void redexes(const ProdTerm& t, Path& path, bool innermost, std::vector<Path>& out) {
  bool here = rootStep(t).has_value();
  if (here && !innermost) out.push_back(path);
  if (t.kind() == Kind::Pebble || t.kind() == Kind::Box || t.kind() == Kind::Mu) {
    path.push_back(0);
    redexes(t.child(), path, innermost, out);
    path.pop_back();
  } else if (t.kind() == Kind::Meet) {
    for (int i = 0; i < 2; ++i) {
      path.push_back(i);
      redexes(i == 0 ? t.left() : t.right(), path, innermost, out);
      path.pop_back();
    }
  }
  if (here && innermost) out.push_back(path);
}

ProdTerm rebuild(const ProdTerm& t, ProdTerm replacement) {
  switch (t.kind()) {
    case Kind::Pebble: return ProdTerm::peb(std::move(replacement));
    case Kind::Box: return ProdTerm::box(t.io(), std::move(replacement));
    case Kind::Mu: return ProdTerm::mu(t.name(), std::move(replacement));
    default: throw std::logic_error("rebuild on non-unary node");
  }
}

CollapseStep stepAt(const ProdTerm& t, const Path& path, std::size_t depth) {
  if (depth == path.size()) return *rootStep(t);
  if (t.kind() == Kind::Meet) {
    CollapseStep s = stepAt(path[depth] == 0 ? t.left() : t.right(), path, depth + 1);
    s.result = path[depth] == 0 ? ProdTerm::meet(s.result, t.right()) : ProdTerm::meet(t.left(), s.result);
    return s;
  }
  CollapseStep s = stepAt(t.child(), path, depth + 1);
  s.result = rebuild(t, s.result);
  return s;
}

}  // namespace

std::vector<CollapseStep> collapseTrace(const ProdTerm& t, const CollapseOptions& opts) {
  if (!freeVariables(t).empty()) throw std::invalid_argument("open term: " + t.str());
  std::mt19937_64 rng(opts.seed);
  std::vector<CollapseStep> trace;
  ProdTerm cur = t;
  while (true) {
    std::vector<Path> found;
    Path path;
    // Outermost and random choices both enumerate in pre-order.
    redexes(cur, path, opts.strategy == Strategy::LeftmostInnermost, found);
    if (found.empty()) break;
    std::size_t pick = 0;
    if (opts.strategy == Strategy::Random) pick = std::uniform_int_distribution<std::size_t>(0, found.size() - 1)(rng);
    CollapseStep s = stepAt(cur, found[pick], 0);
    cur = s.result;
    trace.push_back(std::move(s));
  }
  if (cur.kind() != Kind::Source) throw std::logic_error("collapse got stuck at " + cur.str());
  return trace;
}

CoNat collapse(const ProdTerm& t, const CollapseOptions& opts) {
  auto trace = collapseTrace(t, opts);
  return trace.empty() ? t.value() : trace.back().result.value();
}

std::uint64_t weight(const ProdTerm& t) {
  switch (t.kind()) {
    case Kind::Source:
    case Kind::Var: return 1;
    case Kind::Pebble: return 2 * weight(t.child()) + 1;
    case Kind::Box:
    case Kind::Mu: return 2 * weight(t.child());
    case Kind::Meet: return weight(t.left()) + weight(t.right()) + 1;
  }
  return 0;
}

namespace {

// Values past this bound are only tracked as lower bounds; Kleene iterates
// may grow geometrically.
constexpr std::uint64_t kLarge = std::uint64_t(1) << 32;

Bound clampBound(Bound b) {
  if (b.value.isFinite() && b.value.value() > kLarge) return Bound::lower(kLarge);
  return b;
}

Bound minBound(Bound a, Bound b) {
  if (!a.atLeast && !b.atLeast) return Bound::exact(min(a.value, b.value));
  if (!a.atLeast && a.value <= b.value) return a;
  if (!b.atLeast && b.value <= a.value) return b;
  return Bound::lower(min(a.value, b.value));
}

Bound eval(const ProdTerm& t, std::map<std::string, Bound>& env, std::size_t cap) {
  switch (t.kind()) {
    case Kind::Source: return Bound::exact(t.value());
    case Kind::Var: {
      auto it = env.find(t.name());
      if (it == env.end()) throw std::invalid_argument("open term: free " + t.name());
      return it->second;
    }
    case Kind::Pebble: {
      Bound b = eval(t.child(), env, cap);
      return clampBound({b.value + CoNat(1), b.atLeast});
    }
    case Kind::Box: {
      Bound b = eval(t.child(), env, cap);
      return clampBound({interpret(t.io(), b.value), b.atLeast});
    }
    case Kind::Meet: return minBound(eval(t.left(), env, cap), eval(t.right(), env, cap));
    case Kind::Mu: {
      std::optional<Bound> saved;
      if (auto it = env.find(t.name()); it != env.end()) saved = it->second;
      Bound x = Bound::exact(0);
      Bound result = Bound::lower(0);
      bool settled = false;
      for (std::size_t k = 0; k < cap; ++k) {
        env[t.name()] = x;
        Bound y = eval(t.child(), env, cap);
        if (y == x || (!y.atLeast && y.value.isTop())) {
          result = y;
          settled = true;
          break;
        }
        x = y;
      }
      if (!settled) result = Bound::lower(x.value);
      if (saved) env[t.name()] = *saved;
      else env.erase(t.name());
      return result;
    }
  }
  return {};
}

}  // namespace

Bound denotProduction(const ProdTerm& t, std::size_t iterCap) {
  std::map<std::string, Bound> env;
  return eval(t, env, iterCap);
}

}  // namespace prodcheck
