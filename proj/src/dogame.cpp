#include "prodcheck/dogame.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

namespace prodcheck {

namespace {

constexpr std::size_t kNoLink = std::numeric_limits<std::size_t>::max();

Bound plus(std::uint64_t m, const Bound& b) { return {CoNat(m) + b.value, b.atLeast}; }

// The smaller bound; on a tie an exact value wins, since the true minimum
// is then known.
Bound least(const Bound& a, const Bound& b) {
  if (a.value < b.value) return a;
  if (b.value < a.value) return b;
  return {a.value, a.atLeast && b.atLeast};
}

bool dominates(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

class FunctionGame {
 public:
  FunctionGame(const StreamSpec& spec, const Classification& cls, const GameOptions& opts)
      : spec_(spec), cls_(cls), opts_(opts), rng_(opts.seed) {}

  Bound run(const std::string& f, const std::vector<std::uint64_t>& n) {
    const SymbolDecl* d = spec_.sig.find(f);
    if (!d || d->kind() != SymbolKind::StreamFunction)
      throw std::invalid_argument("'" + f + "' is not a stream function");
    if (n.size() != d->streamArity())
      throw std::invalid_argument("expected " + std::to_string(d->streamArity()) + " supplies for '" + f + "'");
    return value(f, n, opts_.prodCap, 0).first;
  }

 private:
  struct Frame {
    std::string f;
    std::vector<std::uint64_t> n;
    std::uint64_t acc;  // production before this call
  };
  using Key = std::tuple<std::string, std::vector<std::uint64_t>, std::uint64_t>;

  const StreamSpec& spec_;
  const Classification& cls_;
  GameOptions opts_;
  std::mt19937_64 rng_;
  std::vector<Frame> stack_;
  std::map<Key, Bound> memo_;

  // Production from f(n) on; the second component is the shallowest stack
  // frame the result depends on.
  std::pair<Bound, std::size_t> value(const std::string& f, const std::vector<std::uint64_t>& n, std::uint64_t budget,
                                      std::uint64_t acc) {
    if (budget == 0 || stack_.size() >= opts_.depthCap) return {Bound::lower(0), kNoLink};
    for (std::size_t d = 0; d < stack_.size(); ++d)
      if (stack_[d].f == f && dominates(n, stack_[d].n))
        // The choices since frame d stay available and repeat forever. A
        // producing cycle is never the opponent's best line, since more
        // supply never lowers the value.
        return {Bound::exact(acc > stack_[d].acc ? CoNat::top() : CoNat(0)), d};
    Key key{f, n, budget};
    if (auto it = memo_.find(key); it != memo_.end()) return {it->second, kNoLink};

    const auto& rules = cls_.rules.at(f);
    std::vector<std::size_t> order(rules.size());
    std::iota(order.begin(), order.end(), 0);
    if (opts_.shuffleRules) std::shuffle(order.begin(), order.end(), rng_);

    const std::size_t depth = stack_.size();
    stack_.push_back({f, n, acc});
    Bound best = Bound::exact(CoNat::top());
    std::size_t low = kNoLink;
    for (std::size_t k : order) {
      const RuleShape& s = cls_.shape(rules[k]);
      if (s.cls != RuleClass::Flat) {
        stack_.pop_back();
        throw std::invalid_argument("the game needs flat rules; '" + f + "' has a nesting rule at line " +
                                    std::to_string(rules[k]->loc.line));
      }
      Bound candidate;
      bool stuck = false;
      for (std::size_t i = 0; i < n.size(); ++i) stuck = stuck || n[i] < s.consume[i];
      if (stuck) {
        candidate = Bound::exact(0);
      } else if (s.produce >= budget) {
        candidate = Bound::lower(s.produce);
      } else if (s.tailIsInput) {
        candidate = Bound::exact(s.produce + n[s.input] - s.consume[s.input]);
      } else {
        std::vector<std::uint64_t> next;
        for (const auto& feed : s.feeds) next.push_back(feed.prefix + n[feed.source] - s.consume[feed.source]);
        auto [r, l] = value(s.callee, next, budget - s.produce, acc + s.produce);
        candidate = plus(s.produce, r);
        low = std::min(low, l);
      }
      best = least(best, candidate);
      if (best == Bound::exact(0)) break;
    }
    stack_.pop_back();
    if (low >= depth) {
      memo_[key] = best;
      low = kNoLink;
    }
    return {best, low};
  }
};

}  // namespace

Bound doLowFunction(const StreamSpec& spec, const Classification& cls, const std::string& f,
                    const std::vector<std::uint64_t>& supplies, const GameOptions& opts) {
  return FunctionGame(spec, cls, opts).run(f, supplies);
}

Bound doLowConstant(const StreamSpec& spec, const Classification& cls, const std::string& constant,
                    const GameOptions& opts) {
  const SymbolDecl* d = spec.sig.find(constant);
  if (!d || d->kind() != SymbolKind::StreamConstant)
    throw std::invalid_argument("'" + constant + "' is not a stream constant");
  // constants the given one depends on
  std::set<std::string> seen{constant};
  std::vector<std::string> constants{constant};
  std::function<void(const Term&)> scan = [&](const Term& t) {
    const SymbolDecl* s = t.kind == Term::Kind::App ? spec.sig.find(t.name) : nullptr;
    if (s && s->kind() == SymbolKind::StreamConstant && seen.insert(t.name).second) constants.push_back(t.name);
    for (const auto& a : t.args) scan(a);
  };
  for (std::size_t k = 0; k < constants.size(); ++k)
    for (const auto* r : spec.rulesFor(constants[k])) scan(r->rhs);
  std::map<std::string, Bound> val;
  for (const auto& c : constants) val[c] = Bound::exact(0);

  auto clamp = [&](Bound b) {
    if (b.value.isFinite() && b.value.value() >= opts.prodCap) return Bound::lower(opts.prodCap);
    return b;
  };
  std::function<Bound(const Term&)> production = [&](const Term& t) -> Bound {
    if (t.kind == Term::Kind::Cons) return clamp(plus(1, production(t.tail())));
    if (t.kind == Term::Kind::Var) throw std::invalid_argument("stream variable '" + t.name + "' in a constant rule");
    const SymbolDecl* s = spec.sig.find(t.name);
    if (s->kind() == SymbolKind::StreamConstant) return val.at(t.name);
    std::vector<std::uint64_t> supplies;
    bool capped = false;
    for (std::size_t i = 0; i < s->args.size(); ++i) {
      if (!s->args[i].stream) continue;
      Bound b = production(t.args[i]);
      const bool full = b.value.isTop() || b.value.value() >= opts.prodCap;
      capped = capped || full || b.atLeast;
      supplies.push_back(full ? opts.prodCap : b.value.value());
    }
    Bound r = doLowFunction(spec, cls, t.name, supplies, opts);
    if (capped && r.value.isFinite()) r.atLeast = true;
    return clamp(r);
  };

  for (std::size_t step = 0; step < opts.stepCap; ++step) {
    std::map<std::string, Bound> next;
    for (const auto& c : constants) {
      Bound b = Bound::exact(CoNat::top());
      for (const auto* r : spec.rulesFor(c)) b = least(b, production(r->rhs));
      next[c] = b;
    }
    if (next == val) return val.at(constant);
    val = std::move(next);
  }
  Bound b = val.at(constant);
  b.atLeast = true;
  return b;
}

}  // namespace prodcheck
