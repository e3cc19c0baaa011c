#pragma once

// Production terms: sources, variables, pebbles, boxes (IO-term transducers),
// mu-binders and meets, together with the collapse rewrite system that
// reduces every closed term to a single source.

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "prodcheck/conat.hpp"
#include "prodcheck/ioalg.hpp"

namespace prodcheck {

class ProdTerm {
 public:
  enum class Kind { Source, Var, Pebble, Box, Mu, Meet };

  static ProdTerm src(CoNat k);
  static ProdTerm var(std::string name);
  static ProdTerm peb(ProdTerm t);
  // The IO-term is normalized on construction.
  static ProdTerm box(const IOTerm& s, ProdTerm t);
  static ProdTerm mu(std::string name, ProdTerm body);
  static ProdTerm meet(ProdTerm a, ProdTerm b);
  // Right-nested meet of a non-empty list.
  static ProdTerm meetAll(std::vector<ProdTerm> ts);

  Kind kind() const;
  CoNat value() const;              // Source
  const std::string& name() const;  // Var, Mu
  const IOTerm& io() const;         // Box
  const ProdTerm& child() const;    // Pebble, Box, Mu
  const ProdTerm& left() const;     // Meet
  const ProdTerm& right() const;    // Meet

  std::size_t size() const;
  std::string str() const;

  friend bool operator==(const ProdTerm& a, const ProdTerm& b);

 private:
  struct Node;
  explicit ProdTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::set<std::string> freeVariables(const ProdTerm& t);

// r-ary gate: the cap is met with one box per stream argument.
struct Gate {
  CoNat cap = CoNat::top();
  std::vector<IOTerm> args;

  std::string str() const;
  friend bool operator==(const Gate&, const Gate&) = default;
};

// A top cap is left out since it is neutral for meets.
ProdTerm gateApply(const Gate& g, const std::vector<ProdTerm>& args);

enum class CollapseRule { C1, C2, C3, C4, C5, C6, C7, C8, C9 };
std::string ruleName(CollapseRule r);

struct CollapseStep {
  CollapseRule rule;
  ProdTerm result;
};

enum class Strategy { LeftmostOutermost, LeftmostInnermost, Random };

struct CollapseOptions {
  Strategy strategy = Strategy::LeftmostOutermost;
  std::uint64_t seed = 0;
};

// Throws std::invalid_argument on open terms.
std::vector<CollapseStep> collapseTrace(const ProdTerm& t, const CollapseOptions& opts = {});
CoNat collapse(const ProdTerm& t, const CollapseOptions& opts = {});

// Strictly decreases with every collapse step.
std::uint64_t weight(const ProdTerm& t);

// Result of bounded evaluation: either the exact production or a lower bound.
struct Bound {
  CoNat value;
  bool atLeast = false;

  static Bound exact(CoNat v) { return {v, false}; }
  static Bound lower(CoNat v) { return {v, true}; }
  std::string str() const { return (atLeast ? ">=" : "") + value.str(); }
  friend bool operator==(const Bound&, const Bound&) = default;
};

// Reference semantics: mu is evaluated by Kleene iteration from 0, with at
// most iterCap rounds per binder.
Bound denotProduction(const ProdTerm& t, std::size_t iterCap = 200);

}  // namespace prodcheck
