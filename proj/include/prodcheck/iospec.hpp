#pragma once

// Recursion equations over IO-expressions. The generator describes the
// infinite system of a stream specification lazily; finitize extracts a
// finite system with the same solutions for the requested roots.

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "prodcheck/streamspec.hpp"

namespace prodcheck {

struct IOVar {
  enum class Tag { Minus, Plus, Id, Star, StarRule, Arg, ArgRule, Named };
  Tag tag = Tag::Minus;
  std::string f;            // symbol, or the name of a Named variable
  std::size_t i = 0;        // 1-based stream argument
  std::uint64_t q = 0;      // elements already in front of argument i
  std::size_t rule = 0;     // index among the rules of f
  std::uint32_t copy = 0;   // distinguishes context-dependent instances

  static IOVar make(Tag t, std::string f = {}, std::size_t i = 0, std::uint64_t q = 0, std::size_t rule = 0) {
    IOVar v;
    v.tag = t;
    v.f = std::move(f);
    v.i = i;
    v.q = q;
    v.rule = rule;
    return v;
  }
  static IOVar minus() { return make(Tag::Minus); }
  static IOVar plus() { return make(Tag::Plus); }
  static IOVar id() { return make(Tag::Id); }
  static IOVar star(std::string f) { return make(Tag::Star, std::move(f)); }
  static IOVar starRule(std::string f, std::size_t r) { return make(Tag::StarRule, std::move(f), 0, 0, r); }
  static IOVar arg(std::string f, std::size_t i, std::uint64_t q) { return make(Tag::Arg, std::move(f), i, q); }
  static IOVar argRule(std::string f, std::size_t i, std::uint64_t q, std::size_t r) {
    return make(Tag::ArgRule, std::move(f), i, q, r);
  }
  static IOVar named(std::string n) { return make(Tag::Named, std::move(n)); }

  IOVar base() const {
    IOVar v = *this;
    v.copy = 0;
    return v;
  }
  std::string str() const;

  friend bool operator==(const IOVar&, const IOVar&) = default;
  friend auto operator<=>(const IOVar&, const IOVar&) = default;
};

class IOExpr {
 public:
  enum class Kind { Empty, Var, Minus, Plus, Inf };

  IOExpr();  // the empty sequence
  static IOExpr empty() { return IOExpr(); }
  static IOExpr var(IOVar v);
  static IOExpr minus(IOExpr e);
  static IOExpr plus(IOExpr e);
  static IOExpr inf(IOExpr a, IOExpr b);
  // Right-nested infimum; the empty infimum is the all-output variable.
  static IOExpr infAll(std::vector<IOExpr> es);
  // Prefixes e with the symbols of w, leftmost outermost.
  static IOExpr prefixed(const std::string& w, IOExpr e);

  Kind kind() const;
  const IOVar& variable() const;  // Var
  const IOExpr& child() const;    // Minus, Plus
  const IOExpr& left() const;     // Inf
  const IOExpr& right() const;    // Inf

  std::size_t size() const;
  std::string str() const;
  void collectVars(std::vector<IOVar>& out) const;

  friend bool operator==(const IOExpr& a, const IOExpr& b);

 private:
  struct Node;
  explicit IOExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct IOSpec {
  std::map<IOVar, IOExpr> equations;
  std::vector<IOVar> roots;

  const IOExpr& rhs(const IOVar& v) const;
  std::string str() const;
};

// Every cycle through the equations passes a '-' or '+'.
bool weaklyGuarded(const IOSpec& spec);

// Nested listing of the system reachable from root: the first occurrence of
// a variable binds it with mu, later occurrences refer back to it.
std::string dumpSystem(const IOSpec& spec, const IOVar& root);

class NotTranslatable : public std::runtime_error {
 public:
  NotTranslatable(SourceLoc loc, const std::string& msg) : std::runtime_error(msg), loc_(loc) {}
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

class FinitizeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratorOptions {
  // Read a nesting rule's output cap as the identity sequence instead of the
  // all-output sequence. This is how the original tool behaves; it is less
  // precise and only kept for comparison.
  bool nestingStarIdentity = false;
};

// The infinite equation system of a classified stream specification.
class EquationGenerator {
 public:
  EquationGenerator(const StreamSpec& spec, const Classification& cls, GeneratorOptions opts = {});

  // Rhs of any variable; Arg and Star inline their rule equations.
  // Throws NotTranslatable for symbols with unfriendly nesting rules.
  IOExpr equation(const IOVar& v) const;

  const StreamSpec& spec() const { return spec_; }
  const Classification& classification() const { return cls_; }

 private:
  const StreamSpec& spec_;
  const Classification& cls_;
  GeneratorOptions opts_;

  const std::vector<const Rule*>& rulesOf(const std::string& f) const;
  IOExpr starRule(const std::string& f, const Rule* r) const;
  IOExpr argRule(const std::string& f, std::size_t i, std::uint64_t q, const Rule* r) const;
};

// Extracts a finite system for the roots by depth-first expansion. An
// occurrence of X_{h,j,l} below an ancestor X_{h,j,k}, k < l, reached
// without consuming input is identified with that ancestor.
IOSpec finitize(const EquationGenerator& gen, const std::vector<IOVar>& roots, std::size_t cap = 100000);

}  // namespace prodcheck
