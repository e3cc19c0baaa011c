#pragma once

// Two-sorted stream specifications: a signature of stream and data symbols,
// a stream layer of rules defining stream constants and stream functions,
// and a data layer defining data functions over constructors.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prodcheck {

struct SourceLoc {
  int line = 0;
  int col = 0;
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  SourceLoc loc;
  Severity severity;
  std::string message;

  std::string format(const std::string& file) const;
};

class SpecError : public std::runtime_error {
 public:
  SpecError(SourceLoc loc, const std::string& msg) : std::runtime_error(msg), loc_(loc) {}
  SourceLoc loc() const { return loc_; }
  Diagnostic diagnostic() const { return {loc_, Severity::Error, what()}; }

 private:
  SourceLoc loc_;
};

struct SortRef {
  bool stream = false;
  std::string name;  // element sort for streams, data sort otherwise

  std::string str() const { return stream ? "stream(" + name + ")" : name; }
  friend bool operator==(const SortRef&, const SortRef&) = default;
};

enum class SymbolKind { StreamConstant, StreamFunction, DataSymbol };

struct SymbolDecl {
  std::string name;
  std::vector<SortRef> args;
  SortRef result;
  SourceLoc loc;

  SymbolKind kind() const;
  std::size_t streamArity() const;
  std::string sortString() const;
};

struct Term {
  enum class Kind { Var, App, Cons };
  Kind kind = Kind::Var;
  std::string name;  // Var, App
  std::vector<Term> args;  // App arguments; Cons has head and tail
  bool stream = false;  // sort, filled in by the sort checker
  SourceLoc loc;

  static Term variable(std::string n, SourceLoc l = {});
  static Term app(std::string n, std::vector<Term> a, SourceLoc l = {});
  static Term cons(Term head, Term tail, SourceLoc l = {});

  const Term& head() const { return args.at(0); }
  const Term& tail() const { return args.at(1); }
  std::string str() const;
  void collectVars(std::vector<const Term*>& out) const;
};

bool sameShape(const Term& a, const Term& b);  // structural, ignoring locations

struct Rule {
  Term lhs;
  Term rhs;
  SourceLoc loc;

  const std::string& root() const { return lhs.name; }
  std::string str() const { return lhs.str() + " = " + rhs.str(); }
};

struct Signature {
  std::vector<SymbolDecl> decls;

  const SymbolDecl* find(std::string_view name) const;
  std::vector<std::string> namesOf(SymbolKind k) const;
};

struct StreamSpec {
  Signature sig;
  std::vector<Rule> streamRules;
  std::vector<Rule> dataRules;

  std::vector<const Rule*> rulesFor(std::string_view symbol) const;
  // Data symbols that are not defined by a data-layer rule.
  std::set<std::string> constructors() const;
  std::string str() const;
};

// Parses the signature block and the rules; checks sorts, arities and
// variable binding. Throws SpecError.
StreamSpec parseSpec(std::string_view text);
StreamSpec parseSpecFile(const std::string& path);

bool sameSpec(const StreamSpec& a, const StreamSpec& b);

// Left-linearity, non-overlap, presence of defining rules (errors) and
// exhaustiveness of pattern matching for stream functions (warnings).
std::vector<Diagnostic> validate(const StreamSpec& spec);
bool hasErrors(const std::vector<Diagnostic>& ds);

enum class RuleClass { Flat, Nesting };
enum class SymbolClass { Flat, Pure, FriendlyNesting, Unfriendly };
enum class Guardedness { WeaklyGuarded, Unguarded };

std::string describe(SymbolClass c);
std::string describe(Guardedness g);

// The shape of a stream-function rule
//   f(u_1:s_1, ..., u_k:s_k, data) = w_1:...:w_m:t
// with consume[i] = |u_i| and produce = m. For flat rules the tail t is
// either the input s_input or a call g(d_1:s_pi(1), ..., d_r:s_pi(r)).
struct RuleShape {
  RuleClass cls = RuleClass::Flat;
  std::vector<std::size_t> consume;
  std::size_t produce = 0;
  bool tailIsInput = false;
  std::size_t input = 0;  // 0-based
  std::string callee;     // flat call target, or root of a nesting tail
  struct Feed {
    std::size_t source;  // 0-based argument of the caller
    std::size_t prefix;  // number of data elements put in front
    friend bool operator==(const Feed&, const Feed&) = default;
  };
  std::vector<Feed> feeds;
  std::set<std::string> nestedSymbols;  // stream functions in a nesting tail

  bool sameShapeAs(const RuleShape& o) const;
};

struct Classification {
  std::map<std::string, SymbolClass> symbols;      // stream functions
  std::map<std::string, Guardedness> guardedness;  // stream functions
  std::map<const Rule*, RuleShape> shapes;          // stream-function rules
  std::map<std::string, std::vector<const Rule*>> rules;
  std::set<std::string> friendly;  // functions whose rules all consume <= 1 per argument and produce >= 1

  const RuleShape& shape(const Rule* r) const { return shapes.at(r); }
};

Classification classify(const StreamSpec& spec);

// Stream functions reachable from a stream constant through the rules.
std::set<std::string> reachableFunctions(const StreamSpec& spec, const std::string& constant);

}  // namespace prodcheck
