#pragma once

// Translation of stream specifications into production terms: stream
// functions become gates, stream constants become closed terms whose
// collapse yields the production.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prodcheck/iospec.hpp"
#include "prodcheck/prodcalc.hpp"
#include "prodcheck/streamspec.hpp"

namespace prodcheck {

using GateTable = std::map<std::string, Gate>;

struct TranslateOptions {
  GeneratorOptions generator;
  std::size_t maxColumns = 10000;
  std::size_t finitizeCap = 100000;
};

struct GateTranslation {
  GateTable gates;
  IOSpec system;  // finite system holding the equations of all roots
  // Per symbol: the root instance of its cap followed by one per argument.
  std::map<std::string, std::vector<IOVar>> roots;
};

// Translates the given stream functions, or all of them when symbols is
// empty. Throws NotTranslatable, FinitizeCapExceeded, RepetitionCapExceeded.
GateTranslation translateSymbols(const StreamSpec& spec, const Classification& cls,
                                 const std::set<std::string>& symbols = {}, const TranslateOptions& opts = {});

// Data arguments are dropped. Throws std::invalid_argument for stream
// variables and functions without a gate.
ProdTerm translateConstant(const StreamSpec& spec, const GateTable& gates, const std::string& constant);

enum class Context { AllPure, AllFlat, FriendlyNesting };
enum class Answer { Productive, NotProductive, NotDOProductive, Unknown };

std::string describe(Context c);
std::string describe(Answer a);

struct Verdict {
  std::string constant;
  CoNat production;
  Context context = Context::AllPure;
  Answer answer = Answer::Unknown;
  ProdTerm term = ProdTerm::src(0);
  std::vector<CollapseStep> trace;

  std::string message() const;
};

struct Analysis {
  Classification classification;
  GateTranslation translation;
  std::vector<Verdict> verdicts;
};

// Analyzes one constant, or every stream constant in declaration order. In
// the latter case the gate table covers all translatable functions.
Analysis analyze(const StreamSpec& spec, const std::optional<std::string>& root = std::nullopt,
                 const TranslateOptions& opts = {});
std::vector<Verdict> decide(const StreamSpec& spec, const TranslateOptions& opts = {});

}  // namespace prodcheck
