#pragma once

// Analysis results as plain data, with text and JSON renderings. The JSON
// form parses back to the same report.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prodcheck/translate.hpp"

namespace prodcheck {

struct SymbolReport {
  std::string name;
  SymbolClass cls = SymbolClass::Flat;
  Guardedness guardedness = Guardedness::WeaklyGuarded;
  friend bool operator==(const SymbolReport&, const SymbolReport&) = default;
};

struct TraceLine {
  std::string rule;
  std::string term;
  friend bool operator==(const TraceLine&, const TraceLine&) = default;
};

struct ConstantReport {
  std::string name;
  CoNat production;
  Answer answer = Answer::Unknown;
  Context context = Context::AllPure;
  std::string term;
  std::vector<TraceLine> trace;

  std::string message() const;
  friend bool operator==(const ConstantReport&, const ConstantReport&) = default;
};

struct Report {
  std::vector<SymbolReport> symbols;
  std::map<std::string, Gate> gates;
  std::vector<ConstantReport> constants;
  friend bool operator==(const Report&, const Report&) = default;
};

Report makeReport(const Analysis& a);

std::string toJson(const Report& r);
// Throws std::invalid_argument on malformed input.
Report reportFromJson(const std::string& text);

// Sections: symbol classes, gates, then one block per constant.
std::string renderText(const Report& r, bool withConstants = true);

// 0 when every constant is productive, 1 when one is not, 2 when one is
// unknown (and none is refuted).
int exitCode(const Report& r);

}  // namespace prodcheck
