#include "prodcheck/report.hpp"

#include <sstream>

#include <json.hpp>

namespace prodcheck {

namespace {

using nlohmann::json;

template <typename E, std::size_t N>
E fromDescription(const std::string& text, const E (&values)[N], const char* what) {
  for (E v : values)
    if (describe(v) == text) return v;
  throw std::invalid_argument(std::string("unknown ") + what + " '" + text + "'");
}

constexpr SymbolClass kClasses[] = {SymbolClass::Flat, SymbolClass::Pure, SymbolClass::FriendlyNesting,
                                    SymbolClass::Unfriendly};
constexpr Guardedness kGuardedness[] = {Guardedness::WeaklyGuarded, Guardedness::Unguarded};
constexpr Answer kAnswers[] = {Answer::Productive, Answer::NotProductive, Answer::NotDOProductive, Answer::Unknown};
constexpr Context kContexts[] = {Context::AllPure, Context::AllFlat, Context::FriendlyNesting};

json conatJson(CoNat c) { return c.isTop() ? json("inf") : json(c.value()); }

CoNat conatFrom(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return CoNat::top();
  if (j.is_number_unsigned()) return CoNat(j.get<std::uint64_t>());
  throw std::invalid_argument("expected a natural number or \"inf\"");
}

}  // namespace

std::string ConstantReport::message() const {
  Verdict v;
  v.constant = name;
  v.production = production;
  v.answer = answer;
  return v.message();
}

Report makeReport(const Analysis& a) {
  Report r;
  for (const auto& [f, c] : a.classification.symbols) r.symbols.push_back({f, c, a.classification.guardedness.at(f)});
  r.gates = a.translation.gates;
  for (const auto& v : a.verdicts) {
    ConstantReport c{v.constant, v.production, v.answer, v.context, v.term.str(), {}};
    for (const auto& step : v.trace) c.trace.push_back({ruleName(step.rule), step.result.str()});
    r.constants.push_back(std::move(c));
  }
  return r;
}

std::string toJson(const Report& r) {
  json j;
  j["symbols"] = json::array();
  for (const auto& s : r.symbols)
    j["symbols"].push_back({{"name", s.name}, {"class", describe(s.cls)}, {"guardedness", describe(s.guardedness)}});
  j["gates"] = json::object();
  for (const auto& [f, g] : r.gates) {
    json args = json::array();
    for (const auto& t : g.args) args.push_back(t.str());
    j["gates"][f] = {{"cap", conatJson(g.cap)}, {"args", args}};
  }
  j["constants"] = json::array();
  for (const auto& c : r.constants) {
    json trace = json::array();
    for (const auto& t : c.trace) trace.push_back({{"rule", t.rule}, {"term", t.term}});
    j["constants"].push_back({{"name", c.name},
                              {"production", conatJson(c.production)},
                              {"verdict", describe(c.answer)},
                              {"context", describe(c.context)},
                              {"message", c.message()},
                              {"term", c.term},
                              {"trace", trace}});
  }
  return j.dump(2) + "\n";
}

Report reportFromJson(const std::string& text) {
  try {
    const json j = json::parse(text);
    Report r;
    for (const auto& s : j.at("symbols"))
      r.symbols.push_back({s.at("name").get<std::string>(),
                           fromDescription(s.at("class").get<std::string>(), kClasses, "symbol class"),
                           fromDescription(s.at("guardedness").get<std::string>(), kGuardedness, "guardedness")});
    for (const auto& [f, g] : j.at("gates").items()) {
      Gate gate;
      gate.cap = conatFrom(g.at("cap"));
      for (const auto& t : g.at("args")) gate.args.push_back(IOTerm::parse(t.get<std::string>()));
      r.gates[f] = gate;
    }
    for (const auto& c : j.at("constants")) {
      ConstantReport cr;
      cr.name = c.at("name").get<std::string>();
      cr.production = conatFrom(c.at("production"));
      cr.answer = fromDescription(c.at("verdict").get<std::string>(), kAnswers, "verdict");
      cr.context = fromDescription(c.at("context").get<std::string>(), kContexts, "context");
      cr.term = c.at("term").get<std::string>();
      for (const auto& t : c.at("trace")) cr.trace.push_back({t.at("rule").get<std::string>(), t.at("term").get<std::string>()});
      r.constants.push_back(std::move(cr));
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

std::string renderText(const Report& r, bool withConstants) {
  std::ostringstream os;
  os << "Symbols:\n";
  for (const auto& s : r.symbols) os << "  " << s.name << " : " << describe(s.cls) << ", " << describe(s.guardedness) << "\n";
  os << "Gates:\n";
  for (const auto& [f, g] : r.gates) os << "  " << f << " : " << g.str() << "\n";
  if (!withConstants) return os.str();
  if (r.constants.empty()) os << "\nNo stream constants to analyze.\n";
  for (const auto& c : r.constants) {
    os << "\nConstant " << c.name << " (" << describe(c.context) << "):\n";
    os << "  " << c.term << "\n";
    for (const auto& t : c.trace) os << "  ->" << t.rule << " " << t.term << "\n";
    os << c.message() << "\n";
  }
  return os.str();
}

int exitCode(const Report& r) {
  bool refuted = false, unknown = false;
  for (const auto& c : r.constants) {
    refuted = refuted || c.answer == Answer::NotProductive || c.answer == Answer::NotDOProductive;
    unknown = unknown || c.answer == Answer::Unknown;
  }
  return refuted ? 1 : unknown ? 2 : 0;
}

}  // namespace prodcheck
