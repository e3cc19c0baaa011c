#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prodcheck/dogame.hpp"
#include "prodcheck/report.hpp"
#include "prodcheck/solver.hpp"
#include "prodcheck/translate.hpp"

using namespace prodcheck;

namespace {

enum class Mode { Decide, Gates, OracleCheck };
enum class Format { Text, Json };

enum ExitCode {
  kParseError = 10,
  kValidateError = 11,
  kTranslateError = 12,
  kCapError = 13,
};

struct RunConfig {
  std::string inputPath;
  Mode mode = Mode::Decide;
  std::optional<std::string> root;
  Format report = Format::Text;
  std::size_t maxColumns = 10000;
  std::size_t finitizeCap = 100000;
  std::uint64_t oracleProdCap = 32;
  std::size_t oracleSteps = 100000;
  std::uint64_t oracleSupply = 8;
  bool nestingIdentity = false;
  bool verbose = false;
};

class Failure : public std::runtime_error {
 public:
  Failure(int code, Diagnostic d) : std::runtime_error(d.message), code(code), diag(std::move(d)) {}
  int code;
  Diagnostic diag;
};

StreamSpec load(const RunConfig& cfg) {
  StreamSpec spec;
  try {
    spec = parseSpecFile(cfg.inputPath);
  } catch (const SpecError& e) {
    throw Failure(kParseError, e.diagnostic());
  }
  auto diags = validate(spec);
  for (const auto& d : diags)
    if (d.severity != Severity::Error) std::cerr << d.format(cfg.inputPath) << "\n";
  for (const auto& d : diags)
    if (d.severity == Severity::Error) throw Failure(kValidateError, d);
  if (!spec.dataRules.empty() && cfg.verbose)
    std::cerr << Diagnostic{spec.dataRules.front().loc, Severity::Note, "termination of the data rules is not checked"}
                     .format(cfg.inputPath)
              << "\n";
  if (cfg.root) {
    const SymbolDecl* d = spec.sig.find(*cfg.root);
    if (!d || d->kind() != SymbolKind::StreamConstant)
      throw Failure(kValidateError, {{0, 0}, Severity::Error, "'" + *cfg.root + "' is not a stream constant"});
  }
  return spec;
}

TranslateOptions translateOptions(const RunConfig& cfg) {
  TranslateOptions o;
  o.maxColumns = cfg.maxColumns;
  o.finitizeCap = cfg.finitizeCap;
  o.generator.nestingStarIdentity = cfg.nestingIdentity;
  return o;
}

void dumpSystems(const GateTranslation& t) {
  for (const auto& [f, roots] : t.roots)
    for (const auto& r : roots) std::cout << dumpSystem(t.system, r) << "\n";
}

int runDecide(const RunConfig& cfg, const StreamSpec& spec) {
  Analysis a = analyze(spec, cfg.root, translateOptions(cfg));
  Report r = makeReport(a);
  if (cfg.report == Format::Json) {
    std::cout << toJson(r);
  } else {
    std::cout << renderText(r);
    if (cfg.verbose) {
      std::cout << "\nEquation systems:\n";
      dumpSystems(a.translation);
    }
  }
  return exitCode(r);
}

int runGates(const RunConfig& cfg, const StreamSpec& spec) {
  Classification cls = classify(spec);
  Report r;
  for (const auto& [f, c] : cls.symbols) r.symbols.push_back({f, c, cls.guardedness.at(f)});
  GateTranslation t = translateSymbols(spec, cls, {}, translateOptions(cfg));
  r.gates = t.gates;
  if (cfg.report == Format::Json) {
    std::cout << toJson(r);
    return 0;
  }
  std::cout << renderText(r, false);
  if (cfg.verbose) {
    std::cout << "\nEquation systems:\n";
    dumpSystems(t);
    std::cout << "\nTrace diagrams:\n";
    for (const auto& [f, roots] : t.roots)
      for (const auto& root : roots)
        std::cout << dumpDiagram(buildGraph(t.system, root), solveDetailed(t.system, root, cfg.maxColumns)) << "\n";
  }
  return 0;
}

struct Check {
  std::string subject;
  bool agree = true;
  std::string detail;
};

std::string supplyStr(const std::vector<std::uint64_t>& n) {
  std::string s = "(";
  for (std::size_t i = 0; i < n.size(); ++i) s += (i ? ", " : "") + std::to_string(n[i]);
  return s + ")";
}

// Compares gates and constant productions with the data-oblivious game,
// wherever the game applies.
int runOracleCheck(const RunConfig& cfg, const StreamSpec& spec) {
  Classification cls = classify(spec);
  GameOptions game;
  game.prodCap = cfg.oracleProdCap;
  game.stepCap = cfg.oracleSteps;
  std::vector<Check> checks;

  std::set<std::string> flat;
  for (const auto& [f, c] : cls.symbols)
    if (c == SymbolClass::Flat || c == SymbolClass::Pure) flat.insert(f);
  GateTable gates;
  if (!flat.empty()) gates = translateSymbols(spec, cls, flat, translateOptions(cfg)).gates;
  for (const auto& f : flat) {
    Check ch{"function " + f, true, "agrees for supplies up to " + std::to_string(cfg.oracleSupply)};
    const Gate& g = gates.at(f);
    std::vector<std::uint64_t> n(g.args.size(), 0);
    while (ch.agree) {
      Bound b = doLowFunction(spec, cls, f, n, game);
      CoNat gate = g.cap;
      for (std::size_t i = 0; i < n.size(); ++i) gate = min(gate, interpret(g.args[i], n[i]));
      if (b.atLeast ? gate < b.value : gate != b.value) {
        ch.agree = false;
        ch.detail = "supplies " + supplyStr(n) + ": gate " + gate.str() + ", game " + b.str();
      }
      std::size_t i = 0;
      while (i < n.size() && n[i] == cfg.oracleSupply) n[i++] = 0;
      if (i == n.size()) break;
      ++n[i];
    }
    checks.push_back(ch);
  }

  Analysis a = analyze(spec, cfg.root, translateOptions(cfg));
  for (const auto& v : a.verdicts) {
    if (v.context == Context::FriendlyNesting) {
      checks.push_back({"constant " + v.constant, true, "skipped, nesting rules are outside the game"});
      continue;
    }
    Bound b = doLowConstant(spec, a.classification, v.constant, game);
    const bool agree = b.atLeast ? b.value <= v.production : b.value == v.production;
    checks.push_back({"constant " + v.constant, agree, "production " + v.production.str() + ", game " + b.str()});
  }

  bool ok = true;
  for (const auto& c : checks) ok = ok && c.agree;
  if (cfg.report == Format::Json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : checks) j.push_back({{"subject", c.subject}, {"agree", c.agree}, {"detail", c.detail}});
    std::cout << nlohmann::json{{"checks", j}, {"agree", ok}}.dump(2) << "\n";
  } else {
    for (const auto& c : checks) std::cout << (c.agree ? "ok   " : "FAIL ") << c.subject << ": " << c.detail << "\n";
  }
  return ok ? 0 : 1;
}

int run(const RunConfig& cfg) {
  try {
    StreamSpec spec = load(cfg);
    switch (cfg.mode) {
      case Mode::Decide: return runDecide(cfg, spec);
      case Mode::Gates: return runGates(cfg, spec);
      case Mode::OracleCheck: return runOracleCheck(cfg, spec);
    }
  } catch (const Failure& e) {
    std::cerr << e.diag.format(cfg.inputPath) << "\n";
    return e.code;
  } catch (const NotTranslatable& e) {
    std::cerr << Diagnostic{e.loc(), Severity::Error, e.what()}.format(cfg.inputPath) << "\n";
    return kTranslateError;
  } catch (const FinitizeCapExceeded& e) {
    std::cerr << Diagnostic{{0, 0}, Severity::Error, e.what()}.format(cfg.inputPath) << "\n";
    return kCapError;
  } catch (const RepetitionCapExceeded& e) {
    std::cerr << Diagnostic{{0, 0}, Severity::Error, e.what()}.format(cfg.inputPath) << "\n";
    return kCapError;
  } catch (const std::invalid_argument& e) {
    std::cerr << Diagnostic{{0, 0}, Severity::Error, e.what()}.format(cfg.inputPath) << "\n";
    return kTranslateError;
  }
  return kTranslateError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decides productivity of stream specifications."};
  RunConfig cfg;
  const std::map<std::string, Mode> modes{
      {"decide", Mode::Decide}, {"gates", Mode::Gates}, {"oracle-check", Mode::OracleCheck}};
  const std::map<std::string, Format> formats{{"text", Format::Text}, {"json", Format::Json}};
  std::string root;

  app.add_option("file", cfg.inputPath, "Specification file")->required();
  std::string mode = "decide", report = "text";
  app.add_option("--mode", mode, "Analysis to run")->check(CLI::IsMember({"decide", "gates", "oracle-check"}));
  app.add_option("--root", root, "Analyze only this stream constant");
  app.add_option("--report", report, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-columns", cfg.maxColumns, "Columns searched for a repetition")->check(CLI::PositiveNumber);
  app.add_option("--finitize-cap", cfg.finitizeCap, "Equations created by finitization")->check(CLI::PositiveNumber);
  app.add_option("--oracle-prod-cap", cfg.oracleProdCap, "Production at which the game stops")
      ->check(CLI::PositiveNumber);
  app.add_option("--oracle-steps", cfg.oracleSteps, "Rounds of the constant game")->check(CLI::PositiveNumber);
  app.add_option("--oracle-supply", cfg.oracleSupply, "Largest supply tried per argument")
      ->check(CLI::PositiveNumber);
  app.add_flag("--nesting-identity", cfg.nestingIdentity,
               "Cap nesting rules by the identity sequence, as the original tool does");
  app.add_flag("-v,--verbose", cfg.verbose, "Print equation systems, diagrams and notes");
  CLI11_PARSE(app, argc, argv);
  cfg.mode = modes.at(mode);
  cfg.report = formats.at(report);
  if (!root.empty()) cfg.root = root;
  return run(cfg);
}
