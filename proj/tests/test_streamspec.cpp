#include <doctest.h>

#include <functional>
#include <random>

#include "corpus.hpp"
#include "random_specs.hpp"
#include "prodcheck/streamspec.hpp"

using namespace prodcheck;

namespace {

std::string errorOf(const std::string& text) {
  try {
    parseSpec(text);
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

const char* kHeader =
    "Signature(\n"
    "  P : stream(nat),\n"
    "  f : stream(nat) -> stream(nat),\n"
    "  0 : nat,\n"
    "  S : nat -> nat\n"
    ")\n";

// Unguarded iff some chain of non-producing calls is longer than the number
// of functions, which forces a repetition.
std::set<std::string> unguardedByPaths(const StreamSpec& spec, const Classification& c) {
  std::map<std::string, std::vector<std::string>> silent;
  for (const auto& [f, rules] : c.rules)
    for (const auto* r : rules) {
      const auto& s = c.shape(r);
      if (s.produce == 0 && !s.tailIsInput) silent[f].push_back(s.callee);
    }
  const std::size_t n = spec.sig.namesOf(SymbolKind::StreamFunction).size();
  std::set<std::string> out;
  std::function<bool(const std::string&, std::size_t)> longPath = [&](const std::string& f, std::size_t len) {
    if (len > n) return true;
    for (const auto& g : silent[f])
      if (longPath(g, len + 1)) return true;
    return false;
  };
  for (const auto& [f, _] : c.rules)
    if (longPath(f, 0)) out.insert(f);
  return out;
}

}  // namespace

TEST_SUITE("streamspec") {

TEST_CASE("corpus parses, validates and round-trips") {
  for (const auto& name : corpus::files()) {
    INFO(name);
    StreamSpec spec = parseSpecFile(corpus::path(name));
    auto diags = validate(spec);
    CHECK_FALSE(hasErrors(diags));
    StreamSpec again = parseSpec(spec.str());
    CHECK(sameSpec(spec, again));
    CHECK(again.str() == spec.str());
  }
}

TEST_CASE("printing groups symbols and layers") {
  StreamSpec spec = parseSpecFile(corpus::path("pascal.spec"));
  const std::string text = spec.str();
  CHECK(text.find("  -- stream symbols --\n  P : stream(nat),\n  f : stream(nat) -> stream(nat),\n") != std::string::npos);
  CHECK(text.find("-- data layer --\na(s(x),y) = s(a(x,y))\n") != std::string::npos);
  CHECK(text.find("P = 0:s(0):f(P)\n") != std::string::npos);
  CHECK(spec.constructors() == std::set<std::string>{"0", "s"});
}

TEST_CASE("parse errors") {
  CHECK(errorOf(std::string(kHeader) + "P = x\nf(x:s) = x:f(s)\n").find("unbound stream variable") != std::string::npos);
  CHECK(errorOf(std::string(kHeader) + "P = g(P)\n").find("undeclared function symbol 'g'") != std::string::npos);
  CHECK(errorOf(std::string(kHeader) + "P = f(P,P)\n").find("arity mismatch") != std::string::npos);
  CHECK(errorOf(std::string(kHeader) + "P = 0:0\n").find("sort clash") != std::string::npos);
  CHECK(errorOf(std::string(kHeader) + "x = P\n").find("variable on lhs root") != std::string::npos);
  CHECK(errorOf(std::string(kHeader) + "f(S(x)) = P\n").find("sort clash") != std::string::npos);
  CHECK(errorOf(std::string(kHeader) + "P = 0:P\nf(f(s)) = s\n").find("cons pattern") != std::string::npos);
  CHECK(errorOf("-- nothing but a comment\n") == "no stream constant declared");
  CHECK(errorOf("") == "no stream constant declared");
  CHECK(errorOf("Signature(0 : nat)\n") == "no stream constant declared");
  CHECK(errorOf("Signature(P : stream(nat) P = P").find("expected") != std::string::npos);
}

TEST_CASE("error locations") {
  try {
    parseSpec(std::string(kHeader) + "P = 0:P\nf(x:s) = y:f(s)\n");
    FAIL("expected an error");
  } catch (const SpecError& e) {
    CHECK(e.loc().line == 8);
    CHECK(e.loc().col == 10);
    CHECK(e.diagnostic().format("in.spec") == "in.spec:8:10: error: unbound variable on rhs: 'y'");
  }
}

TEST_CASE("validation") {
  auto diags = validate(parseSpec(std::string(kHeader) + "P = 0:P\nf(x:x:s) = x:f(s)\n"));
  CHECK(hasErrors(diags));
  CHECK(diags.front().message.find("left-linear") != std::string::npos);

  diags = validate(parseSpec(std::string(kHeader) + "P = 0:P\nf(x:s) = x:f(s)\nf(0:s) = 0:s\n"));
  CHECK(hasErrors(diags));
  CHECK(diags.front().message.find("overlapping rules for 'f' at lines 8 and 9") != std::string::npos);

  diags = validate(parseSpec(std::string(kHeader) + "P = 0:P\n"));
  CHECK(diags.front().message == "stream function 'f' has no defining rule");

  const char* bits =
      "Signature(\n  B : stream(bit),\n  f : stream(bit) -> stream(bit),\n  0, 1 : bit\n)\n"
      "B = 0:f(B)\nf(0:s) = 0:f(s)\n";
  diags = validate(parseSpec(bits));
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == Severity::Warning);
  CHECK(diags[0].message.find("f(1:sigma)") != std::string::npos);

  // constructor arguments are explored too
  diags = validate(parseSpec(std::string(kHeader) + "P = 0:P\nf(S(x):t) = t\nf(0:S(y):t) = t\n"));
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find("f(0:0:sigma)") != std::string::npos);

  // element sorts without known constructors only accept variables
  const char* poly =
      "Signature(\n  T : stream(x),\n  g : stream(x) -> stream(x)\n)\nT = g(T)\ng(y:s) = y:g(s)\n";
  CHECK(validate(parseSpec(poly)).empty());
}

TEST_CASE("classification of the corpus") {
  auto cls = [](const char* file) { return classify(parseSpecFile(corpus::path(file))); };
  auto pascal = cls("pascal.spec");
  CHECK(pascal.symbols.at("f") == SymbolClass::Flat);
  CHECK(pascal.guardedness.at("f") == Guardedness::WeaklyGuarded);

  auto d0l = cls("morse_d0l.spec");
  CHECK(d0l.symbols.at("h") == SymbolClass::Pure);

  auto pure = cls("morse_pure.spec");
  for (const char* f : {"zip", "inv", "tail", "diff"}) CHECK(pure.symbols.at(f) == SymbolClass::Pure);
  const auto& zipShape = pure.shape(pure.rules.at("zip").front());
  CHECK(zipShape.consume == std::vector<std::size_t>{1, 0});
  CHECK(zipShape.callee == "zip");
  CHECK(zipShape.feeds == std::vector<RuleShape::Feed>{{1, 0}, {0, 0}});

  auto conv = cls("convolution.spec");
  CHECK(conv.symbols.at("conv") == SymbolClass::FriendlyNesting);
  CHECK(conv.symbols.at("add") == SymbolClass::Pure);
  CHECK(conv.symbols.at("times") == SymbolClass::Pure);

  auto flat = cls("morse_flat.spec");
  CHECK(flat.symbols.at("f") == SymbolClass::Flat);

  auto ung = cls("unguarded.spec");
  CHECK(ung.guardedness.at("g") == Guardedness::Unguarded);

  auto tr = cls("traces.spec");
  CHECK(tr.symbols.at("f") == SymbolClass::Pure);
  CHECK(tr.guardedness.at("f") == Guardedness::WeaklyGuarded);
  CHECK(tr.shape(tr.rules.at("f").front()).feeds == std::vector<RuleShape::Feed>{{0, 0}, {0, 0}});
}

TEST_CASE("nesting that consumes more than it guards is not friendly") {
  const char* text =
      "Signature(\n  X : stream(nat),\n  f, g : stream(nat) -> stream(nat),\n  0 : nat\n)\n"
      "X = 0:f(X)\nf(x:y:s) = x:y:f(f(s))\ng(x:s) = x:g(g(s))\n";
  auto c = classify(parseSpec(text));
  CHECK(c.symbols.at("f") == SymbolClass::Unfriendly);
  CHECK(c.symbols.at("g") == SymbolClass::FriendlyNesting);

  // a friendly rule shape is not enough when a nested callee may stall
  const char* stall =
      "Signature(\n  X : stream(nat),\n  f, h : stream(nat) -> stream(nat),\n  0 : nat\n)\n"
      "X = 0:f(X)\nf(x:s) = x:f(h(s))\nh(s) = h(s)\n";
  auto d = classify(parseSpec(stall));
  CHECK(d.symbols.at("f") == SymbolClass::Unfriendly);
  CHECK(d.guardedness.at("h") == Guardedness::Unguarded);
}

TEST_CASE("reachable functions") {
  auto spec = parseSpecFile(corpus::path("morse_pure.spec"));
  CHECK(reachableFunctions(spec, "Q") == std::set<std::string>{"diff", "zip", "inv", "tail"});
  auto conv = parseSpecFile(corpus::path("convolution.spec"));
  CHECK(reachableFunctions(conv, "ones").empty());
  CHECK(reachableFunctions(conv, "nats") == std::set<std::string>{"conv", "add", "times"});
}

TEST_CASE("property: random flat specifications") {
  std::mt19937_64 rng(31337);
  for (int k = 0; k < 300; ++k) {
    const std::string text = randspec::generate(rng);
    INFO(text);
    StreamSpec spec = parseSpec(text);
    CHECK_FALSE(hasErrors(validate(spec)));
    CHECK(sameSpec(parseSpec(spec.str()), spec));
    Classification c = classify(spec);
    std::set<std::string> unguarded;
    for (const auto& [f, g] : c.guardedness)
      if (g == Guardedness::Unguarded) unguarded.insert(f);
    CHECK(unguarded == unguardedByPaths(spec, c));
    for (const auto& [f, cls] : c.symbols) CHECK((cls == SymbolClass::Flat || cls == SymbolClass::Pure));
  }
}

TEST_CASE("classification ignores the names of data constructors") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    std::string text = randspec::generate(rng);
    std::string renamed;
    // rename constructor 0 to zero and 1 to one wherever they stand alone
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      bool alone = (i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]))) &&
                   (i + 1 == text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1])));
      if ((c == '0' || c == '1') && alone) renamed += c == '0' ? "zero" : "one";
      else renamed += c;
    }
    auto a = classify(parseSpec(text)), b = classify(parseSpec(renamed));
    CHECK(a.symbols == b.symbols);
    CHECK(a.guardedness == b.guardedness);
  }
}

}  // TEST_SUITE
