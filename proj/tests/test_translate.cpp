#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "random_specs.hpp"
#include "prodcheck/dogame.hpp"
#include "prodcheck/translate.hpp"

using namespace prodcheck;

namespace {

GateTable gatesOf(const std::string& file, TranslateOptions opts = {}) {
  StreamSpec spec = parseSpecFile(corpus::path(file));
  return translateSymbols(spec, classify(spec), {}, opts).gates;
}

std::string gateStr(const GateTable& t, const std::string& f) { return t.at(f).str(); }

const Verdict& verdictOf(const std::vector<Verdict>& vs, const std::string& c) {
  for (const auto& v : vs)
    if (v.constant == c) return v;
  throw std::out_of_range(c);
}

std::vector<Verdict> decideFile(const std::string& file, TranslateOptions opts = {}) {
  return decide(parseSpecFile(corpus::path(file)), opts);
}

CoNat gateValue(const Gate& g, const std::vector<std::uint64_t>& n) {
  CoNat v = g.cap;
  for (std::size_t i = 0; i < n.size(); ++i) v = min(v, interpret(g.args[i], n[i]));
  return v;
}

// All supply vectors with entries up to max.
std::vector<std::vector<std::uint64_t>> supplies(std::size_t arity, std::uint64_t max) {
  std::vector<std::vector<std::uint64_t>> out{{}};
  for (std::size_t i = 0; i < arity; ++i) {
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& v : out)
      for (std::uint64_t k = 0; k <= max; ++k) {
        auto w = v;
        w.push_back(k);
        next.push_back(w);
      }
    out = std::move(next);
  }
  return out;
}

// Flat symbols: the gate is exactly the data-oblivious lower bound.
void checkGameAgreement(const StreamSpec& spec, std::uint64_t max) {
  Classification cls = classify(spec);
  GateTable gates = translateSymbols(spec, cls).gates;
  for (const auto& [f, c] : cls.symbols) {
    if (c != SymbolClass::Flat && c != SymbolClass::Pure) continue;
    for (const auto& n : supplies(spec.sig.find(f)->streamArity(), max)) {
      Bound game = doLowFunction(spec, cls, f, n);
      CoNat gate = gateValue(gates.at(f), n);
      INFO(f, " ", gates.at(f).str(), " supply ", n.size() ? n[0] : 0);
      if (game.atLeast) CHECK(game.value <= gate);
      else CHECK(game.value == gate);
    }
  }
}

}  // namespace

TEST_SUITE("translate") {

TEST_CASE("gate tables of the corpus") {
  CHECK(gateStr(gatesOf("pascal.spec"), "f") == "[inf](-(-+))");
  CHECK(gateStr(gatesOf("morse_flat.spec"), "f") == "[inf]((-+))");

  auto pure = gatesOf("morse_pure.spec");
  CHECK(gateStr(pure, "zip") == "[inf]((-++), (+-+))");
  CHECK(gateStr(pure, "inv") == "[inf]((-+))");
  CHECK(gateStr(pure, "tail") == "[inf](-(-+))");
  CHECK(gateStr(pure, "diff") == "[inf](-(-+))");

  CHECK(gateStr(gatesOf("morse_d0l.spec"), "h") == "[inf]((-++))");

  auto conv = gatesOf("convolution.spec");
  CHECK(gateStr(conv, "conv") == "[inf]((-+), (-+))");
  CHECK(gateStr(conv, "add") == "[inf]((-+), (-+))");
  CHECK(gateStr(conv, "times") == "[inf]((-+))");

  auto traces = gatesOf("traces.spec");
  CHECK(gateStr(traces, "f") == "[inf](----++-++-+--++-+(-++-))");
  CHECK(gateStr(traces, "g") == "[inf]((--++), --(--++-++-+))");

  auto rot = gatesOf("rotate.spec");
  CHECK(gateStr(rot, "f") == "[inf](-+--(+))");
  CHECK(gateStr(rot, "b") == "[inf](--(+), +-(+), (+))");

  CHECK(gateStr(gatesOf("skip.spec"), "f") == "[inf](--(-+))");
  CHECK(gateStr(gatesOf("duplicate.spec"), "h") == "[inf](-(-+))");
  CHECK(gateStr(gatesOf("oblivious.spec"), "f") == "[inf]((--+))");
  CHECK(gateStr(gatesOf("unguarded.spec"), "g") == "[0](eps)");
}

TEST_CASE("the original tool's cap for nesting rules") {
  TranslateOptions tool;
  tool.generator.nestingStarIdentity = true;
  CHECK(gateStr(gatesOf("convolution.spec", tool), "conv") == "[0]((-+), (-+))");
  auto vs = decideFile("convolution.spec", tool);
  CHECK(verdictOf(vs, "nats").production == CoNat(1));
  CHECK(verdictOf(vs, "nats").answer == Answer::Unknown);
  CHECK(verdictOf(vs, "nats").message() == "Failed to prove productivity of nats.");
  CHECK(verdictOf(vs, "ones").answer == Answer::Productive);
}

TEST_CASE("constant translation") {
  StreamSpec pascal = parseSpecFile(corpus::path("pascal.spec"));
  GateTable g = translateSymbols(pascal, classify(pascal)).gates;
  ProdTerm p = translateConstant(pascal, g, "P");
  CHECK(p == ProdTerm::mu("P", ProdTerm::peb(ProdTerm::peb(gateApply(g.at("f"), {ProdTerm::var("P")})))));
  CHECK(p.str() == "mu P. peb(peb(box[-(-+)](P)))");

  StreamSpec conv = parseSpecFile(corpus::path("convolution.spec"));
  GateTable gc = translateSymbols(conv, classify(conv)).gates;
  CHECK(translateConstant(conv, gc, "ones").str() == "mu ones. peb(ones)");
  CHECK(translateConstant(conv, gc, "nats").str() ==
        "mu nats. peb(meet(box[(-+)](mu ones. peb(ones)), box[(-+)](mu ones. peb(ones))))");

  StreamSpec d0l = parseSpecFile(corpus::path("morse_d0l.spec"));
  GateTable gd = translateSymbols(d0l, classify(d0l)).gates;
  CHECK(translateConstant(d0l, gd, "M").str() == "mu M. peb(mu Mprime. peb(box[(-++)](Mprime)))");

  StreamSpec two = parseSpec(
      "Signature(\n  C : stream(bit),\n  0, 1 : bit\n)\nC = 0:C\nC = 1:0:C\n");
  CHECK(translateConstant(two, {}, "C") ==
        ProdTerm::mu("C", ProdTerm::meet(ProdTerm::peb(ProdTerm::var("C")),
                                         ProdTerm::peb(ProdTerm::peb(ProdTerm::var("C"))))));
  CHECK_THROWS_AS(translateConstant(pascal, {}, "P"), std::invalid_argument);
  CHECK_THROWS_AS(translateConstant(pascal, g, "f"), std::invalid_argument);
}

TEST_CASE("verdicts") {
  for (const char* file : {"pascal.spec", "morse_flat.spec", "morse_pure.spec", "morse_d0l.spec", "duplicate.spec"}) {
    INFO(file);
    for (const auto& v : decideFile(file)) {
      INFO(v.constant);
      CHECK(v.production == CoNat::top());
      CHECK(v.answer == Answer::Productive);
    }
  }
  auto pascal = decideFile("pascal.spec");
  REQUIRE(pascal.size() == 1);
  CHECK(pascal[0].context == Context::AllFlat);
  CHECK(pascal[0].message() == "The specification of P is productive.");
  CHECK(verdictOf(decideFile("morse_pure.spec"), "Q").context == Context::AllPure);

  auto conv = decideFile("convolution.spec");
  CHECK(verdictOf(conv, "ones").answer == Answer::Productive);
  CHECK(verdictOf(conv, "ones").context == Context::AllPure);
  CHECK(verdictOf(conv, "nats").context == Context::FriendlyNesting);
  CHECK(verdictOf(conv, "nats").production == CoNat::top());
  CHECK(verdictOf(conv, "nats").answer == Answer::Productive);

  auto obl = decideFile("oblivious.spec");
  CHECK(obl[0].production == CoNat(1));
  CHECK(obl[0].answer == Answer::NotDOProductive);
  CHECK(obl[0].message() == "M is not data-obliviously productive (production = 1).");

  auto ung = decideFile("unguarded.spec");
  CHECK(ung[0].production == CoNat(1));
  CHECK(ung[0].answer == Answer::NotDOProductive);

  auto skip = decideFile("skip.spec");
  CHECK(skip[0].production == CoNat(2));
  CHECK(skip[0].answer == Answer::NotDOProductive);

  auto rot = decideFile("rotate.spec");
  CHECK(rot[0].production == CoNat(2));
  CHECK(rot[0].context == Context::AllPure);
  CHECK(rot[0].answer == Answer::NotProductive);
  CHECK(rot[0].message() == "X is not productive (production = 2).");

  CHECK(decideFile("traces.spec").empty());
}

TEST_CASE("unfriendly nesting is rejected") {
  StreamSpec s = parseSpec(
      "Signature(\n  X : stream(nat),\n  f : stream(nat) -> stream(nat),\n  0 : nat\n)\n"
      "X = 0:f(X)\nf(x:y:s) = x:y:f(f(s))\n");
  CHECK_THROWS_AS(decide(s), NotTranslatable);
}

TEST_CASE("the collapse of Pascal's triangle") {
  auto v = decideFile("pascal.spec")[0];
  std::vector<std::string> boxes;
  for (const auto& step : v.trace) {
    const std::string s = step.result.str();
    for (const char* b : {"box[+(+-)]", "box[++-(-+)]"})
      if (s.find(b) != std::string::npos && (boxes.empty() || boxes.back() != b)) boxes.push_back(b);
  }
  CHECK(boxes == std::vector<std::string>{"box[+(+-)]", "box[++-(-+)]"});
  CHECK(v.trace.back().result == ProdTerm::src(CoNat::top()));
}

TEST_CASE("gates agree with the game on flat symbols") {
  for (const auto& file : corpus::files()) {
    StreamSpec spec = parseSpecFile(corpus::path(file));
    INFO(file);
    checkGameAgreement(spec, 8);
  }
  std::mt19937_64 rng(404);
  for (int k = 0; k < 150; ++k) {
    randspec::Options o;
    o.maxPrefix = 2;
    o.maxConsume = 3;
    const std::string text = randspec::generate(rng, o);
    INFO(text);
    checkGameAgreement(parseSpec(text), 6);
  }
}

TEST_CASE("constant production agrees with the game") {
  for (const char* file : {"oblivious.spec", "unguarded.spec", "skip.spec", "pascal.spec", "morse_flat.spec"}) {
    StreamSpec spec = parseSpecFile(corpus::path(file));
    Classification cls = classify(spec);
    for (const auto& v : decide(spec)) {
      INFO(file, " ", v.constant);
      GameOptions opts;
      opts.prodCap = 8;
      Bound b = doLowConstant(spec, cls, v.constant, opts);
      if (v.production.isTop()) CHECK(b == Bound::lower(8));
      else CHECK(b == Bound::exact(v.production));
    }
  }
}

}  // TEST_SUITE
