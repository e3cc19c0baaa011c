#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "random_specs.hpp"
#include "prodcheck/dogame.hpp"
#include "prodcheck/translate.hpp"

using namespace prodcheck;

namespace {

struct Loaded {
  StreamSpec spec;
  Classification cls;
};

Loaded load(const std::string& file) {
  Loaded l{parseSpecFile(corpus::path(file)), {}};
  l.cls = classify(l.spec);
  return l;
}

Bound game(const Loaded& l, const std::string& f, std::vector<std::uint64_t> n, GameOptions o = {}) {
  return doLowFunction(l.spec, l.cls, f, n, o);
}

}  // namespace

TEST_SUITE("dogame") {

TEST_CASE("duplicate keeps all but one element") {
  auto l = load("duplicate.spec");
  for (std::uint64_t n = 0; n <= 8; ++n) {
    INFO(n);
    CHECK(game(l, "h", {n}) == Bound::exact(n == 0 ? 0 : n - 1));
  }
}

TEST_CASE("functions of the corpus match their gates") {
  auto pascal = load("pascal.spec");
  auto gp = translateSymbols(pascal.spec, pascal.cls).gates.at("f");
  auto traces = load("traces.spec");
  auto gt = translateSymbols(traces.spec, traces.cls).gates;
  for (std::uint64_t n = 0; n <= 10; ++n) {
    INFO(n);
    CHECK(game(pascal, "f", {n}).value == interpret(gp.args[0], n));
    CHECK(game(traces, "f", {n}).value == interpret(gt.at("f").args[0], n));
    for (std::uint64_t m = 0; m <= 10; ++m)
      CHECK(game(traces, "g", {n, m}).value ==
            min(interpret(gt.at("g").args[0], n), interpret(gt.at("g").args[1], m)));
  }
}

TEST_CASE("constants") {
  auto obl = load("oblivious.spec");
  CHECK(doLowConstant(obl.spec, obl.cls, "M") == Bound::exact(1));
  auto ung = load("unguarded.spec");
  CHECK(doLowConstant(ung.spec, ung.cls, "B") == Bound::exact(1));
  auto pascal = load("pascal.spec");
  GameOptions o;
  o.prodCap = 8;
  CHECK(doLowConstant(pascal.spec, pascal.cls, "P", o) == Bound::lower(8));
  auto skip = load("skip.spec");
  CHECK(doLowConstant(skip.spec, skip.cls, "Z") == Bound::exact(2));
  CHECK_THROWS_AS(doLowConstant(pascal.spec, pascal.cls, "f"), std::invalid_argument);
}

TEST_CASE("a rule that cannot fire yields nothing") {
  auto l = load("pascal.spec");
  CHECK(game(l, "f", {0}) == Bound::exact(0));
  CHECK(game(l, "f", {1}) == Bound::exact(0));
}

TEST_CASE("the cap turns results into lower bounds") {
  auto l = load("morse_flat.spec");
  GameOptions o;
  o.prodCap = 3;
  CHECK(game(l, "f", {100}, o) == Bound::lower(3));
  CHECK(game(l, "f", {2}, o).atLeast == false);
}

TEST_CASE("nesting rules are rejected") {
  auto l = load("convolution.spec");
  CHECK_THROWS_AS(game(l, "conv", {4, 4}), std::invalid_argument);
  CHECK_THROWS_AS(game(l, "nats", {}), std::invalid_argument);
  auto p = load("pascal.spec");
  CHECK_THROWS_AS(game(p, "f", {1, 2}), std::invalid_argument);
}

TEST_CASE("monotone in the supply and independent of rule order") {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 120; ++k) {
    randspec::Options ro;
    ro.maxPrefix = 2;
    ro.maxConsume = 3;
    const std::string text = randspec::generate(rng, ro);
    INFO(text);
    Loaded l{parseSpec(text), {}};
    l.cls = classify(l.spec);
    for (const auto& [f, c] : l.cls.symbols) {
      const std::size_t arity = l.spec.sig.find(f)->streamArity();
      for (int t = 0; t < 10; ++t) {
        std::vector<std::uint64_t> n(arity);
        for (auto& x : n) x = rng() % 7;
        Bound b = game(l, f, n);
        GameOptions shuffled;
        shuffled.shuffleRules = true;
        shuffled.seed = rng();
        CHECK(game(l, f, n, shuffled) == b);
        const std::size_t i = rng() % arity;
        auto more = n;
        ++more[i];
        Bound bigger = game(l, f, more);
        if (!b.atLeast && !bigger.atLeast) CHECK(b.value <= bigger.value);
      }
    }
  }
}

}  // TEST_SUITE
