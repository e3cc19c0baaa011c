#pragma once

// Data-oblivious lower bounds by game search. An opponent picks, at every
// step, the defining rule that keeps production lowest; data never helps.
// Supplies count the elements available on each stream argument before it
// blocks. Results are exact or lower bounds (when a cap was hit).

#include <cstdint>
#include <string>
#include <vector>

#include "prodcheck/prodcalc.hpp"
#include "prodcheck/streamspec.hpp"

namespace prodcheck {

struct GameOptions {
  std::uint64_t prodCap = 32;      // production at which the search stops
  std::size_t depthCap = 100000;   // recursion depth of the function game
  std::size_t stepCap = 100000;    // rounds of the constant iteration
  bool shuffleRules = false;       // explore rules in a random order
  std::uint64_t seed = 0;
};

// Production of f applied to streams with the given supplies (one entry
// per stream argument). Throws std::invalid_argument unless every function
// reached is flat.
Bound doLowFunction(const StreamSpec& spec, const Classification& cls, const std::string& f,
                    const std::vector<std::uint64_t>& supplies, const GameOptions& opts = {});

// Production of a stream constant: least fixed point over the constants,
// with function applications evaluated by the function game.
Bound doLowConstant(const StreamSpec& spec, const Classification& cls, const std::string& constant,
                    const GameOptions& opts = {});

}  // namespace prodcheck
