#pragma once

// Rational IO-sequences over {-, +}. A '-' is an input requirement, a '+'
// an output. An IO-term is either a finite word or prefix.loop^omega; the
// finite word w stands for w.(-)^omega.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "prodcheck/conat.hpp"

namespace prodcheck {

enum class Polarity : char { Minus = '-', Plus = '+' };

using Word = std::string;  // characters '-' and '+' only

class IOTerm {
 public:
  enum class Kind { Finite, Rational };

  IOTerm() = default;  // the empty finite word

  static IOTerm finite(Word w);
  // Requires a non-empty loop. The result is not normalized.
  static IOTerm rational(Word prefix, Word loop);

  Kind kind() const { return kind_; }
  bool isFinite() const { return kind_ == Kind::Finite; }
  const Word& prefix() const { return prefix_; }
  const Word& loop() const { return loop_; }

  // Parses "w" or "w(v)"; "eps" denotes the empty finite word.
  static IOTerm parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const IOTerm&, const IOTerm&) = default;

 private:
  Kind kind_ = Kind::Finite;
  Word prefix_;
  Word loop_;
};

std::ostream& operator<<(std::ostream& os, const IOTerm& t);

// Canonical form: trailing '-' trimmed from finite words, loops without '+'
// folded into finite words, loops reduced to their primitive root and the
// prefix rolled into the loop as far as possible.
IOTerm normalize(const IOTerm& s);
bool isCanonical(const IOTerm& s);
bool equalDenotation(const IOTerm& s, const IOTerm& t);

// Number of outputs available after n inputs.
CoNat interpret(const IOTerm& s, CoNat n);

IOTerm compose(const IOTerm& s, const IOTerm& t);
IOTerm infimum(const IOTerm& s, const IOTerm& t);
IOTerm removeRequirement(const IOTerm& s);
IOTerm prependPlus(const IOTerm& s);
CoNat leastFixedPoint(const IOTerm& s);

// Eventually periodic description of a production function:
// f(n) = head[n] for n < start + period, and f(n + period) = f(n) + shift
// for n >= start. Once a value is top every later value is top.
struct Profile {
  std::vector<CoNat> head;
  std::uint64_t start = 0;
  std::uint64_t period = 1;
  std::uint64_t shift = 0;

  CoNat at(std::uint64_t n) const;
};

Profile toProfile(const IOTerm& s);
// Inverse of toProfile up to denotation. The profile must be monotone.
IOTerm fromProfile(const Profile& p);

}  // namespace prodcheck
