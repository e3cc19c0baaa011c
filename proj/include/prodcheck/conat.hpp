#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace prodcheck {

// Natural numbers extended with a top element (infinity).
class CoNat {
 public:
  constexpr CoNat() = default;
  constexpr CoNat(std::uint64_t n) : value_(n) {}  // NOLINT: implicit on purpose

  static constexpr CoNat top() {
    CoNat c;
    c.top_ = true;
    return c;
  }

  constexpr bool isTop() const { return top_; }
  constexpr bool isFinite() const { return !top_; }

  std::uint64_t value() const {
    if (top_) throw std::logic_error("CoNat::value on top");
    return value_;
  }

  friend constexpr bool operator==(CoNat a, CoNat b) {
    return a.top_ == b.top_ && (a.top_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(CoNat a, CoNat b) {
    if (a.top_ || b.top_) return a.top_ <=> b.top_;
    return a.value_ <=> b.value_;
  }

  friend CoNat operator+(CoNat a, CoNat b) {
    if (a.top_ || b.top_) return top();
    if (a.value_ > std::numeric_limits<std::uint64_t>::max() - b.value_)
      throw std::overflow_error("CoNat addition overflow");
    return CoNat(a.value_ + b.value_);
  }

  // Truncated subtraction; top - top is 0 by convention.
  friend constexpr CoNat monus(CoNat a, CoNat b) {
    if (b.top_) return CoNat(0);
    if (a.top_) return top();
    return CoNat(a.value_ > b.value_ ? a.value_ - b.value_ : 0);
  }

  std::string str() const { return top_ ? "inf" : std::to_string(value_); }

 private:
  std::uint64_t value_ = 0;
  bool top_ = false;
};

inline CoNat min(CoNat a, CoNat b) { return a <= b ? a : b; }
inline CoNat max(CoNat a, CoNat b) { return a <= b ? b : a; }

inline std::ostream& operator<<(std::ostream& os, CoNat c) { return os << c.str(); }

}  // namespace prodcheck
