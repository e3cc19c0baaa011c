#include "prodcheck/ioalg.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace prodcheck {

namespace {

void checkWord(const Word& w) {
  for (char c : w)
    if (c != '-' && c != '+') throw std::invalid_argument("IO word may only contain '-' and '+'");
}

std::size_t countOf(const Word& w, char c) { return static_cast<std::size_t>(std::count(w.begin(), w.end(), c)); }

void trimMinus(Word& w) {
  while (!w.empty() && w.back() == '-') w.pop_back();
}

Word primitiveRoot(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return w.substr(0, p);
  }
  return w;
}

// Walks the positions of an IO-term. For finite terms the position equal to
// the word length is the end; rational terms wrap back to the loop start.
struct Cursor {
  const Word* word;
  std::size_t loopStart;
  bool rational;

  explicit Cursor(const IOTerm& t, Word& storage) {
    storage = t.prefix() + t.loop();
    word = &storage;
    loopStart = t.prefix().size();
    rational = !t.isFinite();
  }
  bool atEnd(std::size_t pos) const { return !rational && pos >= word->size(); }
  char at(std::size_t pos) const { return (*word)[pos]; }
  std::size_t next(std::size_t pos) const {
    ++pos;
    if (rational && pos == word->size()) pos = loopStart;
    return pos;
  }
};

std::uint64_t asU64(CoNat c) { return c.value(); }

}  // namespace

IOTerm IOTerm::finite(Word w) {
  checkWord(w);
  IOTerm t;
  t.kind_ = Kind::Finite;
  t.prefix_ = std::move(w);
  return t;
}

IOTerm IOTerm::rational(Word prefix, Word loop) {
  checkWord(prefix);
  checkWord(loop);
  if (loop.empty()) throw std::invalid_argument("IO-term loop must be non-empty");
  IOTerm t;
  t.kind_ = Kind::Rational;
  t.prefix_ = std::move(prefix);
  t.loop_ = std::move(loop);
  return t;
}

IOTerm IOTerm::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') s.push_back(c);
  if (s == "eps") return finite("");
  auto open = s.find('(');
  if (open == std::string::npos) {
    if (s.find(')') != std::string::npos) throw std::invalid_argument("unbalanced ')' in IO-term: " + s);
    return finite(s);
  }
  if (s.back() != ')' || s.find('(', open + 1) != std::string::npos ||
      s.find(')') != s.size() - 1)
    throw std::invalid_argument("malformed IO-term: " + s);
  return rational(s.substr(0, open), s.substr(open + 1, s.size() - open - 2));
}

std::string IOTerm::str() const {
  if (kind_ == Kind::Finite) return prefix_.empty() ? "eps" : prefix_;
  return prefix_ + "(" + loop_ + ")";
}

std::ostream& operator<<(std::ostream& os, const IOTerm& t) { return os << t.str(); }

IOTerm normalize(const IOTerm& s) {
  Word prefix = s.prefix();
  if (s.isFinite() || countOf(s.loop(), '+') == 0) {
    trimMinus(prefix);
    return IOTerm::finite(std::move(prefix));
  }
  Word loop = primitiveRoot(s.loop());
  while (!prefix.empty() && prefix.back() == loop.back()) {
    prefix.pop_back();
    std::rotate(loop.rbegin(), loop.rbegin() + 1, loop.rend());
  }
  return IOTerm::rational(std::move(prefix), std::move(loop));
}

bool isCanonical(const IOTerm& s) { return normalize(s) == s; }

bool equalDenotation(const IOTerm& s, const IOTerm& t) { return normalize(s) == normalize(t); }

CoNat Profile::at(std::uint64_t n) const {
  if (n < head.size()) return head[n];
  if (n < start) throw std::logic_error("profile head too short");
  const std::uint64_t r = (n - start) % period;
  const std::uint64_t q = (n - start) / period;
  const CoNat base = head[start + r];
  if (base.isTop() || shift == 0) return base;
  if (q > std::numeric_limits<std::uint64_t>::max() / shift) throw std::overflow_error("profile value overflow");
  return base + CoNat(q * shift);
}

Profile toProfile(const IOTerm& s) {
  Profile p;
  const Word& alpha = s.prefix();
  const std::size_t ma = countOf(alpha, '-');
  // values[x] = number of '+' before the (x+1)-th '-' of the given word
  auto scan = [](const Word& w, std::size_t wanted, std::vector<CoNat>& out) {
    std::uint64_t plus = 0;
    for (char c : w) {
      if (c == '+') ++plus;
      else if (out.size() < wanted) out.emplace_back(plus);
    }
    return plus;
  };
  if (s.isFinite()) {
    std::uint64_t total = scan(alpha, ma, p.head);
    p.head.emplace_back(total);
    p.start = ma;
    return p;
  }
  const Word& beta = s.loop();
  const std::size_t k = countOf(beta, '-');
  if (k == 0) {
    scan(alpha, ma, p.head);
    p.head.push_back(CoNat::top());
    p.start = ma;
    return p;
  }
  scan(alpha + beta + beta, ma + k, p.head);
  p.start = ma;
  p.period = k;
  p.shift = countOf(beta, '+');
  return p;
}

IOTerm fromProfile(const Profile& p) {
  const std::uint64_t window = p.start + p.period;
  std::vector<CoNat> v;
  for (std::uint64_t x = 0; x <= window; ++x) v.push_back(p.at(x));
  auto plusRun = [](CoNat from, CoNat to) {
    if (to < from) throw std::invalid_argument("profile is not monotone");
    return Word(asU64(to) - asU64(from), '+');
  };
  std::optional<std::uint64_t> firstTop;
  for (std::uint64_t x = 0; x <= window; ++x)
    if (v[x].isTop()) {
      firstTop = x;
      break;
    }
  if (firstTop) {
    const std::uint64_t t = *firstTop;
    if (t == 0) return IOTerm::rational("", "+");
    Word w(asU64(v[0]), '+');
    for (std::uint64_t x = 1; x < t; ++x) w += "-" + plusRun(v[x - 1], v[x]);
    return normalize(IOTerm::rational(w + "-", "+"));
  }
  Word prefix(asU64(v[0]), '+');
  for (std::uint64_t x = 1; x <= p.start; ++x) prefix += "-" + plusRun(v[x - 1], v[x]);
  if (p.shift == 0) return normalize(IOTerm::finite(prefix));
  Word loop;
  for (std::uint64_t x = p.start + 1; x <= window; ++x) loop += "-" + plusRun(v[x - 1], v[x]);
  return normalize(IOTerm::rational(prefix, loop));
}

CoNat interpret(const IOTerm& s, CoNat n) {
  if (n.isTop()) {
    if (!s.isFinite() && countOf(s.loop(), '+') > 0) return CoNat::top();
    return CoNat(countOf(s.prefix(), '+'));
  }
  return toProfile(s).at(n.value());
}

IOTerm compose(const IOTerm& sIn, const IOTerm& tIn) {
  const IOTerm s = normalize(sIn), t = normalize(tIn);
  Word sw, tw;
  const Cursor cs(s, sw), ct(t, tw);
  std::size_t i = 0, j = 0;
  Word out;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  while (true) {
    auto [it, fresh] = seen.emplace(std::make_pair(i, j), out.size());
    if (!fresh) {
      Word prefix = out.substr(0, it->second), loop = out.substr(it->second);
      if (loop.empty()) return normalize(IOTerm::finite(prefix));
      return normalize(IOTerm::rational(prefix, loop));
    }
    if (cs.atEnd(i)) break;
    if (cs.at(i) == '+') {
      out.push_back('+');
      i = cs.next(i);
      continue;
    }
    if (ct.atEnd(j)) break;
    if (ct.at(j) == '+') {
      i = cs.next(i);
      j = ct.next(j);
    } else {
      out.push_back('-');
      j = ct.next(j);
    }
  }
  return normalize(IOTerm::finite(out));
}

namespace {

std::uint64_t lcm64(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

std::optional<std::uint64_t> firstTopIndex(const Profile& p) {
  for (std::uint64_t x = 0; x < p.head.size(); ++x)
    if (p.head[x].isTop()) return x;
  return std::nullopt;
}

Profile pointwiseMin(const Profile& a, const Profile& b, std::uint64_t start, std::uint64_t period,
                     std::uint64_t shift) {
  Profile r;
  r.start = start;
  r.period = period;
  r.shift = shift;
  for (std::uint64_t x = 0; x < start + period; ++x) r.head.push_back(min(a.at(x), b.at(x)));
  return r;
}

}  // namespace

IOTerm infimum(const IOTerm& s, const IOTerm& t) {
  const Profile a = toProfile(normalize(s)), b = toProfile(normalize(t));
  const std::uint64_t x0 = std::max(a.start, b.start);
  const auto ta = firstTopIndex(a), tb = firstTopIndex(b);
  if (ta && tb) return fromProfile(pointwiseMin(a, b, std::max({x0, *ta, *tb}), 1, 0));
  if (ta) return fromProfile(pointwiseMin(a, b, std::max(x0, *ta), b.period, b.shift));
  if (tb) return fromProfile(pointwiseMin(a, b, std::max(x0, *tb), a.period, a.shift));

  const std::uint64_t period = lcm64(a.period, b.period);
  const std::uint64_t da = period / a.period * a.shift, db = period / b.period * b.shift;
  if (da == db) return fromProfile(pointwiseMin(a, b, x0, period, da));
  // The slower side eventually lies below the faster one on every residue.
  const Profile& slow = da < db ? a : b;
  const Profile& fast = da < db ? b : a;
  const std::uint64_t gain = std::max(da, db) - std::min(da, db);
  std::uint64_t rounds = 0;
  for (std::uint64_t r = 0; r < period; ++r) {
    const auto lo = static_cast<std::int64_t>(slow.at(x0 + r).value());
    const auto hi = static_cast<std::int64_t>(fast.at(x0 + r).value());
    if (lo > hi) rounds = std::max<std::uint64_t>(rounds, (static_cast<std::uint64_t>(lo - hi) + gain - 1) / gain);
  }
  return fromProfile(pointwiseMin(a, b, x0 + rounds * period, period, std::min(da, db)));
}

IOTerm removeRequirement(const IOTerm& sIn) {
  const IOTerm s = normalize(sIn);
  Word prefix = s.prefix();
  auto pos = prefix.find('-');
  if (pos != Word::npos) {
    prefix.erase(pos, 1);
    if (s.isFinite()) return normalize(IOTerm::finite(prefix));
    return normalize(IOTerm::rational(prefix, s.loop()));
  }
  if (s.isFinite()) return s;  // w.(-)^omega minus one '-' is unchanged
  const Word& loop = s.loop();
  pos = loop.find('-');
  if (pos == Word::npos) return s;
  prefix += loop.substr(0, pos) + loop.substr(pos + 1);
  return normalize(IOTerm::rational(prefix, loop));
}

IOTerm prependPlus(const IOTerm& s) {
  if (s.isFinite()) return normalize(IOTerm::finite("+" + s.prefix()));
  return normalize(IOTerm::rational("+" + s.prefix(), s.loop()));
}

CoNat leastFixedPoint(const IOTerm& sIn) {
  // Feeding the output back as input: every '+' becomes one pending input,
  // every '-' consumes one. If the pending count does not shrink over a full
  // loop the feedback never starves.
  const IOTerm s = normalize(sIn);
  Word w;
  const Cursor c(s, w);
  std::uint64_t count = 0, pending = 0;
  std::optional<std::uint64_t> lastAtLoop;
  std::size_t pos = 0;
  while (true) {
    if (c.atEnd(pos)) return CoNat(count);
    if (c.rational && pos == c.loopStart) {
      if (lastAtLoop && pending >= *lastAtLoop) return CoNat::top();
      lastAtLoop = pending;
    }
    if (c.at(pos) == '+') {
      ++count;
      ++pending;
    } else if (pending > 0) {
      --pending;
    } else {
      return CoNat(count);
    }
    pos = c.next(pos);
  }
}

}  // namespace prodcheck
