#pragma once

// Solving finite, weakly guarded IO-specifications. Traces through the
// equations form a graph; columns of the trace diagram record, for each
// node, the least number of outputs with which it is reachable after x
// inputs. The lower bound of column x is the production after x inputs.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "prodcheck/ioalg.hpp"
#include "prodcheck/iospec.hpp"

namespace prodcheck {

struct TraceGraph {
  enum class Label { Epsilon, Minus, Plus };
  struct Edge {
    std::size_t to;
    Label label;
  };
  struct Node {
    IOVar equation;
    std::string position;  // child indices from the root of the rhs
    IOExpr expr;
  };

  std::vector<Node> nodes;
  std::vector<std::vector<Edge>> out;
  std::size_t root = 0;

  bool hasMinusEdge(std::size_t v) const;
  std::string nodeName(std::size_t v) const;
};

// Throws std::invalid_argument when an epsilon cycle shows that the system
// is not weakly guarded.
TraceGraph buildGraph(const IOSpec& spec, const IOVar& root);

// Heights per node; absent nodes hold kAbsent.
using Column = std::vector<std::uint64_t>;
inline constexpr std::uint64_t kAbsent = std::numeric_limits<std::uint64_t>::max();

// Computes the columns left to right.
class DiagramWalker {
 public:
  explicit DiagramWalker(const TraceGraph& g);
  DiagramWalker(const TraceGraph& g, Column start);  // start must be closed

  std::uint64_t x() const { return x_; }
  const Column& column() const { return column_; }
  CoNat lowerBound() const;
  void advance();

 private:
  const TraceGraph& g_;
  std::uint64_t x_ = 0;
  Column column_;

  void close();
};

Column columnAt(const TraceGraph& g, std::uint64_t x);
CoNat lowerBoundAt(const TraceGraph& g, std::uint64_t x);

struct RepetitionWitness {
  std::uint64_t x1 = 0;
  std::uint64_t x2 = 0;
  std::uint64_t shift = 0;              // growth of the lower bound per period
  std::vector<std::size_t> contributing;  // nodes whose height grows by exactly shift
};

struct Solution {
  IOTerm term;
  std::vector<CoNat> bounds;  // lower bounds of the inspected columns
  bool topTail = false;       // production became unbounded at bounds.size() - 1
  RepetitionWitness witness;  // meaningful when !topTail
};

class RepetitionCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Solution solveDetailed(const IOSpec& spec, const IOVar& root, std::size_t maxColumns = 10000);
IOTerm solve(const IOSpec& spec, const IOVar& root, std::size_t maxColumns = 10000);

// Per-column height tables up to the repetition, and the witness.
std::string dumpDiagram(const TraceGraph& g, const Solution& s);

}  // namespace prodcheck
