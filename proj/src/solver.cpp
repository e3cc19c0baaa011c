#include "prodcheck/solver.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

namespace prodcheck {

bool TraceGraph::hasMinusEdge(std::size_t v) const {
  return std::any_of(out[v].begin(), out[v].end(), [](const Edge& e) { return e.label == Label::Minus; });
}

std::string TraceGraph::nodeName(std::size_t v) const {
  const Node& n = nodes[v];
  return n.position.empty() ? n.equation.str() : n.equation.str() + "@" + n.position;
}

TraceGraph buildGraph(const IOSpec& spec, const IOVar& root) {
  TraceGraph g;
  std::vector<IOVar> order{root};
  std::map<IOVar, std::size_t> rootNode;
  rootNode[root] = 0;
  // First pass: number the positions of every reachable equation.
  std::vector<std::pair<std::size_t, IOVar>> pendingVars;  // Var node, referenced equation
  for (std::size_t k = 0; k < order.size(); ++k) {
    const IOVar eq = order[k];
    rootNode[eq] = g.nodes.size();
    std::vector<std::pair<IOExpr, std::string>> work{{spec.rhs(eq), ""}};
    while (!work.empty()) {
      auto [e, pos] = work.back();
      work.pop_back();
      const std::size_t id = g.nodes.size();
      g.nodes.push_back({eq, pos, e});
      g.out.emplace_back();
      switch (e.kind()) {
        case IOExpr::Kind::Empty: g.out[id].push_back({id, TraceGraph::Label::Minus}); break;
        case IOExpr::Kind::Var: {
          const IOVar& w = e.variable();
          if (std::find(order.begin(), order.end(), w) == order.end()) order.push_back(w);
          pendingVars.emplace_back(id, w);
          break;
        }
        case IOExpr::Kind::Minus:
        case IOExpr::Kind::Plus:
          g.out[id].push_back({g.nodes.size(), e.kind() == IOExpr::Kind::Minus ? TraceGraph::Label::Minus
                                                                                 : TraceGraph::Label::Plus});
          work.push_back({e.child(), pos + "0"});
          break;
        case IOExpr::Kind::Inf:
          // the right child is numbered after the whole left subtree
          work.push_back({e.right(), pos + "1"});
          work.push_back({e.left(), pos + "0"});
          break;
      }
    }
  }
  // Second pass: infimum edges need the ids of both children.
  std::map<std::pair<IOVar, std::string>, std::size_t> byPos;
  for (std::size_t v = 0; v < g.nodes.size(); ++v) byPos[{g.nodes[v].equation, g.nodes[v].position}] = v;
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    if (g.nodes[v].expr.kind() == IOExpr::Kind::Inf)
      for (const char* c : {"0", "1"})
        g.out[v].push_back({byPos.at({g.nodes[v].equation, g.nodes[v].position + c}), TraceGraph::Label::Epsilon});
  for (const auto& [v, w] : pendingVars) g.out[v].push_back({rootNode.at(w), TraceGraph::Label::Epsilon});
  g.root = 0;

  std::vector<int> state(g.nodes.size(), 0);
  for (std::size_t s = 0; s < g.nodes.size(); ++s) {
    if (state[s]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    state[s] = 1;
    while (!stack.empty()) {
      auto& [v, k] = stack.back();
      if (k == g.out[v].size()) {
        state[v] = 2;
        stack.pop_back();
        continue;
      }
      const auto& e = g.out[v][k++];
      if (e.label != TraceGraph::Label::Epsilon) continue;
      if (state[e.to] == 1)
        throw std::invalid_argument("equation system is not weakly guarded: epsilon cycle through " +
                                    g.nodeName(e.to));
      if (state[e.to] == 0) {
        state[e.to] = 1;
        stack.push_back({e.to, 0});
      }
    }
  }
  return g;
}

DiagramWalker::DiagramWalker(const TraceGraph& g) : g_(g), column_(g.nodes.size(), kAbsent) {
  column_[g.root] = 0;
  close();
}

DiagramWalker::DiagramWalker(const TraceGraph& g, Column start) : g_(g), column_(std::move(start)) {}

CoNat DiagramWalker::lowerBound() const {
  std::uint64_t best = kAbsent;
  for (std::size_t v = 0; v < column_.size(); ++v)
    if (column_[v] != kAbsent && g_.hasMinusEdge(v)) best = std::min(best, column_[v]);
  return best == kAbsent ? CoNat::top() : CoNat(best);
}

void DiagramWalker::advance() {
  Column next(column_.size(), kAbsent);
  for (std::size_t v = 0; v < column_.size(); ++v) {
    if (column_[v] == kAbsent) continue;
    for (const auto& e : g_.out[v])
      if (e.label == TraceGraph::Label::Minus) next[e.to] = std::min(next[e.to], column_[v]);
  }
  column_ = std::move(next);
  ++x_;
  close();
}

// Least heights under epsilon and '+' steps (Dijkstra with weights 0 and 1).
void DiagramWalker::close() {
  using Item = std::pair<std::uint64_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (std::size_t v = 0; v < column_.size(); ++v)
    if (column_[v] != kAbsent) queue.push({column_[v], v});
  while (!queue.empty()) {
    auto [y, v] = queue.top();
    queue.pop();
    if (y != column_[v]) continue;
    for (const auto& e : g_.out[v]) {
      if (e.label == TraceGraph::Label::Minus) continue;
      const std::uint64_t y2 = y + (e.label == TraceGraph::Label::Plus ? 1 : 0);
      if (y2 < column_[e.to]) {
        column_[e.to] = y2;
        queue.push({y2, e.to});
      }
    }
  }
}

Column columnAt(const TraceGraph& g, std::uint64_t x) {
  DiagramWalker w(g);
  while (w.x() < x) w.advance();
  return w.column();
}

CoNat lowerBoundAt(const TraceGraph& g, std::uint64_t x) {
  DiagramWalker w(g);
  while (w.x() < x) w.advance();
  return w.lowerBound();
}

namespace {

// Tests whether the strip [x1, x2) repeats with height shift d. The column
// step is monotone and commutes with min and with adding constants, so if
// the nodes that grow by exactly d rebuild themselves after one period and
// alone account for the lower bounds on the strip, every later strip is the
// first one shifted by a multiple of d.
bool repeats(const TraceGraph& g, const Column& c1, const std::vector<CoNat>& bounds, std::uint64_t x1,
             std::uint64_t period, std::uint64_t d, const std::vector<std::size_t>& tight) {
  Column restricted(c1.size(), kAbsent);
  for (std::size_t v : tight) restricted[v] = c1[v];
  DiagramWalker w(g, restricted);
  for (std::uint64_t k = 0; k < period; ++k) {
    if (!(w.lowerBound() == bounds[x1 + k])) return false;
    w.advance();
  }
  for (std::size_t v : tight)
    if (w.column()[v] == kAbsent || w.column()[v] > c1[v] + d) return false;
  return true;
}

std::vector<char> support(const Column& c) {
  std::vector<char> s(c.size());
  for (std::size_t v = 0; v < c.size(); ++v) s[v] = c[v] != kAbsent;
  return s;
}

}  // namespace

Solution solveDetailed(const IOSpec& spec, const IOVar& root, std::size_t maxColumns) {
  const TraceGraph g = buildGraph(spec, root);
  Solution sol;
  std::vector<Column> columns;
  std::map<std::vector<char>, std::vector<std::uint64_t>> bySupport;
  DiagramWalker w(g);
  for (std::uint64_t x2 = 0; x2 < maxColumns; ++x2, w.advance()) {
    const Column& c2 = w.column();
    sol.bounds.push_back(w.lowerBound());
    if (sol.bounds.back().isTop()) {
      sol.topTail = true;
      Profile p{sol.bounds, x2, 1, 0};
      sol.term = normalize(fromProfile(p));
      return sol;
    }
    auto& candidates = bySupport[support(c2)];
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
      const std::uint64_t x1 = *it;
      const Column& c1 = columns[x1];
      std::uint64_t d = kAbsent;
      bool shrinks = false;
      for (std::size_t v = 0; v < c1.size() && !shrinks; ++v) {
        if (c1[v] == kAbsent) continue;
        if (c2[v] < c1[v]) shrinks = true;
        else d = std::min(d, c2[v] - c1[v]);
      }
      if (shrinks || d == kAbsent) continue;
      std::vector<std::size_t> tight;
      for (std::size_t v = 0; v < c1.size(); ++v)
        if (c1[v] != kAbsent && c2[v] - c1[v] == d) tight.push_back(v);
      if (!repeats(g, c1, sol.bounds, x1, x2 - x1, d, tight)) continue;
      sol.witness = {x1, x2, d, tight};
      sol.bounds.pop_back();
      Profile p{sol.bounds, x1, x2 - x1, d};
      sol.term = normalize(fromProfile(p));
      return sol;
    }
    candidates.push_back(x2);
    columns.push_back(c2);
  }
  throw RepetitionCapExceeded("repetition search cap exceeded");
}

IOTerm solve(const IOSpec& spec, const IOVar& root, std::size_t maxColumns) {
  return solveDetailed(spec, root, maxColumns).term;
}

std::string dumpDiagram(const TraceGraph& g, const Solution& s) {
  std::ostringstream os;
  DiagramWalker w(g);
  const std::uint64_t last = s.topTail ? s.bounds.size() - 1 : s.witness.x2;
  for (;; w.advance()) {
    os << "column " << w.x() << " (lower bound " << w.lowerBound() << "):";
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
      if (w.column()[v] != kAbsent) os << " " << g.nodeName(v) << "=" << w.column()[v];
    os << "\n";
    if (w.x() == last) break;
  }
  if (s.topTail) {
    os << "no input requirement after column " << last << "\n";
  } else {
    os << "repetition: columns " << s.witness.x1 << " and " << s.witness.x2 << ", shift " << s.witness.shift
       << ", contributing";
    for (std::size_t v : s.witness.contributing) os << " " << g.nodeName(v);
    os << "\n";
  }
  os << "solution: " << s.term.str() << "\n";
  return os.str();
}

}  // namespace prodcheck
