#pragma once

#include <vector>

namespace wulff {

// Dinic's maximum flow on a graph with a source and a sink, used to solve
// binary submodular labelling problems by minimum cut.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  void add_edge(int u, int v, double cap, double reverse_cap = 0.0);
  // Capacities from the source to u and from u to the sink.
  void add_terminal(int u, double source_cap, double sink_cap);

  double solve();
  // After solve(): true if u is cut off from the source.
  bool sink_side(int u) const { return level_[static_cast<std::size_t>(u)] < 0; }

 private:
  struct Arc {
    int to;
    int rev;
    double cap;
  };

  bool bfs();
  double dfs(int u, double pushed);

  int source_;
  int sink_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace wulff
