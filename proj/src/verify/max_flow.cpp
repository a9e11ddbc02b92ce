#include "max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace wulff {

namespace {
constexpr double kFlowEps = 1e-14;
}

MaxFlow::MaxFlow(int nodes) : source_(nodes), sink_(nodes + 1), adj_(static_cast<std::size_t>(nodes) + 2) {}

void MaxFlow::add_edge(int u, int v, double cap, double reverse_cap) {
  auto& au = adj_[static_cast<std::size_t>(u)];
  auto& av = adj_[static_cast<std::size_t>(v)];
  au.push_back({v, static_cast<int>(av.size()), cap});
  av.push_back({u, static_cast<int>(au.size()) - 1, reverse_cap});
}

void MaxFlow::add_terminal(int u, double source_cap, double sink_cap) {
  if (source_cap > 0.0) add_edge(source_, u, source_cap);
  if (sink_cap > 0.0) add_edge(u, sink_, sink_cap);
}

bool MaxFlow::bfs() {
  level_.assign(adj_.size(), -1);
  std::queue<int> q;
  level_[static_cast<std::size_t>(source_)] = 0;
  q.push(source_);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (const Arc& a : adj_[static_cast<std::size_t>(u)]) {
      if (a.cap > kFlowEps && level_[static_cast<std::size_t>(a.to)] < 0) {
        level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(u)] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(sink_)] >= 0;
}

double MaxFlow::dfs(int u, double pushed) {
  if (u == sink_) return pushed;
  const auto ui = static_cast<std::size_t>(u);
  for (std::size_t& i = next_[ui]; i < adj_[ui].size(); ++i) {
    Arc& a = adj_[ui][i];
    if (a.cap <= kFlowEps || level_[static_cast<std::size_t>(a.to)] != level_[ui] + 1) continue;
    const double got = dfs(a.to, std::min(pushed, a.cap));
    if (got > 0.0) {
      a.cap -= got;
      adj_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += got;
      return got;
    }
  }
  return 0.0;
}

double MaxFlow::solve() {
  double flow = 0.0;
  while (bfs()) {
    next_.assign(adj_.size(), 0);
    while (const double f = dfs(source_, std::numeric_limits<double>::infinity())) flow += f;
  }
  // The final bfs leaves level_ < 0 exactly on the sink side.
  return flow;
}

}  // namespace wulff
