#include "lockgraph/program.hpp"

#include <deque>

namespace lockgraph {

std::vector<std::vector<int>> Cfg::successors() const {
  std::vector<std::vector<int>> succ(nodes.size());
  for (const auto &[from, to] : edges)
    succ[static_cast<size_t>(from)].push_back(to);
  return succ; // edge set is ordered, so adjacency lists come out sorted
}

std::vector<std::vector<int>> Cfg::predecessors() const {
  std::vector<std::vector<int>> pred(nodes.size());
  for (const auto &[from, to] : edges)
    pred[static_cast<size_t>(to)].push_back(from);
  return pred;
}

bool cfg_is_well_formed(const Cfg &cfg) {
  if (cfg.nodes.empty())
    return false;
  const size_t n = cfg.nodes.size();
  if (cfg.entry < 0 || static_cast<size_t>(cfg.entry) >= n)
    return false;
  if (cfg.exit_node < 0 || static_cast<size_t>(cfg.exit_node) >= n)
    return false;
  for (const auto &[from, to] : cfg.edges) {
    if (from < 0 || static_cast<size_t>(from) >= n || to < 0 ||
        static_cast<size_t>(to) >= n)
      return false;
  }

  auto flood = [n](int start, const std::vector<std::vector<int>> &adj) {
    std::vector<bool> seen(n, false);
    std::deque<int> work{start};
    seen[static_cast<size_t>(start)] = true;
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (int w : adj[static_cast<size_t>(v)]) {
        if (!seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = true;
          work.push_back(w);
        }
      }
    }
    return seen;
  };

  auto from_entry = flood(cfg.entry, cfg.successors());
  auto to_exit = flood(cfg.exit_node, cfg.predecessors());
  for (size_t i = 0; i < n; ++i) {
    if (!from_entry[i] || !to_exit[i])
      return false;
  }
  return true;
}

} // namespace lockgraph
