#include <algorithm>
#include <deque>

#include "lockgraph/callgraph.hpp"

namespace lockgraph {

namespace {

// Iterative Tarjan so that long call chains cannot exhaust the stack.
// Returns the component id per node; ids are renumbered afterwards for a
// stable, name-independent ordering.
std::vector<int> tarjan_scc(size_t n,
                            const std::vector<std::vector<int>> &adj) {
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  int next_comp = 0;

  struct Frame {
    int v;
    size_t child;
  };

  for (size_t root = 0; root < n; ++root) {
    if (index[root] != -1)
      continue;
    std::vector<Frame> frames{{static_cast<int>(root), 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(static_cast<int>(root));
    on_stack[root] = true;

    while (!frames.empty()) {
      Frame &frame = frames.back();
      auto v = static_cast<size_t>(frame.v);
      if (frame.child < adj[v].size()) {
        int w = adj[v][frame.child++];
        auto wu = static_cast<size_t>(w);
        if (index[wu] == -1) {
          index[wu] = low[wu] = next_index++;
          stack.push_back(w);
          on_stack[wu] = true;
          frames.push_back({w, 0});
        } else if (on_stack[wu]) {
          low[v] = std::min(low[v], index[wu]);
        }
      } else {
        if (low[v] == index[v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(w)] = false;
            comp[static_cast<size_t>(w)] = next_comp;
            if (w == frame.v)
              break;
          }
          ++next_comp;
        }
        int finished = frame.v;
        frames.pop_back();
        if (!frames.empty()) {
          auto p = static_cast<size_t>(frames.back().v);
          low[p] = std::min(low[p], low[static_cast<size_t>(finished)]);
        }
      }
    }
  }
  return comp;
}

} // namespace

CallGraph build_call_graph(const Program &program) {
  CallGraph graph;
  for (const auto &[name, fn] : program.functions)
    graph.nodes.insert(name);

  for (const auto &[name, fn] : program.functions) {
    for (const auto &node : fn.cfg.nodes) {
      for (const auto &ev : node.events) {
        if (ev.kind == EventKind::Call &&
            program.functions.count(ev.callee))
          graph.edges.insert({name, ev.callee});
      }
    }
  }

  // Index nodes by sorted name so component numbering is deterministic.
  std::vector<std::string> names(graph.nodes.begin(), graph.nodes.end());
  std::map<std::string, int> id;
  for (size_t i = 0; i < names.size(); ++i)
    id[names[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(names.size());
  for (const auto &[from, to] : graph.edges)
    adj[static_cast<size_t>(id[from])].push_back(id[to]);

  std::vector<int> comp = tarjan_scc(names.size(), adj);
  // Renumber components in order of their smallest member name.
  std::map<int, int> renumber;
  for (size_t i = 0; i < names.size(); ++i) {
    if (!renumber.count(comp[i]))
      renumber[comp[i]] = static_cast<int>(renumber.size());
    graph.scc_id[names[i]] = renumber[comp[i]];
  }
  return graph;
}

std::vector<std::vector<std::string>> analysis_order(const CallGraph &graph) {
  if (graph.nodes.empty())
    return {};

  // Condense to one node per SCC, dropping intra-SCC edges.
  int comp_count = 0;
  for (const auto &[name, c] : graph.scc_id)
    comp_count = std::max(comp_count, c + 1);
  std::vector<std::set<int>> succ(static_cast<size_t>(comp_count));
  std::vector<int> indegree(static_cast<size_t>(comp_count), 0);
  for (const auto &[from, to] : graph.edges) {
    int cf = graph.scc_id.at(from);
    int ct = graph.scc_id.at(to);
    if (cf != ct && succ[static_cast<size_t>(cf)].insert(ct).second)
      ++indegree[static_cast<size_t>(ct)];
  }

  // Longest distance from any caller-side root, via a topological sweep.
  std::vector<int> depth(static_cast<size_t>(comp_count), 0);
  std::deque<int> ready;
  std::vector<int> pending = indegree;
  for (int c = 0; c < comp_count; ++c)
    if (pending[static_cast<size_t>(c)] == 0)
      ready.push_back(c);
  int max_depth = 0;
  while (!ready.empty()) {
    int c = ready.front();
    ready.pop_front();
    max_depth = std::max(max_depth, depth[static_cast<size_t>(c)]);
    for (int s : succ[static_cast<size_t>(c)]) {
      auto su = static_cast<size_t>(s);
      depth[su] = std::max(depth[su], depth[static_cast<size_t>(c)] + 1);
      if (--pending[su] == 0)
        ready.push_back(s);
    }
  }

  // Schedule every component as late as its deepest position allows; this
  // puts leaves first and all call-free roots together in the last level.
  std::vector<std::vector<std::string>> levels(
      static_cast<size_t>(max_depth + 1));
  for (const auto &[name, c] : graph.scc_id) {
    int level = max_depth - depth[static_cast<size_t>(c)];
    levels[static_cast<size_t>(level)].push_back(name);
  }
  for (auto &level : levels)
    std::sort(level.begin(), level.end());
  return levels;
}

} // namespace lockgraph
