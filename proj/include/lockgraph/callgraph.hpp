#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lockgraph/program.hpp"

namespace lockgraph {

struct CallGraph {
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges; // caller -> callee
  std::map<std::string, int> scc_id; // mutually recursive functions share one
};

// Nodes are the defined functions; an edge exists when a Call event's callee
// is itself defined. Calls to externals contribute nothing.
CallGraph build_call_graph(const Program &program);

// Bottom-up schedule: functions grouped into levels such that every callee's
// level strictly precedes its callers' (intra-SCC edges ignored). Function
// names are sorted within a level, and every function appears exactly once.
std::vector<std::vector<std::string>> analysis_order(const CallGraph &graph);

} // namespace lockgraph
