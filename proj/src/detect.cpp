#include <algorithm>
#include <deque>
#include <json.hpp>

#include "lockgraph/detect.hpp"

namespace lockgraph {

DependencyRelation merge_dependencies(const SummaryStore &store) {
  DependencyRelation relation;
  for (const auto &[name, summary] : store) {
    for (const auto &[key, guards] : summary.deps) {
      relation.edges[{key.from, key.to}].push_back(
          Occurrence{guards, key.loc, name});
    }
  }
  for (auto &[edge, occurrences] : relation.edges)
    std::sort(occurrences.begin(), occurrences.end());
  return relation;
}

namespace {

std::vector<AccessPath> relation_nodes(const DependencyRelation &relation) {
  std::set<AccessPath> nodes;
  for (const auto &[edge, occs] : relation.edges) {
    nodes.insert(edge.first);
    nodes.insert(edge.second);
  }
  return {nodes.begin(), nodes.end()};
}

} // namespace

std::set<PathPair> transitive_closure(const DependencyRelation &relation) {
  // Breadth-first reachability from each node; the relation stays small
  // (one node per distinct lock path), so this is plenty.
  std::vector<AccessPath> nodes = relation_nodes(relation);
  std::map<AccessPath, size_t> index;
  for (size_t i = 0; i < nodes.size(); ++i)
    index[nodes[i]] = i;

  std::vector<std::vector<size_t>> adj(nodes.size());
  for (const auto &[edge, occs] : relation.edges)
    adj[index[edge.first]].push_back(index[edge.second]);

  std::set<PathPair> closed;
  for (size_t start = 0; start < nodes.size(); ++start) {
    std::vector<bool> seen(nodes.size(), false);
    std::deque<size_t> work{start};
    while (!work.empty()) {
      size_t v = work.front();
      work.pop_front();
      for (size_t w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          closed.insert({nodes[start], nodes[w]});
          work.push_back(w);
        }
      }
    }
  }
  return closed;
}

namespace {

// Shortest edge path from -> to (BFS; neighbor order is deterministic
// because the edge map is sorted). Empty when unreachable.
std::vector<PathPair> shortest_chain(const DependencyRelation &relation,
                                     const AccessPath &from,
                                     const AccessPath &to) {
  std::map<AccessPath, std::vector<AccessPath>> adj;
  for (const auto &[edge, occs] : relation.edges)
    adj[edge.first].push_back(edge.second);

  std::map<AccessPath, AccessPath> parent;
  std::deque<AccessPath> work{from};
  std::set<AccessPath> seen{from};
  while (!work.empty()) {
    AccessPath v = work.front();
    work.pop_front();
    auto it = adj.find(v);
    if (it == adj.end())
      continue;
    for (const auto &w : it->second) {
      if (seen.count(w))
        continue;
      seen.insert(w);
      parent.emplace(w, v);
      if (w == to) {
        std::vector<PathPair> chain;
        AccessPath cur = to;
        while (!(cur == from)) {
          AccessPath prev = parent.at(cur);
          chain.push_back({prev, cur});
          cur = prev;
        }
        std::reverse(chain.begin(), chain.end());
        return chain;
      }
      work.push_back(w);
    }
  }
  return {};
}

// Guard-set alternatives for one direction of a candidate pair: a direct
// edge contributes one set per occurrence; a chain contributes a single
// derived set — the intersection over its edges of each edge's guard union
// (a gate protects a chain only if held across all of its acquisitions).
std::vector<PathSet> direction_guard_sets(const DependencyRelation &relation,
                                          const AccessPath &from,
                                          const AccessPath &to,
                                          const std::vector<PathPair> &chain) {
  auto it = relation.edges.find({from, to});
  if (it != relation.edges.end()) {
    std::vector<PathSet> sets;
    for (const auto &occ : it->second)
      sets.push_back(occ.guards);
    return sets;
  }

  bool first = true;
  PathSet derived;
  for (const auto &edge : chain) {
    PathSet edge_union;
    for (const auto &occ : relation.edges.at(edge))
      edge_union.insert(occ.guards.begin(), occ.guards.end());
    if (first) {
      derived = std::move(edge_union);
      first = false;
    } else {
      PathSet keep;
      for (const auto &g : derived)
        if (edge_union.count(g))
          keep.insert(g);
      derived = std::move(keep);
    }
  }
  return {derived};
}

bool all_combinations_gated(const std::vector<PathSet> &a,
                            const std::vector<PathSet> &b) {
  if (a.empty() || b.empty())
    return false;
  for (const auto &ga : a) {
    for (const auto &gb : b) {
      bool shared = false;
      for (const auto &g : ga)
        if (gb.count(g)) {
          shared = true;
          break;
        }
      if (!shared)
        return false;
    }
  }
  return true;
}

} // namespace

std::vector<DeadlockReport> find_deadlocks(const DependencyRelation &relation,
                                           bool use_gate_filter,
                                           bool include_suppressed) {
  std::set<PathPair> closed = transitive_closure(relation);

  std::vector<DeadlockReport> reports;
  for (const auto &[a, b] : closed) {
    if (!(a < b))
      continue; // visit each unordered pair once
    if (!closed.count({b, a}))
      continue;

    DeadlockReport report;
    report.first = a;
    report.second = b;

    bool fwd_direct = relation.edges.count({a, b}) > 0;
    bool rev_direct = relation.edges.count({b, a}) > 0;
    report.direct = fwd_direct && rev_direct;

    std::vector<PathPair> fwd_chain, rev_chain;
    if (!fwd_direct)
      fwd_chain = shortest_chain(relation, a, b);
    if (!rev_direct)
      rev_chain = shortest_chain(relation, b, a);

    if (fwd_direct)
      for (const auto &occ : relation.edges.at({a, b}))
        report.witnesses.push_back({a, b, occ});
    if (rev_direct)
      for (const auto &occ : relation.edges.at({b, a}))
        report.witnesses.push_back({b, a, occ});

    if (!report.direct) {
      // Record the whole cycle through both directions.
      auto append = [&](bool direct, const AccessPath &from,
                        const AccessPath &to,
                        const std::vector<PathPair> &chain) {
        if (direct)
          report.chain.push_back({from, to});
        else
          report.chain.insert(report.chain.end(), chain.begin(), chain.end());
      };
      append(fwd_direct, a, b, fwd_chain);
      append(rev_direct, b, a, rev_chain);
    }

    if (use_gate_filter) {
      auto fwd_guards = direction_guard_sets(relation, a, b, fwd_chain);
      auto rev_guards = direction_guard_sets(relation, b, a, rev_chain);
      report.suppressed = all_combinations_gated(fwd_guards, rev_guards);
    }
    reports.push_back(std::move(report));
  }

  std::sort(reports.begin(), reports.end(),
            [](const DeadlockReport &x, const DeadlockReport &y) {
              if (x.direct != y.direct)
                return x.direct; // both-directions-direct pairs first
              if (!(x.first == y.first))
                return x.first < y.first;
              return x.second < y.second;
            });

  if (use_gate_filter && !include_suppressed) {
    reports.erase(std::remove_if(reports.begin(), reports.end(),
                                 [](const DeadlockReport &r) {
                                   return r.suppressed;
                                 }),
                  reports.end());
  }
  return reports;
}

std::string render_report(const std::vector<DeadlockReport> &reports,
                          ReportFormat format) {
  if (format == ReportFormat::Json) {
    using ojson = nlohmann::ordered_json;
    ojson root = ojson::object();
    ojson list = ojson::array();
    for (const auto &r : reports) {
      ojson entry = ojson::object();
      entry["locks"] = ojson::array({r.first.str(), r.second.str()});
      entry["direct"] = r.direct;
      ojson witnesses = ojson::array();
      for (const auto &w : r.witnesses) {
        ojson wit = ojson::object();
        wit["from"] = w.from.str();
        wit["to"] = w.to.str();
        wit["file"] = w.occ.loc.file;
        wit["line"] = w.occ.loc.line;
        ojson guards = ojson::array();
        for (const auto &g : w.occ.guards)
          guards.push_back(g.str());
        wit["guards"] = std::move(guards);
        witnesses.push_back(std::move(wit));
      }
      entry["witnesses"] = std::move(witnesses);
      entry["suppressed"] = r.suppressed;
      ojson chain = ojson::array();
      for (const auto &[from, to] : r.chain)
        chain.push_back(ojson::object({{"from", from.str()},
                                       {"to", to.str()}}));
      entry["chain"] = std::move(chain);
      list.push_back(std::move(entry));
    }
    root["deadlocks"] = std::move(list);
    return root.dump(2) + "\n";
  }

  if (reports.empty())
    return "no deadlocks found\n";

  std::string out;
  for (const auto &r : reports) {
    out += "potential deadlock: {" + r.first.str() + ", " + r.second.str() +
           "}";
    if (!r.direct)
      out += " (via chain)";
    if (r.suppressed)
      out += " [suppressed by gate lock]";
    out += "\n";
    for (const auto &w : r.witnesses) {
      out += "  " + w.from.str() + " -> " + w.to.str() + " at " +
             w.occ.loc.file + ":" + std::to_string(w.occ.loc.line);
      if (w.occ.guards.empty())
        out += " (guards: none)";
      else
        out += " (guards: " + path_set_str(w.occ.guards) + ")";
      out += " [" + w.occ.owner + "]\n";
    }
    if (!r.chain.empty()) {
      out += "  cycle:";
      for (size_t i = 0; i < r.chain.size(); ++i) {
        if (i == 0)
          out += " " + r.chain[i].first.str();
        out += " -> " + r.chain[i].second.str();
      }
      out += "\n";
    }
  }
  out += std::to_string(reports.size()) +
         (reports.size() == 1 ? " potential deadlock\n"
                              : " potential deadlocks\n");
  return out;
}

} // namespace lockgraph
