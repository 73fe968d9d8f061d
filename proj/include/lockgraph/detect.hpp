#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lockgraph/absint.hpp"

namespace lockgraph {

// One derivation of a lock-order edge: the owning function, the site, and
// the gate locks held around it.
struct Occurrence {
  PathSet guards;
  SourceLoc loc;
  std::string owner;

  bool operator==(const Occurrence &other) const = default;
  auto operator<=>(const Occurrence &other) const = default;
};

using PathPair = std::pair<AccessPath, AccessPath>;

// Program-wide lock-order relation: edge (A, B) means some function
// acquired B while holding A, with one occurrence per derivation site.
struct DependencyRelation {
  std::map<PathPair, std::vector<Occurrence>> edges;
};

// Union of every summary's dependencies. Edges whose endpoints mention a
// formal that was never bound stay in terms of the formal's name.
DependencyRelation merge_dependencies(const SummaryStore &store);

// Smallest transitively closed superset of the relation's edge set.
std::set<PathPair> transitive_closure(const DependencyRelation &relation);

struct Witness {
  AccessPath from;
  AccessPath to;
  Occurrence occ;
};

struct DeadlockReport {
  AccessPath first, second; // the unordered pair, sorted by spelling
  bool direct = false;      // both directions are single edges
  std::vector<Witness> witnesses; // occurrences of the direct direction(s)
  bool suppressed = false;        // gated on every occurrence combination
  std::vector<PathPair> chain;    // full cycle when not direct
};

// Reports one entry per unordered pair {A, B} with both directions in the
// transitive closure. Pairs with both edges direct come first, then by
// spelling. With the gate filter on, a pair is suppressed when every
// combination of opposing derivations shares a gate lock; suppressed
// reports are dropped unless `include_suppressed` keeps them (flagged).
std::vector<DeadlockReport> find_deadlocks(const DependencyRelation &relation,
                                           bool use_gate_filter,
                                           bool include_suppressed = false);

enum class ReportFormat { Text, Json };

std::string render_report(const std::vector<DeadlockReport> &reports,
                          ReportFormat format);

} // namespace lockgraph
