#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lockgraph/access_path.hpp"

namespace lockgraph {

enum class EventKind { Acquire, Release, Call, Nop };

// One lock-relevant operation. Acquire/Release carry the lock path, Call
// carries the callee name and the (address-of-stripped) actual paths.
struct Event {
  EventKind kind = EventKind::Nop;
  AccessPath lock;                  // Acquire / Release
  std::string callee;               // Call
  std::vector<AccessPath> actuals;  // Call
  SourceLoc loc;

  // Structural comparison; locations are metadata and JSON round-trips
  // re-derive them.
  bool operator==(const Event &other) const {
    return kind == other.kind && lock == other.lock &&
           callee == other.callee && actuals == other.actuals;
  }

  static Event acquire(AccessPath p, SourceLoc loc) {
    return Event{EventKind::Acquire, std::move(p), {}, {}, std::move(loc)};
  }
  static Event release(AccessPath p, SourceLoc loc) {
    return Event{EventKind::Release, std::move(p), {}, {}, std::move(loc)};
  }
  static Event call(std::string callee, std::vector<AccessPath> actuals,
                    SourceLoc loc) {
    return Event{EventKind::Call, {}, std::move(callee), std::move(actuals),
                 std::move(loc)};
  }
  static Event nop(SourceLoc loc) {
    return Event{EventKind::Nop, {}, {}, {}, std::move(loc)};
  }
};

// Structured statement form of a function body. Both frontends produce this
// tree; the CFG is lowered from it and the JSON dumper serializes it.
struct Stmt {
  enum class Kind { Lock, Unlock, Call, If, While, Nop, Return };

  Kind kind = Kind::Nop;
  AccessPath path;                  // Lock / Unlock
  std::string callee;               // Call
  std::vector<AccessPath> actuals;  // Call
  std::vector<Stmt> body;           // If: then-branch; While: loop body
  std::vector<Stmt> orelse;         // If: else-branch
  SourceLoc loc;

  bool operator==(const Stmt &other) const {
    return kind == other.kind && path == other.path &&
           callee == other.callee && actuals == other.actuals &&
           body == other.body && orelse == other.orelse;
  }
};

using StmtList = std::vector<Stmt>;

// Control-flow graph over event lists. Node 0 is the entry, `exit_node` the
// single synthetic exit; every node is reachable from the entry and reaches
// the exit (lowering prunes dead code to keep this true).
struct Cfg {
  struct Node {
    std::vector<Event> events;
    bool operator==(const Node &other) const = default;
  };

  std::vector<Node> nodes;
  std::set<std::pair<int, int>> edges;
  int entry = 0;
  int exit_node = 0;

  bool operator==(const Cfg &other) const = default;

  std::vector<std::vector<int>> successors() const;
  std::vector<std::vector<int>> predecessors() const;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> formals; // parameter names, in declaration order
  StmtList body;
  Cfg cfg;

  bool operator==(const FunctionDef &other) const = default;
};

struct Program {
  std::map<std::string, FunctionDef> functions;
  std::set<std::string> globals; // identifiers declared with a lock type

  bool operator==(const Program &other) const = default;
};

// True when every node is reachable from the entry and the exit is reachable
// from every node. Lowering establishes this; tests assert it.
bool cfg_is_well_formed(const Cfg &cfg);

} // namespace lockgraph
