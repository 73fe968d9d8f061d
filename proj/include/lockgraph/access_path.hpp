#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lockgraph {

// A syntactic lock identity: a base variable plus a chain of field
// selectors (e.g. dev.bus.m). Two paths denote the same lock exactly when
// they are spelled the same; there is no aliasing model behind this.
struct AccessPath {
  std::string base;
  std::vector<std::string> selectors;

  AccessPath() = default;
  explicit AccessPath(std::string base_, std::vector<std::string> sels = {})
      : base(std::move(base_)), selectors(std::move(sels)) {}

  bool empty() const { return base.empty(); }

  // Dotted spelling, "dev.bus.m". Bases never contain '.', so this is a
  // faithful encoding and the order below matches spelling order.
  std::string str() const;

  // Parses a dotted spelling. Empty segments yield an empty (invalid) path.
  static AccessPath parse(std::string_view text);

  bool operator==(const AccessPath &other) const = default;
  std::strong_ordering operator<=>(const AccessPath &other) const {
    return str() <=> other.str();
  }
};

using PathSet = std::set<AccessPath>;

struct SourceLoc {
  std::string file;
  int line = 0;

  bool operator==(const SourceLoc &other) const = default;
  auto operator<=>(const SourceLoc &other) const = default;
};

// Purely syntactic equality; the only notion of "same lock" we have.
inline bool path_equal(const AccessPath &a, const AccessPath &b) {
  return a == b;
}

// Formal-name -> actual-path map used when a callee summary is rewritten
// at a call site.
using Binding = std::map<std::string, AccessPath>;

// Rewrites the path's base through the binding, keeping any selector chain:
// p -> s.q turns p.f into s.q.f. Paths whose base is unbound are returned
// unchanged.
AccessPath substitute(const AccessPath &path, const Binding &binding);

// Convenience for rendering {a, b.c} style set text.
std::string path_set_str(const PathSet &paths);

} // namespace lockgraph
