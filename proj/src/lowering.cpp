#include <deque>
#include <map>

#include "lockgraph/frontend.hpp"

namespace lockgraph {

namespace {

// Incremental CFG builder. `cur` is the block currently receiving events;
// a return redirects it to the exit and parks further statements in a fresh
// block that the final prune removes if nothing reaches it.
struct CfgBuilder {
  Cfg cfg;
  int cur = 0;

  CfgBuilder() {
    cfg.nodes.resize(2); // 0 = entry, 1 = exit
    cfg.entry = 0;
    cfg.exit_node = 1;
    cur = 0;
  }

  int fresh() {
    cfg.nodes.emplace_back();
    return static_cast<int>(cfg.nodes.size()) - 1;
  }

  void edge(int from, int to) { cfg.edges.insert({from, to}); }

  void emit(Event ev) {
    cfg.nodes[static_cast<size_t>(cur)].events.push_back(std::move(ev));
  }

  void lower_list(const StmtList &stmts) {
    for (const auto &s : stmts)
      lower(s);
  }

  void lower(const Stmt &s) {
    switch (s.kind) {
    case Stmt::Kind::Lock:
      emit(Event::acquire(s.path, s.loc));
      break;
    case Stmt::Kind::Unlock:
      emit(Event::release(s.path, s.loc));
      break;
    case Stmt::Kind::Call:
      emit(Event::call(s.callee, s.actuals, s.loc));
      break;
    case Stmt::Kind::Nop:
      emit(Event::nop(s.loc));
      break;
    case Stmt::Kind::Return: {
      edge(cur, cfg.exit_node);
      cur = fresh(); // dead unless something else jumps here; pruned below
      break;
    }
    case Stmt::Kind::If: {
      int then_entry = fresh();
      int else_entry = fresh();
      int join = fresh();
      edge(cur, then_entry);
      edge(cur, else_entry);
      cur = then_entry;
      lower_list(s.body);
      edge(cur, join);
      cur = else_entry;
      lower_list(s.orelse);
      edge(cur, join);
      cur = join;
      break;
    }
    case Stmt::Kind::While: {
      int head = fresh();
      int body_entry = fresh();
      int after = fresh();
      edge(cur, head);
      edge(head, body_entry); // condition is opaque: both outcomes possible
      edge(head, after);
      cur = body_entry;
      lower_list(s.body);
      edge(cur, head); // back edge
      cur = after;
      break;
    }
    }
  }

  Cfg finish() {
    edge(cur, cfg.exit_node);

    // Drop blocks no longer reachable from the entry (code after returns,
    // join points whose every arm returned) and remap ids.
    const size_t n = cfg.nodes.size();
    std::vector<bool> live(n, false);
    std::deque<int> work{cfg.entry};
    live[static_cast<size_t>(cfg.entry)] = true;
    auto succ = cfg.successors();
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (int w : succ[static_cast<size_t>(v)]) {
        if (!live[static_cast<size_t>(w)]) {
          live[static_cast<size_t>(w)] = true;
          work.push_back(w);
        }
      }
    }
    live[static_cast<size_t>(cfg.exit_node)] = true; // exit always kept

    std::map<int, int> remap;
    Cfg pruned;
    pruned.nodes.clear();
    for (size_t i = 0; i < n; ++i) {
      if (live[i]) {
        remap[static_cast<int>(i)] = static_cast<int>(pruned.nodes.size());
        pruned.nodes.push_back(std::move(cfg.nodes[i]));
      }
    }
    for (const auto &[from, to] : cfg.edges) {
      if (live[static_cast<size_t>(from)] && live[static_cast<size_t>(to)])
        pruned.edges.insert({remap[from], remap[to]});
    }
    pruned.entry = remap[cfg.entry];
    pruned.exit_node = remap[cfg.exit_node];
    return pruned;
  }
};

} // namespace

FunctionDef make_function(std::string name, std::vector<std::string> formals,
                          StmtList body) {
  FunctionDef fn;
  fn.name = std::move(name);
  fn.formals = std::move(formals);
  fn.body = std::move(body);
  CfgBuilder builder;
  builder.lower_list(fn.body);
  fn.cfg = builder.finish();
  return fn;
}

std::string Diagnostic::str() const {
  std::string out = file;
  if (line > 0) {
    out += ':';
    out += std::to_string(line);
    if (column > 0) {
      out += ':';
      out += std::to_string(column);
    }
  }
  out += is_error() ? ": error: " : ": warning: ";
  out += message;
  return out;
}

} // namespace lockgraph
