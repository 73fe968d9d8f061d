#include <algorithm>
#include <deque>
#include <json.hpp>

#include "lockgraph/absint.hpp"
#include "lockgraph/callgraph.hpp"

namespace lockgraph {

namespace {

bool contains(const PathSet &set, const AccessPath &p) {
  return set.count(p) > 0;
}

bool intersects(const PathSet &a, const PathSet &b) {
  for (const auto &p : a)
    if (b.count(p))
      return true;
  return false;
}

PathSet set_union(const PathSet &a, const PathSet &b) {
  PathSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

PathSet set_intersect(const PathSet &a, const PathSet &b) {
  PathSet out;
  for (const auto &p : a)
    if (b.count(p))
      out.insert(p);
  return out;
}

void set_subtract(PathSet &a, const PathSet &b) {
  for (const auto &p : b)
    a.erase(p);
}

// Records (or re-records) a dependency. A fact re-derived at the same site
// keeps only the guards common to all derivations.
void add_dep(DepMap &deps, const AccessPath &from, const AccessPath &to,
             PathSet guards, const SourceLoc &loc) {
  DepKey key{from, to, loc};
  auto it = deps.find(key);
  if (it == deps.end())
    deps.emplace(std::move(key), std::move(guards));
  else
    it->second = set_intersect(it->second, guards);
}

PathSet substitute_set(const PathSet &set, const Binding &binding) {
  PathSet out;
  for (const auto &p : set)
    out.insert(substitute(p, binding));
  return out;
}

} // namespace

void acquire(AbstractState &state, const AccessPath &lock,
             const AnalysisMode &mode, const SourceLoc &loc) {
  const PathSet held = state.lockset; // pre-acquisition snapshot

  // Re-acquiring a declared recursive lock nests; nothing changes.
  if (contains(mode.recursive_locks, lock) && contains(held, lock))
    return;

  // Abstract double-lock: the path that led here is assumed infeasible, so
  // the held set is no longer trustworthy and collapses to just this lock.
  // No dependencies are derived from it.
  if (mode.resets() && contains(held, lock)) {
    state.lockset = {lock};
    state.unlockset.erase(lock); // keep lockset/unlockset disjoint
    state.were_locked.insert(lock);
    return;
  }

  // First operation on a lock defines the entry expectation.
  if (!contains(state.locked, lock) && !contains(state.unlocked, lock))
    state.unlocked.insert(lock);

  state.lockset.insert(lock);
  state.unlockset.erase(lock);
  state.were_locked.insert(lock);

  for (const auto &prior : held) {
    if (prior == lock)
      continue;
    PathSet guards = held;
    guards.erase(prior);
    guards.erase(lock);
    add_dep(state.deps, prior, lock, std::move(guards), loc);
  }
  for (const auto &released : state.unlockset)
    state.order.insert({released, lock});
}

void release(AbstractState &state, const AccessPath &lock,
             const AnalysisMode &mode, const SourceLoc & /*loc*/) {
  // Abstract double-unlock: same infeasible-path reasoning as acquire, but
  // here nothing at all is known to be held any more.
  if (mode.resets() && contains(state.unlockset, lock))
    state.lockset.clear();

  if (!contains(state.locked, lock) && !contains(state.unlocked, lock))
    state.locked.insert(lock);

  state.unlockset.insert(lock);
  state.lockset.erase(lock);
}

void apply_summary(AbstractState &state, const Summary &callee,
                   const std::vector<AccessPath> &actuals,
                   const AnalysisMode &mode, const SourceLoc &call_site,
                   std::vector<Diagnostic> *diags) {
  if (actuals.size() > callee.formals.size()) {
    if (diags)
      diags->push_back({Diagnostic::Severity::Warning, call_site.file,
                        call_site.line, 0,
                        "call passes more arguments than the callee has "
                        "formals; treated as no-op"});
    return;
  }

  Binding binding;
  for (size_t i = 0; i < actuals.size(); ++i)
    binding[callee.formals[i]] = actuals[i];
  // Formals beyond the actuals stay symbolic.

  const PathSet chi_locked = substitute_set(callee.locked, binding);
  const PathSet chi_unlocked = substitute_set(callee.unlocked, binding);
  const PathSet chi_lockset = substitute_set(callee.lockset, binding);
  const PathSet chi_unlockset = substitute_set(callee.unlockset, binding);
  const PathSet chi_were_locked = substitute_set(callee.were_locked, binding);
  std::set<std::pair<AccessPath, AccessPath>> chi_order;
  for (const auto &[before, after] : callee.order)
    chi_order.insert({substitute(before, binding), substitute(after, binding)});

  const PathSet held = state.lockset; // call-site snapshot

  // Propagate the callee's entry expectations for locks this function has
  // not touched yet (and whose state the caller does not already determine).
  for (const auto &l : chi_unlocked) {
    if (!contains(state.unlockset, l) && !contains(state.locked, l) &&
        !contains(state.unlocked, l))
      state.unlocked.insert(l);
  }
  for (const auto &l : chi_locked) {
    if (!contains(state.lockset, l) && !contains(state.locked, l) &&
        !contains(state.unlocked, l))
      state.locked.insert(l);
  }

  // The callee observed a lock state contradicting ours: acquired something
  // we hold, or expected held something we released. Same infeasible-path
  // assumption as for direct double-locking; the callee's view wins and no
  // dependencies are derived from the stale held set.
  PathSet dep_sources = held;
  if (mode.resets() && (intersects(held, chi_unlocked) ||
                        intersects(state.unlockset, chi_locked))) {
    state.lockset = chi_lockset;
    dep_sources.clear();
  }

  state.lockset = set_union(state.lockset, chi_lockset);
  set_subtract(state.lockset, chi_unlockset);
  set_subtract(state.unlockset, chi_lockset);
  state.unlockset = set_union(state.unlockset, chi_unlockset);
  state.were_locked = set_union(state.were_locked, chi_were_locked);

  // Everything the callee acquired was acquired while we held `held` —
  // except pairs the callee itself proves ordered the other way (it
  // released P before acquiring W).
  for (const auto &p : dep_sources) {
    for (const auto &w : chi_were_locked) {
      if (p == w || chi_order.count({p, w}))
        continue;
      PathSet guards = dep_sources;
      guards.erase(p);
      guards.erase(w);
      add_dep(state.deps, p, w, std::move(guards), call_site);
    }
  }
}

AbstractState join(const AbstractState &a, const AbstractState &b) {
  AbstractState out;
  out.locked = set_union(a.locked, b.locked);
  out.unlocked = set_union(a.unlocked, b.unlocked);
  out.lockset = set_union(a.lockset, b.lockset);
  out.unlockset = set_union(a.unlockset, b.unlockset);
  out.were_locked = set_union(a.were_locked, b.were_locked);
  out.deps = a.deps;
  for (const auto &[key, guards] : b.deps)
    add_dep(out.deps, key.from, key.to, guards, key.loc);
  out.order = a.order;
  out.order.insert(b.order.begin(), b.order.end());
  return out;
}

bool leq(const AbstractState &a, const AbstractState &b) {
  auto subset = [](const PathSet &x, const PathSet &y) {
    return std::includes(y.begin(), y.end(), x.begin(), x.end());
  };
  if (!subset(a.locked, b.locked) || !subset(a.unlocked, b.unlocked) ||
      !subset(a.lockset, b.lockset) || !subset(a.unlockset, b.unlockset) ||
      !subset(a.were_locked, b.were_locked))
    return false;
  for (const auto &[key, guards] : a.deps) // keys only; guards shrink on join
    if (!b.deps.count(key))
      return false;
  return std::includes(b.order.begin(), b.order.end(), a.order.begin(),
                       a.order.end());
}

namespace {

void transfer_event(AbstractState &state, const Event &ev,
                    const SummaryStore &store, const AnalysisMode &mode,
                    std::vector<Diagnostic> *diags) {
  switch (ev.kind) {
  case EventKind::Acquire:
    acquire(state, ev.lock, mode, ev.loc);
    break;
  case EventKind::Release:
    release(state, ev.lock, mode, ev.loc);
    break;
  case EventKind::Call: {
    auto it = store.find(ev.callee);
    // No summary means an external or a same-SCC callee that is not
    // finished yet; partial summaries are never consulted.
    if (it != store.end())
      apply_summary(state, it->second, ev.actuals, mode, ev.loc, diags);
    break;
  }
  case EventKind::Nop:
    break;
  }
}

AbstractState transfer_node(const Cfg::Node &node, AbstractState state,
                            const SummaryStore &store,
                            const AnalysisMode &mode,
                            std::vector<Diagnostic> *diags) {
  for (const auto &ev : node.events)
    transfer_event(state, ev, store, mode, diags);
  return state;
}

// Loop heads are back-edge targets under a DFS from the entry. The mini-C
// and JSON forms only produce structured (reducible) graphs, so every cycle
// is broken by widening at one of these.
std::vector<bool> find_loop_heads(const Cfg &cfg) {
  const size_t n = cfg.nodes.size();
  auto succ = cfg.successors();
  std::vector<int> color(n, 0); // 0 white, 1 gray, 2 black
  std::vector<bool> head(n, false);

  struct Frame {
    int v;
    size_t child;
  };
  std::vector<Frame> frames{{cfg.entry, 0}};
  color[static_cast<size_t>(cfg.entry)] = 1;
  while (!frames.empty()) {
    Frame &f = frames.back();
    auto v = static_cast<size_t>(f.v);
    if (f.child < succ[v].size()) {
      int w = succ[v][f.child++];
      auto wu = static_cast<size_t>(w);
      if (color[wu] == 0) {
        color[wu] = 1;
        frames.push_back({w, 0});
      } else if (color[wu] == 1) {
        head[wu] = true;
      }
    } else {
      color[v] = 2;
      frames.pop_back();
    }
  }
  return head;
}

std::vector<int> reverse_post_order(const Cfg &cfg) {
  const size_t n = cfg.nodes.size();
  auto succ = cfg.successors();
  std::vector<bool> seen(n, false);
  std::vector<int> post;

  struct Frame {
    int v;
    size_t child;
  };
  std::vector<Frame> frames{{cfg.entry, 0}};
  seen[static_cast<size_t>(cfg.entry)] = true;
  while (!frames.empty()) {
    Frame &f = frames.back();
    auto v = static_cast<size_t>(f.v);
    if (f.child < succ[v].size()) {
      int w = succ[v][f.child++];
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = true;
        frames.push_back({w, 0});
      }
    } else {
      post.push_back(f.v);
      frames.pop_back();
    }
  }
  std::reverse(post.begin(), post.end());
  return post;
}

} // namespace

Summary analyze_function(const FunctionDef &fn, const SummaryStore &store,
                         const AnalysisMode &mode,
                         std::vector<Diagnostic> *diags,
                         FixpointStats *stats) {
  const Cfg &cfg = fn.cfg;
  const size_t n = cfg.nodes.size();
  auto preds = cfg.predecessors();
  auto succ = cfg.successors();
  auto heads = find_loop_heads(cfg);
  std::vector<int> rpo = reverse_post_order(cfg);
  std::vector<int> rpo_index(n, 0);
  for (size_t i = 0; i < rpo.size(); ++i)
    rpo_index[static_cast<size_t>(rpo[i])] = static_cast<int>(i);

  std::vector<AbstractState> in(n), out(n);
  std::vector<bool> computed(n, false);
  std::vector<int> visits(n, 0);

  // Worklist ordered by reverse post-order position: loop bodies settle
  // before their successors are revisited.
  std::set<std::pair<int, int>> worklist;
  for (int v : rpo)
    worklist.insert({rpo_index[static_cast<size_t>(v)], v});

  while (!worklist.empty()) {
    int v = worklist.begin()->second;
    worklist.erase(worklist.begin());
    auto vu = static_cast<size_t>(v);

    AbstractState in_state; // entry starts from the all-empty state
    for (int p : preds[vu])
      in_state = join(in_state, out[static_cast<size_t>(p)]);
    if (heads[vu])
      in_state = widen(in[vu], in_state); // accumulate across iterations
    in[vu] = in_state;

    AbstractState out_state =
        transfer_node(cfg.nodes[vu], std::move(in_state), store, mode, diags);
    ++visits[vu];
    if (!computed[vu] || !(out_state == out[vu])) {
      computed[vu] = true;
      out[vu] = std::move(out_state);
      for (int s : succ[vu])
        worklist.insert({rpo_index[static_cast<size_t>(s)], s});
    }
  }

  if (stats)
    stats->max_node_visits =
        *std::max_element(visits.begin(), visits.end());

  const AbstractState &exit_state = out[static_cast<size_t>(cfg.exit_node)];
  Summary summary;
  summary.formals = fn.formals;
  summary.locked = exit_state.locked;
  summary.unlocked = exit_state.unlocked;
  summary.lockset = exit_state.lockset;
  summary.unlockset = exit_state.unlockset;
  summary.were_locked = exit_state.were_locked;
  summary.deps = exit_state.deps;
  summary.order = exit_state.order;
  return summary;
}

AnalysisResult analyze_program(const Program &program,
                               const AnalysisMode &mode) {
  AnalysisResult result;
  CallGraph graph = build_call_graph(program);
  for (const auto &level : analysis_order(graph)) {
    for (const auto &name : level) {
      const FunctionDef &fn = program.functions.at(name);
      result.summaries[name] = analyze_function(
          fn, result.summaries, mode, &result.diagnostics, nullptr);
      ++result.fixpoints_run;
    }
  }
  return result;
}

// --- summary rendering ----------------------------------------------------

namespace {

using ojson = nlohmann::ordered_json;

std::string pair_set_str(
    const std::set<std::pair<AccessPath, AccessPath>> &pairs) {
  std::string out = "{";
  bool first = true;
  for (const auto &[a, b] : pairs) {
    if (!first)
      out += ", ";
    out += "(" + a.str() + ", " + b.str() + ")";
    first = false;
  }
  return out + "}";
}

std::string dep_pairs_str(const DepMap &deps) {
  // Collapse to the (from, to) view for the human-readable dump.
  std::set<std::pair<AccessPath, AccessPath>> pairs;
  for (const auto &[key, guards] : deps)
    pairs.insert({key.from, key.to});
  return pair_set_str(pairs);
}

ojson path_set_json(const PathSet &set) {
  ojson arr = ojson::array();
  for (const auto &p : set)
    arr.push_back(p.str());
  return arr;
}

} // namespace

std::string summaries_text(const SummaryStore &store) {
  std::string out;
  for (const auto &[name, s] : store) {
    out += name + ":\n";
    out += "  locked     = " + path_set_str(s.locked) + "\n";
    out += "  unlocked   = " + path_set_str(s.unlocked) + "\n";
    out += "  lockset    = " + path_set_str(s.lockset) + "\n";
    out += "  unlockset  = " + path_set_str(s.unlockset) + "\n";
    out += "  wereLocked = " + path_set_str(s.were_locked) + "\n";
    out += "  deps       = " + dep_pairs_str(s.deps) + "\n";
    out += "  order      = " + pair_set_str(s.order) + "\n";
  }
  return out;
}

std::string summaries_json(const SummaryStore &store) {
  ojson root = ojson::object();
  for (const auto &[name, s] : store) {
    ojson entry = ojson::object();
    entry["formals"] = s.formals;
    entry["locked"] = path_set_json(s.locked);
    entry["unlocked"] = path_set_json(s.unlocked);
    entry["lockset"] = path_set_json(s.lockset);
    entry["unlockset"] = path_set_json(s.unlockset);
    entry["wereLocked"] = path_set_json(s.were_locked);
    ojson deps = ojson::array();
    for (const auto &[key, guards] : s.deps) {
      ojson d = ojson::object();
      d["from"] = key.from.str();
      d["to"] = key.to.str();
      d["guards"] = path_set_json(guards);
      d["file"] = key.loc.file;
      d["line"] = key.loc.line;
      deps.push_back(std::move(d));
    }
    entry["deps"] = std::move(deps);
    ojson order = ojson::array();
    for (const auto &[before, after] : s.order)
      order.push_back(ojson::array({before.str(), after.str()}));
    entry["order"] = std::move(order);
    root[name] = std::move(entry);
  }
  return root.dump(2) + "\n";
}

} // namespace lockgraph
