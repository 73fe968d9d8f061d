#pragma once

#include <map>
#include <string>
#include <vector>

#include "lockgraph/frontend.hpp"
#include "lockgraph/program.hpp"

namespace lockgraph {

// Identity of a lock-order fact: L was acquired at `loc` while `from` was
// held. Guard sets are attached per key and merge by intersection, so a
// guard survives only if it is held on every path reaching the site.
struct DepKey {
  AccessPath from;
  AccessPath to;
  SourceLoc loc;

  bool operator==(const DepKey &other) const = default;
  auto operator<=>(const DepKey &other) const = default;
};

using DepMap = std::map<DepKey, PathSet>; // key -> guard locks

// State tracked per program point. locked/unlocked accumulate what the
// function expects on entry (first use wins); the rest describe its effect.
struct AbstractState {
  PathSet locked;      // expected held on entry (first op was a release)
  PathSet unlocked;    // expected free on entry (first op was an acquire)
  PathSet lockset;     // currently held
  PathSet unlockset;   // released and not re-acquired
  PathSet were_locked; // every lock acquired at least once
  DepMap deps;
  std::set<std::pair<AccessPath, AccessPath>> order; // released before acquired

  bool operator==(const AbstractState &other) const = default;
};

// Per-function result: the entry expectations plus the exit-point state.
struct Summary {
  std::vector<std::string> formals;
  PathSet locked;
  PathSet unlocked;
  PathSet lockset;
  PathSet unlockset;
  PathSet were_locked;
  DepMap deps;
  std::set<std::pair<AccessPath, AccessPath>> order;

  bool operator==(const Summary &other) const = default;
};

using SummaryStore = std::map<std::string, Summary>;

struct AnalysisMode {
  // Mode 1 resets the lockset on abstract double-locking/unlocking (the
  // offending path is assumed infeasible); mode 2 keeps going without
  // resets and over-reports instead.
  int mode = 1;
  PathSet recursive_locks; // re-acquiring one of these while held is a no-op

  bool resets() const { return mode == 1; }
};

// Transfer functions. All mutate `state` in place.
void acquire(AbstractState &state, const AccessPath &lock,
             const AnalysisMode &mode, const SourceLoc &loc);
void release(AbstractState &state, const AccessPath &lock,
             const AnalysisMode &mode, const SourceLoc &loc);
void apply_summary(AbstractState &state, const Summary &callee,
                   const std::vector<AccessPath> &actuals,
                   const AnalysisMode &mode, const SourceLoc &call_site,
                   std::vector<Diagnostic> *diags = nullptr);

// Join is element-wise union; dependencies with equal keys keep only the
// guards common to both sides. Widening coincides with join (all chains are
// finite here) and is applied at loop heads.
AbstractState join(const AbstractState &a, const AbstractState &b);
bool leq(const AbstractState &a, const AbstractState &b);
inline AbstractState widen(const AbstractState &a, const AbstractState &b) {
  return join(a, b);
}

struct FixpointStats {
  int max_node_visits = 0; // recomputations of the busiest CFG node
};

// Runs the worklist fixpoint over the function's CFG from an all-empty
// state and packages the exit state as the function's summary. Callees
// without a stored summary (externals, not-yet-finished members of the
// same SCC) are skipped.
Summary analyze_function(const FunctionDef &fn, const SummaryStore &store,
                         const AnalysisMode &mode,
                         std::vector<Diagnostic> *diags = nullptr,
                         FixpointStats *stats = nullptr);

struct AnalysisResult {
  SummaryStore summaries;
  size_t fixpoints_run = 0; // one per function, by construction
  std::vector<Diagnostic> diagnostics;
};

// Phase 1 driver: schedules functions bottom-up over the call graph and
// analyzes each exactly once.
AnalysisResult analyze_program(const Program &program,
                               const AnalysisMode &mode);

// Summary renderings used by --dump-summaries (text and JSON).
std::string summaries_text(const SummaryStore &store);
std::string summaries_json(const SummaryStore &store);

} // namespace lockgraph
