#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lockgraph/detect.hpp"

namespace lockgraph {

// Everything the command line can configure, in library form so tests can
// drive the exact same paths.
struct RunConfig {
  std::vector<std::string> inputs;            // .c or .json program files
  int mode = 1;                               // 1 = with resets, 2 = without
  bool gate_filter = true;                    // --no-gate-locks clears this
  std::vector<std::string> recursive_locks;   // dotted paths
  std::optional<std::vector<std::string>> lock_fns;   // override defaults
  std::optional<std::vector<std::string>> unlock_fns; // override defaults
  ReportFormat format = ReportFormat::Text;
  bool strict = false;
  bool dump_summaries = false;
  bool dump_ir = false;
  bool show_suppressed = false;
  double timeout_seconds = 60.0; // per corpus entry
};

// Exit codes: 0 = no deadlocks, 1 = deadlocks reported, 2 = parse/IO error.
struct AnalyzeOutcome {
  int exit_code = 0;
  std::string output; // what belongs on stdout
  std::vector<Diagnostic> diagnostics;
  std::vector<DeadlockReport> reports;
  size_t fixpoints_run = 0;
};

AnalyzeOutcome run_analyze(const RunConfig &config);

struct CorpusEntryResult {
  std::string path;             // as written in the manifest
  std::string expected;         // deadlock | safe | parse_fail
  std::string outcome;          // safe | alarms | failed
  int alarms = 0;
  bool match = false;
  std::string reason;           // for failed entries
};

struct CorpusStats {
  int claimed_safe = 0;
  int raising_alarms = 0;
  int failed_to_analyse = 0;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  double wall_time_seconds = 0; // measured; reported on stderr only
};

// Exit codes: 0 = every entry matched its expectation, 1 = mismatches,
// 2 = unreadable or malformed manifest.
struct CorpusOutcome {
  int exit_code = 0;
  std::string output; // stdout: per-entry lines plus the stats table
  std::vector<Diagnostic> diagnostics;
  std::vector<CorpusEntryResult> entries;
  CorpusStats stats;
};

// Analyzes every manifest entry independently (a fresh program, call graph
// and summary store per entry) and compares outcomes against expectations.
// Entries that exceed the timeout count as failed to analyse.
CorpusOutcome run_corpus(const std::string &manifest_path,
                         const RunConfig &config);

} // namespace lockgraph
