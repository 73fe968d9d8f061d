#include "lockgraph/driver.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lockgraph/absint.hpp"
#include "lockgraph/callgraph.hpp"
#include "lockgraph/frontend.hpp"

namespace lockgraph {

namespace {

bool read_file(const std::string &path, std::string &out) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

bool ends_with(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Applies the --lock-fns/--unlock-fns overrides and checks that no name is
// claimed by both sides.
bool make_frontend_config(const RunConfig &run, FrontendConfig &fc,
                          std::vector<Diagnostic> &diags) {
  fc.strict = run.strict;
  if (run.lock_fns)
    fc.lock_fn_names = {run.lock_fns->begin(), run.lock_fns->end()};
  if (run.unlock_fns)
    fc.unlock_fn_names = {run.unlock_fns->begin(), run.unlock_fns->end()};
  for (const auto &name : fc.lock_fn_names) {
    if (fc.unlock_fn_names.count(name)) {
      diags.push_back({Diagnostic::Severity::Error, "<config>", 0, 0,
                       "'" + name + "' is both a lock and an unlock function"});
      return false;
    }
  }
  return true;
}

ParseResult parse_one(const std::string &path, const FrontendConfig &fc) {
  std::string text;
  if (!read_file(path, text)) {
    ParseResult r;
    r.diagnostics.push_back({Diagnostic::Severity::Error, path, 0, 0,
                             "cannot read file"});
    return r;
  }
  if (ends_with(path, ".json"))
    return load_ir_json(text, path);
  return parse_minic(text, fc, path);
}

AnalysisMode make_mode(const RunConfig &run) {
  AnalysisMode mode;
  mode.mode = run.mode;
  for (const auto &spelling : run.recursive_locks) {
    AccessPath p = AccessPath::parse(spelling);
    if (!p.empty())
      mode.recursive_locks.insert(p);
  }
  return mode;
}

// Parse + analyze + detect for one program; shared by analyze and corpus.
struct ProgramRun {
  bool parsed = false;
  std::vector<Diagnostic> diagnostics;
  std::optional<Program> program;
  AnalysisResult analysis;
  std::vector<DeadlockReport> reports;
};

ProgramRun run_program(const std::vector<std::string> &inputs,
                       const FrontendConfig &fc, const RunConfig &run) {
  ProgramRun out;
  Program merged;
  for (const auto &path : inputs) {
    ParseResult r = parse_one(path, fc);
    out.diagnostics.insert(out.diagnostics.end(), r.diagnostics.begin(),
                           r.diagnostics.end());
    if (!r.ok())
      return out;
    for (auto &[name, fn] : r.program->functions) {
      if (merged.functions.count(name)) {
        out.diagnostics.push_back({Diagnostic::Severity::Warning, path, 0, 0,
                                   "duplicate definition of '" + name +
                                       "' ignored"});
        continue;
      }
      merged.functions.emplace(name, std::move(fn));
    }
    merged.globals.insert(r.program->globals.begin(), r.program->globals.end());
  }
  out.parsed = true;
  out.program = std::move(merged);
  out.analysis = analyze_program(*out.program, make_mode(run));
  out.diagnostics.insert(out.diagnostics.end(),
                         out.analysis.diagnostics.begin(),
                         out.analysis.diagnostics.end());
  DependencyRelation rel = merge_dependencies(out.analysis.summaries);
  out.reports =
      find_deadlocks(rel, run.gate_filter, run.show_suppressed);
  return out;
}

} // namespace

AnalyzeOutcome run_analyze(const RunConfig &config) {
  AnalyzeOutcome out;
  FrontendConfig fc;
  if (!make_frontend_config(config, fc, out.diagnostics)) {
    out.exit_code = 2;
    return out;
  }
  if (config.inputs.empty()) {
    out.diagnostics.push_back({Diagnostic::Severity::Error, "<cli>", 0, 0,
                               "no input files"});
    out.exit_code = 2;
    return out;
  }
  ProgramRun run = run_program(config.inputs, fc, config);
  out.diagnostics.insert(out.diagnostics.end(), run.diagnostics.begin(),
                         run.diagnostics.end());
  if (!run.parsed) {
    out.exit_code = 2;
    return out;
  }
  out.reports = run.reports;
  out.fixpoints_run = run.analysis.fixpoints_run;
  std::string text;
  if (config.dump_ir)
    text += dump_ir_json(*run.program);
  if (config.dump_summaries) {
    if (config.format == ReportFormat::Json)
      text += summaries_json(run.analysis.summaries);
    else
      text += summaries_text(run.analysis.summaries);
  }
  text += render_report(run.reports, config.format);
  out.output = text;
  bool any_real = false;
  for (const auto &r : run.reports)
    if (!r.suppressed)
      any_real = true;
  out.exit_code = any_real ? 1 : 0;
  return out;
}

namespace {

struct ManifestEntry {
  std::string path;     // as written
  std::string resolved; // relative to the manifest's directory
  std::string expected;
};

bool load_manifest(const std::string &manifest_path,
                   std::vector<ManifestEntry> &entries,
                   std::vector<Diagnostic> &diags) {
  std::string text;
  if (!read_file(manifest_path, text)) {
    diags.push_back({Diagnostic::Severity::Error, manifest_path, 0, 0,
                     "cannot read file"});
    return false;
  }
  nlohmann::json root = nlohmann::json::parse(text, nullptr, false);
  if (root.is_discarded() || !root.is_array()) {
    diags.push_back({Diagnostic::Severity::Error, manifest_path, 0, 0,
                     "manifest must be a JSON array"});
    return false;
  }
  std::filesystem::path base =
      std::filesystem::path(manifest_path).parent_path();
  for (size_t i = 0; i < root.size(); ++i) {
    const auto &item = root[i];
    std::string at = "[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("path") ||
        !item.contains("expected") || !item["path"].is_string() ||
        !item["expected"].is_string()) {
      diags.push_back({Diagnostic::Severity::Error, manifest_path, 0, 0,
                       "manifest entry " + at +
                           " needs string fields \"path\" and \"expected\""});
      return false;
    }
    for (auto it = item.begin(); it != item.end(); ++it) {
      if (it.key() != "path" && it.key() != "expected") {
        diags.push_back({Diagnostic::Severity::Error, manifest_path, 0, 0,
                         "unknown key \"" + it.key() + "\" at " + at});
        return false;
      }
    }
    ManifestEntry e;
    e.path = item["path"].get<std::string>();
    e.expected = item["expected"].get<std::string>();
    if (e.expected != "deadlock" && e.expected != "safe" &&
        e.expected != "parse_fail") {
      diags.push_back({Diagnostic::Severity::Error, manifest_path, 0, 0,
                       "unknown expectation \"" + e.expected + "\" at " + at});
      return false;
    }
    e.resolved = (base / e.path).string();
    entries.push_back(std::move(e));
  }
  return true;
}

struct EntryOutcome {
  std::string outcome; // safe | alarms | failed
  int alarms = 0;
  std::string reason;
};

EntryOutcome analyze_entry(const std::string &path, const FrontendConfig &fc,
                           const RunConfig &run) {
  EntryOutcome out;
  ProgramRun r = run_program({path}, fc, run);
  if (!r.parsed) {
    out.outcome = "failed";
    out.reason = "parse error";
    for (const auto &d : r.diagnostics)
      if (d.is_error() && d.message == "cannot read file")
        out.reason = "cannot read file";
    return out;
  }
  int real = 0;
  for (const auto &rep : r.reports)
    if (!rep.suppressed)
      ++real;
  out.alarms = real;
  out.outcome = real > 0 ? "alarms" : "safe";
  return out;
}

EntryOutcome analyze_entry_with_timeout(const std::string &path,
                                        const FrontendConfig &fc,
                                        const RunConfig &run) {
  if (run.timeout_seconds <= 0)
    return analyze_entry(path, fc, run);
  auto task = std::make_shared<std::packaged_task<EntryOutcome()>>(
      [&path, &fc, &run] { return analyze_entry(path, fc, run); });
  auto fut = task->get_future();
  std::thread worker([task] { (*task)(); });
  auto limit = std::chrono::duration<double>(run.timeout_seconds);
  if (fut.wait_for(limit) == std::future_status::ready) {
    worker.join();
    return fut.get();
  }
  worker.detach(); // abandoned; the process exits with it still running
  EntryOutcome out;
  out.outcome = "failed";
  out.reason = "timeout";
  return out;
}

} // namespace

CorpusOutcome run_corpus(const std::string &manifest_path,
                         const RunConfig &config) {
  CorpusOutcome out;
  FrontendConfig fc;
  if (!make_frontend_config(config, fc, out.diagnostics)) {
    out.exit_code = 2;
    return out;
  }
  std::vector<ManifestEntry> entries;
  if (!load_manifest(manifest_path, entries, out.diagnostics)) {
    out.exit_code = 2;
    return out;
  }
  auto started = std::chrono::steady_clock::now();
  for (const auto &entry : entries) {
    EntryOutcome r = analyze_entry_with_timeout(entry.resolved, fc, config);
    CorpusEntryResult res;
    res.path = entry.path;
    res.expected = entry.expected;
    res.outcome = r.outcome;
    res.alarms = r.alarms;
    res.reason = r.reason;
    res.match = (entry.expected == "deadlock" && r.outcome == "alarms") ||
                (entry.expected == "safe" && r.outcome == "safe") ||
                (entry.expected == "parse_fail" && r.outcome == "failed");
    out.entries.push_back(std::move(res));
  }
  auto ended = std::chrono::steady_clock::now();
  out.stats.wall_time_seconds =
      std::chrono::duration<double>(ended - started).count();
  bool mismatch = false;
  for (const auto &e : out.entries) {
    if (e.outcome == "safe")
      ++out.stats.claimed_safe;
    else if (e.outcome == "alarms")
      ++out.stats.raising_alarms;
    else
      ++out.stats.failed_to_analyse;
    if (e.expected == "deadlock" && e.outcome == "alarms")
      ++out.stats.true_positives;
    if (e.expected == "safe" && e.outcome == "alarms")
      ++out.stats.false_positives;
    if (e.expected == "deadlock" && e.outcome == "safe")
      ++out.stats.false_negatives;
    if (!e.match)
      mismatch = true;
  }
  if (config.format == ReportFormat::Json) {
    nlohmann::ordered_json root;
    root["entries"] = nlohmann::ordered_json::array();
    for (const auto &e : out.entries) {
      nlohmann::ordered_json je;
      je["path"] = e.path;
      je["expected"] = e.expected;
      je["outcome"] = e.outcome;
      je["alarms"] = e.alarms;
      je["match"] = e.match;
      if (!e.reason.empty())
        je["reason"] = e.reason;
      root["entries"].push_back(std::move(je));
    }
    nlohmann::ordered_json js;
    js["claimed_safe"] = out.stats.claimed_safe;
    js["raising_alarms"] = out.stats.raising_alarms;
    js["failed_to_analyse"] = out.stats.failed_to_analyse;
    js["true_positives"] = out.stats.true_positives;
    js["false_positives"] = out.stats.false_positives;
    js["false_negatives"] = out.stats.false_negatives;
    root["stats"] = std::move(js);
    out.output = root.dump(2) + "\n";
  } else {
    std::ostringstream os;
    for (const auto &e : out.entries) {
      os << e.path << ": " << e.outcome;
      if (e.outcome == "alarms")
        os << " (" << e.alarms << ")";
      if (!e.reason.empty())
        os << " [" << e.reason << "]";
      os << " expected " << e.expected << (e.match ? "" : "  MISMATCH")
         << "\n";
    }
    os << "\n";
    os << "claimed-safe: " << out.stats.claimed_safe << "\n";
    os << "alarms:       " << out.stats.raising_alarms << "\n";
    os << "failed:       " << out.stats.failed_to_analyse << "\n";
    os << "TP: " << out.stats.true_positives
       << "  FP: " << out.stats.false_positives
       << "  FN: " << out.stats.false_negatives << "\n";
    out.output = os.str();
  }
  out.exit_code = mismatch ? 1 : 0;
  return out;
}

} // namespace lockgraph
