#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lockgraph/driver.hpp"

namespace {

void print_diagnostics(const std::vector<lockgraph::Diagnostic> &diags) {
  for (const auto &d : diags)
    std::fprintf(stderr, "%s\n", d.str().c_str());
}

void add_shared_options(CLI::App *cmd, lockgraph::RunConfig &config,
                        std::vector<std::string> &lock_fns,
                        std::vector<std::string> &unlock_fns) {
  cmd->add_option("--mode", config.mode, "Analysis mode (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  cmd->add_flag_callback(
      "--no-gate-locks", [&config] { config.gate_filter = false; },
      "Disable the gate-lock suppression filter");
  cmd->add_option("--recursive-locks", config.recursive_locks,
                  "Locks treated as recursive (comma separated paths)")
      ->delimiter(',');
  cmd->add_option("--lock-fns", lock_fns,
                  "Function names treated as lock acquisitions")
      ->delimiter(',');
  cmd->add_option("--unlock-fns", unlock_fns,
                  "Function names treated as lock releases")
      ->delimiter(',');
  cmd->add_option_function<std::string>(
         "--format",
         [&config](const std::string &v) {
           config.format = v == "json" ? lockgraph::ReportFormat::Json
                                       : lockgraph::ReportFormat::Text;
         },
         "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--strict", config.strict,
                "Treat ignored constructs as errors");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Static deadlock analyzer for lock/unlock programs"};
  app.require_subcommand(1);

  lockgraph::RunConfig config;
  std::vector<std::string> lock_fns;
  std::vector<std::string> unlock_fns;
  std::string manifest;

  CLI::App *analyze =
      app.add_subcommand("analyze", "Analyze programs and report deadlocks");
  analyze->add_option("inputs", config.inputs, "Program files (.c or .json)")
      ->required()
      ->expected(-1);
  add_shared_options(analyze, config, lock_fns, unlock_fns);
  analyze->add_flag("--dump-summaries", config.dump_summaries,
                    "Print per-function summaries before the report");
  analyze->add_flag("--dump-ir", config.dump_ir,
                    "Print the parsed program as JSON before the report");
  analyze->add_flag("--show-suppressed", config.show_suppressed,
                    "Include reports suppressed by the gate-lock filter");

  CLI::App *corpus =
      app.add_subcommand("corpus", "Run a manifest of programs and compare "
                                   "outcomes against expectations");
  corpus->add_option("manifest", manifest, "Manifest JSON file")->required();
  add_shared_options(corpus, config, lock_fns, unlock_fns);
  corpus->add_option("--timeout", config.timeout_seconds,
                     "Per-entry wall-clock limit in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  if (!lock_fns.empty())
    config.lock_fns = lock_fns;
  if (!unlock_fns.empty())
    config.unlock_fns = unlock_fns;

  if (analyze->parsed()) {
    lockgraph::AnalyzeOutcome out = lockgraph::run_analyze(config);
    print_diagnostics(out.diagnostics);
    std::fputs(out.output.c_str(), stdout);
    return out.exit_code;
  }
  lockgraph::CorpusOutcome out = lockgraph::run_corpus(manifest, config);
  print_diagnostics(out.diagnostics);
  std::fputs(out.output.c_str(), stdout);
  std::fprintf(stderr, "wall time: %.3fs\n", out.stats.wall_time_seconds);
  return out.exit_code;
}
