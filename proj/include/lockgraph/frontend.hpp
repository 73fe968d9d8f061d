#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lockgraph/program.hpp"

namespace lockgraph {

struct Diagnostic {
  enum class Severity { Warning, Error };

  Severity severity = Severity::Warning;
  std::string file;
  int line = 0;
  int column = 0;
  std::string message;

  bool is_error() const { return severity == Severity::Error; }
  std::string str() const;
};

struct FrontendConfig {
  // Callees treated as lock acquisition / release. The two sets must be
  // disjoint; the driver rejects overlapping overrides.
  std::set<std::string> lock_fn_names = {"lock", "pthread_mutex_lock"};
  std::set<std::string> unlock_fn_names = {"unlock", "pthread_mutex_unlock"};
  std::set<std::string> thread_create_names = {"pthread_create"};
  // Type names whose file-scope declarations populate Program::globals.
  std::set<std::string> lock_type_names = {"Lock", "pthread_mutex_t",
                                           "mutex_t"};
  // In strict mode unsupported constructs are errors instead of warnings.
  bool strict = false;
};

struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

// Parses the supported C subset: file-scope lock declarations and function
// definitions whose bodies use lock/unlock calls, user calls, if/else,
// while, for, blocks and returns. Anything else degrades to a no-op with a
// warning (or an error in strict mode); malformed syntax is always an error.
ParseResult parse_minic(std::string_view source, const FrontendConfig &config,
                        std::string_view filename = "<input>");

// Loads the JSON program form. Unknown keys and statement kinds are
// rejected with a diagnostic naming the offending JSON path.
ParseResult load_ir_json(std::string_view text,
                         std::string_view filename = "<input>");

// Serializes a Program deterministically (functions sorted by name, stable
// key order). Feeding the output back through load_ir_json reproduces the
// same Program; `return` statements have no JSON spelling and degrade to
// no-ops.
std::string dump_ir_json(const Program &program);

// Builds a function with its CFG lowered from the statement tree. Events
// appear in statement order; branch arms fork and rejoin, loop bodies get a
// back edge to their head, returns jump to the synthetic exit. Unreachable
// statements are pruned so the CFG stays well formed.
FunctionDef make_function(std::string name, std::vector<std::string> formals,
                          StmtList body);

} // namespace lockgraph
