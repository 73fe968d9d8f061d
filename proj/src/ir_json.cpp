#include <json.hpp>

#include "lockgraph/frontend.hpp"

// JSON program form. The schema is closed: objects may carry exactly the
// keys listed for their kind, and diagnostics name the offending element by
// its JSON path ("functions[0].body[2]").

namespace lockgraph {

namespace {

using json = nlohmann::ordered_json;

class Loader {
public:
  Loader(std::string_view filename, std::vector<Diagnostic> &diags)
      : filename_(filename), diags_(diags) {}

  std::optional<Program> load(std::string_view text) {
    json root;
    try {
      root = json::parse(text);
    } catch (const json::parse_error &e) {
      error(std::string("invalid JSON: ") + e.what());
      return std::nullopt;
    }

    if (!root.is_object()) {
      error("expected an object at the top level");
      return std::nullopt;
    }
    check_keys(root, {"functions", "globals"}, "");
    if (!root.contains("functions") || !root["functions"].is_array()) {
      error("expected an array at functions");
      return std::nullopt;
    }

    Program program;
    if (root.contains("globals")) {
      if (!root["globals"].is_array()) {
        error("expected an array at globals");
      } else {
        size_t i = 0;
        for (const auto &g : root["globals"]) {
          if (!g.is_string())
            error("expected a string at globals[" + std::to_string(i) + "]");
          else
            program.globals.insert(g.get<std::string>());
          ++i;
        }
      }
    }

    size_t index = 0;
    for (const auto &fn : root["functions"]) {
      load_function(fn, "functions[" + std::to_string(index) + "]", program);
      ++index;
    }
    if (had_error_)
      return std::nullopt;

    warn_arities(program);
    return program;
  }

private:
  void error(const std::string &msg) {
    diags_.push_back(
        {Diagnostic::Severity::Error, std::string(filename_), 0, 0, msg});
    had_error_ = true;
  }

  void warning(const std::string &msg) {
    diags_.push_back(
        {Diagnostic::Severity::Warning, std::string(filename_), 0, 0, msg});
  }

  void check_keys(const json &obj, std::initializer_list<const char *> known,
                  const std::string &path) {
    for (const auto &item : obj.items()) {
      bool ok = false;
      for (const char *k : known)
        ok = ok || item.key() == k;
      if (!ok)
        error("unknown key \"" + item.key() + "\"" +
              (path.empty() ? std::string(" at top level") : " at " + path));
    }
  }

  AccessPath load_path(const json &value, const std::string &path) {
    if (!value.is_string()) {
      error("expected a string at " + path);
      return AccessPath{};
    }
    AccessPath p = AccessPath::parse(value.get<std::string>());
    if (p.empty())
      error("invalid lock path at " + path);
    return p;
  }

  void load_function(const json &fn, const std::string &path,
                     Program &program) {
    if (!fn.is_object()) {
      error("expected an object at " + path);
      return;
    }
    check_keys(fn, {"name", "formals", "body"}, path);
    if (!fn.contains("name") || !fn["name"].is_string()) {
      error("expected a string at " + path + ".name");
      return;
    }
    std::string name = fn["name"].get<std::string>();
    if (name.empty()) {
      error("empty function name at " + path + ".name");
      return;
    }

    std::vector<std::string> formals;
    if (fn.contains("formals")) {
      if (!fn["formals"].is_array()) {
        error("expected an array at " + path + ".formals");
      } else {
        size_t i = 0;
        for (const auto &f : fn["formals"]) {
          if (!f.is_string())
            error("expected a string at " + path + ".formals[" +
                  std::to_string(i) + "]");
          else
            formals.push_back(f.get<std::string>());
          ++i;
        }
      }
    }

    StmtList body;
    if (!fn.contains("body") || !fn["body"].is_array()) {
      error("expected an array at " + path + ".body");
    } else {
      load_stmt_list(fn["body"], path + ".body", body);
    }

    if (program.functions.count(name)) {
      error("duplicate function \"" + name + "\" at " + path);
      return;
    }
    program.functions.emplace(
        name, make_function(name, std::move(formals), std::move(body)));
  }

  void load_stmt_list(const json &arr, const std::string &path,
                      StmtList &out) {
    size_t index = 0;
    for (const auto &item : arr) {
      load_stmt(item, path + "[" + std::to_string(index) + "]", out);
      ++index;
    }
  }

  void load_stmt(const json &st, const std::string &path, StmtList &out) {
    if (!st.is_object()) {
      error("expected an object at " + path);
      return;
    }
    if (!st.contains("kind") || !st["kind"].is_string()) {
      error("missing \"kind\" at " + path);
      return;
    }
    const std::string kind = st["kind"].get<std::string>();

    Stmt s;
    s.loc = SourceLoc{std::string(filename_), ++stmt_counter_};

    if (kind == "lock" || kind == "unlock") {
      check_keys(st, {"kind", "path"}, path);
      if (!st.contains("path")) {
        error("missing \"path\" at " + path);
        return;
      }
      s.kind = (kind == "lock") ? Stmt::Kind::Lock : Stmt::Kind::Unlock;
      s.path = load_path(st["path"], path + ".path");
    } else if (kind == "call") {
      check_keys(st, {"kind", "callee", "actuals"}, path);
      if (!st.contains("callee") || !st["callee"].is_string()) {
        error("expected a string at " + path + ".callee");
        return;
      }
      s.kind = Stmt::Kind::Call;
      s.callee = st["callee"].get<std::string>();
      if (st.contains("actuals")) {
        if (!st["actuals"].is_array()) {
          error("expected an array at " + path + ".actuals");
        } else {
          size_t i = 0;
          for (const auto &a : st["actuals"]) {
            s.actuals.push_back(load_path(
                a, path + ".actuals[" + std::to_string(i) + "]"));
            ++i;
          }
        }
      }
    } else if (kind == "if") {
      check_keys(st, {"kind", "then", "else"}, path);
      s.kind = Stmt::Kind::If;
      if (!st.contains("then") || !st["then"].is_array()) {
        error("expected an array at " + path + ".then");
        return;
      }
      load_stmt_list(st["then"], path + ".then", s.body);
      if (st.contains("else")) {
        if (!st["else"].is_array()) {
          error("expected an array at " + path + ".else");
          return;
        }
        load_stmt_list(st["else"], path + ".else", s.orelse);
      }
    } else if (kind == "while") {
      check_keys(st, {"kind", "body"}, path);
      s.kind = Stmt::Kind::While;
      if (!st.contains("body") || !st["body"].is_array()) {
        error("expected an array at " + path + ".body");
        return;
      }
      load_stmt_list(st["body"], path + ".body", s.body);
    } else if (kind == "nop") {
      check_keys(st, {"kind"}, path);
      s.kind = Stmt::Kind::Nop;
    } else {
      error("unknown event kind at " + path);
      return;
    }
    out.push_back(std::move(s));
  }

  // Calls with more actuals than the callee has formals cannot be bound
  // positionally; the analysis treats them as no-ops, so say so up front.
  void warn_arities(const Program &program) {
    for (const auto &[name, fn] : program.functions) {
      walk_stmts(fn.body, [&](const Stmt &s) {
        if (s.kind != Stmt::Kind::Call)
          return;
        auto it = program.functions.find(s.callee);
        if (it == program.functions.end()) {
          warning("call to undefined function \"" + s.callee + "\" in \"" +
                  name + "\" has no summary and is ignored");
        } else if (s.actuals.size() > it->second.formals.size()) {
          warning("call to \"" + s.callee + "\" in \"" + name + "\" passes " +
                  std::to_string(s.actuals.size()) + " actuals but only " +
                  std::to_string(it->second.formals.size()) +
                  " formals exist");
        }
      });
    }
  }

  template <typename F> void walk_stmts(const StmtList &stmts, F &&f) {
    for (const auto &s : stmts) {
      f(s);
      walk_stmts(s.body, f);
      walk_stmts(s.orelse, f);
    }
  }

  std::string_view filename_;
  std::vector<Diagnostic> &diags_;
  bool had_error_ = false;
  int stmt_counter_ = 0;
};

json stmt_to_json(const Stmt &s);

json stmt_list_to_json(const StmtList &stmts) {
  json arr = json::array();
  for (const auto &s : stmts)
    arr.push_back(stmt_to_json(s));
  return arr;
}

json stmt_to_json(const Stmt &s) {
  json out = json::object();
  switch (s.kind) {
  case Stmt::Kind::Lock:
    out["kind"] = "lock";
    out["path"] = s.path.str();
    break;
  case Stmt::Kind::Unlock:
    out["kind"] = "unlock";
    out["path"] = s.path.str();
    break;
  case Stmt::Kind::Call: {
    out["kind"] = "call";
    out["callee"] = s.callee;
    json actuals = json::array();
    for (const auto &a : s.actuals)
      actuals.push_back(a.str());
    out["actuals"] = std::move(actuals);
    break;
  }
  case Stmt::Kind::If:
    out["kind"] = "if";
    out["then"] = stmt_list_to_json(s.body);
    out["else"] = stmt_list_to_json(s.orelse);
    break;
  case Stmt::Kind::While:
    out["kind"] = "while";
    out["body"] = stmt_list_to_json(s.body);
    break;
  case Stmt::Kind::Nop:
  case Stmt::Kind::Return:
    // `return` has no spelling in this form; its control-flow effect is
    // not representable, so it degrades to a no-op.
    out["kind"] = "nop";
    break;
  }
  return out;
}

} // namespace

ParseResult load_ir_json(std::string_view text, std::string_view filename) {
  ParseResult result;
  Loader loader(filename, result.diagnostics);
  result.program = loader.load(text);
  return result;
}

std::string dump_ir_json(const Program &program) {
  json root = json::object();
  json functions = json::array();
  for (const auto &[name, fn] : program.functions) {
    json f = json::object();
    f["name"] = name;
    f["formals"] = fn.formals;
    f["body"] = stmt_list_to_json(fn.body);
    functions.push_back(std::move(f));
  }
  root["functions"] = std::move(functions);
  root["globals"] = json::array();
  for (const auto &g : program.globals)
    root["globals"].push_back(g);
  return root.dump(2) + "\n";
}

} // namespace lockgraph
