#include <cctype>
#include <map>

#include "lockgraph/frontend.hpp"

// Recursive-descent parser for the supported C subset. It is deliberately
// forgiving: anything outside the subset degrades to a no-op with a warning
// (an error in strict mode), while genuinely malformed syntax is always an
// error. Function calls are resolved in a second pass so that callees may be
// defined later in the file.

namespace lockgraph {

namespace {

struct Token {
  enum class Kind { Ident, Number, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0;
  int col = 0;

  bool is(std::string_view t) const { return text == t; }
};

class Lexer {
public:
  Lexer(std::string_view src, std::string_view file,
        const FrontendConfig &config, std::vector<Diagnostic> &diags)
      : src_(src), file_(file), config_(config), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size())
        break;
      tokens.push_back(next_token());
    }
    tokens.push_back(Token{Token::Kind::End, "", line_, col_});
    return tokens;
  }

private:
  void diag(Diagnostic::Severity sev, const std::string &msg) {
    diags_.push_back({sev, std::string(file_), line_, col_, msg});
  }

  char cur() const { return src_[pos_]; }
  bool more() const { return pos_ < src_.size(); }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_line() {
    while (more() && cur() != '\n')
      advance();
  }

  void skip_trivia() {
    while (more()) {
      char c = cur();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() &&
                 src_[pos_ + 1] == '/') {
        skip_line();
      } else if (c == '/' && pos_ + 1 < src_.size() &&
                 src_[pos_ + 1] == '*') {
        advance();
        advance();
        while (more() && !(cur() == '*' && pos_ + 1 < src_.size() &&
                           src_[pos_ + 1] == '/'))
          advance();
        if (more()) {
          advance();
          advance();
        }
      } else if (c == '#') {
        // No preprocessor: the directive is dropped line by line.
        diag(config_.strict ? Diagnostic::Severity::Error
                            : Diagnostic::Severity::Warning,
             "preprocessor directive ignored");
        skip_line();
      } else {
        break;
      }
    }
  }

  Token next_token() {
    Token t;
    t.line = line_;
    t.col = col_;
    char c = cur();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Ident;
      while (more() && (std::isalnum(static_cast<unsigned char>(cur())) ||
                        cur() == '_')) {
        t.text += cur();
        advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Number;
      while (more() && (std::isalnum(static_cast<unsigned char>(cur())) ||
                        cur() == '.' || cur() == '_')) {
        t.text += cur();
        advance();
      }
      return t;
    }
    if (c == '"' || c == '\'') {
      t.kind = Token::Kind::String;
      char quote = c;
      t.text += c;
      advance();
      while (more() && cur() != quote) {
        if (cur() == '\\') {
          t.text += cur();
          advance();
          if (!more())
            break;
        }
        t.text += cur();
        advance();
      }
      if (more()) {
        t.text += cur();
        advance();
      } else {
        diag(Diagnostic::Severity::Error, "unterminated string literal");
      }
      return t;
    }
    t.kind = Token::Kind::Punct;
    t.text += c;
    advance();
    // Two-character operators we need to keep whole ("->" selects fields;
    // the rest must not be split into tokens that confuse path parsing).
    static const char *pairs[] = {"->", "==", "!=", "<=", ">=", "&&", "||",
                                  "++", "--", "+=", "-=", "*=", "/=", "<<",
                                  ">>"};
    if (more()) {
      std::string two = t.text + cur();
      for (const char *p : pairs) {
        if (two == p) {
          t.text = two;
          advance();
          break;
        }
      }
    }
    return t;
  }

  std::string_view src_;
  std::string_view file_;
  const FrontendConfig &config_;
  std::vector<Diagnostic> &diags_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Qualifier-ish words that may precede the type name proper.
bool is_decl_qualifier(const std::string &word) {
  static const std::set<std::string> words = {
      "static", "extern",   "const", "volatile", "inline", "register",
      "signed", "unsigned", "long",  "short",    "struct", "union",
      "enum"};
  return words.count(word) > 0;
}

class Parser {
public:
  Parser(std::vector<Token> tokens, std::string_view file,
         const FrontendConfig &config, std::vector<Diagnostic> &diags)
      : tokens_(std::move(tokens)), file_(file), config_(config),
        diags_(diags) {}

  std::optional<Program> run() {
    while (!at_end())
      parse_top_level();

    resolve_calls();
    if (had_error_)
      return std::nullopt;

    Program program;
    program.globals = globals_;
    for (auto &[name, parts] : functions_)
      program.functions.emplace(
          name, make_function(name, parts.first, std::move(parts.second)));
    return program;
  }

private:
  using RawFunction = std::pair<std::vector<std::string>, StmtList>;

  const Token &peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  const Token &take() {
    const Token &t = peek();
    if (pos_ + 1 < tokens_.size())
      ++pos_;
    return t;
  }
  bool accept(std::string_view text) {
    if (peek().is(text)) {
      take();
      return true;
    }
    return false;
  }

  void error_at(const Token &t, const std::string &msg) {
    diags_.push_back(
        {Diagnostic::Severity::Error, std::string(file_), t.line, t.col, msg});
    had_error_ = true;
  }

  void warn_at(const Token &t, const std::string &msg) {
    diags_.push_back({Diagnostic::Severity::Warning, std::string(file_),
                      t.line, t.col, msg});
  }

  // Unsupported-but-recognized constructs warn by default and fail the
  // parse in strict mode.
  void unsupported_at(const Token &t, const std::string &msg) {
    if (config_.strict) {
      error_at(t, msg);
    } else {
      warn_at(t, msg);
    }
  }

  bool expect(std::string_view text, const char *context) {
    if (accept(text))
      return true;
    error_at(peek(), std::string("expected '") + std::string(text) +
                         "' in " + context);
    return false;
  }

  SourceLoc loc_of(const Token &t) const {
    return SourceLoc{std::string(file_), t.line};
  }

  // Skips past a balanced open/close pair, assuming the opener was consumed.
  void skip_balanced(std::string_view open, std::string_view close) {
    int depth = 1;
    while (!at_end() && depth > 0) {
      if (peek().is(open))
        ++depth;
      else if (peek().is(close))
        --depth;
      take();
    }
  }

  void skip_past_semicolon() {
    while (!at_end() && !peek().is(";")) {
      if (peek().is("{")) {
        take();
        skip_balanced("{", "}");
        continue;
      }
      take();
    }
    accept(";");
  }

  // --- top level --------------------------------------------------------

  void parse_top_level() {
    const Token &t = peek();
    if (t.is(";")) {
      take();
      return;
    }
    if (t.is("typedef")) {
      unsupported_at(t, "typedef ignored");
      skip_past_semicolon();
      return;
    }
    if (t.kind != Token::Kind::Ident) {
      error_at(t, "expected a declaration");
      take();
      return;
    }

    // struct/union/enum definition bodies carry no lock information.
    if ((t.is("struct") || t.is("union") || t.is("enum")) &&
        peek(2).is("{")) {
      unsupported_at(t, t.text + " definition ignored");
      take(); // keyword
      take(); // tag
      take(); // '{'
      skip_balanced("{", "}");
      skip_past_semicolon();
      return;
    }

    // Declaration specifiers followed by the declared name.
    std::string last_type_word;
    bool saw_type = false;
    while (peek().kind == Token::Kind::Ident &&
           (is_decl_qualifier(peek().text) ||
            peek(1).kind == Token::Kind::Ident || peek(1).is("*"))) {
      if (!is_decl_qualifier(peek().text))
        last_type_word = peek().text;
      saw_type = true;
      take();
      while (accept("*"))
        ;
    }
    if (peek().kind != Token::Kind::Ident || !saw_type) {
      error_at(peek(), "expected a declaration");
      skip_past_semicolon();
      return;
    }
    const Token name_tok = take();

    if (peek().is("(")) {
      parse_function_rest(name_tok);
    } else {
      parse_global_rest(name_tok, last_type_word);
    }
  }

  void parse_global_rest(const Token &first_name,
                         const std::string &type_word) {
    bool is_lock_type = config_.lock_type_names.count(type_word) > 0;
    std::vector<std::string> names{first_name.text};
    while (true) {
      if (accept("[")) {
        skip_balanced("[", "]");
      }
      if (accept("=")) {
        while (!at_end() && !peek().is(",") && !peek().is(";"))
          take();
      }
      if (accept(",")) {
        while (accept("*"))
          ;
        if (peek().kind != Token::Kind::Ident) {
          error_at(peek(), "expected a declarator name");
          skip_past_semicolon();
          return;
        }
        names.push_back(take().text);
        continue;
      }
      break;
    }
    expect(";", "declaration");
    if (is_lock_type)
      globals_.insert(names.begin(), names.end());
  }

  void parse_function_rest(const Token &name_tok) {
    take(); // '('
    std::vector<std::string> formals;
    if (!peek().is(")")) {
      while (true) {
        // "void" alone means an empty parameter list.
        if (peek().is("void") && peek(1).is(")")) {
          take();
          break;
        }
        std::string param_name;
        while (peek().kind == Token::Kind::Ident || peek().is("*")) {
          if (peek().kind == Token::Kind::Ident)
            param_name = peek().text;
          take();
        }
        if (param_name.empty()) {
          error_at(peek(), "expected a parameter declaration");
          skip_balanced("(", ")");
          skip_past_semicolon();
          return;
        }
        formals.push_back(param_name);
        if (!accept(","))
          break;
      }
    }
    if (!expect(")", "parameter list"))
      return;

    if (accept(";"))
      return; // prototype: nothing to analyze

    if (!peek().is("{")) {
      error_at(peek(), "expected a function body");
      skip_past_semicolon();
      return;
    }
    take(); // '{'
    StmtList body;
    parse_block_items(body);

    if (functions_.count(name_tok.text)) {
      unsupported_at(name_tok, "duplicate definition of '" + name_tok.text +
                                   "' ignored");
      return;
    }
    functions_.emplace(name_tok.text,
                       RawFunction{std::move(formals), std::move(body)});
  }

  // --- statements -------------------------------------------------------

  void parse_block_items(StmtList &out) {
    while (!at_end() && !peek().is("}"))
      parse_stmt(out);
    expect("}", "block");
  }

  void parse_stmt(StmtList &out) {
    const Token &t = peek();
    if (t.is(";")) {
      take();
      return;
    }
    if (t.is("{")) {
      take();
      parse_block_items(out);
      return;
    }
    if (t.is("if")) {
      parse_if(out);
      return;
    }
    if (t.is("while")) {
      parse_while(out);
      return;
    }
    if (t.is("for")) {
      parse_for(out);
      return;
    }
    if (t.is("return")) {
      Stmt s;
      s.kind = Stmt::Kind::Return;
      s.loc = loc_of(t);
      take();
      while (!at_end() && !peek().is(";"))
        take();
      accept(";");
      out.push_back(std::move(s));
      return;
    }
    if (t.is("break") || t.is("continue") || t.is("goto")) {
      unsupported_at(t, "'" + t.text + "' not modeled; treated as no-op");
      skip_past_semicolon();
      return;
    }
    if (t.is("do")) {
      unsupported_at(t, "'do' loop not modeled; treated as no-op");
      take();
      if (peek().is("{")) {
        take();
        skip_balanced("{", "}");
      } else {
        skip_past_semicolon();
      }
      accept("while");
      if (accept("("))
        skip_balanced("(", ")");
      accept(";");
      return;
    }
    if (t.is("switch")) {
      unsupported_at(t, "'switch' not modeled; treated as no-op");
      take();
      if (accept("("))
        skip_balanced("(", ")");
      if (accept("{"))
        skip_balanced("{", "}");
      else
        skip_past_semicolon();
      return;
    }
    if (t.is("}")) {
      error_at(t, "unexpected '}'");
      take();
      return;
    }
    parse_expr_stmt(out);
  }

  void parse_if(StmtList &out) {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.loc = loc_of(peek());
    take(); // 'if'
    if (!expect("(", "if condition"))
      return;
    skip_balanced("(", ")"); // conditions are opaque
    parse_stmt(s.body);
    if (accept("else"))
      parse_stmt(s.orelse);
    out.push_back(std::move(s));
  }

  void parse_while(StmtList &out) {
    Stmt s;
    s.kind = Stmt::Kind::While;
    s.loc = loc_of(peek());
    take(); // 'while'
    if (!expect("(", "while condition"))
      return;
    skip_balanced("(", ")");
    parse_stmt(s.body);
    out.push_back(std::move(s));
  }

  // A for loop becomes: init; while (...) { body; step; }.
  void parse_for(StmtList &out) {
    const Token &kw = peek();
    take(); // 'for'
    if (!expect("(", "for header"))
      return;
    std::vector<Token> init, cond, step;
    std::vector<Token> *slot = &init;
    int depth = 1;
    while (!at_end() && depth > 0) {
      if (peek().is("("))
        ++depth;
      else if (peek().is(")")) {
        --depth;
        if (depth == 0) {
          take();
          break;
        }
      } else if (peek().is(";") && depth == 1) {
        take();
        slot = (slot == &init) ? &cond : &step;
        continue;
      }
      slot->push_back(take());
    }
    (void)cond; // loop conditions are opaque

    Stmt loop;
    loop.kind = Stmt::Kind::While;
    loop.loc = loc_of(kw);
    classify_expr_tokens(init, out);
    parse_stmt(loop.body);
    classify_expr_tokens(step, loop.body);
    out.push_back(std::move(loop));
  }

  void parse_expr_stmt(StmtList &out) {
    std::vector<Token> span;
    int depth = 0;
    while (!at_end()) {
      if (peek().is("(") || peek().is("["))
        ++depth;
      else if (peek().is(")") || peek().is("]"))
        --depth;
      else if (peek().is(";") && depth <= 0) {
        take();
        break;
      } else if (peek().is("}") && depth <= 0) {
        error_at(peek(), "expected ';' before '}'");
        break;
      }
      span.push_back(take());
    }
    classify_expr_tokens(span, out);
  }

  // --- expression classification -----------------------------------------

  // Matches IDENT ('(' at `start`; returns one token span per argument.
  static bool split_call_args(const std::vector<Token> &toks, size_t start,
                              std::vector<std::vector<Token>> &args,
                              size_t &end) {
    if (start + 1 >= toks.size() || toks[start].kind != Token::Kind::Ident ||
        !toks[start + 1].is("("))
      return false;
    size_t i = start + 2;
    int depth = 1;
    std::vector<Token> current;
    args.clear();
    for (; i < toks.size(); ++i) {
      const Token &t = toks[i];
      if (t.is("(") || t.is("["))
        ++depth;
      else if (t.is(")") || t.is("]")) {
        --depth;
        if (depth == 0) {
          if (!current.empty() || !args.empty())
            args.push_back(current);
          end = i;
          return true;
        }
      } else if (t.is(",") && depth == 1) {
        args.push_back(current);
        current.clear();
        continue;
      }
      current.push_back(t);
    }
    return false; // unbalanced; caller reports
  }

  // IDENT (('.'|'->') IDENT)* consuming the whole span.
  static std::optional<AccessPath> span_as_path(const std::vector<Token> &toks,
                                                size_t from, size_t to) {
    if (from >= to || toks[from].kind != Token::Kind::Ident)
      return std::nullopt;
    AccessPath path(toks[from].text);
    size_t i = from + 1;
    while (i < to) {
      if (!(toks[i].is(".") || toks[i].is("->")) || i + 1 >= to ||
          toks[i + 1].kind != Token::Kind::Ident)
        return std::nullopt;
      path.selectors.push_back(toks[i + 1].text);
      i += 2;
    }
    return path;
  }

  // `&path` or bare `path`; anything else fails.
  static std::optional<AccessPath> arg_as_path(const std::vector<Token> &arg) {
    size_t from = 0;
    if (!arg.empty() && arg[0].is("&"))
      from = 1;
    return span_as_path(arg, from, arg.size());
  }

  static bool arg_is_null_like(const std::vector<Token> &arg) {
    return arg.size() == 1 && (arg[0].is("0") || arg[0].is("NULL") ||
                               arg[0].is("nullptr"));
  }

  // Arguments that are not plain paths become opaque placeholder paths so
  // that positional formal/actual binding stays aligned; equal spellings
  // share a placeholder.
  static AccessPath opaque_path(const std::vector<Token> &arg) {
    std::string text = "$";
    for (size_t i = arg.empty() || !arg[0].is("&") ? 0 : 1; i < arg.size();
         ++i) {
      for (char c : arg[i].text)
        text += (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
                    ? c
                    : '_';
    }
    if (text.size() == 1)
      text += "arg";
    return AccessPath(text);
  }

  void classify_expr_tokens(const std::vector<Token> &toks, StmtList &out) {
    if (toks.empty())
      return;
    Stmt s;
    s.loc = loc_of(toks[0]);

    // Accept `f(...)` and the common `x = f(...)` return-value idiom.
    size_t call_start = 0;
    if (toks.size() >= 3 && toks[0].kind == Token::Kind::Ident &&
        toks[1].is("="))
      call_start = 2;
    std::vector<std::vector<Token>> args;
    size_t call_end = 0;
    if (split_call_args(toks, call_start, args, call_end) &&
        call_end + 1 == toks.size()) {
      lower_call(toks[call_start], args, std::move(s), out);
      return;
    }

    s.kind = Stmt::Kind::Nop; // assignments, declarations, arithmetic, ...
    out.push_back(std::move(s));
  }

  void lower_call(const Token &callee, std::vector<std::vector<Token>> &args,
                  Stmt s, StmtList &out) {
    const std::string &name = callee.text;

    if (config_.lock_fn_names.count(name) ||
        config_.unlock_fn_names.count(name)) {
      if (args.size() != 1) {
        unsupported_at(callee, "'" + name + "' expects one lock argument");
        s.kind = Stmt::Kind::Nop;
        out.push_back(std::move(s));
        return;
      }
      bool indexed = false;
      for (const Token &t : args[0])
        indexed = indexed || t.is("[");
      if (indexed) {
        unsupported_at(callee, "array element locks are not modeled");
        s.kind = Stmt::Kind::Nop;
        out.push_back(std::move(s));
        return;
      }
      auto path = arg_as_path(args[0]);
      s.kind = config_.lock_fn_names.count(name) ? Stmt::Kind::Lock
                                                 : Stmt::Kind::Unlock;
      s.path = path ? *path : opaque_path(args[0]);
      out.push_back(std::move(s));
      return;
    }

    if (config_.thread_create_names.count(name)) {
      if (args.size() < 3) {
        unsupported_at(callee, "'" + name + "' call with too few arguments");
        s.kind = Stmt::Kind::Nop;
        out.push_back(std::move(s));
        return;
      }
      auto target = arg_as_path(args[2]);
      if (!target || !target->selectors.empty()) {
        unsupported_at(callee,
                       "thread entry point is not a plain function name");
        s.kind = Stmt::Kind::Nop;
        out.push_back(std::move(s));
        return;
      }
      s.kind = Stmt::Kind::Call;
      s.callee = target->base;
      for (size_t i = 3; i < args.size(); ++i) {
        if (arg_is_null_like(args[i]))
          continue;
        if (auto p = arg_as_path(args[i]))
          s.actuals.push_back(*p);
      }
      out.push_back(std::move(s));
      return;
    }

    s.kind = Stmt::Kind::Call;
    s.callee = name;
    for (auto &arg : args) {
      if (auto p = arg_as_path(arg))
        s.actuals.push_back(*p);
      else
        s.actuals.push_back(opaque_path(arg));
    }
    out.push_back(std::move(s));
  }

  // --- call resolution ----------------------------------------------------

  // Calls to functions with no definition in this file have no summary to
  // apply; they degrade to no-ops so externals behave as if empty.
  void resolve_calls() {
    for (auto &[name, parts] : functions_)
      resolve_in(parts.second);
  }

  void resolve_in(StmtList &stmts) {
    for (Stmt &s : stmts) {
      if (s.kind == Stmt::Kind::Call && !functions_.count(s.callee)) {
        diags_.push_back({Diagnostic::Severity::Warning, s.loc.file, s.loc.line,
                          0,
                          "call to unknown function '" + s.callee +
                              "' treated as no-op"});
        s = Stmt{Stmt::Kind::Nop, {}, {}, {}, {}, {}, s.loc};
      }
      resolve_in(s.body);
      resolve_in(s.orelse);
    }
  }

  std::vector<Token> tokens_;
  std::string_view file_;
  const FrontendConfig &config_;
  std::vector<Diagnostic> &diags_;
  size_t pos_ = 0;
  bool had_error_ = false;

  std::map<std::string, RawFunction> functions_;
  std::set<std::string> globals_;
};

} // namespace

ParseResult parse_minic(std::string_view source, const FrontendConfig &config,
                        std::string_view filename) {
  ParseResult result;
  Lexer lexer(source, filename, config, result.diagnostics);
  Parser parser(lexer.run(), filename, config, result.diagnostics);
  auto program = parser.run();
  for (const auto &d : result.diagnostics) {
    if (d.is_error()) {
      program.reset();
      break;
    }
  }
  result.program = std::move(program);
  return result;
}

} // namespace lockgraph
