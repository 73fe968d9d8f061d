#include <doctest.h>

#include "lockgraph/frontend.hpp"

using namespace lockgraph;

namespace {

const FrontendConfig kDefault;

Program parse_ok(const char *src) {
  ParseResult r = parse_minic(src, kDefault, "test.c");
  REQUIRE_MESSAGE(r.ok(), "expected a successful parse");
  return *r.program;
}

std::vector<Event> all_events(const Cfg &cfg) {
  std::vector<Event> out;
  for (const auto &node : cfg.nodes)
    out.insert(out.end(), node.events.begin(), node.events.end());
  return out;
}

} // namespace

TEST_CASE("empty function parses to an empty CFG") {
  Program p = parse_ok("void g() {}");
  REQUIRE(p.functions.count("g"));
  const Cfg &cfg = p.functions.at("g").cfg;
  CHECK(cfg_is_well_formed(cfg));
  CHECK(all_events(cfg).empty());
}

TEST_CASE("lock and unlock calls become acquire and release events") {
  Program p = parse_ok("Lock a;\n"
                       "void g() { lock(&a); unlock(&a); }\n");
  auto events = all_events(p.functions.at("g").cfg);
  REQUIRE(events.size() == 2);
  CHECK(events[0].kind == EventKind::Acquire);
  CHECK(events[0].lock.str() == "a");
  CHECK(events[1].kind == EventKind::Release);
  CHECK(p.globals.count("a"));
}

TEST_CASE("pthread names work and field paths survive") {
  Program p = parse_ok("pthread_mutex_t m;\n"
                       "struct S { pthread_mutex_t inner; };\n"
                       "struct S s;\n"
                       "void g() {\n"
                       "  pthread_mutex_lock(&s.inner);\n"
                       "  pthread_mutex_unlock(&s.inner);\n"
                       "}\n");
  auto events = all_events(p.functions.at("g").cfg);
  REQUIRE(events.size() == 2);
  CHECK(events[0].lock.str() == "s.inner");
}

TEST_CASE("callee with mixed operations lowers in statement order") {
  Program p = parse_ok("Lock L2, L4;\n"
                       "void f(Lock *L3p) {\n"
                       "  lock(&L4);\n"
                       "  unlock(L3p);\n"
                       "  lock(&L2);\n"
                       "  unlock(&L4);\n"
                       "}\n");
  const FunctionDef &f = p.functions.at("f");
  REQUIRE(f.formals == std::vector<std::string>{"L3p"});
  auto events = all_events(f.cfg);
  REQUIRE(events.size() == 4);
  CHECK(events[0].kind == EventKind::Acquire);
  CHECK(events[0].lock.str() == "L4");
  CHECK(events[1].kind == EventKind::Release);
  CHECK(events[1].lock.str() == "L3p");
  CHECK(events[2].kind == EventKind::Acquire);
  CHECK(events[2].lock.str() == "L2");
  CHECK(events[3].kind == EventKind::Release);
  CHECK(events[3].lock.str() == "L4");
}

TEST_CASE("if/else produces a diamond with one acquire per branch") {
  Program p = parse_ok("Lock a, b;\n"
                       "void h() { if (c) lock(&a); else lock(&b); }\n");
  const Cfg &cfg = p.functions.at("h").cfg;
  CHECK(cfg_is_well_formed(cfg));
  int acquires = 0;
  int branch_nodes = 0;
  for (const auto &node : cfg.nodes) {
    int node_acquires = 0;
    for (const auto &ev : node.events)
      if (ev.kind == EventKind::Acquire)
        ++node_acquires;
    acquires += node_acquires;
    if (node_acquires > 0)
      ++branch_nodes;
  }
  CHECK(acquires == 2);
  CHECK(branch_nodes == 2); // the two arms are distinct nodes
  auto succ = cfg.successors();
  CHECK(succ[static_cast<size_t>(cfg.entry)].size() == 2);
}

TEST_CASE("while produces a back edge") {
  Program p = parse_ok("Lock a;\n"
                       "void h() { while (c) { lock(&a); unlock(&a); } }\n");
  const Cfg &cfg = p.functions.at("h").cfg;
  CHECK(cfg_is_well_formed(cfg));
  bool has_back_edge = false;
  for (const auto &[from, to] : cfg.edges)
    if (to < from && to != cfg.exit_node)
      has_back_edge = true;
  CHECK(has_back_edge);
}

TEST_CASE("for loops normalize to while form") {
  Program p = parse_ok(
      "Lock a;\n"
      "void h() { int i; for (i = 0; i < 3; i++) { lock(&a); unlock(&a); } }");
  const Cfg &cfg = p.functions.at("h").cfg;
  CHECK(cfg_is_well_formed(cfg));
  auto events = all_events(cfg);
  int acquires = 0;
  for (const auto &ev : events)
    acquires += ev.kind == EventKind::Acquire ? 1 : 0;
  CHECK(acquires == 1);
  bool has_back_edge = false;
  for (const auto &[from, to] : cfg.edges)
    if (to < from && to != cfg.exit_node)
      has_back_edge = true;
  CHECK(has_back_edge);
}

TEST_CASE("return jumps to the exit and prunes dead tails") {
  Program p = parse_ok("Lock a;\n"
                       "void h() {\n"
                       "  lock(&a);\n"
                       "  if (e) { unlock(&a); return; }\n"
                       "  unlock(&a);\n"
                       "}\n");
  const Cfg &cfg = p.functions.at("h").cfg;
  CHECK(cfg_is_well_formed(cfg));
}

TEST_CASE("calls carry address-stripped actuals") {
  Program p = parse_ok("Lock a;\n"
                       "void callee(Lock *x) { lock(x); unlock(x); }\n"
                       "void caller() { callee(&a); }\n");
  auto events = all_events(p.functions.at("caller").cfg);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == EventKind::Call);
  CHECK(events[0].callee == "callee");
  REQUIRE(events[0].actuals.size() == 1);
  CHECK(events[0].actuals[0].str() == "a");
}

TEST_CASE("unknown callees become no-ops with a warning") {
  ParseResult r = parse_minic("void g() { helper(); }", kDefault, "test.c");
  REQUIRE(r.ok());
  auto events = all_events(r.program->functions.at("g").cfg);
  for (const auto &ev : events)
    CHECK(ev.kind != EventKind::Call);
  bool warned = false;
  for (const auto &d : r.diagnostics)
    if (!d.is_error() && d.message.find("helper") != std::string::npos)
      warned = true;
  CHECK(warned);
}

TEST_CASE("pthread_create turns into a call of the started function") {
  Program p = parse_ok("Lock a;\n"
                       "void *worker(void *arg) { lock(&a); unlock(&a); "
                       "return 0; }\n"
                       "int main() {\n"
                       "  pthread_t tid;\n"
                       "  pthread_create(&tid, 0, worker, 0);\n"
                       "  return 0;\n"
                       "}\n");
  auto events = all_events(p.functions.at("main").cfg);
  bool calls_worker = false;
  for (const auto &ev : events)
    if (ev.kind == EventKind::Call && ev.callee == "worker")
      calls_worker = true;
  CHECK(calls_worker);
}

TEST_CASE("array-indexed locks are rejected as unsupported") {
  ParseResult relaxed =
      parse_minic("Lock banks[4];\nvoid g() { lock(&banks[0]); }", kDefault,
                  "test.c");
  REQUIRE(relaxed.ok()); // warning only
  auto events = all_events(relaxed.program->functions.at("g").cfg);
  for (const auto &ev : events)
    CHECK(ev.kind == EventKind::Nop);

  FrontendConfig strict = kDefault;
  strict.strict = true;
  ParseResult rejected =
      parse_minic("Lock banks[4];\nvoid g() { lock(&banks[0]); }", strict,
                  "test.c");
  CHECK_FALSE(rejected.ok());
}

TEST_CASE("syntax errors yield no program") {
  ParseResult r = parse_minic("void g() { lock(&a); ", kDefault, "broken.c");
  CHECK_FALSE(r.ok());
  bool has_error = false;
  for (const auto &d : r.diagnostics)
    has_error |= d.is_error();
  CHECK(has_error);
}

TEST_CASE("non-strict parses of supported constructs never error") {
  const char *sources[] = {
      "void g() {}",
      "Lock a;\nvoid g() { lock(&a); unlock(&a); }",
      "void g() { if (c) {} else {} while (d) {} }",
      "int x;\nvoid g() { x = 1 + 2; }",
  };
  for (const char *src : sources) {
    ParseResult r = parse_minic(src, kDefault, "test.c");
    REQUIRE(r.ok());
    for (const auto &d : r.diagnostics)
      CHECK_FALSE(d.is_error());
  }
}

TEST_CASE("every parsed CFG is well formed") {
  Program p = parse_ok("Lock a, b;\n"
                       "void x() { if (c) { lock(&a); } lock(&b); "
                       "while (d) { unlock(&b); } }\n"
                       "void y() { return; }\n");
  for (const auto &[name, fn] : p.functions)
    CHECK(cfg_is_well_formed(fn.cfg));
}
