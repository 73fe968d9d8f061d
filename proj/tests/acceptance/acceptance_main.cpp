// End-to-end acceptance gate. Each check prints one [PASS]/[FAIL] line; the
// process exits nonzero if any check fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lockgraph/driver.hpp"
#include "lockgraph/frontend.hpp"
#include "oracle_closure.hpp"
#include "oracle_interleave.hpp"
#include "random_gen.hpp"
#include "subprocess.hpp"

using namespace lockgraph;
using testsupport::quote;
using testsupport::run_command;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define EXPECT(cond)                                                          \
  do {                                                                        \
    if (!(cond))                                                              \
      throw CheckFailure(std::string(#cond) + " at " + __FILE__ + ":" +      \
                         std::to_string(__LINE__));                           \
  } while (0)

const std::string kBin = LOCKGRAPH_BIN;

std::string corpus(const std::string &name) {
  return std::string(CORPUS_DIR "/") + name;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  EXPECT(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PathSet paths(std::initializer_list<const char *> names) {
  PathSet out;
  for (const char *n : names)
    out.insert(AccessPath::parse(n));
  return out;
}

std::set<std::pair<AccessPath, AccessPath>>
pairs(std::initializer_list<std::pair<const char *, const char *>> ps) {
  std::set<std::pair<AccessPath, AccessPath>> out;
  for (const auto &[a, b] : ps)
    out.insert({AccessPath::parse(a), AccessPath::parse(b)});
  return out;
}

std::set<std::pair<AccessPath, AccessPath>> dep_keys(const DepMap &deps) {
  std::set<std::pair<AccessPath, AccessPath>> out;
  for (const auto &[key, guards] : deps)
    out.insert({key.from, key.to});
  return out;
}

size_t count_occurrences(const std::string &haystack,
                         const std::string &needle) {
  size_t n = 0;
  for (size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++n;
  return n;
}

// --- 1: the cross-call example condenses to the exact expected summaries.

void check_golden_summaries() {
  ParseResult parsed = parse_minic(
      slurp(corpus("deadlock/cross_call_order.c")), FrontendConfig{},
      "cross_call_order.c");
  EXPECT(parsed.program.has_value());
  AnalysisResult r = analyze_program(*parsed.program, AnalysisMode{});

  const Summary &f = r.summaries.at("f");
  EXPECT(f.locked == paths({"L3p"}));
  EXPECT(f.unlocked == paths({"L2", "L4"}));
  EXPECT(f.lockset == paths({"L2"}));
  EXPECT(f.unlockset == paths({"L3p", "L4"}));
  EXPECT(f.were_locked == paths({"L2", "L4"}));
  EXPECT(dep_keys(f.deps) == pairs({{"L4", "L2"}}));
  EXPECT(f.order == pairs({{"L3p", "L2"}}));

  const Summary &t1 = r.summaries.at("t1");
  EXPECT(t1.locked.empty());
  EXPECT(t1.unlocked == paths({"L1", "L2", "L3", "L4"}));
  EXPECT(t1.lockset == paths({"L2"}));
  EXPECT(t1.unlockset == paths({"L1", "L3", "L4"}));
  EXPECT(t1.were_locked == paths({"L1", "L2", "L3", "L4"}));
  EXPECT(dep_keys(t1.deps) ==
         pairs({{"L1", "L2"}, {"L1", "L3"}, {"L1", "L4"}, {"L3", "L4"}}));
  EXPECT(t1.order.empty());

  const Summary &t2 = r.summaries.at("t2");
  EXPECT(t2.locked.empty());
  EXPECT(t2.unlocked == paths({"L1", "L2"}));
  EXPECT(t2.lockset == paths({"L1", "L2"}));
  EXPECT(t2.unlockset.empty());
  EXPECT(t2.were_locked == paths({"L1", "L2"}));
  EXPECT(dep_keys(t2.deps) == pairs({{"L2", "L1"}}));
  EXPECT(t2.order.empty());
}

// --- 2: the same program makes the tool exit 1 naming {L1, L2}.

void check_golden_deadlock() {
  auto r = run_command(quote(kBin) + " analyze " +
                       quote(corpus("deadlock/cross_call_order.c")) +
                       " 2>/dev/null");
  EXPECT(r.exit_code == 1);
  EXPECT(r.output.rfind("potential deadlock: {L1, L2}", 0) == 0);
}

// --- 3: a shared gate lock suppresses the opposite orders underneath it.

void check_gate_suppression() {
  auto on = run_command(quote(kBin) + " analyze " +
                        quote(corpus("safe/gate_protected.c")) +
                        " 2>/dev/null");
  EXPECT(on.exit_code == 0);
  EXPECT(on.output == "no deadlocks found\n");

  auto off = run_command(quote(kBin) + " analyze " +
                         quote(corpus("safe/gate_protected.c")) +
                         " --no-gate-locks 2>/dev/null");
  EXPECT(off.exit_code == 1);
  EXPECT(count_occurrences(off.output, "potential deadlock:") == 1);
  EXPECT(off.output.find("potential deadlock: {a, b}") != std::string::npos);
}

// --- 4: the optimistic mode never alarms more than the pessimistic one.

void check_mode_monotonic() {
  RunConfig m1, m2;
  m2.mode = 2;
  CorpusOutcome r1 = run_corpus(corpus("manifest.json"), m1);
  CorpusOutcome r2 = run_corpus(corpus("manifest.json"), m2);
  EXPECT(r1.exit_code == 0); // mode 1 matches every expectation

  int deadlock_expected = 0, safe_expected = 0;
  for (const auto &e : r1.entries) {
    if (e.expected == "deadlock")
      ++deadlock_expected;
    if (e.expected == "safe")
      ++safe_expected;
  }
  EXPECT(r1.entries.size() >= 30);
  EXPECT(deadlock_expected == 8);
  EXPECT(safe_expected >= 20);

  std::map<std::string, int> alarms1;
  for (const auto &e : r1.entries)
    alarms1[e.path] = e.alarms;
  bool strictly_fewer_somewhere = false;
  for (const auto &e : r2.entries) {
    EXPECT(alarms1.count(e.path) == 1);
    EXPECT(alarms1[e.path] <= e.alarms);
    strictly_fewer_somewhere =
        strictly_fewer_somewhere || alarms1[e.path] < e.alarms;
  }
  EXPECT(strictly_fewer_somewhere);
}

// --- 5: every deadlock verdict is confirmed by exhaustive interleaving.

void check_interleaving_oracle() {
  int confirmed = 0;
  for (const auto &e :
       run_corpus(corpus("manifest.json"), RunConfig{}).entries) {
    if (e.expected != "deadlock")
      continue;
    ParseResult parsed =
        parse_minic(slurp(corpus(e.path)), FrontendConfig{}, e.path);
    EXPECT(parsed.program.has_value());
    auto oracle = testsupport::simulate_deadlocks(*parsed.program);
    EXPECT(!oracle.empty());

    RunConfig cfg;
    cfg.inputs = {corpus(e.path)};
    AnalyzeOutcome out = run_analyze(cfg);
    EXPECT(out.exit_code == 1);
    std::set<std::pair<std::string, std::string>> reported;
    for (const auto &rep : out.reports)
      reported.insert({rep.first.str(), rep.second.str()});

    // Every concretely reachable deadlock pair is among the reports, so at
    // least one report is a confirmed true positive.
    for (const auto &pair : oracle)
      EXPECT(reported.count(pair) == 1);
    ++confirmed;
  }
  EXPECT(confirmed == 8);
}

// --- 6: the closure implementation agrees with a boolean-matrix oracle.

void check_closure_oracle() {
  std::mt19937 rng(1u << 6);
  for (int round = 0; round < 50; ++round) {
    DependencyRelation r = testsupport::random_relation(rng, 8);
    testsupport::EdgeSet direct;
    for (const auto &[edge, occs] : r.edges)
      direct.insert({edge.first.str(), edge.second.str()});
    testsupport::EdgeSet closed;
    for (const auto &[a, b] : transitive_closure(r))
      closed.insert({a.str(), b.str()});
    EXPECT(closed == testsupport::matrix_closure(direct));
  }
}

// --- 7: join/leq behave as a lattice on randomized states.

void check_lattice_laws() {
  std::mt19937 rng(7777);
  auto same_shape = [](const AbstractState &a, const AbstractState &b) {
    // Equality up to dependency guards, which join may legitimately shrink.
    return a.locked == b.locked && a.unlocked == b.unlocked &&
           a.lockset == b.lockset && a.unlockset == b.unlockset &&
           a.were_locked == b.were_locked && a.order == b.order &&
           dep_keys(a.deps) == dep_keys(b.deps);
  };
  for (int round = 0; round < 200; ++round) {
    AbstractState a = testsupport::random_state(rng);
    AbstractState b = testsupport::random_state(rng);
    AbstractState c = testsupport::random_state(rng);

    EXPECT(join(a, a) == a);
    EXPECT(join(a, b) == join(b, a));
    EXPECT(join(join(a, b), c) == join(a, join(b, c)));

    EXPECT(leq(a, a));
    AbstractState ab = join(a, b);
    EXPECT(leq(a, ab));
    EXPECT(leq(b, ab));
    if (leq(a, b) && leq(b, c))
      EXPECT(leq(a, c));
    if (leq(a, b) && leq(b, a))
      EXPECT(same_shape(a, b));
  }
}

// --- 8: a 100-function tree runs exactly 100 fixpoints, fast.

void check_single_visit() {
  Program tree;
  for (int i = 1; i <= 100; ++i) {
    char name[8];
    std::snprintf(name, sizeof(name), "fn%03d", i);
    StmtList body;
    for (int l = 0; l < 5; ++l) {
      char lockname[16];
      std::snprintf(lockname, sizeof(lockname), "m%03d_%d", i, l);
      Stmt lk;
      lk.kind = Stmt::Kind::Lock;
      lk.path = AccessPath::parse(lockname);
      body.push_back(lk);
    }
    for (int child : {2 * i, 2 * i + 1}) {
      if (child > 100)
        continue;
      char callee[8];
      std::snprintf(callee, sizeof(callee), "fn%03d", child);
      Stmt call;
      call.kind = Stmt::Kind::Call;
      call.callee = callee;
      body.push_back(call);
    }
    for (int l = 4; l >= 0; --l) {
      char lockname[16];
      std::snprintf(lockname, sizeof(lockname), "m%03d_%d", i, l);
      Stmt ul;
      ul.kind = Stmt::Kind::Unlock;
      ul.path = AccessPath::parse(lockname);
      body.push_back(ul);
    }
    tree.functions[name] = make_function(name, {}, std::move(body));
  }

  size_t events = 0;
  for (const auto &[name, fn] : tree.functions)
    for (const auto &node : fn.cfg.nodes)
      for (const auto &ev : node.events)
        if (ev.kind == EventKind::Acquire || ev.kind == EventKind::Release)
          ++events;
  EXPECT(events == 1000);

  auto start = std::chrono::steady_clock::now();
  AnalysisResult r = analyze_program(tree, AnalysisMode{});
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  EXPECT(r.fixpoints_run == 100);
  EXPECT(r.summaries.size() == 100);
  EXPECT(seconds < 5.0);
}

// --- 9: stdout is byte-stable across reruns, for every corpus entry.

void check_determinism() {
  std::vector<std::string> commands;
  for (const auto &e :
       run_corpus(corpus("manifest.json"), RunConfig{}).entries) {
    commands.push_back(quote(kBin) + " analyze " + quote(corpus(e.path)) +
                       " 2>/dev/null");
    commands.push_back(quote(kBin) + " analyze " + quote(corpus(e.path)) +
                       " --format json 2>/dev/null");
  }
  commands.push_back(quote(kBin) + " corpus " + quote(corpus("manifest.json")) +
                     " 2>/dev/null");
  commands.push_back(quote(kBin) + " corpus " + quote(corpus("manifest.json")) +
                     " --format json 2>/dev/null");

  for (const auto &cmd : commands) {
    auto first = run_command(cmd);
    auto second = run_command(cmd);
    EXPECT(first.exit_code == second.exit_code);
    EXPECT(first.output == second.output);
  }
}

} // namespace

int main() {
  struct Criterion {
    const char *name;
    std::function<void()> body;
  };
  const std::vector<Criterion> criteria = {
      {"golden summaries reproduced exactly", check_golden_summaries},
      {"golden program reports {L1, L2} with exit 1", check_golden_deadlock},
      {"gate-lock suppression on, one pair with it off",
       check_gate_suppression},
      {"mode 1 alarms never exceed mode 2 across the corpus",
       check_mode_monotonic},
      {"interleaving oracle confirms all 8 deadlock programs",
       check_interleaving_oracle},
      {"transitive closure matches the matrix oracle on 50 relations",
       check_closure_oracle},
      {"lattice laws hold on 200 randomized state triples",
       check_lattice_laws},
      {"100-function tree analyzed with exactly 100 fixpoints",
       check_single_visit},
      {"full-corpus stdout is byte-identical across reruns",
       check_determinism},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i].body();
      std::printf("[PASS] %zu %s\n", i + 1, criteria[i].name);
    } catch (const std::exception &e) {
      ++failures;
      std::printf("[FAIL] %zu %s: %s\n", i + 1, criteria[i].name, e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
