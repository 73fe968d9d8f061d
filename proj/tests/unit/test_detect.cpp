#include <doctest.h>

#include <random>

#include "lockgraph/detect.hpp"
#include "lockgraph/frontend.hpp"
#include "oracle_closure.hpp"
#include "random_gen.hpp"

using namespace lockgraph;

namespace {

AccessPath path(const char *s) { return AccessPath::parse(s); }

PathPair edge(const char *a, const char *b) { return {path(a), path(b)}; }

// Builds a relation from bare edges, one anonymous occurrence each.
DependencyRelation relation_of(
    std::initializer_list<std::pair<const char *, const char *>> es,
    std::initializer_list<const char *> guards = {}) {
  DependencyRelation r;
  PathSet gs;
  for (const char *g : guards)
    gs.insert(path(g));
  int line = 1;
  for (const auto &[a, b] : es)
    r.edges[edge(a, b)].push_back({gs, {"synth.c", line++}, "t"});
  return r;
}

Summary summarize(const char *name, std::vector<const char *> locks) {
  StmtList body;
  for (const char *l : locks) {
    Stmt s;
    s.kind = Stmt::Kind::Lock;
    s.path = path(l);
    body.push_back(s);
  }
  return analyze_function(make_function(name, {}, std::move(body)), {},
                          AnalysisMode{});
}

std::set<PathPair> edge_keys(const DependencyRelation &r) {
  std::set<PathPair> out;
  for (const auto &[k, v] : r.edges)
    out.insert(k);
  return out;
}

testsupport::EdgeSet as_strings(const std::set<PathPair> &edges) {
  testsupport::EdgeSet out;
  for (const auto &[a, b] : edges)
    out.insert({a.str(), b.str()});
  return out;
}

} // namespace

TEST_CASE("merging summaries unions their dependency edges") {
  SummaryStore store;
  store["t1"] = summarize("t1", {"A", "B"});
  store["t2"] = summarize("t2", {"B", "A"});
  DependencyRelation r = merge_dependencies(store);
  CHECK(edge_keys(r) == std::set<PathPair>{edge("A", "B"), edge("B", "A")});
  CHECK(r.edges.at(edge("A", "B")).size() == 1);
  CHECK(r.edges.at(edge("A", "B"))[0].owner == "t1");
}

TEST_CASE("merging keeps one occurrence per derivation") {
  SummaryStore store;
  store["t1"] = summarize("t1", {"A", "B"});
  store["t2"] = summarize("t2", {"A", "B"});
  DependencyRelation r = merge_dependencies(store);
  REQUIRE(r.edges.count(edge("A", "B")));
  CHECK(r.edges.at(edge("A", "B")).size() == 2);
}

TEST_CASE("merging an empty store yields no edges") {
  CHECK(merge_dependencies({}).edges.empty());
}

TEST_CASE("closure adds exactly the reachable pairs") {
  DependencyRelation r = relation_of({{"A", "B"}, {"B", "C"}});
  std::set<PathPair> c = transitive_closure(r);
  CHECK(c == std::set<PathPair>{edge("A", "B"), edge("B", "C"),
                                edge("A", "C")});
}

TEST_CASE("closure is idempotent and contains the relation") {
  DependencyRelation r =
      relation_of({{"A", "B"}, {"B", "C"}, {"C", "A"}, {"D", "D"}});
  std::set<PathPair> once = transitive_closure(r);
  for (const auto &e : edge_keys(r))
    CHECK(once.count(e));
  DependencyRelation again;
  for (const auto &e : once)
    again.edges[e].push_back({{}, {"x.c", 1}, "t"});
  CHECK(transitive_closure(again) == once);
}

TEST_CASE("closure matches a boolean-matrix oracle on random relations") {
  std::mt19937 rng(99);
  for (int round = 0; round < 50; ++round) {
    DependencyRelation r = testsupport::random_relation(rng, 8);
    testsupport::EdgeSet direct;
    for (const auto &e : edge_keys(r))
      direct.insert({e.first.str(), e.second.str()});
    CHECK(as_strings(transitive_closure(r)) ==
          testsupport::matrix_closure(direct));
  }
}

TEST_CASE("a cycle through two threads is reported once, direct first") {
  DependencyRelation r = relation_of({{"A", "B"}, {"B", "A"}});
  auto reports = find_deadlocks(r, true);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].first == path("A"));
  CHECK(reports[0].second == path("B"));
  CHECK(reports[0].direct);
  CHECK_FALSE(reports[0].suppressed);
  REQUIRE(reports[0].witnesses.size() == 2);
}

TEST_CASE("a one-way edge is not a deadlock") {
  CHECK(find_deadlocks(relation_of({{"A", "B"}}), true).empty());
  CHECK(find_deadlocks(relation_of({{"A", "B"}, {"A", "C"}}), true).empty());
}

TEST_CASE("indirect cycles carry a chain") {
  DependencyRelation r = relation_of({{"A", "B"}, {"B", "C"}, {"C", "A"}});
  auto reports = find_deadlocks(r, true);
  // Three unordered pairs each have both directions in the closure.
  REQUIRE(reports.size() == 3);
  for (const auto &rep : reports) {
    CHECK_FALSE(rep.direct);
    CHECK(rep.chain.size() >= 2);
    // The chain walks relation edges around the whole cycle.
    for (const auto &link : rep.chain)
      CHECK(r.edges.count(link));
    CHECK(rep.chain.front().first == rep.first);
    CHECK(rep.chain.back().second == rep.first);
  }
}

TEST_CASE("a shared gate lock suppresses the pair") {
  DependencyRelation r;
  r.edges[edge("a", "b")].push_back({{path("g")}, {"s.c", 3}, "t1"});
  r.edges[edge("b", "a")].push_back({{path("g")}, {"s.c", 9}, "t2"});

  CHECK(find_deadlocks(r, true).empty());

  auto off = find_deadlocks(r, false);
  REQUIRE(off.size() == 1);
  CHECK_FALSE(off[0].suppressed);

  auto kept = find_deadlocks(r, true, true);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].suppressed);
}

TEST_CASE("one ungated derivation defeats the gate") {
  DependencyRelation r;
  r.edges[edge("a", "b")].push_back({{path("g")}, {"s.c", 3}, "t1"});
  r.edges[edge("a", "b")].push_back({{}, {"s.c", 5}, "t1"}); // no gate here
  r.edges[edge("b", "a")].push_back({{path("g")}, {"s.c", 9}, "t2"});
  auto reports = find_deadlocks(r, true);
  REQUIRE(reports.size() == 1);
  CHECK_FALSE(reports[0].suppressed);
}

TEST_CASE("disjoint gates on the two sides do not suppress") {
  DependencyRelation r;
  r.edges[edge("a", "b")].push_back({{path("g1")}, {"s.c", 3}, "t1"});
  r.edges[edge("b", "a")].push_back({{path("g2")}, {"s.c", 9}, "t2"});
  CHECK(find_deadlocks(r, true).size() == 1);
}

TEST_CASE("turning the gate filter off never drops reports") {
  std::mt19937 rng(4242);
  for (int round = 0; round < 30; ++round) {
    DependencyRelation r = testsupport::random_relation(rng, 6);
    auto on = find_deadlocks(r, true);
    auto off = find_deadlocks(r, false);
    CHECK(off.size() >= on.size());

    // Every pair is unique within one run.
    std::set<PathPair> seen;
    for (const auto &rep : off)
      CHECK(seen.insert({rep.first, rep.second}).second);
  }
}

TEST_CASE("the cross-call program condenses to the expected relation") {
  ParseResult parsed = parse_minic(R"(
Lock L1; Lock L2; Lock L3; Lock L4;
void f(Lock *L3p) { lock(&L4); unlock(L3p); lock(&L2); unlock(&L4); }
void t1() { lock(&L1); lock(&L3); f(&L3); unlock(&L1); }
void t2() { lock(&L2); lock(&L1); }
)",
                                   FrontendConfig{});
  REQUIRE(parsed.program.has_value());
  AnalysisResult analysis = analyze_program(*parsed.program, AnalysisMode{});
  DependencyRelation r = merge_dependencies(analysis.summaries);

  CHECK(edge_keys(r) ==
        std::set<PathPair>{edge("L4", "L2"), edge("L1", "L2"),
                           edge("L1", "L3"), edge("L1", "L4"),
                           edge("L3", "L4"), edge("L2", "L1")});

  std::set<PathPair> closure = transitive_closure(r);
  CHECK(closure.count(edge("L1", "L1")));
  CHECK(closure.count(edge("L2", "L2")));

  auto reports = find_deadlocks(r, true);
  REQUIRE_FALSE(reports.empty());
  CHECK(reports[0].first == path("L1"));
  CHECK(reports[0].second == path("L2"));
  CHECK(reports[0].direct);
}

TEST_CASE("empty report renders a fixed line") {
  CHECK(render_report({}, ReportFormat::Text) == "no deadlocks found\n");
  CHECK(render_report({}, ReportFormat::Json) ==
        "{\n  \"deadlocks\": []\n}\n");
}

TEST_CASE("report rendering is deterministic") {
  DependencyRelation r = relation_of({{"A", "B"}, {"B", "A"}, {"B", "C"},
                                      {"C", "B"}});
  auto reports = find_deadlocks(r, true);
  std::string t1 = render_report(reports, ReportFormat::Text);
  std::string t2 = render_report(find_deadlocks(r, true), ReportFormat::Text);
  CHECK(t1 == t2);
  CHECK(render_report(reports, ReportFormat::Json) ==
        render_report(reports, ReportFormat::Json));
}

TEST_CASE("json reports name both locks of the first pair") {
  DependencyRelation r = relation_of({{"L1", "L2"}, {"L2", "L1"}});
  std::string json = render_report(find_deadlocks(r, true),
                                   ReportFormat::Json);
  CHECK(json.find("\"L1\"") != std::string::npos);
  CHECK(json.find("\"L2\"") != std::string::npos);
  CHECK(json.find("\"direct\": true") != std::string::npos);
}
