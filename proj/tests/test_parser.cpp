#include "sessionweave/parser.hpp"

#include "sessionweave/printer.hpp"
#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace sw;

namespace {

bool any_error(const std::vector<Diagnostic>& ds) {
  for (const Diagnostic& d : ds)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

TEST_CASE("confluent fan-in example parses to the expected session") {
  SourceFile f = swt::parse_or_die(swt::kConfluentFanin);
  const TermStore& store = *f.store;

  CHECK(players_of_network(f.session.network) ==
        std::set<Participant>{Participant("p"), Participant("q"), Participant("r")});
  CHECK(f.session.queue.empty());
  REQUIRE(f.against.has_value());

  const ProcNode& r = store.proc(*f.session.network.process_of(Participant("r")));
  CHECK(r.kind == NodeKind::Input);
  CHECK(r.branches.size() == 2);

  const TypeNode& g = store.type(*f.against);
  CHECK(g.kind == NodeKind::Output);
  CHECK(g.player == Participant("p"));
  CHECK(f.expect_typable == true);
}

TEST_CASE("terminated network entries are absorbed") {
  SourceFile f = swt::parse_or_die("p := end queue []");
  CHECK(f.session.network.empty());
  CHECK(f.session.queue.empty());
}

TEST_CASE("queue literals are read head-first") {
  SourceFile f = swt::parse_or_die("p := end queue [p->r:l, q->r:l2, p->r:l2]");
  Queue q = f.session.queue;
  CHECK(q.size() == 3);
  CHECK(q.earliest(Participant("p"), Participant("r")) ==
        Message{Participant("p"), Label("l"), Participant("r")});
}

TEST_CASE("duplicate type branches are a diagnostic") {
  ParseResult pr = parse("G := p!{q.l; G, q.l; End}\nqueue []");
  CHECK_FALSE(pr.ok());
  REQUIRE(any_error(pr.diagnostics));
  bool found = false;
  for (const Diagnostic& d : pr.diagnostics)
    if (d.message.find("duplicate branch") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("diagnostics carry spans") {
  ParseResult pr = parse("p := \n   r!");
  CHECK_FALSE(pr.ok());
  REQUIRE_FALSE(pr.diagnostics.empty());
  CHECK(pr.diagnostics.front().span.line >= 1);
  CHECK(pr.diagnostics.front().span.col >= 1);
}

TEST_CASE("duplicate names are rejected") {
  ParseResult pr = parse("p := r!l\np := r!l2\nqueue []");
  CHECK_FALSE(pr.ok());
}

TEST_CASE("undefined references are rejected") {
  ParseResult pr = parse("p := X\nqueue []");
  CHECK_FALSE(pr.ok());
}

TEST_CASE("a type player cannot be its own partner") {
  ParseResult pr = parse("G := p!{p.l; End}\nqueue []");
  CHECK_FALSE(pr.ok());
}

TEST_CASE("mixing choice operators is rejected") {
  ParseResult pr = parse("p := (q!l; end + r?l2; end)\nqueue []");
  CHECK_FALSE(pr.ok());
}

TEST_CASE("a file needs exactly one queue") {
  CHECK_FALSE(parse("p := end").ok());
  CHECK_FALSE(parse("p := end queue [] queue []").ok());
}

TEST_CASE("trailing end may be omitted") {
  SourceFile a = swt::parse_or_die("p := r!l\nqueue []");
  SourceFile b = swt::parse_or_die("p := r!l; end\nqueue []");
  CHECK(pretty_session(*a.store, a.session) == pretty_session(*b.store, b.session));
}

TEST_CASE("process recursion via def equations") {
  SourceFile f = swt::parse_or_die("def P := r!l; P\np := P\nqueue []");
  const TermStore& store = *f.store;
  ProcRef p = *f.session.network.process_of(Participant("p"));
  CHECK(store.resolve(store.proc(p).branches[0].cont) == store.resolve(p));
}

TEST_CASE("type round-trips through pretty and parse (1000 cases)") {
  swt::Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    TermStore store;
    TypeRef g = swt::random_type(rng, store, 5);
    std::string text = pretty_type(store, g);
    TypeSnippetResult back = parse_type_snippet(store, text);
    REQUIRE_MESSAGE(back.root.has_value(), text);
    CHECK_MESSAGE(store.resolve(*back.root) == store.resolve(g), text);
  }
}

TEST_CASE("larger recursive type round-trips exactly") {
  swt::Rng rng(29);
  int big = 0;
  while (big < 50) {
    TermStore store;
    TypeRef g = swt::random_type(rng, store, 20, 4, 3);
    if (store.type_subterms(g).size() < 10) continue;
    ++big;
    std::string text = pretty_type(store, g);
    TypeSnippetResult back = parse_type_snippet(store, text);
    REQUIRE(back.root.has_value());
    CHECK(store.resolve(*back.root) == store.resolve(g));
  }
}

TEST_CASE("process snippets round-trip") {
  TermStore store;
  ProcRef loop = store.declare_proc();
  store.define_proc(loop, NodeKind::Input,
                    {{Participant("p"), Label("l"), loop},
                     {Participant("q"), Label("l2"), store.proc_end()}});
  store.merge_duplicates();
  std::string text = pretty_proc(store, loop);
  ProcSnippetResult back = parse_proc_snippet(store, text);
  REQUIRE(back.root.has_value());
  CHECK(store.resolve(*back.root) == store.resolve(loop));
}

TEST_CASE("sessions round-trip through pretty") {
  for (const char* src : {swt::kConfluentFanin, swt::kRecursiveFanin, swt::kArrivalNotify,
                          swt::kFourPartyDeadlock, swt::kStaleInputSession}) {
    SourceFile f = swt::parse_or_die(src);
    std::string once = pretty_session(*f.store, f.session);
    SourceFile g = swt::parse_or_die(once);
    CHECK(pretty_session(*g.store, g.session) == once);
  }
}

TEST_CASE("pretty output of the corpus is pinned byte-for-byte") {
  struct Golden {
    const char* mps;
    const char* golden;
  };
  for (const Golden& g : {Golden{"corpus/typable/confluent_fanin.mps",
                                 "tests/golden/confluent_fanin.txt"},
                          Golden{"corpus/typable/recursive_fanin.mps",
                                 "tests/golden/recursive_fanin.txt"},
                          Golden{"corpus/untypable/four_party_deadlock.mps",
                                 "tests/golden/four_party_deadlock.txt"}}) {
    SourceFile f = swt::parse_or_die(slurp(swt::fixture_path(g.mps)));
    std::string got = pretty_session(*f.store, f.session);
    if (f.against) got += "\nagainst " + pretty_type(*f.store, *f.against) + "\n";
    CHECK_MESSAGE(got == slurp(swt::fixture_path(g.golden)), g.mps);
  }
}

TEST_CASE("the displayed type for the fan-in session prints in the pinned form") {
  SourceFile f = swt::parse_or_die(swt::kFaninAfterFirstSend);
  CHECK(pretty_type(*f.store, *f.against) ==
        "q!r.l2; r?{p.l; r?q.l2; End, q.l2; r?p.l; End}");
}
