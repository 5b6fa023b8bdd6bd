#include "sessionweave/session.hpp"

#include "sessionweave/printer.hpp"
#include "support.hpp"

#include <doctest.h>

#include <map>

using namespace sw;

namespace {

Communication out(const char* p, const char* l, const char* q) {
  return Communication::output(Participant(p), Label(l), Participant(q));
}
Communication in(const char* p, const char* l, const char* q) {
  return Communication::input(Participant(p), Label(l), Participant(q));
}

} // namespace

TEST_CASE("initial fan-in session offers exactly the two outputs") {
  SourceFile f = swt::parse_or_die(swt::kConfluentFanin);
  std::vector<SessionStep> steps = session_steps(*f.store, f.session);
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].comm == out("p", "l", "r"));
  CHECK(steps[1].comm == out("q", "l2", "r"));
  for (const SessionStep& st : steps) CHECK(st.comm.kind == CommKind::Output);
}

TEST_CASE("the empty session has no steps and is not stuck") {
  TermStore store;
  Session s;
  CHECK(session_steps(store, s).empty());
  CHECK_FALSE(is_stuck(store, s));
}

TEST_CASE("a receiver with both messages queued has both inputs enabled") {
  SourceFile f = swt::parse_or_die(
      "r := (p?l; q?l2 + q?l2; p?l)\nqueue [p->r:l, q->r:l2]");
  std::vector<SessionStep> steps = session_steps(*f.store, f.session);
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].comm == in("r", "l", "p"));
  CHECK(steps[1].comm == in("r", "l2", "q"));
}

TEST_CASE("players_of_network skips terminated processes") {
  SourceFile f = swt::parse_or_die(swt::kConfluentFanin);
  CHECK(players_of_network(f.session.network).size() == 3);
  SourceFile g = swt::parse_or_die("p := end queue []");
  CHECK(players_of_network(g.session.network).empty());
}

TEST_CASE("a full trace drains the fan-in session") {
  SourceFile f = swt::parse_or_die(swt::kConfluentFanin);
  Trace t{out("p", "l", "r"), out("q", "l2", "r"), in("r", "l", "p"), in("r", "l2", "q")};
  auto result = apply_trace(*f.store, f.session, t);
  REQUIRE(std::holds_alternative<Session>(result));
  const Session& end = std::get<Session>(result);
  CHECK(end.network.empty());
  CHECK(end.queue.empty());
}

TEST_CASE("the empty trace changes nothing") {
  SourceFile f = swt::parse_or_die(swt::kConfluentFanin);
  auto result = apply_trace(*f.store, f.session, {});
  REQUIRE(std::holds_alternative<Session>(result));
  CHECK(std::get<Session>(result) == f.session);
}

TEST_CASE("a missing step reports the failing index") {
  SourceFile f = swt::parse_or_die(swt::kConfluentFanin);
  Trace t{out("p", "l", "r"), in("r", "l2", "q")};
  auto result = apply_trace(*f.store, f.session, t);
  REQUIRE(std::holds_alternative<TraceError>(result));
  CHECK(std::get<TraceError>(result).index == 1);
}

TEST_CASE("the four-party network can run into a stuck receiver") {
  SourceFile f = swt::parse_or_die(swt::kFourPartyDeadlock);
  Trace t{out("p", "b", "s"), out("p", "b", "t"), in("s", "b", "p"), out("s", "c", "r"),
          in("t", "b", "p"), out("t", "e", "r"), in("r", "c", "s"), in("r", "e", "t")};
  auto result = apply_trace(*f.store, f.session, t);
  REQUIRE(std::holds_alternative<Session>(result));
  const Session& end = std::get<Session>(result);
  CHECK(is_stuck(*f.store, end));
  CHECK(end.queue.empty());
  CHECK(players_of_network(end.network) == std::set<Participant>{Participant("r")});
  const ProcNode& r = f.store->proc(*end.network.process_of(Participant("r")));
  CHECK(r.kind == NodeKind::Input);
  REQUIRE(r.branches.size() == 1);
  CHECK(r.branches[0].partner == Participant("p"));
  CHECK(r.branches[0].label == Label("d"));
}

TEST_CASE("step enumeration invariants on random sessions (1000 cases)") {
  swt::Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    TermStore store;
    Session s = swt::random_session(rng, store);
    std::vector<SessionStep> steps = session_steps(store, s);

    // Distinct steps carry distinct communications, in sorted order.
    for (std::size_t a = 1; a < steps.size(); ++a) CHECK(steps[a - 1].comm < steps[a].comm);

    for (const SessionStep& st : steps) {
      // Frame property: only the player's process changes.
      for (const auto& [p, ref] : s.network.members()) {
        if (p == st.comm.player) continue;
        auto after = st.target.network.process_of(p);
        REQUIRE(after.has_value());
        CHECK(*after == ref);
      }

      // Queue conservation: send appends exactly its message, receive
      // consumes exactly the earliest one of its channel.
      if (st.comm.kind == CommKind::Output) {
        CHECK(st.target.queue.size() == s.queue.size() + 1);
        CHECK(st.target.queue == s.queue.appended(st.comm.message()));
      } else {
        CHECK(st.target.queue.size() + 1 == s.queue.size());
        CHECK(s.queue.ready(st.comm.message()));
        CHECK(st.target.queue == s.queue.consumed(st.comm.message()));
      }
    }
  }
}
