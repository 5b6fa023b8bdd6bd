#include "sessionweave/infer.hpp"

#include "sessionweave/parser.hpp"
#include "sessionweave/printer.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace sw;

TEST_CASE("the all-terminated session is typable by End") {
  TermStore store;
  Session s;
  SearchResult r = infer_type(store, s);
  CHECK(r.status == SearchStatus::Typable);
  REQUIRE(r.witness.has_value());
  CHECK(store.resolve(*r.witness) == store.resolve(store.type_end()));
}

TEST_CASE("a recursive ping-pong gets a cyclic type inferred") {
  SourceFile f = swt::parse_or_die(
      "def P := y!m; y?k; P\ndef Q := x?m; x!k; Q\nx := P\ny := Q\nqueue []");
  TermStore& store = *f.store;
  SearchResult r = infer_type(store, f.session);
  REQUIRE(r.status == SearchStatus::Typable);
  CHECK(pretty_type(store, *r.witness) ==
        "def T1 := x!y.m; y?x.m; y!x.k; x?y.k; T1\nT1");
  // The witness really typechecks.
  CHECK(typed(typecheck(store, Judgement{*r.witness, f.session.network, f.session.queue})));
  REQUIRE(r.derivation.has_value());
  CHECK_FALSE(verify_derivation(store, *r.derivation).has_value());
}

TEST_CASE("the confluent fan-in is found typable by search") {
  SourceFile f = swt::parse_or_die(swt::kConfluentFanin);
  SearchResult r = infer_type(*f.store, f.session);
  REQUIRE(r.status == SearchStatus::Typable);
  CHECK(typed(typecheck(*f.store, Judgement{*r.witness, f.session.network,
                                            f.session.queue})));
}

TEST_CASE("the stale-input session is rejected exhaustively") {
  SourceFile f = swt::parse_or_die(swt::kStaleInputSession);
  SearchResult r = check_untypable_exhaustive(*f.store, f.session);
  CHECK(r.status == SearchStatus::Untypable);
  CHECK(r.candidates_checked > 0); // some candidates existed and all failed
}

TEST_CASE("the four-party deadlock network is rejected exhaustively") {
  SourceFile f = swt::parse_or_die(swt::kFourPartyDeadlock);
  SearchResult r = check_untypable_exhaustive(*f.store, f.session);
  CHECK(r.status == SearchStatus::Untypable);
}

TEST_CASE("an unbalanced producer exhausts the search bound") {
  SourceFile f = swt::parse_or_die("def P := q!l; P\np := P\nqueue []");
  SearchLimits limits;
  limits.max_queue = 6;
  SearchResult r = infer_type(*f.store, f.session, limits);
  CHECK(r.status == SearchStatus::BoundExhausted);
}

TEST_CASE("a lonely input with no sender is untypable") {
  SourceFile f = swt::parse_or_die("r := p?d\nqueue []");
  SearchResult r = infer_type(*f.store, f.session);
  CHECK(r.status == SearchStatus::Untypable);
  CHECK(r.candidates_checked == 0); // no rule ever applies
}

TEST_CASE("search is deterministic") {
  for (int round = 0; round < 2; ++round) {
    SourceFile f1 = swt::parse_or_die(swt::kConfluentFanin);
    SourceFile f2 = swt::parse_or_die(swt::kConfluentFanin);
    SearchResult a = infer_type(*f1.store, f1.session);
    SearchResult b = infer_type(*f2.store, f2.session);
    REQUIRE(a.status == SearchStatus::Typable);
    REQUIRE(b.status == SearchStatus::Typable);
    CHECK(pretty_type(*f1.store, *a.witness) == pretty_type(*f2.store, *b.witness));
    CHECK(a.candidates_checked == b.candidates_checked);
    CHECK(a.expansions == b.expansions);
  }
}

TEST_CASE("generated typed sessions are found typable by the search (smoke)") {
  swt::Rng rng(67);
  for (int i = 0; i < 25; ++i) {
    TermStore store;
    swt::TypedSessionFixture fx = swt::random_typed_session(rng, store, i % 2 == 0);
    SearchResult r = infer_type(store, fx.session);
    CHECK(r.status == SearchStatus::Typable);
  }
}
