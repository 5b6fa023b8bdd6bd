#pragma once

#include "sessionweave/analysis.hpp"
#include "sessionweave/parser.hpp"
#include "sessionweave/queue.hpp"
#include "sessionweave/session.hpp"
#include "sessionweave/terms.hpp"

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace swt {

using namespace sw;

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline Participant participant(Rng& rng, std::size_t n = 4) {
  static const char* names[] = {"p", "q", "r", "s", "t", "u"};
  return Participant(names[pick(rng, n)]);
}

inline Label label(Rng& rng, std::size_t n = 3) {
  static const char* names[] = {"a", "b", "c", "d"};
  return Label(names[pick(rng, n)]);
}

inline Message message(Rng& rng) {
  return Message{participant(rng), label(rng), participant(rng)};
}

inline std::vector<Message> random_queue(Rng& rng, std::size_t max_len = 10) {
  std::vector<Message> msgs(pick(rng, max_len + 1));
  for (Message& m : msgs) m = message(rng);
  return msgs;
}

// Random regular global type as an equation system of `defs` nodes.
// Continuations point at End or at any equation, so cycles are common.
// Not necessarily bounded.
inline TypeRef random_type(Rng& rng, TermStore& store, std::size_t defs = 4,
                           std::size_t participants = 3, std::size_t labels = 2) {
  std::vector<TypeRef> refs;
  for (std::size_t i = 0; i < defs; ++i) refs.push_back(store.declare_type());
  for (std::size_t i = 0; i < defs; ++i) {
    Participant player = participant(rng, participants);
    NodeKind kind = pick(rng, 2) ? NodeKind::Output : NodeKind::Input;
    std::size_t width = 1 + pick(rng, 2);
    std::vector<TypeBranch> branches;
    for (std::size_t b = 0; b < width && branches.size() < width; ++b) {
      Participant partner = participant(rng, participants);
      while (partner == player) partner = participant(rng, participants);
      Label l = label(rng, labels);
      bool dup = false;
      for (const TypeBranch& existing : branches)
        if (existing.partner == partner && existing.label == l) dup = true;
      if (dup) continue;
      TypeRef cont = pick(rng, 4) == 0 ? store.type_end() : refs[pick(rng, defs)];
      branches.push_back({partner, l, cont});
    }
    if (branches.empty()) {
      Participant partner = participant(rng, participants);
      while (partner == player) partner = participant(rng, participants);
      branches.push_back({partner, label(rng, labels), store.type_end()});
    }
    store.define_type(refs[i], player, kind, std::move(branches));
  }
  store.merge_duplicates();
  return store.resolve(refs[0]);
}

// Random bounded global type: rejection-sampled from random_type.
inline TypeRef random_bounded_type(Rng& rng, TermStore& store, std::size_t defs = 4) {
  for (int tries = 0; tries < 200; ++tries) {
    TypeRef g = random_type(rng, store, defs);
    if (boundedness(store, g).bounded) return g;
  }
  throw std::runtime_error("no bounded type found");
}

// Random regular process as an equation system; cycles are common.
inline ProcRef random_proc(Rng& rng, TermStore& store, std::size_t defs = 3,
                           std::size_t participants = 3, std::size_t labels = 2) {
  std::vector<ProcRef> refs;
  for (std::size_t i = 0; i < defs; ++i) refs.push_back(store.declare_proc());
  for (std::size_t i = 0; i < defs; ++i) {
    NodeKind kind = pick(rng, 2) ? NodeKind::Output : NodeKind::Input;
    std::size_t width = 1 + pick(rng, 2);
    std::vector<ProcBranch> branches;
    for (std::size_t b = 0; b < width; ++b) {
      Participant partner = participant(rng, participants);
      Label l = label(rng, labels);
      bool dup = false;
      for (const ProcBranch& existing : branches)
        if (existing.partner == partner && existing.label == l) dup = true;
      if (dup) continue;
      ProcRef cont = pick(rng, 3) == 0 ? store.proc_end() : refs[pick(rng, defs)];
      branches.push_back({partner, l, cont});
    }
    if (branches.empty())
      branches.push_back({participant(rng, participants), label(rng, labels), store.proc_end()});
    store.define_proc(refs[i], kind, std::move(branches));
  }
  store.merge_duplicates();
  return store.resolve(refs[0]);
}

inline Session random_session(Rng& rng, TermStore& store) {
  static const char* names[] = {"p", "q", "r", "s"};
  std::size_t count = 2 + pick(rng, 3);
  std::vector<std::pair<Participant, ProcRef>> located;
  for (std::size_t i = 0; i < count; ++i)
    located.emplace_back(Participant(names[i]), random_proc(rng, store, 2 + pick(rng, 2)));
  Session s;
  s.network = Network::of(store, std::move(located));
  std::vector<Message> msgs(pick(rng, 4));
  for (Message& m : msgs) m = message(rng);
  s.queue = Queue::of(std::move(msgs));
  return s;
}

// A session together with a global type that derives it, built from a random
// straight-line protocol: a sequence of communications where each receive
// directly follows its send. Each participant's process is its subsequence
// of the protocol; with `loop` everything cycles back to the start.
struct TypedSessionFixture {
  Session session;
  TypeRef gtype;
};

inline TypedSessionFixture random_typed_session(Rng& rng, TermStore& store, bool loop) {
  static const char* names[] = {"v", "w", "x", "y"};
  std::size_t count = 2 + pick(rng, 2);
  std::vector<Participant> parts;
  for (std::size_t i = 0; i < count; ++i) parts.push_back(Participant(names[i]));

  struct Comm {
    Participant from, to;
    Label what;
  };
  std::size_t rounds = loop ? 1 + pick(rng, 3) : 2 + pick(rng, 3);
  std::vector<Comm> protocol;
  for (std::size_t i = 0; i < rounds; ++i) {
    Participant from = parts[pick(rng, parts.size())];
    Participant to = parts[pick(rng, parts.size())];
    while (to == from) to = parts[pick(rng, parts.size())];
    protocol.push_back({from, to, label(rng)});
  }

  // Per-participant event lists in protocol order.
  struct Event {
    bool output;
    Participant partner;
    Label what;
  };
  std::map<Participant, std::vector<Event>> events;
  for (const Comm& c : protocol) {
    events[c.from].push_back({true, c.to, c.what});
    events[c.to].push_back({false, c.from, c.what});
  }

  std::vector<std::pair<Participant, ProcRef>> located;
  for (const auto& [p, evs] : events) {
    ProcRef head = loop ? store.declare_proc() : ProcRef{};
    ProcRef cont = loop ? head : store.proc_end();
    for (std::size_t i = evs.size(); i-- > 1;) {
      const Event& e = evs[i];
      std::vector<ProcBranch> branch{{e.partner, e.what, cont}};
      cont = e.output ? store.mk_proc_output(branch) : store.mk_proc_input(branch);
    }
    const Event& first = evs.front();
    std::vector<ProcBranch> branch{{first.partner, first.what, cont}};
    if (loop)
      store.define_proc(head, first.output ? NodeKind::Output : NodeKind::Input,
                        std::move(branch));
    else
      head = first.output ? store.mk_proc_output(branch) : store.mk_proc_input(branch);
    located.emplace_back(p, head);
  }

  // The canonical type: send; receive; send; receive; ...
  TypeRef ghead = loop ? store.declare_type() : TypeRef{};
  TypeRef gcont = loop ? ghead : store.type_end();
  for (std::size_t i = protocol.size(); i-- > 0;) {
    const Comm& c = protocol[i];
    gcont = store.mk_type_input(c.to, {{c.from, c.what, gcont}});
    if (i == 0 && loop) {
      store.define_type(ghead, c.from, NodeKind::Output, {{c.to, c.what, gcont}});
      gcont = ghead;
    } else {
      gcont = store.mk_type_output(c.from, {{c.to, c.what, gcont}});
    }
  }
  store.merge_duplicates();

  TypedSessionFixture fx;
  fx.session.network = Network::of(store, std::move(located));
  fx.gtype = store.resolve(gcont);
  return fx;
}

inline SourceFile parse_or_die(std::string_view text) {
  ParseResult pr = parse(text);
  if (!pr.ok()) {
    std::string msg = "parse failed:";
    for (const Diagnostic& d : pr.diagnostics) msg += "\n  " + to_string(d);
    throw std::runtime_error(msg);
  }
  return std::move(*pr.file);
}

inline std::string fixture_path(const std::string& rel) {
  return std::string(SW_SOURCE_DIR) + "/" + rel;
}

// --- shared example sessions -------------------------------------------------

// Two senders, one receiver taking both messages in either order.
inline constexpr const char* kConfluentFanin = R"(
p := r!l
q := r!l2
r := (p?l; q?l2 + q?l2; p?l)
queue []
against p!r.l; q!r.l2; r?{p.l; r?q.l2; End, q.l2; r?p.l; End}
expect typable
)";

// Same shape but the first message is already in transit.
inline constexpr const char* kFaninAfterFirstSend = R"(
q := r!l2
r := (p?l; q?l2 + q?l2; p?l)
queue [p->r:l]
against q!r.l2; r?{p.l; r?q.l2; End, q.l2; r?p.l; End}
expect typable
)";

// Mismatched last input: not typable at all.
inline constexpr const char* kStaleInputSession = R"(
q := r!l2
r := (p?l; q?l2 + q?l2; p?l2)
queue [p->r:l]
expect untypable
)";

// Recursive fan-in: the processes and the type loop forever.
inline constexpr const char* kRecursiveFanin = R"(
def P := r!l; P
def Q := r!l2; Q
def R := (p?l; q?l2; R + q?l2; p?l; R)
def G := p!r.l; q!r.l2; r?{p.l; r?q.l2; G, q.l2; r?p.l; G}
p := P
q := Q
r := R
queue []
against G
expect typable
)";

// Two peers exchange greetings, then agree which of them notifies a third.
inline constexpr const char* kArrivalNotify = R"(
p := q!a; q?a; (q!l; r!b (+) q!l2)
q := p!a; p?a; (p?l + p?l2; r!b)
r := (p?b + q?b)
def G1 := p!r.b; q?p.l; r?{p.b, q.b}
def G2 := q?p.l2; q!r.b; r?{p.b, q.b}
queue []
against p!q.a; q!p.a; p?q.a; q?p.a; p!{q.l; G1, q.l2; G2}
expect typable
)";

// Four parties that can starve r when p picks its second branch.
inline constexpr const char* kFourPartyDeadlock = R"(
p := (s!a; t!a; r!d (+) s!b; t!b)
r := (s?c; t?e; p?d + t?e; s?c)
s := (p?a; r!c + p?b; r!c)
t := (p?a; r!e + p?b; r!e)
queue []
expect untypable
)";

} // namespace swt
