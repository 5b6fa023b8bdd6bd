#include "sessionweave/queue.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace sw;

namespace {

Message msg(const char* s, const char* l, const char* r) {
  return Message{Participant(s), Label(l), Participant(r)};
}

// Equivalence closure of the single swap axiom: adjacent messages of
// different channels commute. Independent oracle for normalize_messages.
std::set<std::vector<Message>> swap_closure(const std::vector<Message>& q) {
  std::set<std::vector<Message>> seen{q};
  std::vector<std::vector<Message>> frontier{q};
  while (!frontier.empty()) {
    std::vector<Message> cur = std::move(frontier.back());
    frontier.pop_back();
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i].same_channel(cur[i + 1])) continue;
      std::vector<Message> next = cur;
      std::swap(next[i], next[i + 1]);
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  return seen;
}

std::vector<Message> channel_subsequence(const std::vector<Message>& q, Participant s,
                                         Participant r) {
  std::vector<Message> out;
  for (const Message& m : q)
    if (m.sender == s && m.receiver == r) out.push_back(m);
  return out;
}

} // namespace

TEST_CASE("empty queue normalizes to itself") {
  CHECK(normalize_messages({}).empty());
  CHECK(queues_equivalent({}, {}));
}

TEST_CASE("distinct senders to the same receiver commute") {
  auto a = std::vector<Message>{msg("p", "l", "r"), msg("q", "l2", "r")};
  auto b = std::vector<Message>{msg("q", "l2", "r"), msg("p", "l", "r")};
  CHECK(normalize_messages(a) == normalize_messages(b));
  CHECK(queues_equivalent(a, b));
}

TEST_CASE("same channel never commutes") {
  auto a = std::vector<Message>{msg("p", "l", "r"), msg("p", "l2", "r")};
  auto b = std::vector<Message>{msg("p", "l2", "r"), msg("p", "l", "r")};
  CHECK(normalize_messages(a) != normalize_messages(b));
  CHECK_FALSE(queues_equivalent(a, b));
}

TEST_CASE("different labels are different queues") {
  CHECK_FALSE(queues_equivalent({msg("p", "l", "r")}, {msg("p", "l2", "r")}));
}

TEST_CASE("normalization agrees with the swap-axiom closure on small queues") {
  swt::Rng rng(7);
  int done = 0;
  while (done < 300) {
    std::vector<Message> q = swt::random_queue(rng, 4);
    if (q.size() > 4) continue;
    ++done;
    auto closure = swap_closure(q);
    // Everything in the closure has the same normal form...
    for (const std::vector<Message>& v : closure) CHECK(queues_equivalent(q, v));
    // ...and equal normal form means membership in the closure.
    std::vector<Message> other = swt::random_queue(rng, 4);
    bool equivalent = queues_equivalent(q, other);
    CHECK(equivalent == (closure.count(other) > 0));
  }
}

TEST_CASE("normalize is idempotent and preserves content (1000 cases)") {
  swt::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Message> q = swt::random_queue(rng);
    std::vector<Message> n = normalize_messages(q);
    CHECK(normalize_messages(n) == n);

    std::multiset<Message> before(q.begin(), q.end()), after(n.begin(), n.end());
    CHECK(before == after);

    std::set<std::pair<Participant, Participant>> channels;
    for (const Message& m : q) channels.insert({m.sender, m.receiver});
    for (auto [s, r] : channels)
      CHECK(channel_subsequence(q, s, r) == channel_subsequence(n, s, r));
  }
}

TEST_CASE("normalize is a congruence for append (1000 cases)") {
  swt::Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Message> q = swt::random_queue(rng);
    Message m = swt::message(rng);
    std::vector<Message> direct = q;
    direct.push_back(m);
    std::vector<Message> staged = normalize_messages(q);
    staged.push_back(m);
    CHECK(normalize_messages(direct) == normalize_messages(staged));
  }
}

TEST_CASE("queue accessors follow per-channel fifo") {
  Queue q = Queue::of({msg("p", "l", "r"), msg("p", "l2", "r"), msg("q", "x", "r")});
  CHECK(q.earliest(Participant("p"), Participant("r")) == msg("p", "l", "r"));
  CHECK(q.ready(msg("p", "l", "r")));
  CHECK_FALSE(q.ready(msg("p", "l2", "r")));
  CHECK(q.ready(msg("q", "x", "r")));

  Queue rest = q.consumed(msg("p", "l", "r"));
  CHECK(rest.size() == 2);
  CHECK(rest.ready(msg("p", "l2", "r")));

  CHECK(q.channel_tail(Participant("p"), Participant("r")) == msg("p", "l2", "r"));
  Queue no_tail = q.without_channel_tail(Participant("p"), Participant("r"));
  CHECK(no_tail.size() == 2);
  CHECK(no_tail.channel_tail(Participant("p"), Participant("r")) == msg("p", "l", "r"));

  CHECK(q.has_message_for(Participant("r")));
  CHECK_FALSE(q.has_message_for(Participant("p")));
}
