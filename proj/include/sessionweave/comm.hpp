#pragma once

#include "sessionweave/queue.hpp"
#include "sessionweave/symbols.hpp"

#include <compare>
#include <set>
#include <vector>

namespace sw {

enum class CommKind : unsigned char { Output, Input };

// A communication: an output p!q.l (p sends label l to q) or an input
// p?q.l (p receives label l sent by q). The player is the active side:
// the sender of an output, the receiver of an input.
struct Communication {
  CommKind kind = CommKind::Output;
  Participant player;
  Participant partner;
  Label label;

  static Communication output(Participant from, Label l, Participant to) {
    return {CommKind::Output, from, to, l};
  }
  static Communication input(Participant receiver, Label l, Participant from) {
    return {CommKind::Input, receiver, from, l};
  }

  // The message this communication appends to / consumes from the queue.
  Message message() const {
    return kind == CommKind::Output ? Message{player, label, partner}
                                    : Message{partner, label, player};
  }

  friend bool operator==(const Communication& a, const Communication& b) {
    return a.kind == b.kind && a.player == b.player && a.partner == b.partner &&
           a.label == b.label;
  }
  friend std::strong_ordering operator<=>(const Communication& a, const Communication& b) {
    if (auto c = a.player <=> b.player; c != 0) return c;
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.partner <=> b.partner; c != 0) return c;
    return a.label <=> b.label;
  }
};

using Trace = std::vector<Communication>;

inline Participant play(const Communication& c) { return c.player; }

std::set<Participant> players(const Trace& t);

} // namespace sw
