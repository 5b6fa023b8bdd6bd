#pragma once

#include "sessionweave/symbols.hpp"

#include <compare>
#include <optional>
#include <set>
#include <vector>

namespace sw {

// A message in transit: sender, label, receiver.
struct Message {
  Participant sender;
  Label label;
  Participant receiver;

  friend bool operator==(const Message& a, const Message& b) {
    return a.sender == b.sender && a.label == b.label && a.receiver == b.receiver;
  }
  friend std::strong_ordering operator<=>(const Message& a, const Message& b) {
    if (auto c = a.sender <=> b.sender; c != 0) return c;
    if (auto c = a.receiver <=> b.receiver; c != 0) return c;
    return a.label <=> b.label;
  }

  bool same_channel(const Message& o) const {
    return sender == o.sender && receiver == o.receiver;
  }
};

using MessageSet = std::set<Message>;

// Canonical form of a queue: messages of distinct channels commute, so the
// representative groups messages by (sender, receiver) channel, channels in
// lexicographic order, preserving arrival order within each channel.
std::vector<Message> normalize_messages(std::vector<Message> msgs);

bool queues_equivalent(const std::vector<Message>& a, const std::vector<Message>& b);

// A message queue, always held in canonical form.
class Queue {
public:
  Queue() = default;
  static Queue of(std::vector<Message> msgs) { return Queue(normalize_messages(std::move(msgs))); }

  const std::vector<Message>& messages() const { return msgs_; }
  bool empty() const { return msgs_.empty(); }
  std::size_t size() const { return msgs_.size(); }

  Queue appended(const Message& m) const;

  // Earliest message on channel (from, to), if any.
  std::optional<Message> earliest(Participant from, Participant to) const;
  // True iff m is the earliest message of its channel.
  bool ready(const Message& m) const;
  // Removes the earliest occurrence on m's channel; pre: ready(m).
  Queue consumed(const Message& m) const;

  // Last message on channel (from, to); the queue is (rest · m) modulo
  // structural equivalence exactly when this returns m.
  std::optional<Message> channel_tail(Participant from, Participant to) const;
  Queue without_channel_tail(Participant from, Participant to) const;

  // Puts m in front of every message of its channel: the inverse of
  // consumed(m).
  Queue with_channel_head(const Message& m) const;

  bool has_message_for(Participant receiver) const;

  friend bool operator==(const Queue& a, const Queue& b) { return a.msgs_ == b.msgs_; }
  friend std::strong_ordering operator<=>(const Queue& a, const Queue& b) {
    return a.msgs_ <=> b.msgs_;
  }

private:
  explicit Queue(std::vector<Message> canonical) : msgs_(std::move(canonical)) {}
  std::vector<Message> msgs_;
};

} // namespace sw
