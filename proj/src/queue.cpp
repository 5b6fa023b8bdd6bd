#include "sessionweave/queue.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace sw {

std::vector<Message> normalize_messages(std::vector<Message> msgs) {
  // Stable bucketing by channel; channel order is lexicographic by
  // (sender, receiver) names.
  std::map<std::pair<Participant, Participant>, std::vector<Message>> buckets;
  for (const Message& m : msgs) buckets[{m.sender, m.receiver}].push_back(m);
  std::vector<Message> out;
  out.reserve(msgs.size());
  for (auto& [chan, ms] : buckets)
    for (const Message& m : ms) out.push_back(m);
  return out;
}

bool queues_equivalent(const std::vector<Message>& a, const std::vector<Message>& b) {
  return normalize_messages(a) == normalize_messages(b);
}

Queue Queue::appended(const Message& m) const {
  std::vector<Message> ms = msgs_;
  ms.push_back(m);
  return Queue(normalize_messages(std::move(ms)));
}

std::optional<Message> Queue::earliest(Participant from, Participant to) const {
  for (const Message& m : msgs_)
    if (m.sender == from && m.receiver == to) return m;
  return std::nullopt;
}

bool Queue::ready(const Message& m) const {
  auto first = earliest(m.sender, m.receiver);
  return first && *first == m;
}

Queue Queue::consumed(const Message& m) const {
  assert(ready(m));
  std::vector<Message> ms;
  ms.reserve(msgs_.size() - 1);
  bool removed = false;
  for (const Message& x : msgs_) {
    if (!removed && x.same_channel(m)) {
      removed = true;
      continue;
    }
    ms.push_back(x);
  }
  return Queue(std::move(ms)); // removing a bucket head keeps canonical form
}

std::optional<Message> Queue::channel_tail(Participant from, Participant to) const {
  std::optional<Message> last;
  for (const Message& m : msgs_)
    if (m.sender == from && m.receiver == to) last = m;
  return last;
}

Queue Queue::without_channel_tail(Participant from, Participant to) const {
  std::vector<Message> ms = msgs_;
  for (auto it = ms.rbegin(); it != ms.rend(); ++it) {
    if (it->sender == from && it->receiver == to) {
      ms.erase(std::next(it).base());
      return Queue(std::move(ms));
    }
  }
  assert(false && "no message on channel");
  return *this;
}

Queue Queue::with_channel_head(const Message& m) const {
  std::vector<Message> ms;
  ms.reserve(msgs_.size() + 1);
  ms.push_back(m);
  ms.insert(ms.end(), msgs_.begin(), msgs_.end());
  return Queue(normalize_messages(std::move(ms)));
}

bool Queue::has_message_for(Participant receiver) const {
  return std::any_of(msgs_.begin(), msgs_.end(),
                     [&](const Message& m) { return m.receiver == receiver; });
}

} // namespace sw
