#pragma once

#include "sessionweave/comm.hpp"
#include "sessionweave/queue.hpp"
#include "sessionweave/terms.hpp"

#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

namespace sw {

// Parallel composition of located processes. Terminated processes are
// absorbed on insertion, so network equality is plain map equality and the
// participants present are exactly the live ones.
class Network {
public:
  Network() = default;

  static Network of(const TermStore& store,
                    std::vector<std::pair<Participant, ProcRef>> located);

  Network with(const TermStore& store, Participant p, ProcRef proc) const;

  const std::map<Participant, ProcRef>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::optional<ProcRef> process_of(Participant p) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.members_ == b.members_;
  }
  friend std::strong_ordering operator<=>(const Network& a, const Network& b) {
    return a.members_ <=> b.members_;
  }

private:
  std::map<Participant, ProcRef> members_; // resolved refs, never Terminated
};

std::set<Participant> players_of_network(const Network& n);

struct Session {
  Network network;
  Queue queue;

  friend bool operator==(const Session& a, const Session& b) {
    return a.network == b.network && a.queue == b.queue;
  }
  friend std::strong_ordering operator<=>(const Session& a, const Session& b) {
    if (auto c = a.network <=> b.network; c != 0) return c;
    return a.queue <=> b.queue;
  }
};

struct SessionStep {
  Communication comm;
  Session target;
};

// Complete enumeration of the Send/Rcv transitions of a session, sorted by
// (player, kind, partner, label).
std::vector<SessionStep> session_steps(const TermStore& store, const Session& s);

std::optional<SessionStep> session_step_with(const TermStore& store, const Session& s,
                                             const Communication& beta);

// A session is stuck when it has no steps but still has live processes or
// pending messages.
bool is_stuck(const TermStore& store, const Session& s);

struct TraceError {
  std::size_t index; // position of the communication that had no step
  Communication comm;
};

std::variant<Session, TraceError> apply_trace(const TermStore& store, Session s,
                                              const Trace& t);

} // namespace sw
