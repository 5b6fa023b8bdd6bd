#include "sessionweave/verify.hpp"

#include "sessionweave/printer.hpp"
#include "sessionweave/type_lts.hpp"

#include <deque>
#include <map>

namespace sw {

std::string_view to_string(Property p) {
  switch (p) {
    case Property::SubjectReduction: return "subject-reduction";
    case Property::SessionFidelity: return "session-fidelity";
    case Property::LockFreedom: return "lock-freedom";
    case Property::Races: return "races";
  }
  return "?";
}

std::string_view to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Pass: return "pass";
    case VerifyStatus::Fail: return "fail";
    case VerifyStatus::BoundExhausted: return "bound-exhausted";
  }
  return "?";
}

namespace {

using TypedKey = std::tuple<TypeRef, std::vector<std::pair<Participant, ProcRef>>,
                            std::vector<Message>>;

TypedKey typed_key(const TermStore& store, TypeRef g, const Session& s) {
  std::vector<std::pair<Participant, ProcRef>> net(s.network.members().begin(),
                                                   s.network.members().end());
  return {store.resolve(g), std::move(net), s.queue.messages()};
}

struct TypedState {
  TypeRef g;
  Session s;
  Trace trace;
};

// Common BFS for subject reduction and session fidelity. `type_driven`
// selects which side proposes the steps the other side must match.
VerificationReport check_direction(TermStore& store, const Judgement& j,
                                   const ExplorationBound& b, const CheckLimits& limits,
                                   bool type_driven) {
  VerificationReport report;
  report.property = type_driven ? Property::SessionFidelity : Property::SubjectReduction;
  report.bound = b;

  std::map<TypedKey, bool> typecheck_memo;
  auto typechecks = [&](const Judgement& q) {
    TypedKey key = typed_key(store, q.gtype, Session{q.network, q.queue});
    auto it = typecheck_memo.find(key);
    if (it != typecheck_memo.end()) return it->second;
    bool ok;
    try {
      ok = typed(typecheck(store, q, limits));
    } catch (const UnboundedTypeError&) {
      ok = false;
    }
    typecheck_memo.emplace(std::move(key), ok);
    return ok;
  };

  std::set<TypedKey> visited;
  std::deque<std::pair<TypedState, std::size_t>> frontier;
  Session root{j.network, j.queue};
  frontier.push_back({TypedState{j.gtype, root, {}}, 0});
  visited.insert(typed_key(store, j.gtype, root));
  bool truncated = false;

  auto fail = [&](const TypedState& st, std::optional<Communication> beta,
                  std::string clause) {
    report.status = VerifyStatus::Fail;
    report.counterexample =
        Counterexample{st.trace, beta, pretty_session(store, st.s), std::move(clause)};
    return report;
  };

  while (!frontier.empty()) {
    auto [st, depth] = std::move(frontier.front());
    frontier.pop_front();
    ++report.states;
    if (report.states > b.max_states || st.s.queue.size() > b.max_queue) {
      truncated = true;
      break;
    }

    TypeConfig config{st.g, st.s.queue};
    std::vector<std::pair<Communication, std::pair<TypeRef, Session>>> successors;

    if (!type_driven) {
      for (const SessionStep& ss : session_steps(store, st.s)) {
        auto ts = step_with(store, config, ss.comm);
        if (!ts)
          return fail(st, ss.comm,
                      "session step has no matching type-configuration step");
        if (!(ts->target.queue == ss.target.queue))
          return fail(st, ss.comm,
                      "matching type step leaves a different queue");
        if (!typechecks(Judgement{ts->target.gtype, ss.target.network, ss.target.queue}))
          return fail(st, ss.comm, "successor judgement does not typecheck");
        successors.push_back({ss.comm, {ts->target.gtype, ss.target}});
      }
    } else {
      for (const TypeStep& ts : type_steps(store, config)) {
        auto ss = session_step_with(store, st.s, ts.comm);
        if (!ss)
          return fail(st, ts.comm, "type-configuration step has no matching session step");
        if (!(ss->target.queue == ts.target.queue))
          return fail(st, ts.comm, "matching session step leaves a different queue");
        if (!typechecks(Judgement{ts.target.gtype, ss->target.network, ss->target.queue}))
          return fail(st, ts.comm, "successor judgement does not typecheck");
        successors.push_back({ts.comm, {ts.target.gtype, ss->target}});
      }
    }

    // States beyond the depth window are out of the contract, not a bound
    // exhaustion.
    if (depth == b.max_depth) continue;
    for (auto& [comm, succ] : successors) {
      TypedKey key = typed_key(store, succ.first, succ.second);
      if (visited.count(key)) continue;
      visited.insert(std::move(key));
      Trace t = st.trace;
      t.push_back(comm);
      frontier.push_back({TypedState{succ.first, succ.second, std::move(t)}, depth + 1});
    }
  }

  if (truncated) report.status = VerifyStatus::BoundExhausted;
  return report;
}

using SessionKey = std::pair<std::vector<std::pair<Participant, ProcRef>>, std::vector<Message>>;

SessionKey session_key(const Session& s) {
  std::vector<std::pair<Participant, ProcRef>> net(s.network.members().begin(),
                                                   s.network.members().end());
  return {std::move(net), s.queue.messages()};
}

enum class Hunt { Found, Starved, Truncated };

// Searches, from s, for a continuation containing a communication of p.
Hunt hunt_player(const TermStore& store, const Session& s, Participant p,
                 std::size_t max_states) {
  std::set<SessionKey> visited{session_key(s)};
  std::deque<Session> frontier{s};
  while (!frontier.empty()) {
    Session cur = std::move(frontier.front());
    frontier.pop_front();
    if (visited.size() > max_states) return Hunt::Truncated;
    for (const SessionStep& st : session_steps(store, cur)) {
      if (st.comm.player == p) return Hunt::Found;
      SessionKey key = session_key(st.target);
      if (visited.insert(std::move(key)).second) frontier.push_back(st.target);
    }
  }
  return Hunt::Starved;
}

} // namespace

VerificationReport check_subject_reduction(TermStore& store, const Judgement& j,
                                           const ExplorationBound& b,
                                           const CheckLimits& limits) {
  return check_direction(store, j, b, limits, false);
}

VerificationReport check_session_fidelity(TermStore& store, const Judgement& j,
                                          const ExplorationBound& b,
                                          const CheckLimits& limits) {
  return check_direction(store, j, b, limits, true);
}

VerificationReport check_lock_freedom_session(const TermStore& store, const Session& s,
                                              const ExplorationBound& b) {
  VerificationReport report;
  report.property = Property::LockFreedom;
  report.bound = b;

  std::set<SessionKey> visited{session_key(s)};
  std::deque<std::pair<Session, std::pair<std::size_t, Trace>>> frontier{{s, {0, {}}}};
  bool truncated = false;

  while (!frontier.empty()) {
    auto [cur, meta] = std::move(frontier.front());
    auto [depth, trace] = std::move(meta);
    frontier.pop_front();
    ++report.states;
    if (report.states > b.max_states || cur.queue.size() > b.max_queue) {
      truncated = true;
      break;
    }

    for (const Participant& p : players_of_network(cur.network)) {
      Hunt h = hunt_player(store, cur, p, b.max_states);
      if (h == Hunt::Starved) {
        report.status = VerifyStatus::Fail;
        report.counterexample = Counterexample{
            trace, std::nullopt, pretty_session(store, cur),
            "participant " + std::string(p.str()) +
                " can never perform a communication from this state"};
        return report;
      }
      if (h == Hunt::Truncated) truncated = true;
    }

    if (depth == b.max_depth) continue;
    for (const SessionStep& st : session_steps(store, cur)) {
      SessionKey key = session_key(st.target);
      if (visited.count(key)) continue;
      visited.insert(std::move(key));
      Trace t = trace;
      t.push_back(st.comm);
      frontier.push_back({st.target, {depth + 1, std::move(t)}});
    }
  }

  if (truncated) report.status = VerifyStatus::BoundExhausted;
  return report;
}

VerificationReport check_lock_freedom(TermStore& store, const Judgement& j,
                                      const ExplorationBound& b) {
  return check_lock_freedom_session(store, Session{j.network, j.queue}, b);
}

std::vector<RaceFinding> find_races(const TermStore& store, const Session& s,
                                    const ExplorationBound& b) {
  std::vector<RaceFinding> findings;
  std::set<SessionKey> visited{session_key(s)};
  std::deque<std::pair<Session, std::pair<std::size_t, Trace>>> frontier{{s, {0, {}}}};
  std::size_t states = 0;

  while (!frontier.empty()) {
    auto [cur, meta] = std::move(frontier.front());
    auto [depth, trace] = std::move(meta);
    frontier.pop_front();
    if (++states > b.max_states || cur.queue.size() > b.max_queue) break;

    std::vector<SessionStep> steps = session_steps(store, cur);
    std::map<Participant, std::vector<const SessionStep*>> inputs_by_receiver;
    for (const SessionStep& st : steps)
      if (st.comm.kind == CommKind::Input)
        inputs_by_receiver[st.comm.player].push_back(&st);

    for (const auto& [receiver, ins] : inputs_by_receiver) {
      if (ins.size() < 2) continue;
      std::set<Participant> senders;
      for (const SessionStep* st : ins) senders.insert(st->comm.partner);
      if (senders.size() < 2) continue;

      bool confluent = true;
      for (std::size_t a = 0; a < ins.size() && confluent; ++a) {
        for (std::size_t c = a + 1; c < ins.size() && confluent; ++c) {
          if (ins[a]->comm.partner == ins[c]->comm.partner) continue;
          auto ab = session_step_with(store, ins[a]->target, ins[c]->comm);
          auto ba = session_step_with(store, ins[c]->target, ins[a]->comm);
          if (!ab || !ba || !(ab->target == ba->target)) confluent = false;
        }
      }
      RaceFinding f{trace, cur, receiver, {}, confluent};
      for (const SessionStep* st : ins) f.inputs.push_back(st->comm);
      findings.push_back(std::move(f));
    }

    for (const SessionStep& st : steps) {
      SessionKey key = session_key(st.target);
      if (visited.count(key)) continue;
      if (depth + 1 > b.max_depth) continue;
      visited.insert(std::move(key));
      Trace t = trace;
      t.push_back(st.comm);
      frontier.push_back({st.target, {depth + 1, std::move(t)}});
    }
  }
  return findings;
}

nlohmann::json report_to_json(const VerificationReport& r) {
  nlohmann::json out;
  out["property"] = std::string(to_string(r.property));
  out["status"] = std::string(to_string(r.status));
  out["bound"] = {{"max_depth", r.bound.max_depth},
                  {"max_states", r.bound.max_states},
                  {"max_queue", r.bound.max_queue}};
  out["states"] = r.states;
  if (r.counterexample) {
    const Counterexample& c = *r.counterexample;
    nlohmann::json cex;
    cex["trace"] = pretty_trace(c.trace);
    if (c.beta) cex["beta"] = pretty_comm(*c.beta);
    cex["state"] = c.state;
    cex["clause"] = c.clause;
    out["counterexample"] = std::move(cex);
  }
  return out;
}

nlohmann::json races_to_json(const TermStore& store, const std::vector<RaceFinding>& rs) {
  nlohmann::json out = nlohmann::json::array();
  for (const RaceFinding& f : rs) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const Communication& c : f.inputs) inputs.push_back(pretty_comm(c));
    out.push_back({{"trace", pretty_trace(f.trace)},
                   {"state", pretty_session(store, f.state)},
                   {"receiver", std::string(f.receiver.str())},
                   {"inputs", std::move(inputs)},
                   {"classification", f.confluent ? "confluent" : "non-confluent"}});
  }
  return out;
}

} // namespace sw
