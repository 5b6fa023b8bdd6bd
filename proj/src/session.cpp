#include "sessionweave/session.hpp"

#include <algorithm>

namespace sw {

Network Network::of(const TermStore& store,
                    std::vector<std::pair<Participant, ProcRef>> located) {
  Network n;
  for (auto& [p, ref] : located) {
    ProcRef r = store.resolve(ref);
    if (store.proc(r).kind == NodeKind::End) continue;
    auto [it, fresh] = n.members_.emplace(p, r);
    (void)it;
    if (!fresh) throw TermError("duplicate participant " + std::string(p.str()));
  }
  return n;
}

Network Network::with(const TermStore& store, Participant p, ProcRef proc) const {
  Network n = *this;
  ProcRef r = store.resolve(proc);
  if (store.proc(r).kind == NodeKind::End)
    n.members_.erase(p);
  else
    n.members_[p] = r;
  return n;
}

std::optional<ProcRef> Network::process_of(Participant p) const {
  auto it = members_.find(p);
  if (it == members_.end()) return std::nullopt;
  return it->second;
}

std::set<Participant> players_of_network(const Network& n) {
  std::set<Participant> out;
  for (const auto& [p, ref] : n.members()) out.insert(p);
  return out;
}

std::vector<SessionStep> session_steps(const TermStore& store, const Session& s) {
  std::vector<SessionStep> steps;
  for (const auto& [p, ref] : s.network.members()) {
    const ProcNode& node = store.proc(ref);
    if (node.kind == NodeKind::Output) {
      for (const ProcBranch& b : node.branches) {
        Communication comm = Communication::output(p, b.label, b.partner);
        steps.push_back({comm, Session{s.network.with(store, p, b.cont),
                                       s.queue.appended(comm.message())}});
      }
    } else {
      for (const ProcBranch& b : node.branches) {
        Message m{b.partner, b.label, p};
        if (!s.queue.ready(m)) continue;
        Communication comm = Communication::input(p, b.label, b.partner);
        steps.push_back(
            {comm, Session{s.network.with(store, p, b.cont), s.queue.consumed(m)}});
      }
    }
  }
  std::sort(steps.begin(), steps.end(),
            [](const SessionStep& a, const SessionStep& b) { return a.comm < b.comm; });
  return steps;
}

std::optional<SessionStep> session_step_with(const TermStore& store, const Session& s,
                                             const Communication& beta) {
  for (SessionStep& st : session_steps(store, s))
    if (st.comm == beta) return std::move(st);
  return std::nullopt;
}

bool is_stuck(const TermStore& store, const Session& s) {
  if (s.network.empty() && s.queue.empty()) return false;
  return session_steps(store, s).empty();
}

std::variant<Session, TraceError> apply_trace(const TermStore& store, Session s,
                                              const Trace& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto st = session_step_with(store, s, t[i]);
    if (!st) return TraceError{i, t[i]};
    s = std::move(st->target);
  }
  return s;
}

} // namespace sw
