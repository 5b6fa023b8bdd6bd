#include "sessionweave/typecheck.hpp"

#include "sessionweave/printer.hpp"
#include "sessionweave/type_lts.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace sw {

std::string_view to_string(DerivRule r) {
  switch (r) {
    case DerivRule::End: return "End";
    case DerivRule::Out: return "Out";
    case DerivRule::In: return "In";
    case DerivRule::CoinductiveLoop: return "CoinductiveLoop";
  }
  return "?";
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::RootMismatch: return "RootMismatch";
    case FailureReason::BranchSetMismatch: return "BranchSetMismatch";
    case FailureReason::PlayersCondition: return "PlayersCondition";
    case FailureReason::EmptyReadySet: return "EmptyReadySet";
    case FailureReason::ReadySetMismatch: return "ReadySetMismatch";
    case FailureReason::InactivityViolation: return "InactivityViolation";
    case FailureReason::EndResidue: return "EndResidue";
    case FailureReason::GrowthGuardExceeded: return "GrowthGuardExceeded";
  }
  return "?";
}

namespace {

using JudgementKey =
    std::tuple<TypeRef, std::vector<std::pair<Participant, ProcRef>>, std::vector<Message>>;

JudgementKey key_of(const TermStore& store, const Judgement& j) {
  std::vector<std::pair<Participant, ProcRef>> net(j.network.members().begin(),
                                                   j.network.members().end());
  return {store.resolve(j.gtype), std::move(net), j.queue.messages()};
}

std::string show_players(const std::set<Participant>& ps) {
  std::string out = "{";
  for (const Participant& p : ps) {
    if (out.size() > 1) out += ", ";
    out += p.str();
  }
  return out + "}";
}

// In-rule data shared between the checker and the re-verifier.
struct InAnalysis {
  std::vector<Message> type_msgs;
  std::vector<Message> proc_msgs;
  std::vector<Message> ready; // sorted, as a vector
  MessageSet forbidden;
};

InAnalysis analyze_in(const TypeNode& tnode, const ProcNode& pnode, const Queue& q) {
  InAnalysis a;
  for (const TypeBranch& b : tnode.branches)
    a.type_msgs.push_back({b.partner, b.label, tnode.player});
  for (const ProcBranch& b : pnode.branches)
    a.proc_msgs.push_back({b.partner, b.label, tnode.player});

  MessageSet ready_type, ready_proc;
  for (std::size_t i : ready_set(a.type_msgs, q)) ready_type.insert(a.type_msgs[i]);
  for (std::size_t i : ready_set(a.proc_msgs, q)) ready_proc.insert(a.proc_msgs[i]);
  if (ready_type != ready_proc) return a; // caller reports the mismatch
  a.ready.assign(ready_type.begin(), ready_type.end());

  std::set<Participant> live_senders;
  for (const Message& m : a.ready) live_senders.insert(m.sender);
  MessageSet dead(a.type_msgs.begin(), a.type_msgs.end());
  dead.insert(a.proc_msgs.begin(), a.proc_msgs.end());
  for (const Message& m : a.ready) dead.erase(m);
  for (const Message& m : dead)
    if (!live_senders.count(m.sender)) a.forbidden.insert(m);
  return a;
}

bool ready_sets_agree(const InAnalysis& a, const Queue& q) {
  MessageSet ready_type, ready_proc;
  for (std::size_t i : ready_set(a.type_msgs, q)) ready_type.insert(a.type_msgs[i]);
  for (std::size_t i : ready_set(a.proc_msgs, q)) ready_proc.insert(a.proc_msgs[i]);
  return ready_type == ready_proc;
}

class Checker {
public:
  Checker(const TermStore& store, CheckLimits limits) : store_(store), limits_(limits) {}

  CheckResult check(const Judgement& j) {
    if (j.queue.size() > limits_.max_queue)
      return TypeFailure{j, FailureReason::GrowthGuardExceeded,
                         "queue grew beyond " + std::to_string(limits_.max_queue) +
                             " messages"};

    JudgementKey key = key_of(store_, j);
    if (on_path_.count(key)) return Derivation{DerivRule::CoinductiveLoop, j, {}, {}};

    seen_.insert(key);
    if (seen_.size() > limits_.max_judgements)
      return TypeFailure{j, FailureReason::GrowthGuardExceeded,
                         "more than " + std::to_string(limits_.max_judgements) +
                             " distinct judgements"};

    const TypeNode& node = store_.type(j.gtype);
    on_path_.insert(key);
    CheckResult result = node.kind == NodeKind::End   ? check_end(j)
                         : node.kind == NodeKind::Output ? check_out(j, node)
                                                         : check_in(j, node);
    on_path_.erase(key);
    return result;
  }

private:
  CheckResult check_end(const Judgement& j) {
    if (!j.network.empty())
      return TypeFailure{j, FailureReason::EndResidue,
                         "type is End but participants " +
                             show_players(players_of_network(j.network)) +
                             " are still active"};
    if (!j.queue.empty())
      return TypeFailure{j, FailureReason::EndResidue,
                         "type is End but the queue still holds " +
                             std::to_string(j.queue.size()) + " message(s)"};
    return Derivation{DerivRule::End, j, {}, {}};
  }

  CheckResult check_out(const Judgement& j, const TypeNode& node) {
    Participant p = node.player;
    auto proc_ref = j.network.process_of(p);
    if (!proc_ref)
      return TypeFailure{j, FailureReason::RootMismatch,
                         "type expects an output of " + std::string(p.str()) +
                             " but the network has no such participant"};
    const ProcNode& proc = store_.proc(*proc_ref);
    if (proc.kind != NodeKind::Output)
      return TypeFailure{j, FailureReason::RootMismatch,
                         "type expects an output of " + std::string(p.str()) +
                             " but its process is not an output choice"};

    if (!same_branch_set(node.branches, proc.branches))
      return TypeFailure{j, FailureReason::BranchSetMismatch,
                         "output branches of the type and of " + std::string(p.str()) +
                             "'s process differ"};

    std::set<Participant> rest = players_of_network(j.network);
    rest.erase(p);
    for (const TypeBranch& b : node.branches) {
      std::set<Participant> cont_players = players_of_type(store_, b.cont);
      cont_players.erase(p);
      if (cont_players != rest)
        return TypeFailure{j, FailureReason::PlayersCondition,
                           "branch " + std::string(b.partner.str()) + "." +
                               std::string(b.label.str()) + ": continuation players " +
                               show_players(cont_players) + " do not match network players " +
                               show_players(rest)};
    }

    Derivation d{DerivRule::Out, j, {}, {}};
    for (std::size_t i = 0; i < node.branches.size(); ++i) {
      const TypeBranch& tb = node.branches[i];
      const ProcBranch& pb = proc.branches[i]; // same sorted (partner, label) sets
      Judgement premise{tb.cont, j.network.with(store_, p, pb.cont),
                        j.queue.appended(Message{p, tb.label, tb.partner})};
      CheckResult sub = check(premise);
      if (!typed(sub)) return std::get<TypeFailure>(std::move(sub));
      d.premises.push_back(std::get<Derivation>(std::move(sub)));
    }
    return d;
  }

  CheckResult check_in(const Judgement& j, const TypeNode& node) {
    Participant p = node.player;
    auto proc_ref = j.network.process_of(p);
    if (!proc_ref)
      return TypeFailure{j, FailureReason::RootMismatch,
                         "type expects an input of " + std::string(p.str()) +
                             " but the network has no such participant"};
    const ProcNode& proc = store_.proc(*proc_ref);
    if (proc.kind != NodeKind::Input)
      return TypeFailure{j, FailureReason::RootMismatch,
                         "type expects an input of " + std::string(p.str()) +
                             " but its process is not an input choice"};

    InAnalysis a = analyze_in(node, proc, j.queue);
    if (!ready_sets_agree(a, j.queue))
      return TypeFailure{j, FailureReason::ReadySetMismatch,
                         "type and process of " + std::string(p.str()) +
                             " select different live branches on this queue"};
    if (a.ready.empty()) {
      if (j.queue.has_message_for(p))
        return TypeFailure{j, FailureReason::ReadySetMismatch,
                           "no input branch of " + std::string(p.str()) +
                               " matches the earliest message addressed to it"};
      return TypeFailure{j, FailureReason::EmptyReadySet,
                         "no message for " + std::string(p.str()) + " is on the queue"};
    }

    for (const Message& m : a.ready) {
      const TypeBranch& tb = *find_branch(node.branches, m.sender, m.label);
      if (!inactive(store_, tb.cont, a.forbidden))
        return TypeFailure{j, FailureReason::InactivityViolation,
                           "live branch " + std::string(m.sender.str()) + "." +
                               std::string(m.label.str()) +
                               " can emit a message that would awaken a dead branch"};
    }

    std::set<Participant> rest = players_of_network(j.network);
    rest.erase(p);
    for (const TypeBranch& b : node.branches) {
      std::set<Participant> cont_players = players_of_type(store_, b.cont);
      cont_players.erase(p);
      if (cont_players != rest)
        return TypeFailure{j, FailureReason::PlayersCondition,
                           "branch " + std::string(b.partner.str()) + "." +
                               std::string(b.label.str()) + ": continuation players " +
                               show_players(cont_players) + " do not match network players " +
                               show_players(rest)};
    }

    Derivation d{DerivRule::In, j,
                 InEvidence{a.type_msgs, a.proc_msgs, a.ready, a.forbidden}, {}};
    for (const Message& m : a.ready) {
      const TypeBranch& tb = *find_branch(node.branches, m.sender, m.label);
      const ProcBranch& pb = *find_branch(proc.branches, m.sender, m.label);
      Judgement premise{tb.cont, j.network.with(store_, p, pb.cont), j.queue.consumed(m)};
      CheckResult sub = check(premise);
      if (!typed(sub)) return std::get<TypeFailure>(std::move(sub));
      d.premises.push_back(std::get<Derivation>(std::move(sub)));
    }
    return d;
  }

  template <typename Branch>
  static const Branch* find_branch(const std::vector<Branch>& bs, Participant partner,
                                   Label label) {
    for (const Branch& b : bs)
      if (b.partner == partner && b.label == label) return &b;
    return nullptr;
  }

  static bool same_branch_set(const std::vector<TypeBranch>& ts,
                              const std::vector<ProcBranch>& ps) {
    if (ts.size() != ps.size()) return false;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (ts[i].partner != ps[i].partner || ts[i].label != ps[i].label) return false;
    return true;
  }

  const TermStore& store_;
  CheckLimits limits_;
  std::set<JudgementKey> on_path_;
  std::set<JudgementKey> seen_;
};

} // namespace

CheckResult typecheck(const TermStore& store, const Judgement& j, const CheckLimits& limits) {
  BoundednessReport b = boundedness(store, j.gtype);
  if (!b.bounded)
    throw UnboundedTypeError("cannot typecheck against an unbounded global type");
  return Checker(store, limits).check(j);
}

namespace {

class DerivationVerifier {
public:
  explicit DerivationVerifier(const TermStore& store) : store_(store) {}

  std::optional<std::string> walk(const Derivation& d) {
    JudgementKey key = key_of(store_, d.judgement);
    switch (d.rule) {
      case DerivRule::CoinductiveLoop: {
        if (!path_.count(key)) return err(d, "loop node does not match any ancestor judgement");
        if (!d.premises.empty()) return err(d, "loop node must not have premises");
        return std::nullopt;
      }
      case DerivRule::End: {
        if (!d.judgement.network.empty() || !d.judgement.queue.empty())
          return err(d, "End node with a live network or non-empty queue");
        if (!d.premises.empty()) return err(d, "End node must not have premises");
        return std::nullopt;
      }
      case DerivRule::Out: return walk_out(d, key);
      case DerivRule::In: return walk_in(d, key);
    }
    return err(d, "unknown rule");
  }

private:
  std::optional<std::string> walk_out(const Derivation& d, const JudgementKey& key) {
    const TypeNode& node = store_.type(d.judgement.gtype);
    if (node.kind != NodeKind::Output) return err(d, "Out node whose type is not an output");
    Participant p = node.player;
    auto proc_ref = d.judgement.network.process_of(p);
    if (!proc_ref) return err(d, "Out node whose player is not in the network");
    const ProcNode& proc = store_.proc(*proc_ref);
    if (proc.kind != NodeKind::Output || node.branches.size() != proc.branches.size())
      return err(d, "Out node with mismatched process");
    if (d.premises.size() != node.branches.size())
      return err(d, "Out node premise count differs from branch count");

    std::set<Participant> rest = players_of_network(d.judgement.network);
    rest.erase(p);
    path_.insert(key);
    for (std::size_t i = 0; i < node.branches.size(); ++i) {
      const TypeBranch& tb = node.branches[i];
      const ProcBranch& pb = proc.branches[i];
      if (tb.partner != pb.partner || tb.label != pb.label)
        return err(d, "Out node with mismatched branch sets");
      std::set<Participant> cont_players = players_of_type(store_, tb.cont);
      cont_players.erase(p);
      if (cont_players != rest) return err(d, "Out node violating the players condition");
      Judgement expect{tb.cont, d.judgement.network.with(store_, p, pb.cont),
                       d.judgement.queue.appended(Message{p, tb.label, tb.partner})};
      if (!equal_judgements(expect, d.premises[i].judgement))
        return err(d, "Out premise judgement is not the branch continuation");
      if (auto e = walk(d.premises[i])) return e;
    }
    path_.erase(key);
    return std::nullopt;
  }

  std::optional<std::string> walk_in(const Derivation& d, const JudgementKey& key) {
    const TypeNode& node = store_.type(d.judgement.gtype);
    if (node.kind != NodeKind::Input) return err(d, "In node whose type is not an input");
    Participant p = node.player;
    auto proc_ref = d.judgement.network.process_of(p);
    if (!proc_ref) return err(d, "In node whose player is not in the network");
    const ProcNode& proc = store_.proc(*proc_ref);
    if (proc.kind != NodeKind::Input) return err(d, "In node whose process is not an input");
    if (!d.in_evidence) return err(d, "In node without evidence record");

    InAnalysis a = analyze_in(node, proc, d.judgement.queue);
    if (!ready_sets_agree(a, d.judgement.queue))
      return err(d, "In node whose live sets do not actually agree");
    if (a.ready.empty()) return err(d, "In node with an empty live set");
    const InEvidence& ev = *d.in_evidence;
    if (ev.type_branch_msgs != a.type_msgs || ev.proc_branch_msgs != a.proc_msgs ||
        ev.ready != a.ready || ev.forbidden != a.forbidden)
      return err(d, "In node evidence does not recompute");
    if (d.premises.size() != a.ready.size())
      return err(d, "In node premise count differs from live branch count");

    std::set<Participant> rest = players_of_network(d.judgement.network);
    rest.erase(p);
    for (const TypeBranch& b : node.branches) {
      std::set<Participant> cont_players = players_of_type(store_, b.cont);
      cont_players.erase(p);
      if (cont_players != rest) return err(d, "In node violating the players condition");
    }

    path_.insert(key);
    for (std::size_t i = 0; i < a.ready.size(); ++i) {
      const Message& m = a.ready[i];
      const TypeBranch* tb = find_branch(node.branches, m.sender, m.label);
      const ProcBranch* pb = find_branch(proc.branches, m.sender, m.label);
      if (!tb || !pb) return err(d, "In node live message without matching branches");
      if (!inactive(store_, tb->cont, a.forbidden))
        return err(d, "In node violating the inactivity condition");
      Judgement expect{tb->cont, d.judgement.network.with(store_, p, pb->cont),
                       d.judgement.queue.consumed(m)};
      if (!equal_judgements(expect, d.premises[i].judgement))
        return err(d, "In premise judgement is not the live continuation");
      if (auto e = walk(d.premises[i])) return e;
    }
    path_.erase(key);
    return std::nullopt;
  }

  template <typename Branch>
  static const Branch* find_branch(const std::vector<Branch>& bs, Participant partner,
                                   Label label) {
    for (const Branch& b : bs)
      if (b.partner == partner && b.label == label) return &b;
    return nullptr;
  }

  bool equal_judgements(const Judgement& a, const Judgement& b) const {
    return key_of(store_, a) == key_of(store_, b);
  }

  std::optional<std::string> err(const Derivation& d, std::string_view what) const {
    std::ostringstream os;
    os << to_string(d.rule) << " node: " << what;
    return os.str();
  }

  const TermStore& store_;
  std::set<JudgementKey> path_;
};

nlohmann::json judgement_to_json(const TermStore& store, const Judgement& j) {
  nlohmann::json net = nlohmann::json::object();
  for (const auto& [p, ref] : j.network.members())
    net[std::string(p.str())] = pretty_proc(store, ref);
  return {{"gtype", pretty_type(store, j.gtype)},
          {"network", std::move(net)},
          {"queue", pretty_queue(j.queue)}};
}

nlohmann::json messages_to_json(const std::vector<Message>& ms) {
  nlohmann::json out = nlohmann::json::array();
  for (const Message& m : ms) out.push_back(pretty_message(m));
  return out;
}

} // namespace

std::optional<std::string> verify_derivation(const TermStore& store, const Derivation& d) {
  return DerivationVerifier(store).walk(d);
}

nlohmann::json derivation_to_json(const TermStore& store, const Derivation& d) {
  nlohmann::json out;
  out["rule"] = std::string(to_string(d.rule));
  out["judgement"] = judgement_to_json(store, d.judgement);
  if (d.in_evidence) {
    const InEvidence& ev = *d.in_evidence;
    out["side"] = {{"type_branches", messages_to_json(ev.type_branch_msgs)},
                   {"process_branches", messages_to_json(ev.proc_branch_msgs)},
                   {"ready", messages_to_json(ev.ready)},
                   {"forbidden", messages_to_json(
                                     std::vector<Message>(ev.forbidden.begin(), ev.forbidden.end()))}};
  }
  nlohmann::json prem = nlohmann::json::array();
  for (const Derivation& p : d.premises) prem.push_back(derivation_to_json(store, p));
  out["premises"] = std::move(prem);
  return out;
}

nlohmann::json failure_to_json(const TermStore& store, const TypeFailure& f) {
  return {{"judgement", judgement_to_json(store, f.judgement)},
          {"reason", std::string(to_string(f.reason))},
          {"detail", f.detail}};
}

} // namespace sw
