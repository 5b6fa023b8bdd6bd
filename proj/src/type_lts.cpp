#include "sessionweave/type_lts.hpp"

#include <algorithm>
#include <set>

namespace sw {

std::vector<std::size_t> ready_set(const std::vector<Message>& candidates, const Queue& q) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (q.ready(candidates[i])) out.push_back(i);
  return out;
}

namespace {

Message branch_message(const TypeNode& n, const TypeBranch& b) {
  // Output branch: player sends to partner. Input branch: partner sent to player.
  return n.kind == NodeKind::Output ? Message{n.player, b.label, b.partner}
                                    : Message{b.partner, b.label, n.player};
}

struct Derived {
  TypeRef gtype;
  Queue queue;
  TypeRule rule;
};

class StepEngine {
public:
  StepEngine(TermStore& store, StepStats* stats) : store_(store), stats_(stats) {}

  std::optional<Derived> derive(TypeRef g, const Queue& q, const Communication& beta,
                                std::size_t rec_depth) {
    if (stats_ && rec_depth > stats_->max_recursion_depth)
      stats_->max_recursion_depth = rec_depth;

    const TypeNode& node = store_.type(g);
    if (node.kind == NodeKind::End) return std::nullopt;

    if (node.player == beta.player) return top_step(g, node, q, beta);

    // Communications of other players happen inside the choice; they can
    // only be derived at all if that player occurs somewhere below.
    if (!players_of_type(store_, g).count(beta.player)) return std::nullopt;

    return node.kind == NodeKind::Output ? inside_output(node, q, beta, rec_depth)
                                         : inside_input(node, q, beta, rec_depth);
  }

private:
  std::optional<Derived> top_step(TypeRef, const TypeNode& node, const Queue& q,
                                  const Communication& beta) {
    if (node.kind == NodeKind::Output) {
      if (beta.kind != CommKind::Output) return std::nullopt;
      for (const TypeBranch& b : node.branches) {
        if (b.partner == beta.partner && b.label == beta.label) {
          return Derived{store_.resolve(b.cont),
                         q.appended(Message{node.player, b.label, b.partner}),
                         TypeRule::TopOut};
        }
      }
      return std::nullopt;
    }
    if (beta.kind != CommKind::Input) return std::nullopt;
    for (const TypeBranch& b : node.branches) {
      if (b.partner == beta.partner && b.label == beta.label) {
        Message m{b.partner, b.label, node.player};
        if (!q.ready(m)) return std::nullopt;
        return Derived{store_.resolve(b.cont), q.consumed(m), TypeRule::TopIn};
      }
    }
    return std::nullopt;
  }

  // Every branch must perform beta with its own pending message kept at the
  // tail of its channel, and all branches must agree on the residual queue.
  std::optional<Derived> inside_output(const TypeNode& node, const Queue& q,
                                       const Communication& beta, std::size_t rec_depth) {
    std::optional<Queue> residual;
    std::vector<TypeBranch> out_branches;
    out_branches.reserve(node.branches.size());
    for (const TypeBranch& b : node.branches) {
      Message pending{node.player, b.label, b.partner};
      auto premise = derive(store_.resolve(b.cont), q.appended(pending), beta, rec_depth + 1);
      if (!premise) return std::nullopt;
      auto tail = premise->queue.channel_tail(pending.sender, pending.receiver);
      if (!tail || !(*tail == pending)) return std::nullopt;
      Queue stripped = premise->queue.without_channel_tail(pending.sender, pending.receiver);
      if (residual && !(*residual == stripped)) return std::nullopt;
      residual = std::move(stripped);
      out_branches.push_back({b.partner, b.label, premise->gtype});
    }
    return Derived{store_.mk_type_output(node.player, std::move(out_branches)),
                   std::move(*residual), TypeRule::InsideOut};
  }

  std::optional<Derived> inside_input(const TypeNode& node, const Queue& q,
                                      const Communication& beta, std::size_t rec_depth) {
    std::vector<Message> msgs;
    msgs.reserve(node.branches.size());
    for (const TypeBranch& b : node.branches) msgs.push_back(branch_message(node, b));
    std::vector<std::size_t> live = ready_set(msgs, q);
    if (live.empty()) return std::nullopt;

    std::set<std::size_t> live_set(live.begin(), live.end());
    for (std::size_t i = 0; i < node.branches.size(); ++i) {
      if (live_set.count(i)) continue;
      // beta must not awaken a dead branch by enqueuing its message.
      Communication awaken = Communication::output(node.branches[i].partner,
                                                   node.branches[i].label, node.player);
      if (beta == awaken) return std::nullopt;
    }

    // Each live branch steps with its ready message set aside (as in the
    // typing rule for inputs), and the message returns to the head of its
    // channel afterwards; all branches must agree on the resulting queue.
    std::optional<Queue> residual;
    std::map<std::size_t, TypeRef> stepped;
    for (std::size_t i : live) {
      auto premise =
          derive(store_.resolve(node.branches[i].cont), q.consumed(msgs[i]), beta, rec_depth + 1);
      if (!premise) return std::nullopt;
      Queue restored = premise->queue.with_channel_head(msgs[i]);
      if (residual && !(*residual == restored)) return std::nullopt;
      residual = std::move(restored);
      stepped[i] = premise->gtype;
    }

    // Dead branches become the live branch with the smallest (sender, label)
    // key; branches are sorted, so that is the first live index.
    TypeRef dead_replacement = store_.resolve(node.branches[live.front()].cont);
    std::vector<TypeBranch> out_branches;
    out_branches.reserve(node.branches.size());
    for (std::size_t i = 0; i < node.branches.size(); ++i) {
      TypeRef cont = live_set.count(i) ? stepped[i] : dead_replacement;
      out_branches.push_back({node.branches[i].partner, node.branches[i].label, cont});
    }
    return Derived{store_.mk_type_input(node.player, std::move(out_branches)),
                   std::move(*residual), TypeRule::InsideIn};
  }

  TermStore& store_;
  StepStats* stats_;
};

void require_bounded(TermStore& store, TypeRef g) {
  BoundednessReport report = boundedness(store, g);
  if (!report.bounded) {
    const BoundednessWitness& w = report.witnesses.front();
    throw UnboundedTypeError("global type is unbounded: participant " +
                             std::string(w.participant.str()) +
                             " has infinite depth in a subterm");
  }
}

} // namespace

std::vector<TypeStep> type_steps(TermStore& store, const TypeConfig& c, StepStats* stats) {
  require_bounded(store, c.gtype);

  // Any derivable label is introduced by a top rule at some subterm, so the
  // top communications of all subterms form a complete candidate set.
  std::set<Communication> candidates;
  for (TypeRef sub : store.type_subterms(c.gtype)) {
    const TypeNode& n = store.type(sub);
    for (const TypeBranch& b : n.branches) {
      candidates.insert(n.kind == NodeKind::Output
                            ? Communication::output(n.player, b.label, b.partner)
                            : Communication::input(n.player, b.label, b.partner));
    }
  }

  std::vector<TypeStep> steps;
  StepEngine engine(store, stats);
  for (const Communication& beta : candidates) {
    if (auto d = engine.derive(store.resolve(c.gtype), c.queue, beta, 0))
      steps.push_back({beta, TypeConfig{d->gtype, std::move(d->queue)}, d->rule});
  }
  return steps;
}

std::optional<TypeStep> step_with(TermStore& store, const TypeConfig& c,
                                  const Communication& beta, StepStats* stats) {
  require_bounded(store, c.gtype);
  StepEngine engine(store, stats);
  if (auto d = engine.derive(store.resolve(c.gtype), c.queue, beta, 0))
    return TypeStep{beta, TypeConfig{d->gtype, std::move(d->queue)}, d->rule};
  return std::nullopt;
}

} // namespace sw
