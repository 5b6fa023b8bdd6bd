#include "sessionweave/infer.hpp"

#include "sessionweave/type_lts.hpp"

#include <map>
#include <memory>
#include <set>

namespace sw {

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Typable: return "typable";
    case SearchStatus::Untypable: return "untypable";
    case SearchStatus::BoundExhausted: return "bound-exhausted";
  }
  return "?";
}

namespace {

using SessionKey =
    std::pair<std::vector<std::pair<Participant, ProcRef>>, std::vector<Message>>;

SessionKey key_of(const Session& s) {
  std::vector<std::pair<Participant, ProcRef>> net(s.network.members().begin(),
                                                   s.network.members().end());
  return {std::move(net), s.queue.messages()};
}

// Candidate type skeleton. A back reference points `levels_up` spine levels
// above the node that carries it, so subtrees whose references stay inside
// them can be shared and reused under any path.
struct Cand {
  enum class K { End, Node, BackRef } k = K::End;
  NodeKind kind = NodeKind::End;
  Participant player;
  std::size_t levels_up = 0; // BackRef
  std::vector<std::tuple<Participant, Label, std::shared_ptr<Cand>>> branches;
};

using CandPtr = std::shared_ptr<Cand>;

constexpr std::size_t kNoTarget = static_cast<std::size_t>(-1);

struct CandList {
  std::vector<CandPtr> cands;
  std::size_t min_target = kNoTarget; // smallest absolute path index referenced
};

CandPtr cand_end() {
  auto c = std::make_shared<Cand>();
  c->k = Cand::K::End;
  return c;
}

class Enumerator {
public:
  Enumerator(const TermStore& store, const SearchLimits& limits)
      : store_(store), limits_(limits) {}

  CandList enumerate(const Session& s) {
    SessionKey key = key_of(s);
    for (std::size_t i = path_.size(); i-- > 0;) {
      if (path_[i] == key) {
        auto c = std::make_shared<Cand>();
        c->k = Cand::K::BackRef;
        c->levels_up = path_.size() - i;
        return {{std::move(c)}, i};
      }
    }
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    if (++expansions_ > limits_.max_expansions || s.queue.size() > limits_.max_queue) {
      hit_bound_ = true;
      return {};
    }

    std::size_t depth = path_.size();
    path_.push_back(std::move(key));
    CandList out;

    if (s.network.empty() && s.queue.empty()) out.cands.push_back(cand_end());

    for (const auto& [p, ref] : s.network.members()) {
      const ProcNode& node = store_.proc(ref);
      if (node.kind == NodeKind::Output)
        emit_output_cands(s, p, node, out);
      else
        emit_input_cands(s, p, node, out);
      if (out.cands.size() > limits_.max_alternatives) {
        hit_bound_ = true;
        out.cands.resize(limits_.max_alternatives);
        break;
      }
    }

    path_.pop_back();
    // Lists that never reach above this judgement are position-independent.
    if (!hit_bound_ && out.min_target >= depth) memo_.emplace(key_of(s), out);
    return out;
  }

  bool hit_bound() const { return hit_bound_; }
  std::size_t expansions() const { return expansions_; }

private:
  void combine(const std::vector<CandList>& per_branch,
               const std::vector<std::pair<Participant, Label>>& sigs, NodeKind kind,
               Participant player, CandList& out) {
    for (const CandList& list : per_branch)
      out.min_target = std::min(out.min_target, list.min_target);
    std::vector<std::size_t> pick(per_branch.size(), 0);
    for (;;) {
      auto node = std::make_shared<Cand>();
      node->k = Cand::K::Node;
      node->kind = kind;
      node->player = player;
      for (std::size_t i = 0; i < per_branch.size(); ++i)
        node->branches.emplace_back(sigs[i].first, sigs[i].second,
                                    per_branch[i].cands[pick[i]]);
      out.cands.push_back(std::move(node));
      if (out.cands.size() > limits_.max_alternatives) {
        hit_bound_ = true;
        return;
      }
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == per_branch[i].cands.size()) pick[i++] = 0;
      if (i == pick.size()) return;
    }
  }

  void emit_output_cands(const Session& s, Participant p, const ProcNode& node,
                         CandList& out) {
    std::vector<CandList> per_branch;
    std::vector<std::pair<Participant, Label>> sigs;
    for (const ProcBranch& b : node.branches) {
      Session next{s.network.with(store_, p, b.cont),
                   s.queue.appended(Message{p, b.label, b.partner})};
      CandList cands = enumerate(next);
      if (cands.cands.empty()) return;
      per_branch.push_back(std::move(cands));
      sigs.emplace_back(b.partner, b.label);
    }
    combine(per_branch, sigs, NodeKind::Output, p, out);
  }

  void emit_input_cands(const Session& s, Participant p, const ProcNode& node,
                        CandList& out) {
    std::vector<CandList> per_branch;
    std::vector<std::pair<Participant, Label>> sigs;
    for (const ProcBranch& b : node.branches) {
      Message m{b.partner, b.label, p};
      if (!s.queue.ready(m)) continue; // dead branch: not part of the minimal type
      Session next{s.network.with(store_, p, b.cont), s.queue.consumed(m)};
      CandList cands = enumerate(next);
      if (cands.cands.empty()) return;
      per_branch.push_back(std::move(cands));
      sigs.emplace_back(b.partner, b.label);
    }
    if (per_branch.empty()) return; // no live branch: rule not applicable
    combine(per_branch, sigs, NodeKind::Input, p, out);
  }

  const TermStore& store_;
  const SearchLimits& limits_;
  std::vector<SessionKey> path_;
  std::map<SessionKey, CandList> memo_;
  std::size_t expansions_ = 0;
  bool hit_bound_ = false;
};

// Turns a candidate skeleton into store nodes. Shared subtrees build once;
// a back reference resolves against the spine of the current walk and turns
// its target into a declared placeholder defined when its branches are done.
class Materializer {
public:
  explicit Materializer(TermStore& store) : store_(store) {}

  TypeRef run(const CandPtr& root) {
    TypeRef ref = build(root.get());
    store_.merge_duplicates();
    return store_.resolve(ref);
  }

private:
  TypeRef placeholder(const Cand* target) {
    auto it = placeholders_.find(target);
    if (it == placeholders_.end())
      it = placeholders_.emplace(target, store_.declare_type()).first;
    return it->second;
  }

  TypeRef build(const Cand* c) {
    switch (c->k) {
      case Cand::K::End: return store_.type_end();
      case Cand::K::BackRef: return placeholder(spine_.at(spine_.size() - c->levels_up));
      case Cand::K::Node: break;
    }
    if (auto done = built_.find(c); done != built_.end()) return done->second;
    spine_.push_back(c);
    std::vector<TypeBranch> branches;
    for (const auto& [p, l, child] : c->branches) branches.push_back({p, l, build(child.get())});
    spine_.pop_back();
    TypeRef ref;
    if (auto it = placeholders_.find(c); it != placeholders_.end()) {
      store_.define_type(it->second, c->player, c->kind, std::move(branches));
      ref = it->second;
    } else {
      ref = c->kind == NodeKind::Output ? store_.mk_type_output(c->player, std::move(branches))
                                        : store_.mk_type_input(c->player, std::move(branches));
    }
    built_.emplace(c, ref);
    return ref;
  }

  TermStore& store_;
  std::vector<const Cand*> spine_;
  std::map<const Cand*, TypeRef> placeholders_;
  std::map<const Cand*, TypeRef> built_;
};

} // namespace

SearchResult infer_type(TermStore& store, const Session& s, const SearchLimits& limits) {
  SearchResult result;
  result.limits = limits;

  Enumerator enumerator(store, limits);
  CandList cands = enumerator.enumerate(s);
  result.expansions = enumerator.expansions();

  std::set<TypeRef> tried;
  for (const CandPtr& cand : cands.cands) {
    if (result.candidates_checked >= limits.max_candidates) {
      result.status = SearchStatus::BoundExhausted;
      return result;
    }
    TypeRef g = Materializer(store).run(cand);
    if (!tried.insert(g).second) continue;
    ++result.candidates_checked;
    try {
      CheckResult check = typecheck(store, Judgement{g, s.network, s.queue}, limits.check);
      if (typed(check)) {
        result.status = SearchStatus::Typable;
        result.witness = g;
        result.derivation = std::get<Derivation>(std::move(check));
        return result;
      }
    } catch (const UnboundedTypeError&) {
      // an unbounded candidate is no witness; keep looking
    }
  }

  result.status = enumerator.hit_bound() ? SearchStatus::BoundExhausted : SearchStatus::Untypable;
  return result;
}

SearchResult check_untypable_exhaustive(TermStore& store, const Session& s,
                                        const SearchLimits& limits) {
  return infer_type(store, s, limits);
}

} // namespace sw
