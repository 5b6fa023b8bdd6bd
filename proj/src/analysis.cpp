#include "sessionweave/analysis.hpp"

#include <map>

namespace sw {

std::set<Participant> players_of_type(const TermStore& store, TypeRef g) {
  std::set<Participant> out;
  for (TypeRef r : store.type_subterms(g)) {
    const TypeNode& n = store.type(r);
    if (n.kind != NodeKind::End) out.insert(n.player);
  }
  return out;
}

namespace {

Communication branch_comm(const TypeNode& n, const TypeBranch& b) {
  return n.kind == NodeKind::Output ? Communication::output(n.player, b.label, b.partner)
                                    : Communication::input(n.player, b.label, b.partner);
}

// Supremum over paths from `ref` of the first index with player p.
// `on_path` marks the current DFS stack: meeting a node again with p still
// unseen closes a p-free cycle, which pumps to a p-free infinite path.
// Reaching End with p unseen is a p-free maximal path. Both give infinity.
class DepthSearch {
public:
  DepthSearch(const TermStore& store, Participant p) : store_(store), p_(p) {}

  DepthValue run(TypeRef ref) { return visit(store_.resolve(ref)); }

private:
  DepthValue visit(TypeRef ref) {
    auto memo = done_.find(ref);
    if (memo != done_.end()) return memo->second;
    if (on_path_.count(ref)) return DepthValue::infinity();

    const TypeNode& n = store_.type(ref);
    if (n.kind == NodeKind::End) return DepthValue::infinity();
    if (n.player == p_) {
      done_.emplace(ref, DepthValue::finite(1));
      return DepthValue::finite(1);
    }

    on_path_.insert(ref);
    DepthValue worst = DepthValue::finite(0);
    for (const TypeBranch& b : n.branches) {
      DepthValue d = visit(store_.resolve(b.cont));
      if (d.is_infinite()) {
        worst = DepthValue::infinity();
        break;
      }
      if (d.value() > worst.value()) worst = d;
    }
    on_path_.erase(ref);

    DepthValue result =
        worst.is_infinite() ? DepthValue::infinity() : DepthValue::finite(1 + worst.value());
    done_.emplace(ref, result);
    return result;
  }

  const TermStore& store_;
  Participant p_;
  std::set<TypeRef> on_path_;
  std::map<TypeRef, DepthValue> done_;
};

} // namespace

DepthValue depth(const TermStore& store, TypeRef g, Participant p) {
  if (!players_of_type(store, g).count(p)) return DepthValue::finite(0);
  return DepthSearch(store, p).run(g);
}

BoundednessReport boundedness(const TermStore& store, TypeRef g) {
  BoundednessReport report;
  for (TypeRef sub : store.type_subterms(g)) {
    for (Participant p : players_of_type(store, sub)) {
      if (depth(store, sub, p).is_infinite()) {
        report.bounded = false;
        report.witnesses.push_back({sub, p});
      }
    }
  }
  return report;
}

bool inactive(const TermStore& store, TypeRef g, const MessageSet& m) {
  if (m.empty()) return true;
  std::set<TypeRef> seen;
  std::vector<TypeRef> stack{store.resolve(g)};
  while (!stack.empty()) {
    TypeRef r = stack.back();
    stack.pop_back();
    if (!seen.insert(r).second) continue;
    const TypeNode& n = store.type(r);
    if (n.kind == NodeKind::Output) {
      for (const TypeBranch& b : n.branches)
        if (m.count(Message{n.player, b.label, b.partner})) return false;
    }
    for (const TypeBranch& b : n.branches) stack.push_back(store.resolve(b.cont));
  }
  return true;
}

std::set<Trace> paths_prefixes(const TermStore& store, TypeRef g, std::size_t n) {
  std::set<Trace> out;
  Trace prefix;
  // Depth-first over the unfolding, cut at length n.
  struct Walker {
    const TermStore& store;
    std::size_t limit;
    std::set<Trace>& out;
    Trace& prefix;

    void walk(TypeRef ref) {
      out.insert(prefix);
      if (prefix.size() == limit) return;
      const TypeNode& node = store.type(ref);
      for (const TypeBranch& b : node.branches) {
        prefix.push_back(branch_comm(node, b));
        walk(store.resolve(b.cont));
        prefix.pop_back();
      }
    }
  };
  Walker{store, n, out, prefix}.walk(store.resolve(g));
  return out;
}

} // namespace sw
