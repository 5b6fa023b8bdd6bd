#include "sessionweave/terms.hpp"

#include <algorithm>

namespace sw {

namespace {

template <typename Branch>
void sort_and_check_distinct(std::vector<Branch>& branches, const char* what) {
  std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) {
    if (a.partner != b.partner) return a.partner < b.partner;
    return a.label < b.label;
  });
  for (std::size_t i = 1; i < branches.size(); ++i) {
    if (branches[i].partner == branches[i - 1].partner &&
        branches[i].label == branches[i - 1].label) {
      throw TermError(std::string(what) + ": duplicate branch " +
                      std::string(branches[i].partner.str()) + "." +
                      std::string(branches[i].label.str()));
    }
  }
}

} // namespace

void TermStore::check_proc_branches(NodeKind kind, std::vector<ProcBranch>& branches) {
  if (kind == NodeKind::End) {
    if (!branches.empty()) throw TermError("terminated process takes no branches");
    return;
  }
  if (branches.empty()) throw TermError("choice needs at least one branch");
  sort_and_check_distinct(branches, "process choice");
}

void TermStore::check_type_branches(Participant player, NodeKind kind,
                                    std::vector<TypeBranch>& branches) {
  if (kind == NodeKind::End) {
    if (!branches.empty()) throw TermError("End takes no branches");
    return;
  }
  if (branches.empty()) throw TermError("type choice needs at least one branch");
  for (const TypeBranch& b : branches) {
    if (b.partner == player)
      throw TermError("global type player " + std::string(player.str()) +
                      " cannot communicate with itself");
  }
  sort_and_check_distinct(branches, "type choice");
}

TermStore::TermStore() {
  procs_.push_back({ProcNode{NodeKind::End, {}}, true});
  proc_parent_.push_back(0);
  types_.push_back({TypeNode{NodeKind::End, Participant(), {}}, true});
  type_parent_.push_back(0);
  rebuild_cons_maps();
}

ProcRef TermStore::declare_proc() {
  procs_.push_back({});
  proc_parent_.push_back(static_cast<std::uint32_t>(procs_.size() - 1));
  return ProcRef{static_cast<std::uint32_t>(procs_.size() - 1)};
}

TypeRef TermStore::declare_type() {
  types_.push_back({});
  type_parent_.push_back(static_cast<std::uint32_t>(types_.size() - 1));
  return TypeRef{static_cast<std::uint32_t>(types_.size() - 1)};
}

void TermStore::define_proc(ProcRef ref, NodeKind kind, std::vector<ProcBranch> branches) {
  if (!ref.valid() || ref.idx >= procs_.size()) throw TermError("bad process ref");
  if (procs_[ref.idx].defined) throw TermError("process ref defined twice");
  check_proc_branches(kind, branches);
  procs_[ref.idx].node = ProcNode{kind, std::move(branches)};
  procs_[ref.idx].defined = true;
}

void TermStore::define_type(TypeRef ref, Participant player, NodeKind kind,
                            std::vector<TypeBranch> branches) {
  if (!ref.valid() || ref.idx >= types_.size()) throw TermError("bad type ref");
  if (types_[ref.idx].defined) throw TermError("type ref defined twice");
  check_type_branches(player, kind, branches);
  types_[ref.idx].node = TypeNode{kind, player, std::move(branches)};
  types_[ref.idx].defined = true;
}

bool TermStore::proc_defined(ProcRef ref) const {
  return ref.valid() && ref.idx < procs_.size() && procs_[find_proc(ref.idx)].defined;
}

bool TermStore::type_defined(TypeRef ref) const {
  return ref.valid() && ref.idx < types_.size() && types_[find_type(ref.idx)].defined;
}

std::uint32_t TermStore::find_proc(std::uint32_t i) const {
  while (proc_parent_[i] != i) {
    proc_parent_[i] = proc_parent_[proc_parent_[i]];
    i = proc_parent_[i];
  }
  return i;
}

std::uint32_t TermStore::find_type(std::uint32_t i) const {
  while (type_parent_[i] != i) {
    type_parent_[i] = type_parent_[type_parent_[i]];
    i = type_parent_[i];
  }
  return i;
}

ProcRef TermStore::resolve(ProcRef ref) const {
  if (!ref.valid() || ref.idx >= procs_.size()) throw TermError("bad process ref");
  return ProcRef{find_proc(ref.idx)};
}

TypeRef TermStore::resolve(TypeRef ref) const {
  if (!ref.valid() || ref.idx >= types_.size()) throw TermError("bad type ref");
  return TypeRef{find_type(ref.idx)};
}

const ProcNode& TermStore::proc(ProcRef ref) const {
  ProcRef r = resolve(ref);
  const ProcEntry& e = procs_[r.idx];
  if (!e.defined) throw TermError("dangling process reference");
  return e.node;
}

const TypeNode& TermStore::type(TypeRef ref) const {
  TypeRef r = resolve(ref);
  const TypeEntry& e = types_[r.idx];
  if (!e.defined) throw TermError("dangling type reference");
  return e.node;
}

TermStore::ProcKey TermStore::proc_key(std::uint32_t i) const {
  const ProcNode& n = procs_[i].node;
  std::vector<std::tuple<Participant, Label, std::uint32_t>> bs;
  bs.reserve(n.branches.size());
  for (const ProcBranch& b : n.branches) bs.emplace_back(b.partner, b.label, find_proc(b.cont.idx));
  return {n.kind, std::move(bs)};
}

TermStore::TypeKey TermStore::type_key(std::uint32_t i) const {
  const TypeNode& n = types_[i].node;
  std::vector<std::tuple<Participant, Label, std::uint32_t>> bs;
  bs.reserve(n.branches.size());
  for (const TypeBranch& b : n.branches) bs.emplace_back(b.partner, b.label, find_type(b.cont.idx));
  return {n.kind, n.player, std::move(bs)};
}

ProcRef TermStore::mk_proc_output(std::vector<ProcBranch> branches) {
  check_proc_branches(NodeKind::Output, branches);
  for (ProcBranch& b : branches) b.cont = resolve(b.cont);
  procs_.push_back({ProcNode{NodeKind::Output, std::move(branches)}, true});
  proc_parent_.push_back(static_cast<std::uint32_t>(procs_.size() - 1));
  std::uint32_t i = static_cast<std::uint32_t>(procs_.size() - 1);
  auto [it, fresh] = proc_cons_.try_emplace(proc_key(i), i);
  if (!fresh) {
    procs_.pop_back();
    proc_parent_.pop_back();
    return ProcRef{it->second};
  }
  return ProcRef{i};
}

ProcRef TermStore::mk_proc_input(std::vector<ProcBranch> branches) {
  check_proc_branches(NodeKind::Input, branches);
  for (ProcBranch& b : branches) b.cont = resolve(b.cont);
  procs_.push_back({ProcNode{NodeKind::Input, std::move(branches)}, true});
  proc_parent_.push_back(static_cast<std::uint32_t>(procs_.size() - 1));
  std::uint32_t i = static_cast<std::uint32_t>(procs_.size() - 1);
  auto [it, fresh] = proc_cons_.try_emplace(proc_key(i), i);
  if (!fresh) {
    procs_.pop_back();
    proc_parent_.pop_back();
    return ProcRef{it->second};
  }
  return ProcRef{i};
}

TypeRef TermStore::mk_type_output(Participant player, std::vector<TypeBranch> branches) {
  check_type_branches(player, NodeKind::Output, branches);
  for (TypeBranch& b : branches) b.cont = resolve(b.cont);
  types_.push_back({TypeNode{NodeKind::Output, player, std::move(branches)}, true});
  type_parent_.push_back(static_cast<std::uint32_t>(types_.size() - 1));
  std::uint32_t i = static_cast<std::uint32_t>(types_.size() - 1);
  auto [it, fresh] = type_cons_.try_emplace(type_key(i), i);
  if (!fresh) {
    types_.pop_back();
    type_parent_.pop_back();
    return TypeRef{it->second};
  }
  return TypeRef{i};
}

TypeRef TermStore::mk_type_input(Participant player, std::vector<TypeBranch> branches) {
  check_type_branches(player, NodeKind::Input, branches);
  for (TypeBranch& b : branches) b.cont = resolve(b.cont);
  types_.push_back({TypeNode{NodeKind::Input, player, std::move(branches)}, true});
  type_parent_.push_back(static_cast<std::uint32_t>(types_.size() - 1));
  std::uint32_t i = static_cast<std::uint32_t>(types_.size() - 1);
  auto [it, fresh] = type_cons_.try_emplace(type_key(i), i);
  if (!fresh) {
    types_.pop_back();
    type_parent_.pop_back();
    return TypeRef{it->second};
  }
  return TypeRef{i};
}

namespace {

// Partition refinement to the coarsest partition where merged nodes have the
// same shape and partition-equal children. Every class keeps its smallest
// index as representative, so refs that were canonical stay canonical when
// later definitions join the store.
template <typename Entry, typename Shape, typename Children>
std::vector<std::uint32_t> quotient(const std::vector<Entry>& entries, Shape shape,
                                    Children children) {
  std::vector<std::uint32_t> block(entries.size(), 0);
  {
    std::map<decltype(shape(0)), std::uint32_t> ids;
    for (std::uint32_t i = 0; i < entries.size(); ++i)
      block[i] = ids.try_emplace(shape(i), static_cast<std::uint32_t>(ids.size())).first->second;
  }
  for (;;) {
    std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(entries.size(), 0);
    for (std::uint32_t i = 0; i < entries.size(); ++i) {
      std::vector<std::uint32_t> kid_blocks;
      for (std::uint32_t c : children(i)) kid_blocks.push_back(block[c]);
      next[i] = ids.try_emplace({block[i], std::move(kid_blocks)},
                                static_cast<std::uint32_t>(ids.size()))
                    .first->second;
    }
    if (next == block) break;
    block = std::move(next);
  }
  return block;
}

} // namespace

void TermStore::merge_duplicates() {
  {
    auto shape = [&](std::uint32_t i) {
      const ProcEntry& e = procs_[i];
      std::vector<std::pair<Participant, Label>> sig;
      for (const ProcBranch& b : e.node.branches) sig.emplace_back(b.partner, b.label);
      return std::tuple(e.defined, e.node.kind, std::move(sig));
    };
    auto children = [&](std::uint32_t i) {
      std::vector<std::uint32_t> out;
      if (!procs_[i].defined) return out;
      for (const ProcBranch& b : procs_[i].node.branches) out.push_back(find_proc(b.cont.idx));
      return out;
    };
    std::vector<std::uint32_t> block = quotient(procs_, shape, children);
    std::map<std::uint32_t, std::uint32_t> repr;
    for (std::uint32_t i = 0; i < procs_.size(); ++i) {
      if (!procs_[i].defined) continue;
      auto [it, fresh] = repr.try_emplace(block[find_proc(i)], find_proc(i));
      if (!fresh) {
        std::uint32_t a = find_proc(i), b = it->second;
        if (a != b) proc_parent_[std::max(a, b)] = std::min(a, b);
        it->second = std::min(a, b);
      }
    }
  }
  {
    auto shape = [&](std::uint32_t i) {
      const TypeEntry& e = types_[i];
      std::vector<std::pair<Participant, Label>> sig;
      for (const TypeBranch& b : e.node.branches) sig.emplace_back(b.partner, b.label);
      return std::tuple(e.defined, e.node.kind, e.node.player, std::move(sig));
    };
    auto children = [&](std::uint32_t i) {
      std::vector<std::uint32_t> out;
      if (!types_[i].defined) return out;
      for (const TypeBranch& b : types_[i].node.branches) out.push_back(find_type(b.cont.idx));
      return out;
    };
    std::vector<std::uint32_t> block = quotient(types_, shape, children);
    std::map<std::uint32_t, std::uint32_t> repr;
    for (std::uint32_t i = 0; i < types_.size(); ++i) {
      if (!types_[i].defined) continue;
      auto [it, fresh] = repr.try_emplace(block[find_type(i)], find_type(i));
      if (!fresh) {
        std::uint32_t a = find_type(i), b = it->second;
        if (a != b) type_parent_[std::max(a, b)] = std::min(a, b);
        it->second = std::min(a, b);
      }
    }
  }
  rebuild_cons_maps();
}

void TermStore::rebuild_cons_maps() {
  proc_cons_.clear();
  type_cons_.clear();
  for (std::uint32_t i = 0; i < procs_.size(); ++i)
    if (procs_[i].defined && find_proc(i) == i) proc_cons_.try_emplace(proc_key(i), i);
  for (std::uint32_t i = 0; i < types_.size(); ++i)
    if (types_[i].defined && find_type(i) == i) type_cons_.try_emplace(type_key(i), i);
}

std::vector<ProcRef> TermStore::proc_subterms(ProcRef root) const {
  std::set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{resolve(root).idx};
  while (!stack.empty()) {
    std::uint32_t i = stack.back();
    stack.pop_back();
    if (!seen.insert(i).second) continue;
    for (const ProcBranch& b : proc(ProcRef{i}).branches) stack.push_back(resolve(b.cont).idx);
  }
  std::vector<ProcRef> out;
  for (std::uint32_t i : seen) out.push_back(ProcRef{i});
  return out;
}

std::vector<TypeRef> TermStore::type_subterms(TypeRef root) const {
  std::set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{resolve(root).idx};
  while (!stack.empty()) {
    std::uint32_t i = stack.back();
    stack.pop_back();
    if (!seen.insert(i).second) continue;
    for (const TypeBranch& b : type(TypeRef{i}).branches) stack.push_back(resolve(b.cont).idx);
  }
  std::vector<TypeRef> out;
  for (std::uint32_t i : seen) out.push_back(TypeRef{i});
  return out;
}

} // namespace sw
