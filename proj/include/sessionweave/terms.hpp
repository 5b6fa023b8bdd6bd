#pragma once

#include "sessionweave/symbols.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sw {

// Regular (possibly cyclic) process and global-type terms, stored as nodes
// in an arena. Cycles come from named equations: a placeholder ref is
// declared first and defined later, so mutually recursive systems build
// naturally. After all definitions are in, merge_duplicates() unifies
// definitionally identical nodes; from then on two refs denote the same
// term iff they resolve to the same index.

struct ProcRef {
  std::uint32_t idx = UINT32_MAX;
  bool valid() const { return idx != UINT32_MAX; }
  friend bool operator==(ProcRef a, ProcRef b) { return a.idx == b.idx; }
  friend auto operator<=>(ProcRef a, ProcRef b) { return a.idx <=> b.idx; }
};

struct TypeRef {
  std::uint32_t idx = UINT32_MAX;
  bool valid() const { return idx != UINT32_MAX; }
  friend bool operator==(TypeRef a, TypeRef b) { return a.idx == b.idx; }
  friend auto operator<=>(TypeRef a, TypeRef b) { return a.idx <=> b.idx; }
};

enum class NodeKind : unsigned char { End, Output, Input };

struct ProcBranch {
  Participant partner; // receiver of an output branch, sender of an input branch
  Label label;
  ProcRef cont;
};

struct TypeBranch {
  Participant partner;
  Label label;
  TypeRef cont;
};

struct ProcNode {
  NodeKind kind = NodeKind::End;
  std::vector<ProcBranch> branches; // sorted by (partner, label), pairwise distinct
};

struct TypeNode {
  NodeKind kind = NodeKind::End;
  Participant player;
  std::vector<TypeBranch> branches; // sorted by (partner, label), pairwise distinct
};

class TermError : public std::runtime_error {
public:
  explicit TermError(const std::string& what) : std::runtime_error(what) {}
};

class TermStore {
public:
  TermStore();

  ProcRef proc_end() const { return ProcRef{0}; }
  TypeRef type_end() const { return TypeRef{0}; }

  // Placeholders for named equations; must be defined before use.
  ProcRef declare_proc();
  TypeRef declare_type();
  void define_proc(ProcRef ref, NodeKind kind, std::vector<ProcBranch> branches);
  void define_type(TypeRef ref, Participant player, NodeKind kind,
                   std::vector<TypeBranch> branches);
  bool proc_defined(ProcRef ref) const;
  bool type_defined(TypeRef ref) const;

  // Hash-consing constructors; children must already exist.
  ProcRef mk_proc_output(std::vector<ProcBranch> branches);
  ProcRef mk_proc_input(std::vector<ProcBranch> branches);
  TypeRef mk_type_output(Participant player, std::vector<TypeBranch> branches);
  TypeRef mk_type_input(Participant player, std::vector<TypeBranch> branches);

  // Unifies definitionally identical nodes to fixpoint. Distinct cyclic
  // equations that merely unfold to the same tree stay distinct.
  void merge_duplicates();

  ProcRef resolve(ProcRef ref) const;
  TypeRef resolve(TypeRef ref) const;

  // Node views; error on undefined (dangling) refs.
  const ProcNode& proc(ProcRef ref) const;
  const TypeNode& type(TypeRef ref) const;

  // All distinct subterm refs reachable from root, root included, resolved,
  // in ascending index order.
  std::vector<ProcRef> proc_subterms(ProcRef root) const;
  std::vector<TypeRef> type_subterms(TypeRef root) const;

  std::size_t proc_count() const { return procs_.size(); }
  std::size_t type_count() const { return types_.size(); }

  // Validation helpers shared with the parser.
  static void check_proc_branches(NodeKind kind, std::vector<ProcBranch>& branches);
  static void check_type_branches(Participant player, NodeKind kind,
                                  std::vector<TypeBranch>& branches);

private:
  struct ProcEntry {
    ProcNode node;
    bool defined = false;
  };
  struct TypeEntry {
    TypeNode node;
    bool defined = false;
  };

  std::vector<ProcEntry> procs_;
  std::vector<TypeEntry> types_;
  mutable std::vector<std::uint32_t> proc_parent_; // union-find
  mutable std::vector<std::uint32_t> type_parent_;

  using ProcKey = std::pair<NodeKind, std::vector<std::tuple<Participant, Label, std::uint32_t>>>;
  using TypeKey =
      std::tuple<NodeKind, Participant, std::vector<std::tuple<Participant, Label, std::uint32_t>>>;
  std::map<ProcKey, std::uint32_t> proc_cons_;
  std::map<TypeKey, std::uint32_t> type_cons_;

  std::uint32_t find_proc(std::uint32_t i) const;
  std::uint32_t find_type(std::uint32_t i) const;
  ProcKey proc_key(std::uint32_t i) const;
  TypeKey type_key(std::uint32_t i) const;
  void rebuild_cons_maps();
};

} // namespace sw
