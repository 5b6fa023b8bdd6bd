#include "sessionweave/printer.hpp"

#include <map>
#include <set>
#include <sstream>

namespace sw {

namespace {

// Refs that a depth-first unfolding re-enters; exactly these need named
// equations when printing.
template <typename Ref, typename Children>
std::set<Ref> cycle_refs(Ref root, Children children) {
  std::set<Ref> cyclic, done;
  std::set<Ref> path;
  auto visit = [&](auto&& self, Ref r) -> void {
    if (path.count(r)) {
      cyclic.insert(r);
      return;
    }
    if (done.count(r)) return;
    path.insert(r);
    for (Ref c : children(r)) self(self, c);
    path.erase(r);
    done.insert(r);
  };
  visit(visit, root);
  return cyclic;
}

class ProcPrinter {
public:
  ProcPrinter(const TermStore& store, const std::set<std::string>& reserved)
      : store_(store), reserved_(reserved) {}

  // Returns the root expression; equations for cyclic refs land in defs().
  std::string print(ProcRef root) {
    root = store_.resolve(root);
    auto kids = [&](ProcRef r) {
      std::vector<ProcRef> cs;
      for (const ProcBranch& b : store_.proc(r).branches) cs.push_back(store_.resolve(b.cont));
      return cs;
    };
    for (ProcRef r : cycle_refs(root, kids)) names_[r] = "";
    assign_names(root);
    for (auto& [r, name] : names_) defs_[name] = expr(r, true);
    return names_.count(root) ? names_[root] : expr(root, true);
  }

  const std::map<std::string, std::string>& defs() const { return defs_; }

private:
  void assign_names(ProcRef r) {
    if (auto it = names_.find(r); it != names_.end() && it->second.empty())
      it->second = fresh_name();
    std::set<ProcRef> seen;
    walk_assign(r, seen);
  }

  void walk_assign(ProcRef r, std::set<ProcRef>& seen) {
    if (!seen.insert(r).second) return;
    if (auto it = names_.find(r); it != names_.end() && it->second.empty())
      it->second = fresh_name();
    for (const ProcBranch& b : store_.proc(r).branches)
      walk_assign(store_.resolve(b.cont), seen);
  }

  std::string fresh_name() {
    for (;;) {
      std::string n = "X" + std::to_string(++counter_);
      if (!reserved_.count(n)) return n;
    }
  }

  // at_def: printing the body of an equation (do not collapse to the name).
  std::string expr(ProcRef r, bool at_def) {
    r = store_.resolve(r);
    if (!at_def) {
      if (auto it = names_.find(r); it != names_.end()) return it->second;
    }
    const ProcNode& n = store_.proc(r);
    if (n.kind == NodeKind::End) return "end";
    const char* op = n.kind == NodeKind::Output ? "!" : "?";
    const char* sep = n.kind == NodeKind::Output ? " (+) " : " + ";
    std::ostringstream os;
    if (n.branches.size() > 1) os << "(";
    bool first = true;
    for (const ProcBranch& b : n.branches) {
      if (!first) os << sep;
      first = false;
      os << b.partner.str() << op << b.label.str() << "; " << expr(b.cont, false);
    }
    if (n.branches.size() > 1) os << ")";
    return os.str();
  }

  const TermStore& store_;
  const std::set<std::string>& reserved_;
  std::map<ProcRef, std::string> names_;
  std::map<std::string, std::string> defs_;
  int counter_ = 0;
};

class TypePrinter {
public:
  explicit TypePrinter(const TermStore& store) : store_(store) {}

  std::string print(TypeRef root) {
    root = store_.resolve(root);
    auto kids = [&](TypeRef r) {
      std::vector<TypeRef> cs;
      for (const TypeBranch& b : store_.type(r).branches) cs.push_back(store_.resolve(b.cont));
      return cs;
    };
    for (TypeRef r : cycle_refs(root, kids)) names_[r] = "";
    std::set<TypeRef> seen;
    walk_assign(root, seen);
    for (auto& [r, name] : names_) defs_[name] = expr(r, true);
    return names_.count(root) ? names_[root] : expr(root, true);
  }

  const std::map<std::string, std::string>& defs() const { return defs_; }

private:
  void walk_assign(TypeRef r, std::set<TypeRef>& seen) {
    if (!seen.insert(r).second) return;
    if (auto it = names_.find(r); it != names_.end() && it->second.empty())
      it->second = "T" + std::to_string(++counter_);
    for (const TypeBranch& b : store_.type(r).branches)
      walk_assign(store_.resolve(b.cont), seen);
  }

  std::string expr(TypeRef r, bool at_def) {
    r = store_.resolve(r);
    if (!at_def) {
      if (auto it = names_.find(r); it != names_.end()) return it->second;
    }
    const TypeNode& n = store_.type(r);
    if (n.kind == NodeKind::End) return "End";
    const char* op = n.kind == NodeKind::Output ? "!" : "?";
    std::ostringstream os;
    os << n.player.str() << op;
    if (n.branches.size() == 1) {
      const TypeBranch& b = n.branches.front();
      os << b.partner.str() << "." << b.label.str() << "; " << expr(b.cont, false);
    } else {
      os << "{";
      bool first = true;
      for (const TypeBranch& b : n.branches) {
        if (!first) os << ", ";
        first = false;
        os << b.partner.str() << "." << b.label.str() << "; " << expr(b.cont, false);
      }
      os << "}";
    }
    return os.str();
  }

  const TermStore& store_;
  std::map<TypeRef, std::string> names_;
  std::map<std::string, std::string> defs_;
  int counter_ = 0;
};

std::string with_defs(const std::map<std::string, std::string>& defs, std::string root) {
  if (defs.empty()) return root;
  std::ostringstream os;
  for (const auto& [name, body] : defs) os << "def " << name << " := " << body << "\n";
  os << root;
  return os.str();
}

} // namespace

std::string pretty_proc(const TermStore& store, ProcRef p) {
  std::set<std::string> reserved;
  ProcPrinter pr(store, reserved);
  std::string root = pr.print(p);
  return with_defs(pr.defs(), root);
}

std::string pretty_type(const TermStore& store, TypeRef g) {
  TypePrinter pr(store);
  std::string root = pr.print(g);
  return with_defs(pr.defs(), root);
}

std::string pretty_message(const Message& m) {
  std::ostringstream os;
  os << m.sender.str() << "->" << m.receiver.str() << ":" << m.label.str();
  return os.str();
}

std::string pretty_queue(const Queue& q) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const Message& m : q.messages()) {
    if (!first) os << ", ";
    first = false;
    os << pretty_message(m);
  }
  os << "]";
  return os.str();
}

std::string pretty_comm(const Communication& c) {
  std::ostringstream os;
  os << c.player.str() << (c.kind == CommKind::Output ? "!" : "?") << c.partner.str() << "."
     << c.label.str();
  return os.str();
}

std::string pretty_trace(const Trace& t) {
  std::ostringstream os;
  bool first = true;
  for (const Communication& c : t) {
    if (!first) os << " . ";
    first = false;
    os << pretty_comm(c);
  }
  return os.str();
}

std::string pretty_session(const TermStore& store, const Session& s) {
  std::set<std::string> reserved;
  for (const auto& [p, ref] : s.network.members()) reserved.insert(std::string(p.str()));

  ProcPrinter pr(store, reserved);
  std::map<Participant, std::string> entries;
  for (const auto& [p, ref] : s.network.members()) entries[p] = pr.print(ref);

  std::ostringstream os;
  for (const auto& [name, body] : pr.defs()) os << "def " << name << " := " << body << "\n";
  for (const auto& [p, body] : entries) os << p.str() << " := " << body << "\n";
  os << "queue " << pretty_queue(s.queue);
  return os.str();
}

} // namespace sw
