#pragma once

#include "sessionweave/comm.hpp"
#include "sessionweave/queue.hpp"
#include "sessionweave/terms.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace sw {

class UnboundedTypeError : public std::runtime_error {
public:
  explicit UnboundedTypeError(const std::string& what) : std::runtime_error(what) {}
};

// Depth of a player in a global type: the supremum, over all paths of the
// type, of the first position where the participant is the player.
// Infinity is its own state, never a sentinel integer.
class DepthValue {
public:
  static DepthValue finite(std::uint64_t n) { return DepthValue(n, false); }
  static DepthValue infinity() { return DepthValue(0, true); }

  bool is_infinite() const { return infinite_; }
  std::uint64_t value() const { return n_; } // meaningful only when finite

  friend bool operator==(const DepthValue& a, const DepthValue& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.n_ == b.n_);
  }

private:
  DepthValue(std::uint64_t n, bool inf) : n_(n), infinite_(inf) {}
  std::uint64_t n_;
  bool infinite_;
};

std::set<Participant> players_of_type(const TermStore& store, TypeRef g);

DepthValue depth(const TermStore& store, TypeRef g, Participant p);

struct BoundednessWitness {
  TypeRef subterm;
  Participant participant; // has infinite depth at that subterm
};

struct BoundednessReport {
  bool bounded = true;
  std::vector<BoundednessWitness> witnesses;
};

BoundednessReport boundedness(const TermStore& store, TypeRef g);

// True iff no output reachable in g emits a message in m.
bool inactive(const TermStore& store, TypeRef g, const MessageSet& m);

// All prefixes of paths of g up to length n (always contains the empty
// trace). Test oracle for depth; exponential in n, keep n small.
std::set<Trace> paths_prefixes(const TermStore& store, TypeRef g, std::size_t n);

} // namespace sw
