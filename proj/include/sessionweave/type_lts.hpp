#pragma once

#include "sessionweave/analysis.hpp"
#include "sessionweave/comm.hpp"
#include "sessionweave/queue.hpp"
#include "sessionweave/terms.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sw {

struct TypeConfig {
  TypeRef gtype;
  Queue queue;

  friend bool operator==(const TypeConfig& a, const TypeConfig& b) {
    return a.gtype == b.gtype && a.queue == b.queue;
  }
  friend std::strong_ordering operator<=>(const TypeConfig& a, const TypeConfig& b) {
    if (auto c = a.gtype <=> b.gtype; c != 0) return c;
    return a.queue <=> b.queue;
  }
};

enum class TypeRule : unsigned char { TopOut, TopIn, InsideOut, InsideIn };

struct TypeStep {
  Communication comm;
  TypeConfig target;
  TypeRule rule;
};

// Index set of the ready messages: those that sit earliest on their own
// (sender, receiver) channel in q.
std::vector<std::size_t> ready_set(const std::vector<Message>& candidates, const Queue& q);

// Optional instrumentation for the inside-rule recursion.
struct StepStats {
  std::size_t max_recursion_depth = 0;
};

// Complete enumeration of the type-configuration transitions, sorted by
// communication. Requires a bounded global type.
std::vector<TypeStep> type_steps(TermStore& store, const TypeConfig& c,
                                 StepStats* stats = nullptr);

// The unique step labelled beta, if one is derivable. Dead input branches
// of an inside step are replaced by the live branch with the smallest
// (sender, label) key, so the relation is deterministic per label.
std::optional<TypeStep> step_with(TermStore& store, const TypeConfig& c,
                                  const Communication& beta, StepStats* stats = nullptr);

} // namespace sw
