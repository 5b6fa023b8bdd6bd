#pragma once

#include "sessionweave/analysis.hpp"
#include "sessionweave/session.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sw {

struct Judgement {
  TypeRef gtype;
  Network network;
  Queue queue;

  friend bool operator==(const Judgement& a, const Judgement& b) {
    return a.gtype == b.gtype && a.network == b.network && a.queue == b.queue;
  }
};

struct CheckLimits {
  std::size_t max_judgements = 10000;
  std::size_t max_queue = 64;
};

enum class DerivRule : unsigned char { End, Out, In, CoinductiveLoop };

enum class FailureReason : unsigned char {
  RootMismatch,
  BranchSetMismatch,
  PlayersCondition,
  EmptyReadySet,
  ReadySetMismatch,
  InactivityViolation,
  EndResidue,
  GrowthGuardExceeded,
};

std::string_view to_string(DerivRule r);
std::string_view to_string(FailureReason r);

// Bookkeeping of an In node, sufficient to re-verify its side conditions
// from the judgement alone.
struct InEvidence {
  std::vector<Message> type_branch_msgs; // messages of the type's branches
  std::vector<Message> proc_branch_msgs; // messages of the process's branches
  std::vector<Message> ready;            // the agreed live set, sorted
  MessageSet forbidden;                  // messages no live continuation may emit
};

struct Derivation {
  DerivRule rule = DerivRule::End;
  Judgement judgement;
  std::optional<InEvidence> in_evidence;
  std::vector<Derivation> premises; // one per branch (Out) / live branch (In)
};

struct TypeFailure {
  Judgement judgement; // innermost judgement at which checking failed
  FailureReason reason;
  std::string detail;
};

using CheckResult = std::variant<Derivation, TypeFailure>;

inline bool typed(const CheckResult& r) { return std::holds_alternative<Derivation>(r); }

// Checks the judgement against the typing rules, coinductively: a judgement
// repeating on the derivation path closes as a loop node. Guards bound the
// number of distinct judgements and the queue length; exceeding them rejects
// (GrowthGuardExceeded), never accepts. Errors with UnboundedTypeError if the
// global type is not bounded.
CheckResult typecheck(const TermStore& store, const Judgement& j,
                      const CheckLimits& limits = {});

// Walks a derivation re-deriving every side condition from the recorded
// judgements alone; returns an explanation for the first node that does not
// re-verify, or nullopt if the whole tree is sound.
std::optional<std::string> verify_derivation(const TermStore& store, const Derivation& d);

nlohmann::json derivation_to_json(const TermStore& store, const Derivation& d);
nlohmann::json failure_to_json(const TermStore& store, const TypeFailure& f);

} // namespace sw
