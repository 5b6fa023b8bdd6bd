#pragma once

#include "sessionweave/typecheck.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sw {

struct ExplorationBound {
  std::size_t max_depth = 8;
  std::size_t max_states = 20000;
  std::size_t max_queue = 64;
};

enum class Property : unsigned char { SubjectReduction, SessionFidelity, LockFreedom, Races };
enum class VerifyStatus : unsigned char { Pass, Fail, BoundExhausted };

std::string_view to_string(Property p);
std::string_view to_string(VerifyStatus s);

struct Counterexample {
  Trace trace;                        // replayable from the root session
  std::optional<Communication> beta;  // offending communication, if any
  std::string state;                  // pretty form of the offending state
  std::string clause;                 // violated condition
};

struct VerificationReport {
  Property property = Property::SubjectReduction;
  VerifyStatus status = VerifyStatus::Pass;
  ExplorationBound bound;
  std::size_t states = 0;
  std::optional<Counterexample> counterexample;
};

// Bounded exploration of a typed session. Both directions walk the same
// jointly reachable (session, type configuration) pairs:
//  - subject reduction: every session step is matched by a type step with the
//    same label and queue, and the successor judgement typechecks;
//  - session fidelity: every type step is matched by a session step likewise.
VerificationReport check_subject_reduction(TermStore& store, const Judgement& j,
                                           const ExplorationBound& b = {},
                                           const CheckLimits& limits = {});
VerificationReport check_session_fidelity(TermStore& store, const Judgement& j,
                                          const ExplorationBound& b = {},
                                          const CheckLimits& limits = {});

// Every live participant of every reachable state can still perform a
// communication in some continuation.
VerificationReport check_lock_freedom(TermStore& store, const Judgement& j,
                                      const ExplorationBound& b = {});
VerificationReport check_lock_freedom_session(const TermStore& store, const Session& s,
                                              const ExplorationBound& b = {});

struct RaceFinding {
  Trace trace; // to the state with the race
  Session state;
  Participant receiver;
  std::vector<Communication> inputs; // >= 2 enabled inputs, >= 2 distinct senders
  bool confluent;                    // heuristic: all pairs commute to equal states
};

std::vector<RaceFinding> find_races(const TermStore& store, const Session& s,
                                    const ExplorationBound& b = {});

nlohmann::json report_to_json(const VerificationReport& r);
nlohmann::json races_to_json(const TermStore& store, const std::vector<RaceFinding>& rs);

} // namespace sw
