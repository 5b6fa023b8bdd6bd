#pragma once

#include "sessionweave/typecheck.hpp"

#include <optional>

namespace sw {

struct SearchLimits {
  std::size_t max_expansions = 200000; // judgement expansions across the search
  std::size_t max_queue = 32;
  std::size_t max_alternatives = 4096; // structural candidates kept per judgement
  std::size_t max_candidates = 8192;   // root candidates validated
  CheckLimits check;                   // guards for the validating typechecker
};

enum class SearchStatus : unsigned char { Typable, Untypable, BoundExhausted };

std::string_view to_string(SearchStatus s);

struct SearchResult {
  SearchStatus status = SearchStatus::Untypable;
  std::optional<TypeRef> witness;       // when Typable
  std::optional<Derivation> derivation; // validating derivation for the witness
  std::size_t expansions = 0;
  std::size_t candidates_checked = 0;
  SearchLimits limits;
};

// Goal-directed search for a global type deriving the session. Candidate
// derivations are syntax-directed by the session: output branch sets are
// forced by the processes, input nodes use the live branches only, and a
// judgement repeating on the path closes as a cycle. Every structurally
// viable candidate is materialized and validated by the real typechecker.
// Untypable with no bound hit means the whole candidate space was exhausted.
SearchResult infer_type(TermStore& store, const Session& s, const SearchLimits& limits = {});

// Untypability evidence within the recorded bounds; same engine.
SearchResult check_untypable_exhaustive(TermStore& store, const Session& s,
                                        const SearchLimits& limits = {});

} // namespace sw
