#pragma once

#include "sessionweave/infer.hpp"
#include "sessionweave/verify.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sw::cli {

// Exit codes shared by the subcommands:
//   check:    0 typable, 1 not typable, 2 guard/bound exhausted, 3 parse or
//             boundedness error
//   simulate: 0 ok, 3 parse error
//   verify:   0 all pass, 1 any fail, 2 bound exhausted, 3 parse/type error
//   analyze:  0 ok, 3 parse error
struct RunConfig {
  std::string input;                    // file path (or corpus dir for --corpus)
  CheckLimits guard;                    // --guard-judgements, --guard-queue
  ExplorationBound bound;               // --depth caps the exploration depth
  SearchLimits search;
  bool json = false;                    // --format json
  bool one = false;                     // simulate: one maximal trace
  bool types = false;                   // simulate: the type-configuration LTS
  bool corpus = false;                  // verify: run a corpus directory
  bool emit_derivation = false;         // check: print the derivation
  std::vector<std::string> properties;  // verify: subset of sr,sf,lf,races
  bool color = false;                   // text output only
};

int run_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace sw::cli
