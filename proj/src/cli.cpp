#include "sessionweave/cli.hpp"

#include "sessionweave/parser.hpp"
#include "sessionweave/printer.hpp"
#include "sessionweave/type_lts.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace sw::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitBound = 2;
constexpr int kExitError = 3;

std::string paint(const RunConfig& cfg, bool good, std::string_view text) {
  if (!cfg.color) return std::string(text);
  return std::string(good ? "\x1b[32m" : "\x1b[31m") + std::string(text) + "\x1b[0m";
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::optional<SourceFile> load(const std::string& path, bool json, std::ostream& out,
                               std::ostream& err) {
  auto text = slurp(path);
  if (!text) {
    err << "cannot read " << path << "\n";
    return std::nullopt;
  }
  ParseResult pr = parse(*text);
  if (!pr.ok()) {
    if (json) {
      nlohmann::json diags = nlohmann::json::array();
      for (const Diagnostic& d : pr.diagnostics) diags.push_back(to_string(d));
      out << nlohmann::json{{"file", path}, {"error", "parse"}, {"diagnostics", diags}}.dump(2)
          << "\n";
    } else {
      for (const Diagnostic& d : pr.diagnostics) err << path << ": " << to_string(d) << "\n";
    }
    return std::nullopt;
  }
  return std::move(pr.file);
}

nlohmann::json boundedness_json(const TermStore& store, const BoundednessReport& rep) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const BoundednessWitness& w : rep.witnesses)
    witnesses.push_back({{"subterm", pretty_type(store, w.subterm)},
                         {"participant", std::string(w.participant.str())}});
  return {{"bounded", rep.bounded}, {"witnesses", std::move(witnesses)}};
}

struct CheckOutcome {
  int exit;
  nlohmann::json json;
  std::string text;
};

CheckOutcome do_check(const RunConfig& cfg, SourceFile& file) {
  TermStore& store = *file.store;
  CheckOutcome o{kExitOk, nlohmann::json::object(), ""};
  std::ostringstream text;

  if (file.against) {
    BoundednessReport brep = boundedness(store, *file.against);
    if (!brep.bounded) {
      o.exit = kExitError;
      o.json["verdict"] = "unbounded-type";
      o.json["boundedness"] = boundedness_json(store, brep);
      text << "error: the candidate global type is unbounded\n";
      for (const BoundednessWitness& w : brep.witnesses)
        text << "  witness: participant " << w.participant.str() << " in "
             << pretty_type(store, w.subterm) << "\n";
      o.text = text.str();
      return o;
    }
    Judgement j{*file.against, file.session.network, file.session.queue};
    CheckResult res = typecheck(store, j, cfg.guard);
    if (typed(res)) {
      const Derivation& d = std::get<Derivation>(res);
      o.json["verdict"] = "typable";
      if (cfg.emit_derivation) o.json["derivation"] = derivation_to_json(store, d);
      text << "typable\n";
      o.text = text.str();
      return o;
    }
    const TypeFailure& f = std::get<TypeFailure>(res);
    o.exit = f.reason == FailureReason::GrowthGuardExceeded ? kExitBound : kExitFail;
    o.json["verdict"] = o.exit == kExitBound ? "guard-exhausted" : "untypable";
    o.json["failure"] = failure_to_json(store, f);
    text << (o.exit == kExitBound ? "guard exhausted: " : "untypable: ") << to_string(f.reason)
         << ": " << f.detail << "\n";
    o.text = text.str();
    return o;
  }

  // No candidate type in the file: search for one.
  SearchResult sr = infer_type(store, file.session, cfg.search);
  o.json["search"] = {{"status", std::string(to_string(sr.status))},
                      {"expansions", sr.expansions},
                      {"candidates_checked", sr.candidates_checked}};
  switch (sr.status) {
    case SearchStatus::Typable:
      o.exit = kExitOk;
      o.json["verdict"] = "typable";
      o.json["inferred"] = pretty_type(store, *sr.witness);
      if (cfg.emit_derivation)
        o.json["derivation"] = derivation_to_json(store, *sr.derivation);
      text << "typable, inferred type:\n" << pretty_type(store, *sr.witness) << "\n";
      break;
    case SearchStatus::Untypable:
      o.exit = kExitFail;
      o.json["verdict"] = "untypable";
      text << "untypable: no candidate global type derives this session\n";
      break;
    case SearchStatus::BoundExhausted:
      o.exit = kExitBound;
      o.json["verdict"] = "bound-exhausted";
      text << "bound exhausted: no verdict within the search limits\n";
      break;
  }
  o.text = text.str();
  return o;
}

} // namespace

int run_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto file = load(cfg.input, cfg.json, out, err);
  if (!file) return kExitError;
  try {
    CheckOutcome o = do_check(cfg, *file);
    if (cfg.json)
      out << o.json.dump(2) << "\n";
    else
      out << o.text;
    return o.exit;
  } catch (const UnboundedTypeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

namespace {

struct LtsListing {
  nlohmann::json json;
  std::string text;
  bool truncated = false;
};

LtsListing list_session_lts(const TermStore& store, const Session& root,
                            const ExplorationBound& b) {
  LtsListing listing;
  std::map<Session, std::size_t> index;
  std::deque<std::pair<Session, std::size_t>> frontier;
  index.emplace(root, 0);
  frontier.push_back({root, 0});
  nlohmann::json states = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  std::ostringstream text;

  while (!frontier.empty()) {
    auto [s, depth] = std::move(frontier.front());
    frontier.pop_front();
    std::size_t id = index.at(s);
    std::vector<SessionStep> steps = session_steps(store, s);
    bool stuck = is_stuck(store, s);
    states.push_back({{"id", id},
                      {"state", pretty_session(store, s)},
                      {"stuck", stuck},
                      {"final", s.network.empty() && s.queue.empty()}});
    text << "#" << id << (stuck ? " [stuck]" : s.network.empty() && s.queue.empty() ? " [done]" : "")
         << "\n";
    std::istringstream lines(pretty_session(store, s));
    for (std::string line; std::getline(lines, line);) text << "    " << line << "\n";
    for (const SessionStep& st : steps) {
      auto [it, fresh] = index.emplace(st.target, index.size());
      if (fresh) {
        if (depth + 1 > b.max_depth || index.size() > b.max_states) {
          listing.truncated = true;
          index.erase(it);
          continue;
        }
        frontier.push_back({st.target, depth + 1});
      }
      edges.push_back({{"from", id}, {"to", it->second}, {"comm", pretty_comm(st.comm)}});
      text << "    --" << pretty_comm(st.comm) << "--> #" << it->second << "\n";
    }
  }

  listing.json = {{"states", std::move(states)},
                  {"edges", std::move(edges)},
                  {"truncated", listing.truncated}};
  listing.text = text.str();
  return listing;
}

} // namespace

int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto file = load(cfg.input, cfg.json, out, err);
  if (!file) return kExitError;
  TermStore& store = *file->store;

  if (cfg.types) {
    if (!file->against) {
      err << "simulate --types needs an 'against' type in the file\n";
      return kExitError;
    }
    try {
      TypeConfig config{*file->against, file->session.queue};
      std::vector<TypeStep> steps = type_steps(store, config);
      if (cfg.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const TypeStep& st : steps)
          arr.push_back({{"comm", pretty_comm(st.comm)},
                         {"gtype", pretty_type(store, st.target.gtype)},
                         {"queue", pretty_queue(st.target.queue)}});
        out << nlohmann::json{{"steps", std::move(arr)}}.dump(2) << "\n";
      } else {
        out << "type configuration steps:\n";
        for (const TypeStep& st : steps)
          out << "  --" << pretty_comm(st.comm) << "--> " << pretty_type(store, st.target.gtype)
              << " || " << pretty_queue(st.target.queue) << "\n";
        if (steps.empty()) out << "  (none)\n";
      }
      return kExitOk;
    } catch (const UnboundedTypeError& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
  }

  if (cfg.one) {
    Session s = file->session;
    Trace trace;
    while (trace.size() < cfg.bound.max_depth) {
      std::vector<SessionStep> steps = session_steps(store, s);
      if (steps.empty()) break;
      trace.push_back(steps.front().comm);
      s = steps.front().target;
    }
    bool stuck = is_stuck(store, s);
    if (cfg.json) {
      out << nlohmann::json{{"trace", pretty_trace(trace)},
                            {"final", pretty_session(store, s)},
                            {"stuck", stuck}}
                 .dump(2)
          << "\n";
    } else {
      out << (trace.empty() ? "no steps" : pretty_trace(trace)) << "\n";
      out << "final state:\n" << pretty_session(store, s) << "\n";
      if (stuck) out << "stuck\n";
    }
    return kExitOk;
  }

  LtsListing listing = list_session_lts(store, file->session, cfg.bound);
  if (cfg.json)
    out << listing.json.dump(2) << "\n";
  else {
    if (listing.text.empty())
      out << "no steps\n";
    else
      out << listing.text;
    if (listing.truncated) out << "(truncated at depth " << cfg.bound.max_depth << ")\n";
  }
  return kExitOk;
}

namespace {

bool property_selected(const RunConfig& cfg, std::string_view name) {
  if (cfg.properties.empty()) return true;
  return std::find(cfg.properties.begin(), cfg.properties.end(), name) != cfg.properties.end();
}

struct FileVerdict {
  std::string path;
  bool ok = true;
  bool bound_hit = false;
  nlohmann::json json;
  std::string text;
};

FileVerdict verify_one(const RunConfig& cfg, const std::string& path, SourceFile& file) {
  TermStore& store = *file.store;
  FileVerdict v;
  v.path = path;
  std::ostringstream text;
  nlohmann::json reports = nlohmann::json::array();

  std::optional<TypeRef> gtype = file.against;
  if (!gtype && (property_selected(cfg, "sr") || property_selected(cfg, "sf") ||
                 property_selected(cfg, "lf"))) {
    SearchResult sr = infer_type(store, file.session, cfg.search);
    if (sr.status == SearchStatus::Typable) {
      gtype = sr.witness;
      text << "inferred type: " << pretty_type(store, *gtype) << "\n";
    } else {
      v.ok = false;
      v.json = {{"file", path}, {"error", "no global type available"}};
      v.text = "no 'against' type and none inferable; cannot verify\n";
      return v;
    }
  }

  std::optional<Judgement> j;
  if (gtype) {
    j = Judgement{*gtype, file.session.network, file.session.queue};
    CheckResult res = typecheck(store, *j, cfg.guard);
    if (!typed(res)) {
      const TypeFailure& f = std::get<TypeFailure>(res);
      v.ok = false;
      v.json = {{"file", path}, {"error", "session does not typecheck"},
                {"failure", failure_to_json(store, f)}};
      v.text = "session does not typecheck: " + std::string(to_string(f.reason)) + "\n";
      return v;
    }
    if (auto bad = verify_derivation(store, std::get<Derivation>(res))) {
      v.ok = false;
      v.json = {{"file", path}, {"error", "derivation does not re-verify"}, {"detail", *bad}};
      v.text = "derivation does not re-verify: " + *bad + "\n";
      return v;
    }
  }

  auto add = [&](const VerificationReport& rep) {
    reports.push_back(report_to_json(rep));
    text << to_string(rep.property) << ": " << to_string(rep.status) << " (states "
         << rep.states << ")\n";
    if (rep.status == VerifyStatus::Fail) v.ok = false;
    if (rep.status == VerifyStatus::BoundExhausted) v.bound_hit = true;
  };

  if (j && property_selected(cfg, "sr")) add(check_subject_reduction(store, *j, cfg.bound, cfg.guard));
  if (j && property_selected(cfg, "sf")) add(check_session_fidelity(store, *j, cfg.bound, cfg.guard));
  if (j && property_selected(cfg, "lf")) add(check_lock_freedom(store, *j, cfg.bound));
  if (property_selected(cfg, "races")) {
    std::vector<RaceFinding> races = find_races(store, file.session, cfg.bound);
    reports.push_back({{"property", "races"}, {"findings", races_to_json(store, races)}});
    text << "races: " << races.size() << " finding(s)\n";
    for (const RaceFinding& f : races)
      text << "  receiver " << f.receiver.str() << " after " << pretty_trace(f.trace) << ": "
           << (f.confluent ? "confluent" : "non-confluent") << "\n";
  }

  v.json = {{"file", path}, {"reports", std::move(reports)}};
  v.text = text.str();
  return v;
}

FileVerdict verify_corpus_file(const RunConfig& cfg, const std::string& path, bool expect_typable) {
  FileVerdict v;
  v.path = path;
  std::ostringstream devnull;
  auto file = load(path, false, devnull, devnull);
  if (!file) {
    v.ok = false;
    v.json = {{"file", path}, {"error", "parse"}};
    v.text = "parse error\n";
    return v;
  }
  if (file->expect_typable && *file->expect_typable != expect_typable) {
    v.ok = false;
    v.json = {{"file", path}, {"error", "expectation does not match corpus directory"}};
    v.text = "expectation mismatch\n";
    return v;
  }

  if (expect_typable) {
    v = verify_one(cfg, path, *file);
    return v;
  }

  TermStore& store = *file->store;
  nlohmann::json body;
  std::ostringstream text;
  if (file->against) {
    Judgement j{*file->against, file->session.network, file->session.queue};
    CheckResult res = typecheck(store, j, cfg.guard);
    if (typed(res)) {
      v.ok = false;
      body["error"] = "session unexpectedly typechecks against the candidate type";
      text << "unexpectedly typable against the candidate type\n";
    } else {
      const TypeFailure& f = std::get<TypeFailure>(res);
      body["candidate_rejected"] = {{"reason", std::string(to_string(f.reason))},
                                    {"detail", f.detail}};
      text << "candidate type rejected: " << to_string(f.reason) << "\n";
    }
  }
  SearchResult sr = check_untypable_exhaustive(store, file->session, cfg.search);
  body["search"] = {{"status", std::string(to_string(sr.status))},
                    {"expansions", sr.expansions},
                    {"candidates_checked", sr.candidates_checked}};
  text << "exhaustive search: " << to_string(sr.status) << "\n";
  if (sr.status == SearchStatus::Typable) {
    v.ok = false;
    text << "  witness: " << pretty_type(store, *sr.witness) << "\n";
  } else if (sr.status == SearchStatus::BoundExhausted) {
    v.bound_hit = true;
  }
  body["file"] = path;
  v.json = std::move(body);
  v.text = text.str();
  return v;
}

std::vector<std::string> corpus_files(const std::string& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
    if (entry.path().extension() == ".mps") out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.corpus) {
    auto file = load(cfg.input, cfg.json, out, err);
    if (!file) return kExitError;
    try {
      FileVerdict v = verify_one(cfg, cfg.input, *file);
      if (cfg.json)
        out << v.json.dump(2) << "\n";
      else
        out << v.text;
      if (v.json.contains("error")) return kExitError;
      if (!v.ok) return kExitFail;
      return v.bound_hit ? kExitBound : kExitOk;
    } catch (const UnboundedTypeError& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
  }

  std::vector<FileVerdict> verdicts;
  for (const std::string& path : corpus_files(cfg.input + "/typable"))
    verdicts.push_back(verify_corpus_file(cfg, path, true));
  for (const std::string& path : corpus_files(cfg.input + "/untypable"))
    verdicts.push_back(verify_corpus_file(cfg, path, false));

  std::size_t failed = 0, bound_hits = 0;
  nlohmann::json files = nlohmann::json::array();
  std::ostringstream text;
  for (FileVerdict& v : verdicts) {
    if (!v.ok) ++failed;
    if (v.bound_hit) ++bound_hits;
    files.push_back({{"file", v.path},
                     {"ok", v.ok},
                     {"bound_exhausted", v.bound_hit},
                     {"detail", std::move(v.json)}});
    text << v.path << ": "
         << (v.ok ? (v.bound_hit ? "bound-exhausted" : "ok") : "FAIL") << "\n";
  }

  if (cfg.json) {
    nlohmann::json summary{{"files", verdicts.size()},
                           {"failed", failed},
                           {"bound_exhausted", bound_hits}};
    out << nlohmann::json{{"corpus", files}, {"summary", std::move(summary)}}.dump(2) << "\n";
  } else {
    out << text.str();
    out << verdicts.size() << " file(s), " << failed << " failed, " << bound_hits
        << " bound-exhausted\n";
    out << paint(cfg, failed == 0, failed == 0 ? "corpus ok" : "corpus failed") << "\n";
  }
  if (failed) return kExitFail;
  return bound_hits ? kExitBound : kExitOk;
}

int run_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto file = load(cfg.input, cfg.json, out, err);
  if (!file) return kExitError;
  TermStore& store = *file->store;

  std::map<std::string, TypeRef> targets = file->type_defs;
  if (file->against) targets.emplace("(against)", *file->against);

  nlohmann::json items = nlohmann::json::array();
  std::ostringstream text;
  for (const auto& [name, ref] : targets) {
    std::set<Participant> ps = players_of_type(store, ref);
    BoundednessReport brep = boundedness(store, ref);
    nlohmann::json depths = nlohmann::json::object();
    text << name << ":\n  players:";
    for (const Participant& p : ps) text << " " << p.str();
    if (ps.empty()) text << " (none)";
    text << "\n";
    for (const Participant& p : ps) {
      DepthValue d = depth(store, ref, p);
      depths[std::string(p.str())] = d.is_infinite() ? nlohmann::json("inf")
                                                     : nlohmann::json(d.value());
      text << "  depth(" << p.str() << ") = " << (d.is_infinite() ? "inf" : std::to_string(d.value()))
           << "\n";
    }
    text << "  bounded: " << (brep.bounded ? "yes" : "no") << "\n";
    for (const BoundednessWitness& w : brep.witnesses)
      text << "    witness: depth(" << w.participant.str()
           << ") = inf in subterm " << pretty_type(store, w.subterm) << "\n";
    nlohmann::json players = nlohmann::json::array();
    for (const Participant& p : ps) players.push_back(std::string(p.str()));
    items.push_back({{"name", name},
                     {"players", std::move(players)},
                     {"depths", std::move(depths)},
                     {"boundedness", boundedness_json(store, brep)}});
  }

  if (cfg.json)
    out << nlohmann::json{{"types", std::move(items)}}.dump(2) << "\n";
  else if (targets.empty())
    out << "no global types in file\n";
  else
    out << text.str();
  (void)err;
  return kExitOk;
}

} // namespace sw::cli
