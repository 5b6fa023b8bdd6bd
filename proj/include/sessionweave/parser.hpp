#pragma once

#include "sessionweave/session.hpp"
#include "sessionweave/terms.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sw {

struct Span {
  int line = 1;
  int col = 1;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  Span span;
  std::string message;
};

std::string to_string(const Diagnostic& d);

// A parsed .mps file: named equations, one session (network + queue), an
// optional candidate global type and an optional expected verdict.
struct SourceFile {
  std::shared_ptr<TermStore> store;
  Session session;
  std::map<std::string, ProcRef> proc_defs;
  std::map<std::string, TypeRef> type_defs;
  std::optional<TypeRef> against;
  std::optional<bool> expect_typable;
};

struct ParseResult {
  std::optional<SourceFile> file; // set iff there are no error diagnostics
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return file.has_value(); }
};

ParseResult parse(std::string_view text);

// Snippet entry points used by round-trip tests and tools: zero or more
// `def` equations followed by one expression. Terms land in the given store.
struct TypeSnippetResult {
  std::optional<TypeRef> root;
  std::vector<Diagnostic> diagnostics;
};
struct ProcSnippetResult {
  std::optional<ProcRef> root;
  std::vector<Diagnostic> diagnostics;
};

TypeSnippetResult parse_type_snippet(TermStore& store, std::string_view text);
ProcSnippetResult parse_proc_snippet(TermStore& store, std::string_view text);

} // namespace sw
