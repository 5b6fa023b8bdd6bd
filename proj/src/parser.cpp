#include "sessionweave/parser.hpp"

#include <array>
#include <cctype>
#include <memory>
#include <set>
#include <sstream>
#include <tuple>

namespace sw {

std::string to_string(const Diagnostic& d) {
  std::ostringstream os;
  os << (d.severity == Diagnostic::Severity::Error ? "error" : "warning") << " at "
     << d.span.line << ":" << d.span.col << ": " << d.message;
  return os.str();
}

namespace {

enum class Tok {
  Name,
  Assign,   // :=
  Semi,     // ;
  Comma,    // ,
  Dot,      // .
  Bang,     // !
  Query,    // ?
  Plus,     // +
  OPlus,    // (+)
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Arrow, // ->
  Colon, // :
  KwDef,
  KwQueue,
  KwAgainst,
  KwExpect,
  KwTypable,
  KwUntypable,
  KwEnd,     // end (process)
  KwEndType, // End (type)
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

class Lexer {
public:
  Lexer(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      Span here{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::Eof, "", here});
        break;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          word += advance();
        out.push_back({keyword(word), word, here});
        continue;
      }
      if (c == '(' && pos_ + 2 < src_.size() && src_[pos_ + 1] == '+' && src_[pos_ + 2] == ')') {
        advance();
        advance();
        advance();
        out.push_back({Tok::OPlus, "(+)", here});
        continue;
      }
      if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
        advance();
        advance();
        out.push_back({Tok::Assign, ":=", here});
        continue;
      }
      if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::Arrow, "->", here});
        continue;
      }
      Tok kind;
      switch (c) {
        case ';': kind = Tok::Semi; break;
        case ',': kind = Tok::Comma; break;
        case '.': kind = Tok::Dot; break;
        case '!': kind = Tok::Bang; break;
        case '?': kind = Tok::Query; break;
        case '+': kind = Tok::Plus; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case '[': kind = Tok::LBracket; break;
        case ']': kind = Tok::RBracket; break;
        case ':': kind = Tok::Colon; break;
        default:
          diags_.push_back({Diagnostic::Severity::Error, here,
                            std::string("unexpected character '") + c + "'"});
          advance();
          continue;
      }
      advance();
      out.push_back({kind, std::string(1, c), here});
    }
    return out;
  }

private:
  static Tok keyword(const std::string& w) {
    if (w == "def") return Tok::KwDef;
    if (w == "queue") return Tok::KwQueue;
    if (w == "against") return Tok::KwAgainst;
    if (w == "expect") return Tok::KwExpect;
    if (w == "typable") return Tok::KwTypable;
    if (w == "untypable") return Tok::KwUntypable;
    if (w == "end") return Tok::KwEnd;
    if (w == "End") return Tok::KwEndType;
    return Tok::Name;
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  std::string_view src_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parse trees. Expressions are classified as process or type purely by
// syntax; a bare name inherits the class of the equation it refers to.

struct ProcAst;
using ProcAstPtr = std::unique_ptr<ProcAst>;

struct ProcAst {
  enum class K { End, Ref, Prefix, Choice };
  K k;
  Span span;
  std::string name;            // Ref
  bool output = false;         // Prefix/Choice operator
  std::string partner, label;  // Prefix
  ProcAstPtr cont;             // Prefix
  std::vector<ProcAstPtr> alts; // Choice (each a Prefix)
};

struct TypeAst;
using TypeAstPtr = std::unique_ptr<TypeAst>;

struct TypeAst {
  enum class K { End, Ref, Node };
  K k;
  Span span;
  std::string name;    // Ref
  bool output = false; // Node
  std::string player;  // Node
  struct Branch {
    Span span;
    std::string partner, label;
    TypeAstPtr cont;
  };
  std::vector<Branch> branches; // Node
};

enum class ExprClass { Proc, Type, Alias };

struct Equation {
  bool is_def = false; // carries the `def` keyword
  std::string name;
  Span span;
  ExprClass cls;
  ProcAstPtr proc;
  TypeAstPtr type;
  std::string alias; // when cls == Alias
};

struct QueueItem {
  Span span;
  std::vector<std::array<std::string, 3>> msgs; // sender, label, receiver
};

struct FileAst {
  std::vector<Equation> equations;
  std::vector<QueueItem> queues;
  std::vector<std::pair<Span, TypeAstPtr>> againsts;
  std::vector<std::pair<Span, bool>> expects;
};

class Parser {
public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags)
      : toks_(std::move(toks)), diags_(diags) {}

  FileAst parse_file() {
    FileAst file;
    while (peek().kind != Tok::Eof) {
      if (!parse_item(file)) recover();
    }
    return file;
  }

  // `def` equations followed by a single expression.
  std::pair<FileAst, TypeAstPtr> parse_type_snippet_ast() {
    FileAst file;
    while (peek().kind == Tok::KwDef)
      if (!parse_item(file)) recover();
    TypeAstPtr root = parse_type_expr();
    expect_eof();
    return {std::move(file), std::move(root)};
  }

  std::pair<FileAst, ProcAstPtr> parse_proc_snippet_ast() {
    FileAst file;
    while (peek().kind == Tok::KwDef)
      if (!parse_item(file)) recover();
    ProcAstPtr root = parse_proc_expr();
    expect_eof();
    return {std::move(file), std::move(root)};
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }

  void error(Span span, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Error, span, std::move(msg)});
  }

  void expect_eof() {
    if (!at(Tok::Eof)) error(peek().span, "unexpected trailing input");
  }

  bool expect(Tok k, const char* what) {
    if (at(k)) {
      take();
      return true;
    }
    error(peek().span, std::string("expected ") + what);
    return false;
  }

  void recover() {
    // Skip to the next plausible item start.
    while (!at(Tok::Eof)) {
      Tok k = peek().kind;
      if (k == Tok::KwDef || k == Tok::KwQueue || k == Tok::KwAgainst || k == Tok::KwExpect)
        return;
      if (k == Tok::Name && peek(1).kind == Tok::Assign) return;
      take();
    }
  }

  bool parse_item(FileAst& file) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwDef: {
        take();
        if (!at(Tok::Name)) {
          error(peek().span, "expected a name after 'def'");
          return false;
        }
        return parse_equation(file, true);
      }
      case Tok::Name:
        if (peek(1).kind == Tok::Assign) return parse_equation(file, false);
        error(t.span, "expected ':=' after name");
        return false;
      case Tok::KwQueue: {
        take();
        QueueItem q{t.span, {}};
        if (!parse_queue_literal(q)) return false;
        file.queues.push_back(std::move(q));
        return true;
      }
      case Tok::KwAgainst: {
        take();
        TypeAstPtr ty = parse_type_expr();
        if (!ty) return false;
        file.againsts.emplace_back(t.span, std::move(ty));
        return true;
      }
      case Tok::KwExpect: {
        take();
        if (at(Tok::KwTypable)) {
          take();
          file.expects.emplace_back(t.span, true);
          return true;
        }
        if (at(Tok::KwUntypable)) {
          take();
          file.expects.emplace_back(t.span, false);
          return true;
        }
        error(peek().span, "expected 'typable' or 'untypable'");
        return false;
      }
      default:
        error(t.span, "expected an equation, 'queue', 'against' or 'expect'");
        return false;
    }
  }

  bool parse_equation(FileAst& file, bool is_def) {
    const Token& name = take();
    if (!expect(Tok::Assign, "':='")) return false;
    Equation eq;
    eq.is_def = is_def;
    eq.name = name.text;
    eq.span = name.span;

    switch (classify_expr()) {
      case ExprClass::Type: {
        eq.cls = ExprClass::Type;
        eq.type = parse_type_expr();
        if (!eq.type) return false;
        break;
      }
      case ExprClass::Proc: {
        eq.cls = ExprClass::Proc;
        eq.proc = parse_proc_expr();
        if (!eq.proc) return false;
        break;
      }
      case ExprClass::Alias: {
        eq.cls = ExprClass::Alias;
        eq.alias = take().text;
        break;
      }
    }
    file.equations.push_back(std::move(eq));
    return true;
  }

  // Lookahead classification:
  //   End            -> type        end / '('     -> process
  //   name!{  name?{ -> type        name!name.    -> type
  //   name!name      -> process     bare name     -> alias
  ExprClass classify_expr() {
    if (at(Tok::KwEndType)) return ExprClass::Type;
    if (at(Tok::KwEnd) || at(Tok::LParen)) return ExprClass::Proc;
    if (at(Tok::Name) && (peek(1).kind == Tok::Bang || peek(1).kind == Tok::Query)) {
      if (peek(2).kind == Tok::LBrace) return ExprClass::Type;
      if (peek(2).kind == Tok::Name && peek(3).kind == Tok::Dot) return ExprClass::Type;
      return ExprClass::Proc;
    }
    return ExprClass::Alias;
  }

  bool parse_queue_literal(QueueItem& q) {
    if (!expect(Tok::LBracket, "'['")) return false;
    if (at(Tok::RBracket)) {
      take();
      return true;
    }
    for (;;) {
      if (!at(Tok::Name)) {
        error(peek().span, "expected a sender name in queue literal");
        return false;
      }
      std::string sender = take().text;
      if (!expect(Tok::Arrow, "'->'")) return false;
      if (!at(Tok::Name)) {
        error(peek().span, "expected a receiver name in queue literal");
        return false;
      }
      std::string receiver = take().text;
      if (!expect(Tok::Colon, "':'")) return false;
      if (!at(Tok::Name)) {
        error(peek().span, "expected a label in queue literal");
        return false;
      }
      std::string label = take().text;
      q.msgs.push_back({sender, label, receiver});
      if (at(Tok::Comma)) {
        take();
        continue;
      }
      return expect(Tok::RBracket, "']' or ','");
    }
  }

  // --- processes -----------------------------------------------------------

  ProcAstPtr parse_proc_expr() {
    const Token& t = peek();
    if (t.kind == Tok::KwEnd) {
      take();
      auto a = std::make_unique<ProcAst>();
      a->k = ProcAst::K::End;
      a->span = t.span;
      return a;
    }
    if (t.kind == Tok::LParen) return parse_proc_choice();
    if (t.kind == Tok::Name) {
      if (peek(1).kind == Tok::Bang || peek(1).kind == Tok::Query) return parse_proc_prefix();
      take();
      auto a = std::make_unique<ProcAst>();
      a->k = ProcAst::K::Ref;
      a->span = t.span;
      a->name = t.text;
      return a;
    }
    error(t.span, "expected a process expression");
    return nullptr;
  }

  ProcAstPtr parse_proc_prefix() {
    const Token& partner = take();
    bool output = take().kind == Tok::Bang;
    if (!at(Tok::Name)) {
      error(peek().span, "expected a label");
      return nullptr;
    }
    const Token& label = take();
    auto a = std::make_unique<ProcAst>();
    a->k = ProcAst::K::Prefix;
    a->span = partner.span;
    a->output = output;
    a->partner = partner.text;
    a->label = label.text;
    if (at(Tok::Semi)) {
      take();
      a->cont = parse_proc_expr();
      if (!a->cont) return nullptr;
    } else {
      a->cont = std::make_unique<ProcAst>();
      a->cont->k = ProcAst::K::End;
      a->cont->span = label.span;
    }
    return a;
  }

  ProcAstPtr parse_proc_choice() {
    const Token& open = take(); // '('
    auto choice = std::make_unique<ProcAst>();
    choice->k = ProcAst::K::Choice;
    choice->span = open.span;
    bool saw_sep = false;
    for (;;) {
      ProcAstPtr alt = parse_proc_expr();
      if (!alt) return nullptr;
      if (alt->k != ProcAst::K::Prefix) {
        error(alt->span, "a choice alternative must be a prefixed process");
        return nullptr;
      }
      choice->alts.push_back(std::move(alt));
      if (at(Tok::Plus) || at(Tok::OPlus)) {
        bool output_sep = peek().kind == Tok::OPlus;
        if (saw_sep && output_sep != choice->output) {
          error(peek().span, "cannot mix '+' and '(+)' in one choice");
          return nullptr;
        }
        choice->output = output_sep;
        saw_sep = true;
        take();
        continue;
      }
      break;
    }
    if (!expect(Tok::RParen, "')'")) return nullptr;
    if (!saw_sep) choice->output = choice->alts.front()->output;
    for (const ProcAstPtr& alt : choice->alts) {
      if (alt->output != choice->output) {
        error(alt->span, choice->output
                             ? "output choice '(+)' needs '!' prefixed alternatives"
                             : "input choice '+' needs '?' prefixed alternatives");
        return nullptr;
      }
    }
    return choice;
  }

  // --- global types ---------------------------------------------------------

  TypeAstPtr parse_type_expr() {
    const Token& t = peek();
    if (t.kind == Tok::KwEndType) {
      take();
      auto a = std::make_unique<TypeAst>();
      a->k = TypeAst::K::End;
      a->span = t.span;
      return a;
    }
    if (t.kind == Tok::Name) {
      if (peek(1).kind == Tok::Bang || peek(1).kind == Tok::Query) return parse_type_node();
      take();
      auto a = std::make_unique<TypeAst>();
      a->k = TypeAst::K::Ref;
      a->span = t.span;
      a->name = t.text;
      return a;
    }
    error(t.span, "expected a global type expression");
    return nullptr;
  }

  TypeAstPtr parse_type_node() {
    const Token& player = take();
    bool output = take().kind == Tok::Bang;
    auto a = std::make_unique<TypeAst>();
    a->k = TypeAst::K::Node;
    a->span = player.span;
    a->output = output;
    a->player = player.text;
    if (at(Tok::LBrace)) {
      take();
      for (;;) {
        if (!parse_type_branch(*a)) return nullptr;
        if (at(Tok::Comma)) {
          take();
          continue;
        }
        if (!expect(Tok::RBrace, "'}' or ','")) return nullptr;
        break;
      }
      return a;
    }
    if (!parse_type_branch(*a)) return nullptr;
    return a;
  }

  bool parse_type_branch(TypeAst& node) {
    if (!at(Tok::Name)) {
      error(peek().span, "expected a partner name");
      return false;
    }
    const Token& partner = take();
    if (!expect(Tok::Dot, "'.'")) return false;
    if (!at(Tok::Name)) {
      error(peek().span, "expected a label");
      return false;
    }
    const Token& label = take();
    TypeAst::Branch b;
    b.span = partner.span;
    b.partner = partner.text;
    b.label = label.text;
    if (at(Tok::Semi)) {
      take();
      b.cont = parse_type_expr();
      if (!b.cont) return false;
    } else {
      b.cont = std::make_unique<TypeAst>();
      b.cont->k = TypeAst::K::End;
      b.cont->span = label.span;
    }
    node.branches.push_back(std::move(b));
    return true;
  }

  std::vector<Token> toks_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Building: resolve names, validate branch sets, create store nodes.

class Builder {
public:
  Builder(TermStore& store, std::vector<Diagnostic>& diags) : store_(store), diags_(diags) {}

  // Registers equations (declares placeholders, resolves alias classes).
  void declare(const FileAst& file) {
    for (const Equation& eq : file.equations) {
      if (names_.count(eq.name)) {
        error(eq.span, "name '" + eq.name + "' is defined twice");
        continue;
      }
      names_.insert(eq.name);
      equations_[eq.name] = &eq;
    }
    // Alias classes: follow chains to a non-alias equation.
    for (const Equation& eq : file.equations) {
      if (eq.cls != ExprClass::Alias) continue;
      std::set<std::string> chain{eq.name};
      const Equation* cur = &eq;
      while (cur && cur->cls == ExprClass::Alias) {
        auto it = equations_.find(cur->alias);
        if (it == equations_.end()) {
          error(cur->span, "undefined name '" + cur->alias + "'");
          cur = nullptr;
          break;
        }
        cur = it->second;
        if (!chain.insert(cur->name).second) {
          error(eq.span, "alias cycle through '" + eq.name + "'");
          cur = nullptr;
          break;
        }
      }
      if (cur) alias_target_[eq.name] = cur->name;
    }
    for (const Equation& eq : file.equations) {
      if (eq.cls == ExprClass::Proc)
        proc_refs_[eq.name] = store_.declare_proc();
      else if (eq.cls == ExprClass::Type)
        type_refs_[eq.name] = store_.declare_type();
    }
  }

  void define(const FileAst& file) {
    for (const Equation& eq : file.equations) {
      if (eq.cls == ExprClass::Proc) {
        if (eq.proc->k == ProcAst::K::End) {
          store_.define_proc(proc_refs_[eq.name], NodeKind::End, {});
          continue;
        }
        auto body = build_proc_node(*eq.proc);
        if (body) {
          try {
            store_.define_proc(proc_refs_[eq.name], body->first, std::move(body->second));
          } catch (const TermError& e) {
            error(eq.span, e.what());
          }
        }
      } else if (eq.cls == ExprClass::Type) {
        if (eq.type->k == TypeAst::K::End) {
          store_.define_type(type_refs_[eq.name], Participant(), NodeKind::End, {});
          continue;
        }
        auto body = build_type_node(*eq.type);
        if (body) {
          try {
            store_.define_type(type_refs_[eq.name], std::get<0>(*body), std::get<1>(*body),
                               std::move(std::get<2>(*body)));
          } catch (const TermError& e) {
            error(eq.span, e.what());
          }
        }
      }
    }
  }

  std::optional<ProcRef> proc_ref(const std::string& name, Span span) {
    std::string target = resolve_alias(name);
    auto it = proc_refs_.find(target);
    if (it == proc_refs_.end()) {
      auto ty = type_refs_.find(target);
      error(span, ty != type_refs_.end()
                      ? "'" + name + "' names a global type, not a process"
                      : "undefined name '" + name + "'");
      return std::nullopt;
    }
    return it->second;
  }

  std::optional<TypeRef> type_ref(const std::string& name, Span span) {
    std::string target = resolve_alias(name);
    auto it = type_refs_.find(target);
    if (it == type_refs_.end()) {
      auto pr = proc_refs_.find(target);
      error(span, pr != proc_refs_.end()
                      ? "'" + name + "' names a process, not a global type"
                      : "undefined name '" + name + "'");
      return std::nullopt;
    }
    return it->second;
  }

  // Builds an expression to a ref (anonymous nodes are hash-consed).
  std::optional<ProcRef> build_proc(const ProcAst& a) {
    switch (a.k) {
      case ProcAst::K::End: return store_.proc_end();
      case ProcAst::K::Ref: return proc_ref(a.name, a.span);
      default: break;
    }
    auto node = build_proc_node(a);
    if (!node) return std::nullopt;
    try {
      return node->first == NodeKind::Output ? store_.mk_proc_output(std::move(node->second))
                                             : store_.mk_proc_input(std::move(node->second));
    } catch (const TermError& e) {
      error(a.span, e.what());
      return std::nullopt;
    }
  }

  std::optional<TypeRef> build_type(const TypeAst& a) {
    switch (a.k) {
      case TypeAst::K::End: return store_.type_end();
      case TypeAst::K::Ref: return type_ref(a.name, a.span);
      default: break;
    }
    auto node = build_type_node(a);
    if (!node) return std::nullopt;
    try {
      return std::get<1>(*node) == NodeKind::Output
                 ? store_.mk_type_output(std::get<0>(*node), std::move(std::get<2>(*node)))
                 : store_.mk_type_input(std::get<0>(*node), std::move(std::get<2>(*node)));
    } catch (const TermError& e) {
      error(a.span, e.what());
      return std::nullopt;
    }
  }

  const std::map<std::string, ProcRef>& proc_refs() const { return proc_refs_; }
  const std::map<std::string, TypeRef>& type_refs() const { return type_refs_; }
  std::string resolve_alias(const std::string& name) const {
    auto it = alias_target_.find(name);
    return it == alias_target_.end() ? name : it->second;
  }

private:
  void error(Span span, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Error, span, std::move(msg)});
  }

  // (kind, branches) of a Prefix/Choice; aliases and end handled by callers.
  std::optional<std::pair<NodeKind, std::vector<ProcBranch>>> build_proc_node(const ProcAst& a) {
    if (a.k == ProcAst::K::End) {
      error(a.span, "internal: end as equation body should use build_proc");
      return std::nullopt;
    }
    if (a.k == ProcAst::K::Ref) {
      error(a.span, "a definition body must spell out a process, not just a name");
      return std::nullopt;
    }
    std::vector<const ProcAst*> alts;
    bool output;
    if (a.k == ProcAst::K::Prefix) {
      alts.push_back(&a);
      output = a.output;
    } else {
      for (const ProcAstPtr& alt : a.alts) alts.push_back(alt.get());
      output = a.output;
    }
    std::vector<ProcBranch> branches;
    std::set<std::pair<std::string, std::string>> seen;
    for (const ProcAst* alt : alts) {
      if (!seen.insert({alt->partner, alt->label}).second) {
        error(alt->span, "duplicate branch " + alt->partner +
                             (output ? "!" : "?") + alt->label + " in choice");
        return std::nullopt;
      }
      auto cont = build_proc(*alt->cont);
      if (!cont) return std::nullopt;
      branches.push_back({Participant(alt->partner), Label(alt->label), *cont});
    }
    return std::pair{output ? NodeKind::Output : NodeKind::Input, std::move(branches)};
  }

  std::optional<std::tuple<Participant, NodeKind, std::vector<TypeBranch>>> build_type_node(
      const TypeAst& a) {
    if (a.k != TypeAst::K::Node) {
      error(a.span, "a definition body must spell out a global type, not just a name");
      return std::nullopt;
    }
    std::vector<TypeBranch> branches;
    std::set<std::pair<std::string, std::string>> seen;
    for (const TypeAst::Branch& b : a.branches) {
      if (b.partner == a.player) {
        error(b.span, "player '" + a.player + "' cannot communicate with itself");
        return std::nullopt;
      }
      if (!seen.insert({b.partner, b.label}).second) {
        error(b.span, "duplicate branch " + b.partner + "." + b.label + " in type choice");
        return std::nullopt;
      }
      auto cont = build_type(*b.cont);
      if (!cont) return std::nullopt;
      branches.push_back({Participant(b.partner), Label(b.label), *cont});
    }
    return std::tuple{Participant(a.player), a.output ? NodeKind::Output : NodeKind::Input,
                      std::move(branches)};
  }

  TermStore& store_;
  std::vector<Diagnostic>& diags_;
  std::set<std::string> names_;
  std::map<std::string, const Equation*> equations_;
  std::map<std::string, std::string> alias_target_;
  std::map<std::string, ProcRef> proc_refs_;
  std::map<std::string, TypeRef> type_refs_;
};

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

} // namespace

ParseResult parse(std::string_view text) {
  ParseResult result;
  std::vector<Token> toks = Lexer(text, result.diagnostics).run();
  Parser parser(std::move(toks), result.diagnostics);
  FileAst ast = parser.parse_file();

  auto store = std::make_shared<TermStore>();
  Builder builder(*store, result.diagnostics);
  builder.declare(ast);
  builder.define(ast);

  // Network entries are the bare process equations.
  std::vector<std::pair<Participant, ProcRef>> located;
  std::map<std::string, ProcRef> proc_defs;
  for (const Equation& eq : ast.equations) {
    if (eq.cls == ExprClass::Alias) {
      std::string target = builder.resolve_alias(eq.name);
      if (target == eq.name) continue; // unresolved, already diagnosed
      if (eq.is_def) continue;        // a def alias adds nothing
      if (auto r = builder.proc_ref(eq.name, eq.span))
        located.emplace_back(Participant(eq.name), *r);
      continue;
    }
    if (eq.cls == ExprClass::Proc) {
      auto it = builder.proc_refs().find(eq.name);
      if (it == builder.proc_refs().end()) continue;
      if (!store->proc_defined(it->second)) continue; // body failed to build
      if (eq.is_def)
        proc_defs[eq.name] = it->second;
      else
        located.emplace_back(Participant(eq.name), it->second);
    }
  }

  if (ast.queues.empty())
    result.diagnostics.push_back(
        {Diagnostic::Severity::Error, Span{1, 1}, "file has no 'queue' item: a session needs one"});
  for (std::size_t i = 1; i < ast.queues.size(); ++i)
    result.diagnostics.push_back({Diagnostic::Severity::Error, ast.queues[i].span,
                                  "file has more than one 'queue' item"});
  for (std::size_t i = 1; i < ast.againsts.size(); ++i)
    result.diagnostics.push_back({Diagnostic::Severity::Error, ast.againsts[i].first,
                                  "file has more than one 'against' item"});
  for (std::size_t i = 1; i < ast.expects.size(); ++i)
    result.diagnostics.push_back({Diagnostic::Severity::Error, ast.expects[i].first,
                                  "file has more than one 'expect' item"});

  std::optional<TypeRef> against;
  if (!ast.againsts.empty())
    if (auto r = builder.build_type(*ast.againsts.front().second)) against = *r;

  store->merge_duplicates();

  if (has_errors(result.diagnostics)) return result;

  SourceFile file;
  file.store = store;
  try {
    file.session.network = Network::of(*store, std::move(located));
  } catch (const TermError& e) {
    result.diagnostics.push_back({Diagnostic::Severity::Error, Span{1, 1}, e.what()});
    return result;
  }
  std::vector<Message> msgs;
  for (const auto& [sender, label, receiver] : ast.queues.front().msgs)
    msgs.push_back({Participant(sender), Label(label), Participant(receiver)});
  file.session.queue = Queue::of(std::move(msgs));

  for (const auto& [name, ref] : builder.proc_refs())
    if (proc_defs.count(name)) file.proc_defs[name] = store->resolve(ref);
  for (const auto& [name, ref] : builder.type_refs()) file.type_defs[name] = store->resolve(ref);
  if (against) file.against = store->resolve(*against);
  if (!ast.expects.empty()) file.expect_typable = ast.expects.front().second;

  result.file = std::move(file);
  return result;
}

TypeSnippetResult parse_type_snippet(TermStore& store, std::string_view text) {
  TypeSnippetResult result;
  std::vector<Token> toks = Lexer(text, result.diagnostics).run();
  Parser parser(std::move(toks), result.diagnostics);
  auto [ast, root] = parser.parse_type_snippet_ast();
  if (!root) return result;
  Builder builder(store, result.diagnostics);
  builder.declare(ast);
  builder.define(ast);
  std::optional<TypeRef> ref = builder.build_type(*root);
  store.merge_duplicates();
  if (has_errors(result.diagnostics) || !ref) return result;
  result.root = store.resolve(*ref);
  return result;
}

ProcSnippetResult parse_proc_snippet(TermStore& store, std::string_view text) {
  ProcSnippetResult result;
  std::vector<Token> toks = Lexer(text, result.diagnostics).run();
  Parser parser(std::move(toks), result.diagnostics);
  auto [ast, root] = parser.parse_proc_snippet_ast();
  if (!root) return result;
  Builder builder(store, result.diagnostics);
  builder.declare(ast);
  builder.define(ast);
  std::optional<ProcRef> ref = builder.build_proc(*root);
  store.merge_duplicates();
  if (has_errors(result.diagnostics) || !ref) return result;
  result.root = store.resolve(*ref);
  return result;
}

} // namespace sw
