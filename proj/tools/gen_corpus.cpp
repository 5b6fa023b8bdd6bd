// Emits the generated part of corpus/typable: random protocols that come
// with a global type, validated by the typechecker before writing.

#include "sessionweave/parser.hpp"
#include "sessionweave/printer.hpp"
#include "sessionweave/typecheck.hpp"

#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace sw;

namespace {

// pretty_type yields def lines followed by the root expression; corpus files
// want the defs as items and the root behind `against`.
std::string against_block(const std::string& type_text) {
  std::size_t last_nl = type_text.rfind('\n');
  if (last_nl == std::string::npos) return "against " + type_text + "\n";
  return type_text.substr(0, last_nl + 1) + "against " + type_text.substr(last_nl + 1) + "\n";
}

std::string compose(const TermStore& store, const Session& session, TypeRef gtype,
                    const std::string& note) {
  std::ostringstream os;
  os << "# generated: " << note << "\n";
  os << pretty_session(store, session) << "\n";
  os << against_block(pretty_type(store, gtype));
  os << "expect typable\n";
  return os.str();
}

bool validate(const std::string& text) {
  ParseResult pr = parse(text);
  if (!pr.ok()) {
    for (const Diagnostic& d : pr.diagnostics) std::cerr << "  " << to_string(d) << "\n";
    return false;
  }
  if (!pr.file->against) return false;
  Judgement j{*pr.file->against, pr.file->session.network, pr.file->session.queue};
  return typed(typecheck(*pr.file->store, j));
}

std::string fanin_text(swt::Rng& rng, bool recursive) {
  const char* senders[2] = {"alice", "bob"};
  const char* receiver = "carol";
  std::string la(1, static_cast<char>('a' + swt::pick(rng, 4)));
  std::string lb = la + "2";
  std::ostringstream os;
  if (recursive) {
    os << "def A := " << receiver << "!" << la << "; A\n";
    os << "def B := " << receiver << "!" << lb << "; B\n";
    os << "def C := (" << senders[0] << "?" << la << "; " << senders[1] << "?" << lb
       << "; C + " << senders[1] << "?" << lb << "; " << senders[0] << "?" << la << "; C)\n";
    os << senders[0] << " := A\n" << senders[1] << " := B\n" << receiver << " := C\n";
    os << "queue []\n";
    os << "def G := " << senders[0] << "!" << receiver << "." << la << "; " << senders[1] << "!"
       << receiver << "." << lb << "; " << receiver << "?{" << senders[0] << "." << la << "; "
       << receiver << "?" << senders[1] << "." << lb << "; G, " << senders[1] << "." << lb
       << "; " << receiver << "?" << senders[0] << "." << la << "; G}\n";
    os << "against G\n";
  } else {
    os << senders[0] << " := " << receiver << "!" << la << "\n";
    os << senders[1] << " := " << receiver << "!" << lb << "\n";
    os << receiver << " := (" << senders[0] << "?" << la << "; " << senders[1] << "?" << lb
       << " + " << senders[1] << "?" << lb << "; " << senders[0] << "?" << la << ")\n";
    os << "queue []\n";
    os << "against " << senders[0] << "!" << receiver << "." << la << "; " << senders[1] << "!"
       << receiver << "." << lb << "; " << receiver << "?{" << senders[0] << "." << la << "; "
       << receiver << "?" << senders[1] << "." << lb << "; End, " << senders[1] << "." << lb
       << "; " << receiver << "?" << senders[0] << "." << la << "; End}\n";
  }
  os << "expect typable\n";
  return "# generated: confluent fan-in\n" + os.str();
}

} // namespace

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "corpus/typable";
  std::filesystem::create_directories(dir);
  swt::Rng rng(20250714);

  int written = 0;
  auto emit = [&](const std::string& name, const std::string& text) {
    if (!validate(text)) {
      std::cerr << "generated file failed validation: " << name << "\n" << text;
      std::exit(1);
    }
    std::ofstream out(dir / name, std::ios::binary);
    out << text;
    std::cout << "wrote " << (dir / name).string() << "\n";
    ++written;
  };

  for (int i = 0; i < 5; ++i) {
    TermStore store;
    swt::TypedSessionFixture fx = swt::random_typed_session(rng, store, false);
    emit("gen_line_" + std::to_string(i) + ".mps",
         compose(store, fx.session, fx.gtype, "straight-line protocol"));
  }
  for (int i = 0; i < 4; ++i) {
    TermStore store;
    swt::TypedSessionFixture fx = swt::random_typed_session(rng, store, true);
    emit("gen_loop_" + std::to_string(i) + ".mps",
         compose(store, fx.session, fx.gtype, "looping protocol"));
  }
  emit("gen_fanin_0.mps", fanin_text(rng, false));
  emit("gen_fanin_1.mps", fanin_text(rng, false));
  emit("gen_fanin_2.mps", fanin_text(rng, true));

  std::cout << written << " file(s)\n";
  return 0;
}
