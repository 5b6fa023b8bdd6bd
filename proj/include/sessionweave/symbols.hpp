#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace sw {

// Interned identifier. Pointers are stable for the process lifetime, so
// equality is pointer equality; ordering always goes through the spelling
// to keep every sorted container and every report independent of memory
// layout.
using Sym = const std::string*;

Sym intern(std::string_view text);

struct Participant {
  Sym name;

  Participant() : name(intern("")) {}
  explicit Participant(std::string_view n) : name(intern(n)) {}

  std::string_view str() const { return *name; }

  friend bool operator==(Participant a, Participant b) { return a.name == b.name; }
  friend std::strong_ordering operator<=>(Participant a, Participant b) {
    return *a.name <=> *b.name;
  }
};

struct Label {
  Sym name;

  Label() : name(intern("")) {}
  explicit Label(std::string_view n) : name(intern(n)) {}

  std::string_view str() const { return *name; }

  friend bool operator==(Label a, Label b) { return a.name == b.name; }
  friend std::strong_ordering operator<=>(Label a, Label b) {
    return *a.name <=> *b.name;
  }
};

} // namespace sw
