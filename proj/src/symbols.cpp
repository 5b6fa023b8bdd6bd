#include "sessionweave/symbols.hpp"

#include <mutex>
#include <set>

namespace sw {

Sym intern(std::string_view text) {
  static std::mutex mu;
  static std::set<std::string, std::less<>> table;
  std::lock_guard<std::mutex> lock(mu);
  auto it = table.find(text);
  if (it == table.end()) it = table.emplace(text).first;
  return &*it;
}

} // namespace sw
