#include "sessionweave/comm.hpp"

namespace sw {

std::set<Participant> players(const Trace& t) {
  std::set<Participant> out;
  for (const Communication& c : t) out.insert(c.player);
  return out;
}

} // namespace sw
