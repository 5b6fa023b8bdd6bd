#pragma once

#include "sessionweave/comm.hpp"
#include "sessionweave/queue.hpp"
#include "sessionweave/session.hpp"
#include "sessionweave/terms.hpp"

#include <string>

namespace sw {

// Text forms that parse back to the same terms (up to hash-consing and
// queue normalization). Cyclic terms are printed as a block of synthetic
// `def` equations followed by the root expression.

std::string pretty_proc(const TermStore& store, ProcRef p);
std::string pretty_type(const TermStore& store, TypeRef g);
std::string pretty_queue(const Queue& q);
std::string pretty_message(const Message& m);
std::string pretty_comm(const Communication& c);
std::string pretty_trace(const Trace& t);
// Full source snippet: defs for recursive processes, network entries, queue.
std::string pretty_session(const TermStore& store, const Session& s);

} // namespace sw
