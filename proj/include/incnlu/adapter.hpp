#ifndef INCNLU_ADAPTER_HPP
#define INCNLU_ADAPTER_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "incnlu/evaluation.hpp"

namespace incnlu {

struct PrefixRequest {
  std::string utterance_id;
  std::size_t prefix_len = 0;
  std::vector<std::string> tokens;
};

// Result of driving an external model over a prefix stream. When the child
// violates the protocol or crashes, `error` is set and `responses` holds
// what was received so far, so callers can keep a `.partial` artifact.
struct ExternalRunResult {
  std::vector<std::pair<std::pair<std::string, std::size_t>, Hypothesis>> responses;
  int exit_status = 0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

// Line protocol, strictly sequential: one request object
//   {"utterance_id": ..., "prefix_len": ..., "tokens": [...]}
// per line on the child's stdin, one response object
//   {"target": ..., "intent_confidence": ...}
// per line on its stdout, in request order. Responses may echo
// `utterance_id`/`prefix_len`; when present they must match the pending
// request. `command` runs under /bin/sh. Adapters must flush after every
// response line.
//
// `response_timeout_s` > 0 bounds the wait for each response line; a child
// that stays silent past it is killed and reported as a protocol error.
// 0 waits forever.
ExternalRunResult run_external_model(const std::string& command,
                                     std::span<const PrefixRequest> requests,
                                     double response_timeout_s = 0.0);

// Child-side loop of the same protocol: reads request lines from `in`,
// answers through `model`, writes response lines (echoing the request keys)
// to `out`, flushing per line. Returns the number of requests served.
std::size_t serve_model_protocol(std::istream& in, std::ostream& out,
                                 const std::function<Hypothesis(const PrefixRequest&)>& model);

}  // namespace incnlu

#endif
