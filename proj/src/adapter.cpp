#include "incnlu/adapter.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <istream>
#include <ostream>

#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "incnlu/errors.hpp"

namespace incnlu {

namespace {

using nlohmann::json;

// Child process with pipes on stdin/stdout, line-buffered on our side.
class ModelProcess {
public:
  explicit ModelProcess(const std::string& command, double timeout_s)
      : timeout_ms_(timeout_s > 0.0 ? static_cast<long>(timeout_s * 1000.0) : 0) {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw ProtocolError("cannot create pipes for model adapter");
    pid_ = fork();
    if (pid_ < 0) throw ProtocolError("cannot fork model adapter");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    in_fd_ = from_child[0];
    out_fd_ = to_child[1];
  }

  ~ModelProcess() {
    close_stdin();
    if (in_fd_ >= 0) close(in_fd_);
    if (pid_ > 0) {
      int status = 0;
      waitpid(pid_, &status, 0);
    }
  }

  ModelProcess(const ModelProcess&) = delete;
  ModelProcess& operator=(const ModelProcess&) = delete;

  bool send_line(const std::string& line) {
    std::string buffer = line;
    buffer += '\n';
    std::size_t off = 0;
    const auto deadline = start_deadline();
    while (off < buffer.size()) {
      if (!wait_ready(POLLOUT, deadline)) return false;
      const ssize_t n = write(out_fd_, buffer.data() + off, buffer.size() - off);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return false;
      off += static_cast<std::size_t>(n);
    }
    return true;
  }

  // False on EOF (child closed its stdout) or timeout; see timed_out().
  bool read_line(std::string& line) {
    line.clear();
    const auto deadline = start_deadline();
    while (true) {
      if (buf_pos_ < buf_len_) {
        const char c = buf_[buf_pos_++];
        if (c == '\n') return true;
        line += c;
        continue;
      }
      if (!wait_ready(POLLIN, deadline)) return false;
      const ssize_t n = read(in_fd_, buf_, sizeof(buf_));
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return !line.empty();
      buf_len_ = static_cast<std::size_t>(n);
      buf_pos_ = 0;
    }
  }

  bool timed_out() const { return timed_out_; }

  void kill_child() {
    if (pid_ > 0) kill(pid_, SIGKILL);
  }

  void close_stdin() {
    if (out_fd_ >= 0) {
      close(out_fd_);
      out_fd_ = -1;
    }
  }

  int wait_exit() {
    if (pid_ <= 0) return 0;
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
  }

private:
  using Clock = std::chrono::steady_clock;

  Clock::time_point start_deadline() const {
    return timeout_ms_ > 0 ? Clock::now() + std::chrono::milliseconds(timeout_ms_)
                           : Clock::time_point::max();
  }

  // Blocks until the pipe is ready; false once the deadline passes.
  bool wait_ready(short events, Clock::time_point deadline) {
    if (timeout_ms_ <= 0) return true;
    while (true) {
      const auto remaining =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (remaining <= 0) {
        timed_out_ = true;
        return false;
      }
      pollfd p{};
      p.fd = events == POLLIN ? in_fd_ : out_fd_;
      p.events = events;
      const int rc = poll(&p, 1, static_cast<int>(remaining));
      if (rc > 0) return true;
      if (rc == 0) {
        timed_out_ = true;
        return false;
      }
      if (errno != EINTR) return false;
    }
  }

  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  long timeout_ms_ = 0;
  bool timed_out_ = false;
  char buf_[4096];
  std::size_t buf_pos_ = 0;
  std::size_t buf_len_ = 0;
};

std::string request_json(const PrefixRequest& request) {
  json j;
  j["utterance_id"] = request.utterance_id;
  j["prefix_len"] = request.prefix_len;
  j["tokens"] = request.tokens;
  return j.dump();
}

// Parses one response line; throws ProtocolError with line context.
Hypothesis parse_response(const std::string& line, std::size_t lineno,
                          const PrefixRequest& pending) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ProtocolError("response line " + std::to_string(lineno) + " is not a JSON object: " +
                        line);
  if (!j.contains("target") || !j["target"].is_string() || !j.contains("intent_confidence") ||
      !j["intent_confidence"].is_number())
    throw ProtocolError("response line " + std::to_string(lineno) +
                        " needs string `target` and numeric `intent_confidence`: " + line);
  if (j.contains("utterance_id")) {
    const std::string id = j["utterance_id"].is_string() ? j["utterance_id"].get<std::string>()
                                                         : j["utterance_id"].dump();
    if (id != pending.utterance_id)
      throw ProtocolError("response line " + std::to_string(lineno) + " answers utterance " +
                          id + " but " + pending.utterance_id +
                          " is pending (responses must follow request order)");
  }
  if (j.contains("prefix_len")) {
    if (!j["prefix_len"].is_number_integer() ||
        j["prefix_len"].get<long long>() != static_cast<long long>(pending.prefix_len))
      throw ProtocolError("response line " + std::to_string(lineno) +
                          " answers a different prefix length than the pending request");
  }
  Hypothesis hyp;
  hyp.target = j["target"].get<std::string>();
  hyp.intent_confidence = j["intent_confidence"].get<double>();
  if (hyp.intent_confidence < 0.0 || hyp.intent_confidence > 1.0)
    throw ProtocolError("response line " + std::to_string(lineno) +
                        " has `intent_confidence` outside [0, 1]");
  return hyp;
}

}  // namespace

ExternalRunResult run_external_model(const std::string& command,
                                     std::span<const PrefixRequest> requests,
                                     double response_timeout_s) {
  // A dying child must surface as a protocol error, not kill the parent.
  signal(SIGPIPE, SIG_IGN);
  ExternalRunResult result;
  ModelProcess child(command, response_timeout_s);
  std::string line;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const PrefixRequest& request = requests[i];
    if (!child.send_line(request_json(request))) {
      result.error = child.timed_out()
                         ? "model adapter stopped reading requests (request " +
                               std::to_string(i + 1) + " timed out)"
                         : "model adapter closed its input after " + std::to_string(i) +
                               " requests";
      if (child.timed_out()) child.kill_child();
      break;
    }
    if (!child.read_line(line)) {
      result.error = child.timed_out()
                         ? "model adapter gave no response to request " + std::to_string(i + 1) +
                               " within the timeout"
                         : "model adapter exited after answering " + std::to_string(i) + " of " +
                               std::to_string(requests.size()) + " requests";
      if (child.timed_out()) child.kill_child();
      break;
    }
    try {
      Hypothesis hyp = parse_response(line, i + 1, request);
      result.responses.emplace_back(std::make_pair(request.utterance_id, request.prefix_len),
                                    std::move(hyp));
    } catch (const ProtocolError& e) {
      result.error = e.what();
      break;
    }
  }
  child.close_stdin();
  result.exit_status = child.wait_exit();
  if (result.error.empty() && result.exit_status != 0)
    result.error = "model adapter exited with status " + std::to_string(result.exit_status);
  return result;
}

std::size_t serve_model_protocol(std::istream& in, std::ostream& out,
                                 const std::function<Hypothesis(const PrefixRequest&)>& model) {
  std::string line;
  std::size_t served = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("tokens") || !j["tokens"].is_array())
      throw ProtocolError("request line " + std::to_string(lineno) +
                          " is not a request object: " + line);
    PrefixRequest request;
    if (j.contains("utterance_id"))
      request.utterance_id = j["utterance_id"].is_string() ? j["utterance_id"].get<std::string>()
                                                           : j["utterance_id"].dump();
    for (const auto& t : j["tokens"]) {
      if (!t.is_string())
        throw ProtocolError("request line " + std::to_string(lineno) +
                            " has a non-string token");
      request.tokens.push_back(t.get<std::string>());
    }
    request.prefix_len = j.contains("prefix_len") && j["prefix_len"].is_number_integer()
                             ? static_cast<std::size_t>(j["prefix_len"].get<long long>())
                             : request.tokens.size();
    const Hypothesis hyp = model(request);
    json response;
    response["utterance_id"] = request.utterance_id;
    response["prefix_len"] = request.prefix_len;
    response["target"] = hyp.target;
    response["intent_confidence"] = hyp.intent_confidence;
    out << response.dump() << '\n';
    out.flush();
    ++served;
  }
  return served;
}

}  // namespace incnlu
