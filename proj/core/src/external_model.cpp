#include "actint/external_model.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "actint/errors.hpp"
#include "json_util.hpp"

extern char** environ;

namespace actint {

using detail::json;

namespace {

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string describe_status(int status) {
  if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
  return "terminated";
}

json series_map_to_json(const std::map<std::string, TimeSeries>& series) {
  json out = json::object();
  for (const auto& [name, s] : series) {
    out[name] = {{"rate_hz", s.sample_rate_hz()},
                 {"values", std::vector<double>(s.values().begin(), s.values().end())}};
  }
  return out;
}

std::map<std::string, TimeSeries> series_map_from_json(const json& j, const char* what) {
  std::map<std::string, TimeSeries> out;
  for (const auto& [name, s] : j.items()) {
    out.emplace(name, TimeSeries(detail::require(s, "values", what).get<std::vector<double>>(),
                                 detail::require(s, "rate_hz", what).get<double>(), name));
  }
  return out;
}

}  // namespace

std::string observation_to_wire_json(const Observation& obs) {
  json j = {{"time_of_day", obs.time_of_day()},
            {"channels", series_map_to_json(obs.channels())},
            {"roc", series_map_to_json(obs.channel_roc())}};
  return j.dump();
}

Observation observation_from_wire_json(const std::string& text, const std::string& id,
                                       const std::optional<SmoothingConfig>& smoothing) {
  const json j = detail::parse_json(text, "observation");
  try {
    const double tod = detail::require(j, "time_of_day", "observation").get<double>();
    auto channels = series_map_from_json(detail::require(j, "channels", "observation"), "channel");
    if (j.contains("roc") && !j.at("roc").is_null()) {
      return Observation(id, std::move(channels), series_map_from_json(j.at("roc"), "roc"), tod);
    }
    return Observation::from_channels(id, std::move(channels), tod, smoothing);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("observation: ") + e.what());
  }
}

ExternalModelSession::ExternalModelSession(const std::string& executable,
                                           const ExternalModelConfig& config)
    : config_(config), executable_(executable) {
  if (!(config_.decision_threshold > 0.0 && config_.decision_threshold < 1.0)) {
    throw ConfigError("decision threshold must lie in (0, 1)");
  }
  ignore_sigpipe_once();

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw TransportError("pipe() failed: " + std::string(std::strerror(errno)));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError("pipe() failed: " + std::string(std::strerror(errno)));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::vector<std::string> argv_storage;
  argv_storage.push_back(executable_);
  argv_storage.insert(argv_storage.end(), config_.args.begin(), config_.args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, executable_.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw TransportError("cannot start external model '" + executable_ + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  try {
    send_line(json{{"type", "hello"}, {"version", 1}}.dump(), std::nullopt);
    const std::string line = read_line(config_.handshake_timeout, std::nullopt, true);
    json msg;
    try {
      msg = json::parse(line);
    } catch (const json::parse_error&) {
      throw ProtocolError("malformed handshake from '" + executable_ + "': " + line);
    }
    if (!msg.is_object() || msg.value("type", "") != "ready") {
      throw ProtocolError("expected a ready message from '" + executable_ + "', got: " + line);
    }
    name_ = msg.value("name", executable_);
  } catch (...) {
    kill_child();
    throw;
  }
}

ExternalModelSession::~ExternalModelSession() {
  try {
    close();
  } catch (...) {
    kill_child();
  }
}

void ExternalModelSession::send_line(const std::string& line,
                                     const std::optional<std::string>& request_id) {
  std::string data = line;
  data.push_back('\n');
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EPIPE) fail_child_gone(request_id);
      throw TransportError("write to external model failed: " + std::string(std::strerror(errno)),
                           request_id);
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string ExternalModelSession::read_line(std::chrono::milliseconds timeout,
                                            const std::optional<std::string>& request_id,
                                            bool handshake) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (const auto pos = buffer_.find('\n'); pos != std::string::npos) {
      std::string line = buffer_.substr(0, pos);
      buffer_.erase(0, pos + 1);
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      if (handshake) {
        throw HandshakeTimeoutError("external model '" + executable_ + "' did not complete the handshake within " +
                                    std::to_string(timeout.count()) + " ms");
      }
      throw TransportError("external model '" + executable_ + "' did not answer request " +
                               request_id.value_or("?") + " within " + std::to_string(timeout.count()) +
                               " ms",
                           request_id);
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw TransportError("poll failed: " + std::string(std::strerror(errno)), request_id);
    }
    if (ready == 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw TransportError("read from external model failed: " + std::string(std::strerror(errno)),
                           request_id);
    }
    if (n == 0) fail_child_gone(request_id);
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ExternalModelSession::fail_child_gone(const std::optional<std::string>& request_id) {
  int status = 0;
  std::string how = "closed its output";
  // The child normally exits right after closing stdout; give it a moment.
  for (int i = 0; i < 200 && pid_ > 0; ++i) {
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      how = describe_status(status);
      pid_ = -1;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  kill_child();
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  throw ChildExitError("external model '" + executable_ + "' " + how +
                           (request_id ? " while request " + *request_id + " was in flight" : ""),
                       request_id, code);
}

void ExternalModelSession::kill_child() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void ExternalModelSession::close() {
  std::lock_guard lock(mutex_);
  if (pid_ <= 0) {
    kill_child();
    return;
  }
  const std::string bye = json{{"type", "close"}}.dump() + "\n";
  [[maybe_unused]] const ssize_t ignored = ::write(to_child_, bye.data(), bye.size());
  ::close(to_child_);
  to_child_ = -1;
  int status = 0;
  for (int i = 0; i < 400; ++i) {
    if (::waitpid(pid_, &status, WNOHANG) == pid_) {
      pid_ = -1;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  kill_child();
}

Prediction ExternalModelSession::predict_proba(const Observation& obs) {
  std::lock_guard lock(mutex_);
  if (pid_ <= 0) throw TransportError("external model session is closed");
  const std::string id = "req-" + std::to_string(next_request_++);
  const std::string request = R"({"type":"predict","id":")" + id +
                              R"(","observation":)" + observation_to_wire_json(obs) + "}";
  send_line(request, id);
  const std::string line = read_line(config_.request_timeout, id, false);

  json msg;
  try {
    msg = json::parse(line);
  } catch (const json::parse_error&) {
    throw ProtocolError("malformed response to request " + id + ": " + line.substr(0, 200));
  }
  if (!msg.is_object() || !msg.contains("type") || !msg.at("type").is_string()) {
    throw ProtocolError("response to request " + id + " has no message type");
  }
  const auto type = msg.at("type").get<std::string>();
  if (type != "prediction") throw ProtocolError("unexpected message type '" + type + "' for request " + id);
  if (!msg.contains("id") || !msg.at("id").is_string() || msg.at("id").get<std::string>() != id) {
    throw ProtocolError("response id does not match request " + id);
  }
  if (!msg.contains("probability") || !msg.at("probability").is_number()) {
    throw ProtocolError("response to request " + id + " lacks a numeric probability");
  }
  const double p = msg.at("probability").get<double>();
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ProtocolError("probability out of range for request " + id + ": " + msg.at("probability").dump());
  }
  return Prediction::from_probability(p, config_.decision_threshold);
}

std::unique_ptr<ExternalModelSession> external_model_session(const std::string& executable,
                                                             const ExternalModelConfig& config) {
  return std::make_unique<ExternalModelSession>(executable, config);
}

}  // namespace actint
