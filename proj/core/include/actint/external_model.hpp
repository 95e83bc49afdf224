#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "actint/model.hpp"

namespace actint {

struct ExternalModelConfig {
  std::vector<std::string> args;
  std::chrono::milliseconds handshake_timeout{10'000};
  std::chrono::milliseconds request_timeout{60'000};
  double decision_threshold = 0.5;
};

/// A child process speaking line-delimited JSON on stdin/stdout:
///
///   -> {"type":"hello","version":1}
///   <- {"type":"ready","name":"..."}
///   -> {"type":"predict","id":"...","observation":{...}}
///   <- {"type":"prediction","id":"...","probability":p}
///   -> {"type":"close"}
///
/// A session is a serial channel. Concurrent callers are serialized by an
/// internal mutex; open one session per worker for parallel use.
///
/// Failures map to distinct exceptions: HandshakeTimeoutError, ProtocolError
/// (bad JSON, wrong id, unknown type, probability outside [0, 1]),
/// ChildExitError (child gone; names the request in flight) and
/// TransportError (timeouts, broken pipes).
class ExternalModelSession final : public ModelAdapter {
 public:
  ExternalModelSession(const std::string& executable, const ExternalModelConfig& config);
  ~ExternalModelSession() override;

  ExternalModelSession(const ExternalModelSession&) = delete;
  ExternalModelSession& operator=(const ExternalModelSession&) = delete;

  Prediction predict_proba(const Observation& obs) override;
  std::string name() const override { return name_; }
  double decision_threshold() const override { return config_.decision_threshold; }

  /// Sends close and reaps the child. Idempotent.
  void close();
  bool is_open() const noexcept { return pid_ > 0; }

 private:
  void send_line(const std::string& line, const std::optional<std::string>& request_id);
  std::string read_line(std::chrono::milliseconds timeout, const std::optional<std::string>& request_id,
                        bool handshake);
  [[noreturn]] void fail_child_gone(const std::optional<std::string>& request_id);
  void kill_child();

  ExternalModelConfig config_;
  std::string executable_;
  std::string name_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::uint64_t next_request_ = 0;
  std::mutex mutex_;
};

std::unique_ptr<ExternalModelSession> external_model_session(const std::string& executable,
                                                             const ExternalModelConfig& config = {});

/// Wire form of an observation: {"time_of_day":h,"channels":{...},"roc":{...}}.
std::string observation_to_wire_json(const Observation& obs);
/// Inverse of observation_to_wire_json. A missing "roc" block is recomputed
/// from the channels with `smoothing`.
Observation observation_from_wire_json(const std::string& text, const std::string& id,
                                       const std::optional<SmoothingConfig>& smoothing);

}  // namespace actint
