#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace actint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a value invariant (non-finite samples, wrong lengths).
class DataQualityError : public Error {
 public:
  using Error::Error;
};

/// A requested time span is not covered by the available stream.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, double missing_from, double missing_to)
      : Error(what), missing_from_(missing_from), missing_to_(missing_to) {}

  double missing_from() const noexcept { return missing_from_; }
  double missing_to() const noexcept { return missing_to_; }

 private:
  double missing_from_;
  double missing_to_;
};

/// Invalid configuration, rule file, scenario or model file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The external model answered with something the protocol does not allow.
/// Not retriable: the model itself is misbehaving.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// The channel to an external model broke. Retriable by reopening a session.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::optional<std::string> request_id = std::nullopt)
      : Error(what), request_id_(std::move(request_id)) {}

  /// Id of the predict request that was in flight, if any.
  const std::optional<std::string>& request_id() const noexcept { return request_id_; }

 private:
  std::optional<std::string> request_id_;
};

class HandshakeTimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

/// The child process terminated (or exited nonzero) while a session was open.
class ChildExitError : public TransportError {
 public:
  ChildExitError(const std::string& what, std::optional<std::string> request_id, int exit_status)
      : TransportError(what, std::move(request_id)), exit_status_(exit_status) {}

  int exit_status() const noexcept { return exit_status_; }

 private:
  int exit_status_;
};

}  // namespace actint
