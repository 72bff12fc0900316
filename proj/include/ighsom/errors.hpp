#pragma once

#include <stdexcept>
#include <string>

namespace ighsom {

/// Violated precondition of a library call (empty input, dimension mismatch, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual input: CSV fields, path labels, JSON payloads.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input whose values break a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exclusive operation (train, refine, import) is already running.
class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation requires state that does not exist yet (e.g. rules before training).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rule sets referencing unknown attributes or carrying inconsistent bounds.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Snapshot taken on a different dataset than the one it is being imported into.
class FingerprintError : public std::runtime_error {
 public:
  FingerprintError(std::string snapshot, std::string dataset)
      : std::runtime_error("snapshot fingerprint " + snapshot + " does not match dataset fingerprint " + dataset),
        snapshot_(std::move(snapshot)),
        dataset_(std::move(dataset)) {}
  const std::string& snapshot_hash() const noexcept { return snapshot_; }
  const std::string& dataset_hash() const noexcept { return dataset_; }

 private:
  std::string snapshot_;
  std::string dataset_;
};

}  // namespace ighsom
