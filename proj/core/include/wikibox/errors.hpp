#pragma once

#include <stdexcept>
#include <string>

namespace wikibox {

// Failure classes map onto the CLI exit-code partition:
// config = 1, data = 2, provider = 3.
enum class ErrorKind { config = 1, data = 2, provider = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Bad configuration, unusable input paths, unsupported languages.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

// Malformed or contradictory data: parse failures, invariant violations,
// degenerate regression inputs.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

// An external service misbehaved. `retriable` distinguishes transient
// transport trouble from permanent conditions.
class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what, bool retriable = true)
      : Error(ErrorKind::provider, what), retriable_(retriable) {}

  bool retriable() const noexcept { return retriable_; }

 private:
  bool retriable_;
};

// Search quota exhaustion is permanent for the rest of the run.
class QuotaError : public ProviderError {
 public:
  explicit QuotaError(const std::string& what) : ProviderError(what, false) {}
};

}  // namespace wikibox
