#pragma once

#include <stdexcept>
#include <string>

namespace gvfd {

// Caller broke a precondition (bad index, wrong spec kind, dimension mismatch).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A learner produced or was fed a NaN/inf.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration value; `key()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace gvfd
