#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace oamq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unknown configuration entry. `key()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Azimuthal index outside the supported range.
class IndexOverflowError : public Error {
 public:
  using Error::Error;
};

/// Raised when a numerical procedure fails to reach its tolerance.
/// Carries the last two estimates so callers can judge how far off it was.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& message, double previous, double last)
      : Error(message), previous_(previous), last_(last) {}
  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

class GridError : public Error {
 public:
  using Error::Error;
};

class StageError : public Error {
 public:
  using Error::Error;
};

}  // namespace oamq
