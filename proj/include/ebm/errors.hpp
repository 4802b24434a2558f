#pragma once

#include <stdexcept>
#include <string>

namespace ebm {

/// A caller violated a documented precondition (dimension mismatch,
/// missing state, invalid argument combination).
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Bad configuration (CLI flags, config file, parameter ranges).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or unreadable input data.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ebm
