#pragma once

#include <stdexcept>
#include <string>

namespace covermech {

// Error taxonomy mirrored by the CLI exit codes.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& m) : std::runtime_error(m) {}
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& m) : std::runtime_error(m) {}
};

struct SizeError : std::runtime_error {
  explicit SizeError(const std::string& m) : std::runtime_error(m) {}
};

// A plugged-in algorithm broke its promised guarantee.
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& m) : std::runtime_error(m) {}
};

struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace covermech
