#pragma once

#include <stdexcept>
#include <string>

namespace reludim {

// Exit-code contract: 1 input error, 2 budget exceeded, 3 internal invariant.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InternalError : std::logic_error {
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace reludim
