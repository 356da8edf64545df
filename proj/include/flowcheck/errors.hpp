#pragma once

#include <stdexcept>
#include <string>

namespace flowcheck {

/// Malformed or inconsistent user input (exit code 2).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string &msg) : std::runtime_error(msg) {}
};

/// A caller broke an operation's precondition.
class ContractError : public std::logic_error {
public:
  explicit ContractError(const std::string &msg) : std::logic_error(msg) {}
};

/// The engine reached a state it considers impossible.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string &msg) : std::logic_error(msg) {}
};

/// An enumeration exceeded its configured cap (exit code 3).
class Inconclusive : public std::runtime_error {
public:
  explicit Inconclusive(const std::string &msg) : std::runtime_error(msg) {}
};

/// Three-valued answer of bounded membership tests.
enum class Tri { No, Yes, Unknown };

} // namespace flowcheck
