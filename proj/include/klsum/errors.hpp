#pragma once

#include <stdexcept>
#include <string>

namespace klsum {

// Precondition violations on mathematical domains (gcd != 1, non-Clean split, ...).
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requests exceeding configured memory / size caps.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-facing configuration: unknown function names, bad band lists, ...
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A rule produced a value outside its contract (|f(p^k)| > 1).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace klsum
