#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

// Error taxonomy mirrored by the CLI exit codes: scientific failures are
// reported through results, these exceptions cover configuration misuse,
// bad data, and numerical breakdown.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

class precondition_error : public std::logic_error {
 public:
  explicit precondition_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace nlslab
