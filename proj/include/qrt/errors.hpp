#pragma once

#include <stdexcept>
#include <string>

namespace qrt {

// Bad parameters, malformed scene files, violated caps. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem problems (missing input, unwritable output). CLI maps this to exit code 3.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qrt
