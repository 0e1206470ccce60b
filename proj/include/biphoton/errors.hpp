#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

// Bad run configuration or schema violation. CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure that must not be silently absorbed (e.g. a phase unwrap
// landing on a non-adjacent branch). CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// File system failure. CLI maps this to exit code 4.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace biphoton
